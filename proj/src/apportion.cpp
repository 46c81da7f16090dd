#include "transit_ads/apportion.hpp"

#include <algorithm>
#include <numeric>
#include <stdexcept>

namespace transit_ads {

std::vector<std::int64_t> apportion(std::span<const std::int64_t> weights, std::int64_t total) {
    std::vector<std::int64_t> shares(weights.size(), 0);
    if (total < 0) throw std::invalid_argument("apportion: negative total");
    __int128 sum = 0;
    for (auto w : weights) {
        if (w < 0) throw std::invalid_argument("apportion: negative weight");
        sum += w;
    }
    if (sum == 0) return shares;

    std::vector<__int128> remainders(weights.size());
    std::int64_t assigned = 0;
    for (std::size_t i = 0; i < weights.size(); ++i) {
        const __int128 scaled = static_cast<__int128>(total) * weights[i];
        shares[i] = static_cast<std::int64_t>(scaled / sum);
        remainders[i] = scaled % sum;
        assigned += shares[i];
    }
    std::vector<std::size_t> order(weights.size());
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
        return remainders[a] > remainders[b];
    });
    for (std::int64_t k = 0; k < total - assigned; ++k) ++shares[order[static_cast<std::size_t>(k)]];
    return shares;
}

std::vector<std::int64_t> apportion_real(std::span<const double> weights, std::int64_t total) {
    std::vector<std::int64_t> shares(weights.size(), 0);
    const double sum = std::accumulate(weights.begin(), weights.end(), 0.0);
    if (!(sum > 0.0)) return shares;
    std::vector<double> remainders(weights.size());
    std::int64_t assigned = 0;
    for (std::size_t i = 0; i < weights.size(); ++i) {
        const double quota = static_cast<double>(total) * weights[i] / sum;
        shares[i] = static_cast<std::int64_t>(quota);
        remainders[i] = quota - static_cast<double>(shares[i]);
        assigned += shares[i];
    }
    std::vector<std::size_t> order(weights.size());
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
        return remainders[a] > remainders[b];
    });
    for (std::int64_t k = 0; k < total - assigned && k < static_cast<std::int64_t>(order.size()); ++k)
        ++shares[order[static_cast<std::size_t>(k)]];
    return shares;
}

}  // namespace transit_ads

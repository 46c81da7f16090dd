#pragma once

#include <cstdint>
#include <span>
#include <vector>

namespace transit_ads {

/// Largest-remainder (Hamilton) apportionment of `total` units over integer
/// weights. Each share gets floor(total * w / W); leftover units go to the
/// largest fractional remainders, ties to the lower index. Exact integer math.
/// All-zero weights yield all-zero shares.
std::vector<std::int64_t> apportion(std::span<const std::int64_t> weights, std::int64_t total);

/// Same rule over real weights.
std::vector<std::int64_t> apportion_real(std::span<const double> weights, std::int64_t total);

}  // namespace transit_ads

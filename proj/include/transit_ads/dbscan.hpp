#pragma once

// Density-based clustering with noise over dense point matrices.
//
// Semantics, fixed so that results are reproducible and testable:
//  - the eps-neighborhood of p is every point q with dist(p, q) <= eps,
//    p itself included, and p is a core point when the neighborhood holds at
//    least min_pts points;
//  - core points within eps of each other are density-connected and the
//    connected components of that relation are the clusters;
//  - a non-core point within eps of some core point is a border point and
//    joins the cluster of its first core neighbor in canonical order, i.e.
//    lexicographic order of coordinates;
//  - everything else is noise.
// Cluster ids are numbered 0, 1, ... in canonical order of each cluster's
// first core point, so the labeling is independent of input order.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <deque>
#include <map>
#include <numeric>
#include <vector>

#include <Eigen/Core>

#include "transit_ads/domain.hpp"

namespace transit_ads {

enum class Metric { Euclidean, CircularMinutes };

inline constexpr int kNoise = -1;

template <typename Scalar = double>
struct PointSet {
    using Matrix = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

    Matrix points;  // one row per point
    Metric metric = Metric::Euclidean;

    Eigen::Index size() const { return points.rows(); }
    Eigen::Index dim() const { return points.cols(); }

    /// Builds a point set from ragged rows; all rows must share one dimension.
    static PointSet from_rows(const std::vector<std::vector<Scalar>>& rows,
                              Metric metric = Metric::Euclidean) {
        PointSet set;
        set.metric = metric;
        const auto d = rows.empty() ? Eigen::Index{0} : static_cast<Eigen::Index>(rows[0].size());
        set.points.resize(static_cast<Eigen::Index>(rows.size()), d);
        for (std::size_t i = 0; i < rows.size(); ++i) {
            if (static_cast<Eigen::Index>(rows[i].size()) != d)
                throw InputError("point " + std::to_string(i) + " has dimension " +
                                 std::to_string(rows[i].size()) + ", expected " +
                                 std::to_string(d));
            for (Eigen::Index k = 0; k < d; ++k)
                set.points(static_cast<Eigen::Index>(i), k) = rows[i][static_cast<std::size_t>(k)];
        }
        return set;
    }
};

struct Clustering {
    std::vector<int> labels;  // cluster id or kNoise, one per input point
    std::vector<bool> core;
    double eps = 0.0;
    int min_pts = 1;
    int cluster_count = 0;

    std::size_t noise_count() const {
        return static_cast<std::size_t>(std::count(labels.begin(), labels.end(), kNoise));
    }
};

/// Circular minute-of-day distance: min(|a - b|, 1440 - |a - b|).
template <typename Scalar>
Scalar circular_minutes(Scalar a, Scalar b) {
    const Scalar d = std::abs(a - b);
    return std::min(d, Scalar(kMinutesPerDay) - d);
}

template <typename DerivedA, typename DerivedB>
typename DerivedA::Scalar point_distance(const Eigen::MatrixBase<DerivedA>& a,
                                         const Eigen::MatrixBase<DerivedB>& b, Metric metric) {
    if (metric == Metric::CircularMinutes) return circular_minutes(a(0), b(0));
    return (a - b).norm();
}

namespace detail {

template <typename Scalar>
bool lex_less(const typename PointSet<Scalar>::Matrix& m, Eigen::Index a, Eigen::Index b) {
    for (Eigen::Index k = 0; k < m.cols(); ++k) {
        if (m(a, k) < m(b, k)) return true;
        if (m(b, k) < m(a, k)) return false;
    }
    return false;
}

/// Neighborhood queries over the distinct points of a set, in canonical order.
template <typename Scalar>
class NeighborIndex {
public:
    using Matrix = typename PointSet<Scalar>::Matrix;

    NeighborIndex(const Matrix& unique, Metric metric, Scalar eps)
        : unique_(unique), metric_(metric), eps_(eps) {
        if (metric_ == Metric::Euclidean && unique_.cols() >= 1 && unique_.cols() <= 4) {
            cell_ = eps_ * Scalar(1.01);
            for (Eigen::Index i = 0; i < unique_.rows(); ++i) grid_[cell_of(i)].push_back(i);
        }
    }

    /// Canonical indices of all distinct points within eps of point u, ascending.
    void query(Eigen::Index u, std::vector<Eigen::Index>& out) const {
        out.clear();
        const auto n = unique_.rows();
        if (metric_ == Metric::CircularMinutes) {
            const Scalar x = unique_(u, 0);
            const Scalar slack = Scalar(1e-9) * (Scalar(1) + eps_);
            if (eps_ >= Scalar(kMinutesPerDay) / 2) {
                scan(u, 0, n, out);
            } else {
                scan_range(u, x - eps_ - slack, x + eps_ + slack, out);
                if (x - eps_ - slack < 0)
                    scan_range(u, x - eps_ - slack + kMinutesPerDay, Scalar(kMinutesPerDay), out);
                if (x + eps_ + slack >= Scalar(kMinutesPerDay))
                    scan_range(u, Scalar(0), x + eps_ + slack - kMinutesPerDay, out);
            }
        } else if (!grid_.empty()) {
            const auto base = cell_of(u);
            std::vector<std::int64_t> key(base.size());
            const auto dims = static_cast<int>(base.size());
            int combos = 1;
            for (int k = 0; k < dims; ++k) combos *= 3;
            for (int c = 0; c < combos; ++c) {
                int rest = c;
                for (int k = 0; k < dims; ++k) {
                    key[static_cast<std::size_t>(k)] = base[static_cast<std::size_t>(k)] + rest % 3 - 1;
                    rest /= 3;
                }
                const auto it = grid_.find(key);
                if (it == grid_.end()) continue;
                for (auto v : it->second)
                    if (point_distance(unique_.row(u), unique_.row(v), metric_) <= eps_)
                        out.push_back(v);
            }
        } else {
            scan(u, 0, n, out);
        }
        std::sort(out.begin(), out.end());
        out.erase(std::unique(out.begin(), out.end()), out.end());
    }

private:
    std::vector<std::int64_t> cell_of(Eigen::Index i) const {
        std::vector<std::int64_t> key(static_cast<std::size_t>(unique_.cols()));
        for (Eigen::Index k = 0; k < unique_.cols(); ++k)
            key[static_cast<std::size_t>(k)] =
                static_cast<std::int64_t>(std::floor(unique_(i, k) / cell_));
        return key;
    }

    void scan(Eigen::Index u, Eigen::Index first, Eigen::Index last,
              std::vector<Eigen::Index>& out) const {
        for (Eigen::Index v = first; v < last; ++v)
            if (point_distance(unique_.row(u), unique_.row(v), metric_) <= eps_) out.push_back(v);
    }

    // 1-D only: unique_ is sorted ascending.
    void scan_range(Eigen::Index u, Scalar lo, Scalar hi, std::vector<Eigen::Index>& out) const {
        const auto* begin = unique_.data();
        const auto* end = begin + unique_.rows();
        const auto first = std::lower_bound(begin, end, lo) - begin;
        const auto last = std::upper_bound(begin, end, hi) - begin;
        scan(u, first, last, out);
    }

    const Matrix& unique_;
    Metric metric_;
    Scalar eps_;
    Scalar cell_ = 0;
    std::map<std::vector<std::int64_t>, std::vector<Eigen::Index>> grid_;
};

}  // namespace detail

template <typename Scalar>
void validate_points(const PointSet<Scalar>& set) {
    if (!set.points.allFinite()) throw InputError("point coordinates must be finite");
    if (set.metric == Metric::CircularMinutes && set.size() > 0) {
        if (set.dim() != 1) throw InputError("circular_minutes metric needs 1-D points");
        if ((set.points.array() < Scalar(0)).any() ||
            (set.points.array() >= Scalar(kMinutesPerDay)).any())
            throw InputError("circular_minutes points must lie in [0, 1440)");
    }
}

template <typename Scalar>
Clustering dbscan(const PointSet<Scalar>& set, double eps, int min_pts) {
    if (!(eps > 0.0) || !std::isfinite(eps)) throw InputError("dbscan: eps must be positive");
    if (min_pts < 1) throw InputError("dbscan: min_pts must be at least 1");
    validate_points(set);

    Clustering result;
    result.eps = eps;
    result.min_pts = min_pts;
    const auto n = set.size();
    if (n == 0) return result;

    // Collapse duplicates: identical points share neighborhoods, core status
    // and labels, so the algorithm runs over distinct points with multiplicity.
    std::vector<Eigen::Index> order(static_cast<std::size_t>(n));
    std::iota(order.begin(), order.end(), Eigen::Index{0});
    std::stable_sort(order.begin(), order.end(), [&](Eigen::Index a, Eigen::Index b) {
        return detail::lex_less<Scalar>(set.points, a, b);
    });
    std::vector<Eigen::Index> unique_of(static_cast<std::size_t>(n));
    std::vector<Eigen::Index> firsts;
    std::vector<std::int64_t> weight;
    for (auto i : order) {
        if (firsts.empty() || detail::lex_less<Scalar>(set.points, firsts.back(), i)) {
            firsts.push_back(i);
            weight.push_back(0);
        }
        unique_of[static_cast<std::size_t>(i)] = static_cast<Eigen::Index>(firsts.size()) - 1;
        ++weight.back();
    }
    const auto m = static_cast<Eigen::Index>(firsts.size());
    typename PointSet<Scalar>::Matrix unique(m, set.dim());
    for (Eigen::Index u = 0; u < m; ++u) unique.row(u) = set.points.row(firsts[static_cast<std::size_t>(u)]);

    const detail::NeighborIndex<Scalar> index(unique, set.metric, static_cast<Scalar>(eps));
    std::vector<Eigen::Index> nbrs;
    std::vector<bool> core(static_cast<std::size_t>(m), false);
    for (Eigen::Index u = 0; u < m; ++u) {
        index.query(u, nbrs);
        std::int64_t count = 0;
        for (auto v : nbrs) count += weight[static_cast<std::size_t>(v)];
        core[static_cast<std::size_t>(u)] = count >= min_pts;
    }

    std::vector<int> label(static_cast<std::size_t>(m), kNoise);
    std::deque<Eigen::Index> frontier;
    int next = 0;
    for (Eigen::Index u = 0; u < m; ++u) {
        if (!core[static_cast<std::size_t>(u)] || label[static_cast<std::size_t>(u)] != kNoise) continue;
        const int id = next++;
        label[static_cast<std::size_t>(u)] = id;
        frontier.push_back(u);
        while (!frontier.empty()) {
            const auto p = frontier.front();
            frontier.pop_front();
            index.query(p, nbrs);
            for (auto v : nbrs) {
                const auto vi = static_cast<std::size_t>(v);
                if (core[vi] && label[vi] == kNoise) {
                    label[vi] = id;
                    frontier.push_back(v);
                }
            }
        }
    }
    for (Eigen::Index u = 0; u < m; ++u) {
        if (core[static_cast<std::size_t>(u)]) continue;
        index.query(u, nbrs);
        for (auto v : nbrs) {
            if (core[static_cast<std::size_t>(v)]) {
                label[static_cast<std::size_t>(u)] = label[static_cast<std::size_t>(v)];
                break;
            }
        }
    }

    result.cluster_count = next;
    result.labels.resize(static_cast<std::size_t>(n));
    result.core.resize(static_cast<std::size_t>(n));
    for (Eigen::Index i = 0; i < n; ++i) {
        const auto u = static_cast<std::size_t>(unique_of[static_cast<std::size_t>(i)]);
        result.labels[static_cast<std::size_t>(i)] = label[u];
        result.core[static_cast<std::size_t>(i)] = core[u];
    }
    return result;
}

}  // namespace transit_ads

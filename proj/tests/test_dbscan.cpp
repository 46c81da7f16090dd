#include <doctest.h>

#include <algorithm>

#include "oracles.hpp"
#include "transit_ads/dbscan.hpp"
#include "transit_ads/rng.hpp"

using namespace transit_ads;

namespace {

using Rows = std::vector<std::vector<double>>;

Rows random_rows(Rng& rng, std::size_t n, std::size_t dim, bool circular) {
    Rows rows(n, std::vector<double>(dim));
    for (auto& r : rows)
        for (auto& x : r)
            x = circular ? static_cast<double>(rng.between(0, 1439))
                         : static_cast<double>(rng.between(0, 40)) / 2.0;
    return rows;
}

}  // namespace

TEST_CASE("two separated 1-D groups") {
    const auto set = PointSet<double>::from_rows({{1}, {2}, {3}, {100}, {101}, {102}});
    const auto c = dbscan(set, 2.0, 2);
    CHECK(c.cluster_count == 2);
    CHECK(c.noise_count() == 0);
    CHECK(c.labels[0] == c.labels[1]);
    CHECK(c.labels[1] == c.labels[2]);
    CHECK(c.labels[3] == c.labels[4]);
    CHECK(c.labels[4] == c.labels[5]);
    CHECK(c.labels[0] != c.labels[3]);
    CHECK(oracle::canonical(c.labels) ==
          oracle::canonical(oracle::dbscan({{1}, {2}, {3}, {100}, {101}, {102}}, false, 2.0, 2)));
}

TEST_CASE("min_pts 1 with a huge eps is one cluster") {
    Rng rng(3);
    const auto rows = random_rows(rng, 60, 2, false);
    const auto c = dbscan(PointSet<double>::from_rows(rows), 1e6, 1);
    CHECK(c.cluster_count == 1);
    CHECK(c.noise_count() == 0);
}

TEST_CASE("an isolated point is noise") {
    const auto c = dbscan(PointSet<double>::from_rows({{5.0, 5.0}}), 1.0, 2);
    CHECK(c.labels == std::vector<int>{kNoise});
    CHECK(c.cluster_count == 0);
}

TEST_CASE("empty input and argument errors") {
    const PointSet<double> empty;
    CHECK(dbscan(empty, 1.0, 3).labels.empty());
    CHECK_THROWS_AS(PointSet<double>::from_rows({{1.0, 2.0}, {3.0}}), InputError);
    const auto set = PointSet<double>::from_rows({{1.0}});
    CHECK_THROWS_AS(dbscan(set, 0.0, 1), InputError);
    CHECK_THROWS_AS(dbscan(set, 1.0, 0), InputError);
    CHECK_THROWS_AS(dbscan(PointSet<double>::from_rows({{1440.0}}, Metric::CircularMinutes), 5.0, 1),
                    InputError);
    CHECK_THROWS_AS(
        dbscan(PointSet<double>::from_rows({{1.0, 2.0}}, Metric::CircularMinutes), 5.0, 1),
        InputError);
}

TEST_CASE("circular metric wraps midnight") {
    CHECK(circular_minutes(1435.0, 5.0) == 10.0);
    const auto set = PointSet<double>::from_rows({{1435}, {5}}, Metric::CircularMinutes);
    const auto c = dbscan(set, 15.0, 2);
    CHECK(c.cluster_count == 1);
    CHECK(c.labels[0] == c.labels[1]);
}

TEST_CASE("border point joins its canonical first core neighbor") {
    // 5 is within eps of the cores at 3 and 7, which sit in different clusters.
    const Rows rows{{7}, {8}, {9}, {5}, {1}, {2}, {3}};
    const auto c = dbscan(PointSet<double>::from_rows(rows), 2.0, 4);
    CHECK(c.core[0]);
    CHECK(c.core[6]);
    CHECK_FALSE(c.core[3]);
    CHECK(c.labels[3] == c.labels[6]);  // core at 3 precedes core at 7
    CHECK(c.labels[3] != c.labels[0]);
    CHECK(oracle::canonical(c.labels) == oracle::canonical(oracle::dbscan(rows, false, 2.0, 4)));
}

TEST_CASE("matches the all-pairs oracle") {
    Rng rng(2024);
    for (int trial = 0; trial < 150; ++trial) {
        const bool circular = trial % 3 == 0;
        const std::size_t dim = circular ? 1 : 1 + rng.below(5);
        const auto rows = random_rows(rng, 1 + rng.below(120), dim, circular);
        const double eps = circular ? rng.uniform(1.0, 200.0) : rng.uniform(0.3, 6.0);
        const int min_pts = static_cast<int>(rng.between(1, 8));
        const auto c = dbscan(
            PointSet<double>::from_rows(rows, circular ? Metric::CircularMinutes : Metric::Euclidean),
            eps, min_pts);
        CHECK(oracle::canonical(c.labels) ==
              oracle::canonical(oracle::dbscan(rows, circular, eps, min_pts)));
    }
}

TEST_CASE("labels do not depend on input order") {
    Rng rng(99);
    for (int trial = 0; trial < 40; ++trial) {
        auto rows = random_rows(rng, 80, 2, false);
        const double eps = rng.uniform(0.5, 3.0);
        const auto before = dbscan(PointSet<double>::from_rows(rows), eps, 3);
        std::vector<std::size_t> perm(rows.size());
        for (std::size_t i = 0; i < perm.size(); ++i) perm[i] = i;
        for (std::size_t i = perm.size(); i > 1; --i) std::swap(perm[i - 1], perm[rng.below(i)]);
        Rows shuffled;
        for (auto p : perm) shuffled.push_back(rows[p]);
        const auto after = dbscan(PointSet<double>::from_rows(shuffled), eps, 3);
        for (std::size_t i = 0; i < perm.size(); ++i) CHECK(after.labels[i] == before.labels[perm[i]]);
    }
}

TEST_CASE("noise never grows with eps") {
    Rng rng(5);
    for (int trial = 0; trial < 30; ++trial) {
        const bool circular = trial % 2 == 0;
        const auto rows = random_rows(rng, 100, circular ? 1 : 2, circular);
        const auto set =
            PointSet<double>::from_rows(rows, circular ? Metric::CircularMinutes : Metric::Euclidean);
        std::size_t last = rows.size() + 1;
        for (double eps = 0.25; eps < 60.0; eps *= 1.5) {
            const auto noise = dbscan(set, eps, 4).noise_count();
            CHECK(noise <= last);
            last = noise;
        }
    }
}

TEST_CASE("every cluster holds a core point") {
    Rng rng(8);
    const auto rows = random_rows(rng, 150, 3, false);
    const auto c = dbscan(PointSet<double>::from_rows(rows), 2.0, 5);
    std::vector<bool> has_core(static_cast<std::size_t>(c.cluster_count), false);
    for (std::size_t i = 0; i < rows.size(); ++i)
        if (c.labels[i] != kNoise && c.core[i]) has_core[static_cast<std::size_t>(c.labels[i])] = true;
    for (bool b : has_core) CHECK(b);
}

TEST_CASE("float points") {
    const auto set = PointSet<float>::from_rows({{0.f, 0.f}, {0.5f, 0.f}, {10.f, 10.f}});
    const auto c = dbscan(set, 1.0, 2);
    CHECK(c.labels[0] == c.labels[1]);
    CHECK(c.labels[2] == kNoise);
}

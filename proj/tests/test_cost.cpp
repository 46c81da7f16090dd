#include <doctest.h>

#include <sstream>

#include "transit_ads/cost.hpp"
#include "transit_ads/rng.hpp"

using namespace transit_ads;

TEST_CASE("visitor density cost") {
    const std::vector<ViewRecord> one{{AdId(1), 50, 0.01, 120}};
    CHECK(relevant_view_cost(one[0]) == doctest::Approx(1.2).epsilon(1e-12));
    const auto r = cost_by_visitor_density(one);
    CHECK(std::abs(r.line_items[0].cost - 60.0) <= 1e-9);

    const std::vector<ViewRecord> zero{{AdId(1), 0, 0.37, 999}};
    CHECK(cost_by_visitor_density(zero).total == 0.0);

    const std::vector<ViewRecord> two{{AdId(1), 50, 0.01, 120}, {AdId(2), 25, 0.005, 120}};
    const auto sum = cost_by_visitor_density(two);
    CHECK(std::abs(sum.line_items[1].cost - 15.0) <= 1e-9);
    CHECK(std::abs(sum.total - 75.0) <= 1e-9);

    CHECK(cost_by_visitor_density(std::vector<ViewRecord>{}).total == 0.0);
    const std::vector<ViewRecord> negative{{AdId(1), -1, 0.01, 120}};
    CHECK_THROWS_AS(cost_by_visitor_density(negative), InputError);
}

TEST_CASE("building density cost") {
    CHECK(std::abs(cost_by_building_density(0.02, 1.5, 300, CostMode::Consistent) - 9.0) <= 1e-9);
    CHECK(std::abs(cost_by_building_density(0.02, 1.5, 300, CostMode::Literal) - 0.18) <= 1e-9);
    CHECK(cost_by_building_density(0.02, 0.0, 300, CostMode::Consistent) == 0.0);
    CHECK(cost_by_building_density(0.02, 0.0, 300, CostMode::Literal) == 0.0);
    CHECK_THROWS_AS(cost_by_building_density(-0.02, 1.0, 300), InputError);
    CHECK_THROWS_AS(cost_by_building_density(0.02, -1.0, 300), InputError);
    CHECK_THROWS_AS(cost_by_building_density(0.02, 1.0, -3), InputError);
}

TEST_CASE("cost identities") {
    Rng rng(4);
    for (int i = 0; i < 2000; ++i) {
        const double pr = rng.uniform(0.0, 0.1);
        const double sbf = rng.uniform(0.0, 3.0);
        const double t = static_cast<double>(rng.between(0, 20000));
        const double lit = cost_by_building_density(pr, sbf, t, CostMode::Literal);
        const double con = cost_by_building_density(pr, sbf, t, CostMode::Consistent);
        CHECK(lit >= 0.0);
        CHECK(std::abs(lit - con * pr) <= 1e-12 * std::max(1.0, std::abs(lit)));

        const ViewRecord r{AdId(1), rng.between(0, 500), rng.uniform(0.0, 0.05), rng.between(0, 5000)};
        auto doubled = r;
        doubled.relevant_views *= 2;
        const auto a = cost_by_visitor_density(std::vector{r}).total;
        const auto b = cost_by_visitor_density(std::vector{doubled}).total;
        CHECK(b == 2.0 * a);
    }
}

TEST_CASE("station business factor") {
    World w;
    for (std::uint32_t i = 1; i <= 3; ++i) {
        Station s;
        s.id = StationId(i);
        s.name = "S" + std::to_string(i);
        s.location = Eigen::Vector2d(i, 0);
        w.stations.push_back(s);
    }
    w.stations[0].buildings = {{{"a"}, 0.6, TimeBand::T1Peak}, {{"b"}, 0.9, TimeBand::T2Offpeak}};
    w.stations[1].buildings = {{{"a"}, 0.3, TimeBand::T1Peak}};
    // T1 sums 0.6, 0.3, 0 with mean 0.3
    CHECK(station_business_factor(w, StationId(1), TimeBand::T1Peak) == doctest::Approx(2.0));
    CHECK(station_business_factor(w, StationId(2), TimeBand::T1Peak) == doctest::Approx(1.0));
    CHECK(station_business_factor(w, StationId(3), TimeBand::T1Peak) == 0.0);
    CHECK(station_business_factor(w, StationId(1), TimeBand::T3Night) == 0.0);
}

TEST_CASE("band display seconds") {
    const auto table = default_band_table();
    CHECK(band_display_seconds(100, 300, TimeBand::T1Peak, table) == 100 * 72);
    CHECK(band_display_seconds(100, 7000, TimeBand::T1Peak, table) == 100 * 3);
}

TEST_CASE("pricing a day schedule") {
    WorldConfig config;
    const auto world = generate_world(config);
    const auto ads = ads_from_brands(world);
    const auto pop = generate_population(config, world);
    const auto log = simulate_trips(pop, world, config, {}, 3);
    const auto model = build_audience_model(log, pop, world, config.band_table);
    const auto day = build_day_schedule(world, model, ads, PolicyId::AudienceRatio, 2, {});
    for (auto mode : {CostMode::Literal, CostMode::Consistent}) {
        const auto reports = price_schedule(world, model, day, ads, 2, {mode, 0.0001}, config.band_table);
        CHECK(reports.size() == 42);
        for (const auto& r : reports) {
            double sum = 0.0;
            for (const auto& l : r.line_items) {
                CHECK(l.cost >= 0.0);
                sum += l.cost;
            }
            CHECK(std::abs(sum - r.total) <= 1e-9);
            CHECK(r.day == 2);
        }
        std::ostringstream csv;
        write_cost_csv(csv, reports);
        CHECK(csv.str().rfind("station,band,day,model,ad_id,cost\n", 0) == 0);
    }
    CHECK(parse_cost_mode("literal") == CostMode::Literal);
    CHECK_THROWS_AS(parse_cost_mode("loose"), InputError);
}

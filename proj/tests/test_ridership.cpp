#include <doctest.h>

#include <fstream>
#include <map>
#include <set>
#include <sstream>

#include "transit_ads/trip_csv.hpp"

using namespace transit_ads;

namespace {

TripLog read_fixture_trips(const World& world) {
    std::ifstream in(std::string(TEST_FIXTURE_DIR) + "/trips.csv");
    REQUIRE(in.good());
    return read_trip_csv(in, &world);
}

World read_fixture_world() {
    std::ifstream in(std::string(TEST_FIXTURE_DIR) + "/world.json");
    REQUIRE(in.good());
    return json::parse(in).get<World>();
}

}  // namespace

TEST_CASE("default world and population sizes") {
    const WorldConfig config;
    const auto world = generate_world(config);
    const auto pop = generate_population(config, world);
    CHECK(world.stations.size() == 7);
    CHECK(world.brands.size() == 70);
    CHECK(pop.persons.size() == 1000);
    CHECK_NOTHROW(validate(world));
    for (const auto& s : world.stations) {
        int here = 0;
        for (const auto& b : world.brands) here += b.station == s.id;
        CHECK(here == 10);
    }
}

TEST_CASE("population of one") {
    WorldConfig config;
    config.persons = 1;
    CHECK(generate_population(config).persons.size() == 1);
}

TEST_CASE("population invariants") {
    WorldConfig config;
    const auto world = generate_world(config);
    const auto pop = generate_population(config, world);
    std::set<std::uint32_t> ids;
    for (const auto& p : pop.persons) {
        CHECK(ids.insert(p.id.value).second);
        CHECK(has_category(config, p.category));
        CHECK(world.index_of(p.home_station).has_value());
        CHECK(world.index_of(p.work_station).has_value());
    }
    CHECK(pop.config_hash == config_digest(config));
}

TEST_CASE("generation is deterministic") {
    WorldConfig config;
    config.persons = 300;
    const auto w1 = generate_world(config), w2 = generate_world(config);
    CHECK(json(w1).dump() == json(w2).dump());
    const auto p1 = generate_population(config, w1), p2 = generate_population(config, w2);
    std::ostringstream a, b;
    write_population_csv(a, p1);
    write_population_csv(b, p2);
    CHECK(a.str() == b.str());
    const auto l1 = simulate_trips(p1, w1, config, {}, 5);
    const auto l2 = simulate_trips(p2, w2, config, {}, 5);
    CHECK(l1 == l2);

    config.rng_seed += 1;
    const auto p3 = generate_population(config, generate_world(config));
    CHECK_FALSE(p3 == p1);
}

TEST_CASE("config errors") {
    WorldConfig config;
    config.station_count = 0;
    CHECK_THROWS_AS(generate_population(config), ConfigError);
    config = {};
    config.category_table.clear();
    CHECK_THROWS_AS(generate_population(config), ConfigError);
}

TEST_CASE("days must be positive; empty population gives an empty log") {
    const WorldConfig config;
    const auto world = generate_world(config);
    const auto pop = generate_population(config, world);
    CHECK_THROWS_AS(simulate_trips(pop, world, config, {}, 0), InputError);
    const auto log = simulate_trips(Population{}, world, config, {}, 1);
    CHECK(log.events.empty());
    CHECK(log.day_count == 1);
}

TEST_CASE("thirty day band ratio and trip invariants") {
    const WorldConfig config;
    const SimulationParams params;
    const auto world = generate_world(config);
    const auto pop = generate_population(config, world);
    const auto log = simulate_trips(pop, world, config, params, 30);
    REQUIRE(!log.events.empty());

    std::array<double, 3> counts{0, 0, 0};
    std::map<std::pair<std::uint32_t, std::int32_t>, int> per_person_day;
    for (std::size_t i = 0; i < log.events.size(); ++i) {
        const auto& t = log.events[i];
        CHECK_NOTHROW(validate_trip(t));
        counts[band_index(trip_band(t, config.band_table))] += 1;
        ++per_person_day[{t.person.value, t.check_in_time.day}];
        if (i > 0) CHECK_FALSE(t.check_in_time < log.events[i - 1].check_in_time);
        const auto hops = std::abs(static_cast<int>(t.check_out_station.value) -
                                   static_cast<int>(t.check_in_station.value));
        CHECK(t.check_out_time.absolute_minutes() - t.check_in_time.absolute_minutes() ==
              hops * params.minutes_per_station);
    }
    for (const auto& [key, n] : per_person_day) CHECK(n <= params.max_trips_per_day);

    const double total = counts[0] + counts[1] + counts[2];
    for (std::size_t b = 0; b < 3; ++b) {
        const double expected = config.band_trip_ratio[b] / 6.0;
        const double share = counts[b] / total;
        CHECK(std::abs(share - expected) / expected <= 0.05);
    }
}

TEST_CASE("commuters repeat their home to work pair at peak times") {
    WorldConfig config;
    config.persons = 200;
    const SimulationParams params;
    const auto world = generate_world(config);
    const auto pop = generate_population(config, world);
    const auto log = simulate_trips(pop, world, config, params, 10);
    for (const auto& p : pop.persons) {
        if (p.category.name != "student" && p.category.name != "office_worker") continue;
        if (p.home_station == p.work_station) continue;
        int weekday_outbound = 0;
        for (const auto& t : log.events) {
            if (t.person != p.id || is_weekend(t.check_in_time.day)) continue;
            if (t.check_in_station == p.home_station && t.check_out_station == p.work_station &&
                std::abs(t.check_in_time.minute - p.outbound_minute) <= params.commute_jitter_minutes)
                ++weekday_outbound;
        }
        CHECK(weekday_outbound == 7);  // days 1-5, 8 and 9
    }
}

TEST_CASE("fixture rider enters the home station 08:30-09:00 on weekdays") {
    const auto world = read_fixture_world();
    const auto log = read_fixture_trips(world);
    const auto home = world.find_station("6th-Road");
    REQUIRE(home.has_value());
    int total = 0, inside = 0;
    std::set<std::int32_t> days;
    for (const auto& t : log.events) {
        if (t.person != PersonId(1) || t.check_in_station != *home) continue;
        if (is_weekend(t.check_in_time.day)) continue;
        ++total;
        days.insert(t.check_in_time.day);
        inside += t.check_in_time.minute >= 8 * 60 + 30 && t.check_in_time.minute <= 9 * 60;
    }
    CHECK(days.size() == 20);
    REQUIRE(total > 0);
    CHECK(static_cast<double>(inside) / total >= 0.9);
}

TEST_CASE("trip csv round trip is bit exact") {
    WorldConfig config;
    config.persons = 150;
    const auto world = generate_world(config);
    const auto pop = generate_population(config, world);
    const auto log = simulate_trips(pop, world, config, {}, 4);
    std::ostringstream first;
    write_trip_csv(first, log);
    std::istringstream in(first.str());
    const auto back = read_trip_csv(in, &world);
    CHECK(back.events == log.events);
    std::ostringstream second;
    write_trip_csv(second, back);
    CHECK(second.str() == first.str());

    std::ostringstream ps;
    write_population_csv(ps, pop);
    std::istringstream pin(ps.str());
    const auto pop_back = read_population_csv(pin, &world, config.category_table);
    CHECK(pop_back.persons == pop.persons);
}

TEST_CASE("trip csv errors name the line and field") {
    const std::string header = std::string(kTripCsvHeader) + "\n";
    auto message = [&](const std::string& body) -> std::string {
        std::istringstream in(header + body);
        try {
            read_trip_csv(in);
        } catch (const InputError& e) {
            return e.what();
        }
        return "";
    };
    CHECK(message("1,1,2023-01-02T08:00,2,2023-01-02T07:59\n").find("line 2") != std::string::npos);
    const auto bad_time = message("1,1,2023-01-02T08:00,2,2023-01-02T08:05\n1,1,nope,2,2023-01-02T08:05\n");
    CHECK(bad_time.find("line 3") != std::string::npos);
    CHECK(bad_time.find("in_time") != std::string::npos);
    CHECK(message("1,1,2023-01-02T08:00\n").find("line 2") != std::string::npos);
    CHECK(message("x,1,2023-01-02T08:00,2,2023-01-02T08:05\n").find("card_id") != std::string::npos);

    std::istringstream wrong_header("a,b,c\n");
    CHECK_THROWS_AS(read_trip_csv(wrong_header), InputError);
    std::istringstream empty("");
    CHECK(read_trip_csv(empty).events.empty());
}

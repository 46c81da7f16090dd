// Writes the commuter scenario fixture: a 24-station metro line, a small
// population around one student commuter, four weeks of trips, an ad catalog
// and one feedback event.
//
//   make-scenario-fixture <output-dir>

#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include "transit_ads/pipeline.hpp"
#include "transit_ads/rng.hpp"

using namespace transit_ads;

namespace {

const std::vector<std::string> kStations{
    "Saddar",         "Marrir-Chowk",     "Liaquat-Bagh",     "Committee-Chowk",
    "Waris-Khan",     "Chandni-Chowk",    "Rehmanabad",       "6th-Road",
    "Shamsabad",      "Faizabad",         "IJP-Road",         "Potohar",
    "Khayaban-e-Johar", "Faiz-Ahmad-Faiz", "Kashmir-Highway", "Chaman",
    "Ibn-e-Sina",     "Kechahri",         "PIMS",             "Stock-Exchange",
    "7th-Avenue",     "Shaheed-e-Millat", "Parade-Ground",    "Pak-Secretariat"};

constexpr std::uint32_t kSaddar = 1;
constexpr std::uint32_t kSixthRoad = 8;
constexpr std::uint32_t kKechahri = 18;
constexpr std::uint32_t kSeventhAvenue = 21;
constexpr std::uint32_t kSecretariat = 24;
constexpr int kDays = 28;

PipelineConfig fixture_config() {
    PipelineConfig c;
    c.world.station_count = static_cast<int>(kStations.size());
    c.world.persons = 200;
    c.world.brands_per_station = 2;
    c.world.station_spacing = 22.0 / 23.0;  // 22 km line, 24 stations
    c.world.rng_seed = 4042;
    c.simulation.minutes_per_station = 2;
    c.days = kDays;
    return c;
}

BuildingProfile building(const char* category, double density, TimeBand band) {
    return {AudienceCategory{category}, density, band};
}

World fixture_world(const PipelineConfig& config, Rng& rng) {
    World w;
    for (std::size_t i = 0; i < kStations.size(); ++i) {
        Station s;
        s.id = StationId(static_cast<std::uint32_t>(i + 1));
        s.name = kStations[i];
        s.location = Eigen::Vector2d(static_cast<double>(i) * config.world.station_spacing, 0.0);
        s.screen_count = 2;
        auto jitter = [&] { return std::round(rng.uniform(0.2, 0.6) * 100.0) / 100.0; };
        switch (s.id.value) {
        case kKechahri:
            s.buildings = {building("office_worker", 0.9, TimeBand::T1Peak),
                           building("student", 0.8, TimeBand::T1Peak),
                           building("shopper", 0.6, TimeBand::T2Offpeak)};
            break;
        case kSixthRoad:
            s.buildings = {building("other", 0.7, TimeBand::T3Night),
                           building("student", 0.5, TimeBand::T1Peak),
                           building("shopper", 0.6, TimeBand::T2Offpeak)};
            break;
        case kSaddar:
        case kSeventhAvenue:
            s.buildings = {building("shopper", 0.95, TimeBand::T2Offpeak),
                           building("other", 0.4, TimeBand::T3Night)};
            break;
        case kSecretariat:
            s.buildings = {building("office_worker", 0.95, TimeBand::T1Peak)};
            break;
        default:
            s.buildings = {building("other", jitter(), TimeBand::T3Night),
                           building("shopper", jitter(), TimeBand::T2Offpeak),
                           building("office_worker", jitter(), TimeBand::T1Peak)};
        }
        w.stations.push_back(std::move(s));
    }

    std::uint32_t next = 1;
    auto add = [&](std::uint32_t station, std::string name, const char* category, double rate) {
        w.brands.push_back(
            {BrandId(next++), std::move(name), AudienceCategory{category}, StationId(station), rate});
    };
    add(kKechahri, "Subway-F8", "student", 0.03);
    add(kKechahri, "Bahria-Book-Depot", "student", 0.02);
    add(kKechahri, "Law-Chambers-Stationers", "office_worker", 0.025);
    add(kKechahri, "F8-Markaz-Boutique", "shopper", 0.02);
    add(kSixthRoad, "Cabinet-Computer", "student", 0.025);
    add(kSixthRoad, "Satellite-Town-Grocers", "other", 0.015);
    add(kSaddar, "Saddar-Bazaar-Outlet", "shopper", 0.02);
    add(kSeventhAvenue, "Centaurus-Mall", "shopper", 0.04);
    add(kSecretariat, "Federal-Bank", "office_worker", 0.035);
    for (std::uint32_t s = 1; s <= kStations.size(); ++s) {
        if (s == kKechahri || s == kSixthRoad || s == kSaddar || s == kSeventhAvenue ||
            s == kSecretariat)
            continue;
        add(s, kStations[s - 1] + "-Cafe", "other", 0.015);
        add(s, kStations[s - 1] + "-Stores", "shopper", 0.015);
    }
    return w;
}

Population fixture_population(const World& world, Rng& rng) {
    Population pop;
    std::uint32_t next = 1;
    auto add = [&](const char* category, std::uint32_t home, std::uint32_t work, int out, int back) {
        pop.persons.push_back({PersonId(next++), AudienceCategory{category}, StationId(home),
                               StationId(work), out, back});
    };
    // The rider: enters 6th-Road 08:30-09:00 and Kechahri 17:00-17:30 on weekdays.
    add("student", kSixthRoad, kKechahri, 8 * 60 + 45, 17 * 60 + 15);

    const auto n = static_cast<std::uint32_t>(world.stations.size());
    auto station_not = [&](std::uint32_t avoid) {
        auto s = static_cast<std::uint32_t>(rng.between(1, n - 1));
        return s >= avoid ? s + 1 : s;
    };
    for (int i = 0; i < 40; ++i) {
        const auto home = i < 6 ? kSixthRoad : static_cast<std::uint32_t>(rng.between(2, 12));
        add("student", home, kKechahri, static_cast<int>(rng.between(7 * 60 + 30, 9 * 60 + 15)),
            static_cast<int>(rng.between(16 * 60 + 30, 17 * 60 + 45)));
    }
    for (int i = 0; i < 50; ++i) {
        const std::uint32_t work = i < 10 ? kKechahri : (i < 35 ? kSecretariat : 20);
        add("office_worker", station_not(work), work,
            static_cast<int>(rng.between(7 * 60 + 15, 9 * 60 + 30)),
            static_cast<int>(rng.between(16 * 60 + 15, 18 * 60 + 30)));
    }
    for (int i = 0; i < 60; ++i) {
        const auto home = static_cast<std::uint32_t>(rng.between(1, n));
        add("shopper", home, home, 12 * 60, 15 * 60);
    }
    for (int i = 0; i < 49; ++i) {
        const auto home = static_cast<std::uint32_t>(rng.between(1, n));
        add("other", home, home, 12 * 60, 20 * 60);
    }
    return pop;
}

template <typename Fn>
void write_file(const fs::path& path, Fn&& fn) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    fn(out);
}

}  // namespace

int main(int argc, char** argv) {
    if (argc != 2) {
        std::cerr << "usage: make-scenario-fixture <output-dir>\n";
        return 2;
    }
    const fs::path dir = argv[1];
    fs::create_directories(dir);

    const auto config = fixture_config();
    Rng rng(config.world.rng_seed);
    const auto world = fixture_world(config, rng);
    validate(world);
    const auto population = fixture_population(world, rng);
    auto log = simulate_trips(population, world, config.world, config.simulation, config.days);

    // weekend errands: Saddar on Saturdays, 7th Avenue on Sundays
    const auto rider = population.persons.front().id;
    const int mps = config.simulation.minutes_per_station;
    auto trip = [&](std::uint32_t from, std::uint32_t to, int day, int minute) {
        const auto hops = static_cast<int>(from > to ? from - to : to - from);
        const Timestamp in{day, minute};
        log.events.push_back({rider, StationId(from), in, StationId(to),
                              Timestamp::from_absolute(in.absolute_minutes() + hops * mps)});
    };
    for (int day = 0; day < config.days; ++day) {
        if (day % 7 == 6) {
            trip(kSixthRoad, kSaddar, day, 11 * 60 + 10);
            trip(kSaddar, kSixthRoad, day, 14 * 60 + 40);
        } else if (day % 7 == 0) {
            trip(kSixthRoad, kSeventhAvenue, day, 12 * 60 + 5);
            trip(kSeventhAvenue, kSixthRoad, day, 19 * 60 + 20);
        }
    }
    sort_events(log.events);

    write_file(dir / "config.json", [&](std::ostream& o) { o << json(config).dump(2) << "\n"; });
    write_file(dir / "world.json", [&](std::ostream& o) { o << json(world).dump(2) << "\n"; });
    write_file(dir / "ads.json",
               [&](std::ostream& o) { o << json(ads_from_brands(world)).dump(2) << "\n"; });
    write_file(dir / "persons.csv", [&](std::ostream& o) { write_population_csv(o, population); });
    write_file(dir / "trips.csv", [&](std::ostream& o) { write_trip_csv(o, log); });
    const std::vector<FeedbackEvent> feedback{
        {rider, AdId(1), Polarity::Negative, Timestamp{29, 17 * 60 + 12}},
        {rider, AdId(5), Polarity::Silent, Timestamp{29, 8 * 60 + 40}}};
    write_file(dir / "feedback.csv", [&](std::ostream& o) { write_feedback_csv(o, feedback); });
    write_file(dir / "scenario.json", [&](std::ostream& o) {
        o << json{{"rider", rider},
                  {"home", kStations[kSixthRoad - 1]},
                  {"work", kStations[kKechahri - 1]},
                  {"feedback", "feedback.csv"}}
                 .dump(2)
          << "\n";
    });
    std::cout << "wrote fixture to " << dir.string() << " (" << log.events.size() << " trips)\n";
    return 0;
}

#include "transit_ads/ridership.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <map>
#include <tuple>

#include "transit_ads/apportion.hpp"
#include "transit_ads/rng.hpp"

namespace transit_ads {

namespace {

constexpr std::uint64_t kWorldStream = 1;
constexpr std::uint64_t kPopulationStream = 2;
constexpr std::uint64_t kTripStreamBase = 1000;

TimeBand natural_band(const AudienceCategory& category, std::size_t index) {
    if (category.name == "student" || category.name == "office_worker") return TimeBand::T1Peak;
    if (category.name == "shopper") return TimeBand::T2Offpeak;
    if (category.name == "other") return TimeBand::T3Night;
    return kAllBands[index % kAllBands.size()];
}

double round_to(double v, double step) { return std::round(v / step) * step; }

struct HourRun {
    int first_hour;
    int last_hour;
};

std::vector<HourRun> peak_runs(const BandTable& table) {
    std::vector<HourRun> runs;
    for (int h = 0; h < 24; ++h) {
        if (table[h] != TimeBand::T1Peak) continue;
        if (!runs.empty() && runs.back().last_hour == h - 1)
            runs.back().last_hour = h;
        else
            runs.push_back({h, h});
    }
    return runs;
}

int draw_habit(Rng& rng, const HourRun& run, int jitter) {
    const int lo = run.first_hour * 60 + jitter;
    const int hi = run.last_hour * 60 + 59 - jitter;
    if (lo > hi) return (run.first_hour * 60 + run.last_hour * 60 + 59) / 2;
    return static_cast<int>(rng.between(lo, hi));
}

bool is_commuter(const SimulationParams& params, const AudienceCategory& category) {
    return std::find(params.commuter_categories.begin(), params.commuter_categories.end(),
                     category) != params.commuter_categories.end();
}

int travel_minutes(std::size_t from, std::size_t to, int minutes_per_station) {
    const auto hops = from > to ? from - to : to - from;
    return std::max(1, static_cast<int>(hops) * minutes_per_station);
}

TripEvent make_trip(PersonId person, const World& world, std::size_t from, std::size_t to,
                    std::int32_t day, int minute, int minutes_per_station) {
    const Timestamp in{day, minute};
    const auto out = Timestamp::from_absolute(in.absolute_minutes() +
                                              travel_minutes(from, to, minutes_per_station));
    return TripEvent{person, world.stations[from].id, in, world.stations[to].id, out};
}

}  // namespace

void to_json(json& j, const SimulationParams& p) {
    j = json{{"minutes_per_station", p.minutes_per_station},
             {"commute_jitter_minutes", p.commute_jitter_minutes},
             {"commuter_categories", p.commuter_categories},
             {"weekday_trips_per_person", p.weekday_trips_per_person},
             {"weekend_trips_per_person", p.weekend_trips_per_person},
             {"max_trips_per_day", p.max_trips_per_day}};
}

void from_json(const json& j, SimulationParams& p) {
    const SimulationParams d;
    p.minutes_per_station = j.value("minutes_per_station", d.minutes_per_station);
    p.commute_jitter_minutes = j.value("commute_jitter_minutes", d.commute_jitter_minutes);
    p.commuter_categories = j.contains("commuter_categories")
                                ? j.at("commuter_categories").get<std::vector<AudienceCategory>>()
                                : d.commuter_categories;
    p.weekday_trips_per_person = j.value("weekday_trips_per_person", d.weekday_trips_per_person);
    p.weekend_trips_per_person = j.value("weekend_trips_per_person", d.weekend_trips_per_person);
    p.max_trips_per_day = j.value("max_trips_per_day", d.max_trips_per_day);
    if (p.minutes_per_station <= 0 || p.commute_jitter_minutes < 0 || p.max_trips_per_day < 2 ||
        p.weekday_trips_per_person < 0.0 || p.weekend_trips_per_person < 0.0)
        throw ConfigError("invalid simulation parameters");
}

const Person* Population::find(PersonId id) const {
    // ids are usually 1..N in order
    if (id.value >= 1 && id.value <= persons.size() && persons[id.value - 1].id == id)
        return &persons[id.value - 1];
    for (const auto& p : persons)
        if (p.id == id) return &p;
    return nullptr;
}

const Person& Population::person(PersonId id) const {
    const auto* p = find(id);
    if (!p) throw InputError("unknown person id " + std::to_string(id.value));
    return *p;
}

void sort_events(std::vector<TripEvent>& events) {
    std::sort(events.begin(), events.end(), [](const TripEvent& a, const TripEvent& b) {
        return std::forward_as_tuple(a.check_in_time, a.person, a.check_in_station,
                                     a.check_out_station, a.check_out_time) <
               std::forward_as_tuple(b.check_in_time, b.person, b.check_in_station,
                                     b.check_out_station, b.check_out_time);
    });
}

TimeBand trip_band(const TripEvent& trip, const BandTable& table) {
    return classify_hour(trip.check_in_time.minute / 60, table);
}

std::uint64_t config_digest(const WorldConfig& config) {
    return fnv1a64(json(config).dump());
}

World generate_world(const WorldConfig& config) {
    validate(config);
    auto rng = Rng::stream(config.rng_seed, kWorldStream);
    World world;
    const auto& cats = config.category_table;
    for (int s = 0; s < config.station_count; ++s) {
        Station st;
        st.id = StationId(static_cast<std::uint32_t>(s + 1));
        st.name = "S" + std::to_string(s + 1);
        st.location = Eigen::Vector2d(s * config.station_spacing, 0.0);
        st.screen_count = 2;
        for (std::size_t c = 0; c < cats.size(); ++c)
            st.buildings.push_back(
                {cats[c], round_to(rng.uniform(0.2, 1.0), 0.01), natural_band(cats[c], c)});
        world.stations.push_back(std::move(st));
    }
    std::uint32_t next_brand = 1;
    for (int s = 0; s < config.station_count; ++s) {
        for (int k = 0; k < config.brands_per_station; ++k) {
            Brand b;
            b.id = BrandId(next_brand++);
            b.category = cats[static_cast<std::size_t>(s + k) % cats.size()];
            b.station = world.stations[static_cast<std::size_t>(s)].id;
            b.name = b.category.name + "-brand-" + std::to_string(b.id.value);
            b.per_second_rate = round_to(rng.uniform(0.01, 0.05), 0.0001);
            world.brands.push_back(std::move(b));
        }
    }
    return world;
}

Population generate_population(const WorldConfig& config) {
    return generate_population(config, generate_world(config));
}

Population generate_population(const WorldConfig& config, const World& world) {
    validate(config);
    if (world.stations.empty()) throw ConfigError("world has no stations");
    auto rng = Rng::stream(config.rng_seed, kPopulationStream);
    const auto runs = peak_runs(config.band_table);
    const int jitter = SimulationParams{}.commute_jitter_minutes;
    const auto n_stations = world.stations.size();

    Population pop;
    pop.config_hash = config_digest(config);
    pop.persons.reserve(static_cast<std::size_t>(config.persons));
    std::vector<double> weights(config.category_table.size());
    for (int i = 0; i < config.persons; ++i) {
        const auto home = static_cast<std::size_t>(rng.below(n_stations));
        const auto& station = world.stations[home];
        for (std::size_t c = 0; c < weights.size(); ++c) {
            weights[c] = 0.0;
            for (const auto& b : station.buildings)
                if (b.category == config.category_table[c]) weights[c] += b.density;
        }
        Person p;
        p.id = PersonId(static_cast<std::uint32_t>(i + 1));
        p.category = config.category_table[rng.weighted(weights)];
        p.home_station = station.id;
        auto work = home;
        if (n_stations > 1) {
            work = static_cast<std::size_t>(rng.below(n_stations - 1));
            if (work >= home) ++work;
        }
        p.work_station = world.stations[work].id;
        if (runs.empty()) {
            p.outbound_minute = 8 * 60;
            p.return_minute = 17 * 60;
        } else {
            p.outbound_minute = draw_habit(rng, runs.front(), jitter);
            p.return_minute = runs.size() > 1 ? draw_habit(rng, runs.back(), jitter)
                                              : (p.outbound_minute + 9 * 60) % kMinutesPerDay;
        }
        pop.persons.push_back(std::move(p));
    }
    return pop;
}

TripLog simulate_trips(const Population& population, const World& world,
                       const WorldConfig& config, const SimulationParams& params, int days) {
    if (days < 1) throw InputError("days must be at least 1");
    TripLog log;
    log.first_day = 0;
    log.day_count = days;
    if (population.persons.empty()) return log;
    if (world.stations.size() < 2) throw ConfigError("trips need at least two stations");

    const auto n_stations = world.stations.size();
    std::vector<std::size_t> home(population.persons.size()), work(population.persons.size());
    std::vector<bool> commuter(population.persons.size());
    for (std::size_t i = 0; i < population.persons.size(); ++i) {
        const auto& p = population.persons[i];
        const auto h = world.index_of(p.home_station);
        const auto w = world.index_of(p.work_station);
        if (!h || !w)
            throw InputError("person " + std::to_string(p.id.value) + " references unknown station");
        home[i] = *h;
        work[i] = *w;
        commuter[i] = is_commuter(params, p.category) && *h != *w;
    }

    std::array<std::vector<int>, 3> band_hours;
    for (int h = 0; h < 24; ++h) band_hours[band_index(config.band_table[h])].push_back(h);
    double ratio_sum = 0.0;
    for (double r : config.band_trip_ratio) ratio_sum += r;

    std::vector<int> trips_today(population.persons.size());
    for (int day = 0; day < days; ++day) {
        auto rng = Rng::stream(config.rng_seed, kTripStreamBase + static_cast<std::uint64_t>(day));
        std::fill(trips_today.begin(), trips_today.end(), 0);
        std::array<std::int64_t, 3> per_band{0, 0, 0};
        const bool weekend = is_weekend(day);

        auto emit = [&](std::size_t person, std::size_t from, std::size_t to, int minute) {
            auto trip = make_trip(population.persons[person].id, world, from, to, day, minute,
                                  params.minutes_per_station);
            ++per_band[band_index(trip_band(trip, config.band_table))];
            ++trips_today[person];
            log.events.push_back(trip);
        };

        if (!weekend) {
            const int j = params.commute_jitter_minutes;
            for (std::size_t i = 0; i < population.persons.size(); ++i) {
                if (!commuter[i]) continue;
                const auto& p = population.persons[i];
                const int out = static_cast<int>(
                    (p.outbound_minute + rng.between(-j, j) + kMinutesPerDay) % kMinutesPerDay);
                const int back = static_cast<int>(
                    (p.return_minute + rng.between(-j, j) + kMinutesPerDay) % kMinutesPerDay);
                emit(i, home[i], work[i], out);
                emit(i, work[i], home[i], back);
            }
        }

        // Leisure volume tops every band up to its share of the day's total.
        const double base = static_cast<double>(population.persons.size()) *
                            (weekend ? params.weekend_trips_per_person
                                     : params.weekday_trips_per_person);
        double total = base;
        for (std::size_t b = 0; b < 3; ++b)
            total = std::max(total, static_cast<double>(per_band[b]) * ratio_sum /
                                        config.band_trip_ratio[b]);
        const auto quotas = apportion_real(config.band_trip_ratio,
                                           static_cast<std::int64_t>(std::llround(total)));

        std::vector<std::size_t> primary, secondary;
        for (std::size_t i = 0; i < population.persons.size(); ++i) {
            if (trips_today[i] >= params.max_trips_per_day) continue;
            (!weekend && commuter[i] ? secondary : primary).push_back(i);
        }
        auto pick = [&]() -> std::optional<std::size_t> {
            auto& pool = primary.empty() ? secondary : primary;
            if (pool.empty()) return std::nullopt;
            const auto k = static_cast<std::size_t>(rng.below(pool.size()));
            const auto person = pool[k];
            if (trips_today[person] + 1 >= params.max_trips_per_day) {
                pool[k] = pool.back();
                pool.pop_back();
            }
            return person;
        };

        for (std::size_t b = 0; b < 3; ++b) {
            if (band_hours[b].empty()) continue;
            for (std::int64_t k = per_band[b]; k < quotas[b]; ++k) {
                const auto person = pick();
                if (!person) break;
                const int hour = band_hours[b][rng.below(band_hours[b].size())];
                const int minute = hour * 60 + static_cast<int>(rng.below(60));
                std::size_t from = rng.bernoulli(0.5) ? home[*person]
                                                      : static_cast<std::size_t>(rng.below(n_stations));
                auto to = static_cast<std::size_t>(rng.below(n_stations - 1));
                if (to >= from) ++to;
                emit(*person, from, to, minute);
            }
        }
    }
    sort_events(log.events);
    return log;
}

}  // namespace transit_ads

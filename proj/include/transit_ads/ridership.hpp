#pragma once

// Synthetic world, population and smart-card trip generation.

#include <cstdint>
#include <vector>

#include "transit_ads/domain.hpp"

namespace transit_ads {

struct SimulationParams {
    int minutes_per_station = 3;
    /// Commuter check-ins are drawn uniformly from habit +/- this many minutes.
    int commute_jitter_minutes = 15;
    std::vector<AudienceCategory> commuter_categories{{"student"}, {"office_worker"}};
    /// Baseline daily trip volume per person; commute demand can push it higher.
    double weekday_trips_per_person = 1.5;
    double weekend_trips_per_person = 2.0;
    int max_trips_per_day = 4;

    friend bool operator==(const SimulationParams&, const SimulationParams&) = default;
};

void to_json(json& j, const SimulationParams& p);
void from_json(const json& j, SimulationParams& p);

struct Population {
    std::vector<Person> persons;
    std::uint64_t config_hash = 0;

    const Person& person(PersonId id) const;  // throws InputError
    const Person* find(PersonId id) const;

    friend bool operator==(const Population&, const Population&) = default;
};

/// Trips sorted ascending by check-in time. `first_day` and `day_count` give
/// the covered calendar range, which may include days without trips.
struct TripLog {
    std::vector<TripEvent> events;
    std::int32_t first_day = 0;
    std::int32_t day_count = 1;

    friend bool operator==(const TripLog&, const TripLog&) = default;
};

/// Canonical event order: check-in time, then person, stations, check-out time.
void sort_events(std::vector<TripEvent>& events);

/// Stations on a line at `station_spacing`, one building per category, and
/// `brands_per_station` brands per station.
World generate_world(const WorldConfig& config);

/// Digest of the canonical JSON form of the config.
std::uint64_t config_digest(const WorldConfig& config);

Population generate_population(const WorldConfig& config);
Population generate_population(const WorldConfig& config, const World& world);

/// Generates `days` days of trips starting at day 0. Commuters travel
/// home->work and back at their habitual peak times on weekdays; the remaining
/// volume is filled with leisure trips so that per-band trip counts follow
/// `config.band_trip_ratio`.
TripLog simulate_trips(const Population& population, const World& world,
                       const WorldConfig& config, const SimulationParams& params, int days);

/// Band of a trip, by its check-in hour.
TimeBand trip_band(const TripEvent& trip, const BandTable& table);

}  // namespace transit_ads

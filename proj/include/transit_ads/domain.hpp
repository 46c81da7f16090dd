#pragma once

// Core entity and value types shared by the simulator, the miner, the
// scheduler and the cost model.

#include <array>
#include <compare>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include <Eigen/Core>
#include <json.hpp>

namespace transit_ads {

using json = nlohmann::json;

/// Bad caller-supplied data (malformed rows, unknown ids, out-of-range values).
class InputError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Invalid or inconsistent configuration.
class ConfigError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Strongly typed integer identifier; the tag keeps person, station, brand and
/// ad ids from being mixed up.
template <typename Tag>
struct Id {
    std::uint32_t value = 0;

    constexpr Id() = default;
    constexpr explicit Id(std::uint32_t v) : value(v) {}

    friend constexpr auto operator<=>(const Id&, const Id&) = default;
};

using PersonId = Id<struct PersonTag>;
using StationId = Id<struct StationTag>;
using BrandId = Id<struct BrandTag>;
using AdId = Id<struct AdTag>;

template <typename Tag>
void to_json(json& j, const Id<Tag>& id) { j = id.value; }

template <typename Tag>
void from_json(const json& j, Id<Tag>& id) { id.value = j.get<std::uint32_t>(); }

/// Audience segment label. Valid labels come from the run's category table.
struct AudienceCategory {
    std::string name;

    friend auto operator<=>(const AudienceCategory&, const AudienceCategory&) = default;
};

void to_json(json& j, const AudienceCategory& c);
void from_json(const json& j, AudienceCategory& c);

enum class TimeBand : std::uint8_t { T1Peak = 0, T2Offpeak = 1, T3Night = 2 };

inline constexpr std::array<TimeBand, 3> kAllBands{TimeBand::T1Peak, TimeBand::T2Offpeak,
                                                   TimeBand::T3Night};

inline constexpr std::size_t band_index(TimeBand b) { return static_cast<std::size_t>(b); }

std::string_view to_string(TimeBand band);
/// Accepts "T1_peak", "T2_offpeak", "T3_night".
TimeBand parse_time_band(std::string_view text);

void to_json(json& j, const TimeBand& b);
void from_json(const json& j, TimeBand& b);

/// Hour-of-day (0..23) to band.
using BandTable = std::array<TimeBand, 24>;

/// 07-09 and 16-18 peak, 10-15 and 19-21 off-peak, 22-06 night.
BandTable default_band_table();

TimeBand classify_hour(int hour, const BandTable& table);

inline constexpr int kMinutesPerDay = 1440;

/// Minute-resolution timestamp. Day 0 is 2023-01-01, a Sunday.
struct Timestamp {
    std::int32_t day = 0;
    std::int32_t minute = 0;  // minute of day, [0, 1440)

    constexpr std::int64_t absolute_minutes() const {
        return static_cast<std::int64_t>(day) * kMinutesPerDay + minute;
    }
    static Timestamp from_absolute(std::int64_t minutes);

    friend constexpr bool operator==(const Timestamp& a, const Timestamp& b) {
        return a.day == b.day && a.minute == b.minute;
    }
    friend constexpr auto operator<=>(const Timestamp& a, const Timestamp& b) {
        return a.absolute_minutes() <=> b.absolute_minutes();
    }
};

/// "YYYY-MM-DDTHH:MM".
std::string format_iso(const Timestamp& t);
std::optional<Timestamp> parse_iso(std::string_view text);

/// Saturday and Sunday, i.e. day index congruent to 6 or 0 mod 7.
bool is_weekend(std::int32_t day);

struct BuildingProfile {
    AudienceCategory category;
    double density = 0.0;
    TimeBand active_band = TimeBand::T1Peak;

    friend bool operator==(const BuildingProfile&, const BuildingProfile&) = default;
};

struct Station {
    StationId id;
    std::string name;
    Eigen::Vector2d location = Eigen::Vector2d::Zero();
    std::vector<BuildingProfile> buildings;
    int screen_count = 1;

    friend bool operator==(const Station& a, const Station& b) {
        return a.id == b.id && a.name == b.name && a.location == b.location &&
               a.buildings == b.buildings && a.screen_count == b.screen_count;
    }
};

struct Brand {
    BrandId id;
    std::string name;
    AudienceCategory category;
    StationId station;
    double per_second_rate = 0.0;  // PR, money per second

    friend bool operator==(const Brand&, const Brand&) = default;
};

/// A rider. Commute routine fields are only used for commuter categories.
struct Person {
    PersonId id;
    AudienceCategory category;
    StationId home_station;
    StationId work_station;
    int outbound_minute = 0;
    int return_minute = 0;

    friend bool operator==(const Person&, const Person&) = default;
};

/// One smart-card journey (CIN/COUT).
struct TripEvent {
    PersonId person;
    StationId check_in_station;
    Timestamp check_in_time;
    StationId check_out_station;
    Timestamp check_out_time;

    friend bool operator==(const TripEvent&, const TripEvent&) = default;
};

/// Throws InputError when the trip violates its ordering or distinct-station rule.
void validate_trip(const TripEvent& trip);

struct WorldConfig {
    int station_count = 7;
    int persons = 1000;
    int brands_per_station = 10;
    BandTable band_table = default_band_table();
    std::array<double, 3> band_trip_ratio{3.0, 2.0, 1.0};
    double station_spacing = 1.0;
    std::vector<AudienceCategory> category_table{
        {"student"}, {"office_worker"}, {"shopper"}, {"other"}};
    std::uint64_t rng_seed = 20240611;

    friend bool operator==(const WorldConfig&, const WorldConfig&) = default;
};

/// Throws ConfigError on any violated invariant.
void validate(const WorldConfig& config);

bool has_category(const WorldConfig& config, const AudienceCategory& category);

/// Stations and the brands located at them.
struct World {
    std::vector<Station> stations;
    std::vector<Brand> brands;

    std::optional<std::size_t> index_of(StationId id) const;
    const Station& station(StationId id) const;  // throws InputError
    std::optional<StationId> find_station(std::string_view name) const;
    const Brand& brand(BrandId id) const;  // throws InputError

    friend bool operator==(const World&, const World&) = default;
};

/// Distinct station ids and locations, brands at known stations with PR > 0.
void validate(const World& world);

void to_json(json& j, const BuildingProfile& b);
void from_json(const json& j, BuildingProfile& b);
void to_json(json& j, const Station& s);
void from_json(const json& j, Station& s);
void to_json(json& j, const Brand& b);
void from_json(const json& j, Brand& b);
void to_json(json& j, const Person& p);
void from_json(const json& j, Person& p);
void to_json(json& j, const Timestamp& t);
void from_json(const json& j, Timestamp& t);
void to_json(json& j, const TripEvent& e);
void from_json(const json& j, TripEvent& e);
void to_json(json& j, const WorldConfig& c);
void from_json(const json& j, WorldConfig& c);
void to_json(json& j, const World& w);
void from_json(const json& j, World& w);

/// 64-bit FNV-1a, used for config and file digests.
std::uint64_t fnv1a64(std::string_view bytes);
std::string hex64(std::uint64_t value);

}  // namespace transit_ads

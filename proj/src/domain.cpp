#include "transit_ads/domain.hpp"

#include <algorithm>
#include <charconv>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <set>

namespace transit_ads {

namespace {

constexpr std::chrono::sys_days kEpoch{std::chrono::year{2023} / std::chrono::January / 1};

std::int32_t floor_mod(std::int64_t a, std::int64_t m) {
    const auto r = a % m;
    return static_cast<std::int32_t>(r < 0 ? r + m : r);
}

bool parse_int(std::string_view text, int& out) {
    if (text.empty()) return false;
    const auto* end = text.data() + text.size();
    auto [ptr, ec] = std::from_chars(text.data(), end, out);
    return ec == std::errc{} && ptr == end;
}

}  // namespace

void to_json(json& j, const AudienceCategory& c) { j = c.name; }
void from_json(const json& j, AudienceCategory& c) { c.name = j.get<std::string>(); }

std::string_view to_string(TimeBand band) {
    switch (band) {
    case TimeBand::T1Peak: return "T1_peak";
    case TimeBand::T2Offpeak: return "T2_offpeak";
    case TimeBand::T3Night: return "T3_night";
    }
    return "?";
}

TimeBand parse_time_band(std::string_view text) {
    for (auto b : kAllBands)
        if (to_string(b) == text) return b;
    throw InputError("unknown time band '" + std::string(text) + "'");
}

void to_json(json& j, const TimeBand& b) { j = std::string(to_string(b)); }
void from_json(const json& j, TimeBand& b) { b = parse_time_band(j.get<std::string>()); }

BandTable default_band_table() {
    BandTable table{};
    for (int h = 0; h < 24; ++h) {
        if ((h >= 7 && h <= 9) || (h >= 16 && h <= 18))
            table[h] = TimeBand::T1Peak;
        else if ((h >= 10 && h <= 15) || (h >= 19 && h <= 21))
            table[h] = TimeBand::T2Offpeak;
        else
            table[h] = TimeBand::T3Night;
    }
    return table;
}

TimeBand classify_hour(int hour, const BandTable& table) {
    if (hour < 0 || hour > 23)
        throw InputError("hour " + std::to_string(hour) + " outside 0..23");
    return table[static_cast<std::size_t>(hour)];
}

Timestamp Timestamp::from_absolute(std::int64_t minutes) {
    const auto minute = floor_mod(minutes, kMinutesPerDay);
    const auto day = (minutes - minute) / kMinutesPerDay;
    return Timestamp{static_cast<std::int32_t>(day), minute};
}

std::string format_iso(const Timestamp& t) {
    const std::chrono::year_month_day ymd{kEpoch + std::chrono::days{t.day}};
    char buf[32];
    std::snprintf(buf, sizeof buf, "%04d-%02u-%02uT%02d:%02d", static_cast<int>(ymd.year()),
                  static_cast<unsigned>(ymd.month()), static_cast<unsigned>(ymd.day()),
                  t.minute / 60, t.minute % 60);
    return buf;
}

std::optional<Timestamp> parse_iso(std::string_view text) {
    // YYYY-MM-DDTHH:MM
    if (text.size() != 16 || text[4] != '-' || text[7] != '-' || text[10] != 'T' ||
        text[13] != ':')
        return std::nullopt;
    int y = 0, mo = 0, d = 0, h = 0, mi = 0;
    if (!parse_int(text.substr(0, 4), y) || !parse_int(text.substr(5, 2), mo) ||
        !parse_int(text.substr(8, 2), d) || !parse_int(text.substr(11, 2), h) ||
        !parse_int(text.substr(14, 2), mi))
        return std::nullopt;
    if (h < 0 || h > 23 || mi < 0 || mi > 59) return std::nullopt;
    const std::chrono::year_month_day ymd{std::chrono::year{y},
                                          std::chrono::month{static_cast<unsigned>(mo)},
                                          std::chrono::day{static_cast<unsigned>(d)}};
    if (!ymd.ok()) return std::nullopt;
    const auto day = (std::chrono::sys_days{ymd} - kEpoch).count();
    return Timestamp{static_cast<std::int32_t>(day), h * 60 + mi};
}

bool is_weekend(std::int32_t day) {
    const auto dow = floor_mod(day, 7);
    return dow == 0 || dow == 6;
}

void validate_trip(const TripEvent& trip) {
    if (trip.check_in_time.minute < 0 || trip.check_in_time.minute >= kMinutesPerDay ||
        trip.check_out_time.minute < 0 || trip.check_out_time.minute >= kMinutesPerDay)
        throw InputError("trip timestamp minute out of range");
    if (!(trip.check_out_time > trip.check_in_time))
        throw InputError("check-out time must be after check-in time");
    if (trip.check_in_station == trip.check_out_station)
        throw InputError("check-in and check-out stations must differ");
}

void validate(const WorldConfig& config) {
    if (config.station_count <= 0) throw ConfigError("station_count must be positive");
    if (config.persons <= 0) throw ConfigError("persons must be positive");
    if (config.brands_per_station <= 0) throw ConfigError("brands_per_station must be positive");
    if (config.category_table.empty()) throw ConfigError("category_table must not be empty");
    for (double w : config.band_trip_ratio)
        if (!(w > 0.0) || !std::isfinite(w))
            throw ConfigError("band_trip_ratio entries must be positive");
    if (!(config.station_spacing > 0.0) || !std::isfinite(config.station_spacing))
        throw ConfigError("station_spacing must be positive");
    std::set<AudienceCategory> seen;
    for (const auto& c : config.category_table) {
        if (c.name.empty()) throw ConfigError("empty category name");
        if (!seen.insert(c).second) throw ConfigError("duplicate category '" + c.name + "'");
    }
}

bool has_category(const WorldConfig& config, const AudienceCategory& category) {
    return std::find(config.category_table.begin(), config.category_table.end(), category) !=
           config.category_table.end();
}

std::optional<std::size_t> World::index_of(StationId id) const {
    for (std::size_t i = 0; i < stations.size(); ++i)
        if (stations[i].id == id) return i;
    return std::nullopt;
}

const Station& World::station(StationId id) const {
    const auto idx = index_of(id);
    if (!idx) throw InputError("unknown station id " + std::to_string(id.value));
    return stations[*idx];
}

std::optional<StationId> World::find_station(std::string_view name) const {
    for (const auto& s : stations)
        if (s.name == name) return s.id;
    return std::nullopt;
}

const Brand& World::brand(BrandId id) const {
    for (const auto& b : brands)
        if (b.id == id) return b;
    throw InputError("unknown brand id " + std::to_string(id.value));
}

void validate(const World& world) {
    for (std::size_t i = 0; i < world.stations.size(); ++i) {
        const auto& s = world.stations[i];
        if (s.screen_count <= 0) throw ConfigError("station " + s.name + " needs a screen");
        for (const auto& b : s.buildings)
            if (!(b.density >= 0.0)) throw ConfigError("negative building density at " + s.name);
        for (std::size_t k = 0; k < i; ++k) {
            if (world.stations[k].id == s.id)
                throw ConfigError("duplicate station id " + std::to_string(s.id.value));
            if (world.stations[k].location == s.location)
                throw ConfigError("stations " + world.stations[k].name + " and " + s.name +
                                  " share a location");
        }
    }
    std::set<BrandId> brand_ids;
    for (const auto& b : world.brands) {
        if (!brand_ids.insert(b.id).second)
            throw ConfigError("duplicate brand id " + std::to_string(b.id.value));
        if (!world.index_of(b.station))
            throw ConfigError("brand " + b.name + " at unknown station");
        if (!(b.per_second_rate > 0.0))
            throw ConfigError("brand " + b.name + " needs a positive per-second rate");
    }
}

void to_json(json& j, const BuildingProfile& b) {
    j = json{{"category", b.category}, {"density", b.density}, {"active_band", b.active_band}};
}

void from_json(const json& j, BuildingProfile& b) {
    j.at("category").get_to(b.category);
    j.at("density").get_to(b.density);
    j.at("active_band").get_to(b.active_band);
}

void to_json(json& j, const Station& s) {
    j = json{{"id", s.id},
             {"name", s.name},
             {"location", {s.location.x(), s.location.y()}},
             {"buildings", s.buildings},
             {"screen_count", s.screen_count}};
}

void from_json(const json& j, Station& s) {
    j.at("id").get_to(s.id);
    j.at("name").get_to(s.name);
    const auto& loc = j.at("location");
    s.location = Eigen::Vector2d(loc.at(0).get<double>(), loc.at(1).get<double>());
    j.at("buildings").get_to(s.buildings);
    s.screen_count = j.value("screen_count", 1);
}

void to_json(json& j, const Brand& b) {
    j = json{{"id", b.id},
             {"name", b.name},
             {"category", b.category},
             {"station", b.station},
             {"per_second_rate", b.per_second_rate}};
}

void from_json(const json& j, Brand& b) {
    j.at("id").get_to(b.id);
    j.at("name").get_to(b.name);
    j.at("category").get_to(b.category);
    j.at("station").get_to(b.station);
    j.at("per_second_rate").get_to(b.per_second_rate);
}

void to_json(json& j, const Person& p) {
    j = json{{"id", p.id},
             {"category", p.category},
             {"home_station", p.home_station},
             {"work_station", p.work_station},
             {"outbound_minute", p.outbound_minute},
             {"return_minute", p.return_minute}};
}

void from_json(const json& j, Person& p) {
    j.at("id").get_to(p.id);
    j.at("category").get_to(p.category);
    j.at("home_station").get_to(p.home_station);
    j.at("work_station").get_to(p.work_station);
    j.at("outbound_minute").get_to(p.outbound_minute);
    j.at("return_minute").get_to(p.return_minute);
}

void to_json(json& j, const Timestamp& t) { j = format_iso(t); }

void from_json(const json& j, Timestamp& t) {
    const auto text = j.get<std::string>();
    const auto parsed = parse_iso(text);
    if (!parsed) throw InputError("bad timestamp '" + text + "'");
    t = *parsed;
}

void to_json(json& j, const TripEvent& e) {
    j = json{{"person", e.person},
             {"in_station", e.check_in_station},
             {"in_time", e.check_in_time},
             {"out_station", e.check_out_station},
             {"out_time", e.check_out_time}};
}

void from_json(const json& j, TripEvent& e) {
    j.at("person").get_to(e.person);
    j.at("in_station").get_to(e.check_in_station);
    j.at("in_time").get_to(e.check_in_time);
    j.at("out_station").get_to(e.check_out_station);
    j.at("out_time").get_to(e.check_out_time);
}

void to_json(json& j, const WorldConfig& c) {
    json table = json::array();
    for (auto b : c.band_table) table.push_back(b);
    j = json{{"station_count", c.station_count},
             {"persons", c.persons},
             {"brands_per_station", c.brands_per_station},
             {"band_table", table},
             {"band_trip_ratio", c.band_trip_ratio},
             {"station_spacing", c.station_spacing},
             {"category_table", c.category_table},
             {"rng_seed", c.rng_seed}};
}

void from_json(const json& j, WorldConfig& c) {
    WorldConfig d;
    c.station_count = j.value("station_count", d.station_count);
    c.persons = j.value("persons", d.persons);
    c.brands_per_station = j.value("brands_per_station", d.brands_per_station);
    if (j.contains("band_table")) {
        const auto& t = j.at("band_table");
        if (!t.is_array() || t.size() != 24)
            throw ConfigError("band_table must list a band for each of the 24 hours");
        for (std::size_t h = 0; h < 24; ++h) c.band_table[h] = t.at(h).get<TimeBand>();
    } else {
        c.band_table = d.band_table;
    }
    if (j.contains("band_trip_ratio")) {
        const auto& r = j.at("band_trip_ratio");
        if (!r.is_array() || r.size() != 3)
            throw ConfigError("band_trip_ratio must have exactly 3 entries");
        for (std::size_t i = 0; i < 3; ++i) c.band_trip_ratio[i] = r.at(i).get<double>();
    } else {
        c.band_trip_ratio = d.band_trip_ratio;
    }
    c.station_spacing = j.value("station_spacing", d.station_spacing);
    c.category_table = j.contains("category_table")
                           ? j.at("category_table").get<std::vector<AudienceCategory>>()
                           : d.category_table;
    c.rng_seed = j.value("rng_seed", d.rng_seed);
}

void to_json(json& j, const World& w) {
    j = json{{"stations", w.stations}, {"brands", w.brands}};
}

void from_json(const json& j, World& w) {
    j.at("stations").get_to(w.stations);
    w.brands = j.value("brands", std::vector<Brand>{});
}

std::uint64_t fnv1a64(std::string_view bytes) {
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (unsigned char c : bytes) {
        h ^= c;
        h *= 0x100000001b3ULL;
    }
    return h;
}

std::string hex64(std::uint64_t value) {
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(value));
    return buf;
}

}  // namespace transit_ads

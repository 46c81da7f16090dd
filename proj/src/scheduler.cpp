#include "transit_ads/scheduler.hpp"

#include <algorithm>
#include <charconv>
#include <istream>
#include <numeric>
#include <ostream>

#include "transit_ads/apportion.hpp"

namespace transit_ads {

namespace {

AdSchedule make_schedule(StationId station, TimeBand band, std::int64_t slot,
                         ScheduleSource source) {
    if (slot <= 0) throw InputError("slot_seconds must be positive");
    AdSchedule s;
    s.station = station;
    s.band = band;
    s.slot_seconds = slot;
    s.source = source;
    return s;
}

AdSchedule single_ad(StationId station, TimeBand band, std::int64_t slot, ScheduleSource source,
                     AdId ad) {
    auto s = make_schedule(station, band, slot, source);
    s.entries.push_back({ad, slot});
    return s;
}

/// Allocates by count over (ad, count) pairs; entries come out in AdId order.
AdSchedule ratio_schedule(StationId station, TimeBand band, std::int64_t slot,
                          ScheduleSource source, const std::map<AdId, std::int64_t>& by_ad) {
    auto s = make_schedule(station, band, slot, source);
    std::vector<std::int64_t> counts;
    for (const auto& [ad, n] : by_ad) counts.push_back(n);
    const auto tos = proportional_tos(counts, slot);
    std::size_t k = 0;
    for (const auto& [ad, n] : by_ad) s.entries.push_back({ad, tos[k++]});
    return s;
}

}  // namespace

std::string_view to_string(PolicyId policy) {
    switch (policy) {
    case PolicyId::MaxAudience: return "max_audience";
    case PolicyId::AudienceRatio: return "audience_ratio";
    case PolicyId::NearestBuildings: return "nearest_buildings";
    case PolicyId::BuildingRatio: return "building_ratio";
    }
    return "?";
}

PolicyId parse_policy(std::string_view text) {
    for (auto p : {PolicyId::MaxAudience, PolicyId::AudienceRatio, PolicyId::NearestBuildings,
                   PolicyId::BuildingRatio})
        if (to_string(p) == text) return p;
    throw InputError("unknown policy '" + std::string(text) + "'");
}

std::string_view to_string(ScheduleSource source) {
    switch (source) {
    case ScheduleSource::MaxAudience: return "max_audience";
    case ScheduleSource::AudienceRatio: return "audience_ratio";
    case ScheduleSource::NearestBuildings: return "nearest_buildings";
    case ScheduleSource::BuildingRatio: return "building_ratio";
    case ScheduleSource::Fallback: return "fallback";
    }
    return "?";
}

std::string_view to_string(Polarity polarity) {
    switch (polarity) {
    case Polarity::Positive: return "positive";
    case Polarity::Silent: return "silent";
    case Polarity::Negative: return "negative";
    }
    return "?";
}

Polarity parse_polarity(std::string_view text) {
    for (auto p : {Polarity::Positive, Polarity::Silent, Polarity::Negative})
        if (to_string(p) == text) return p;
    throw InputError("unknown feedback polarity '" + std::string(text) + "'");
}

std::int64_t AdSchedule::allocated() const {
    std::int64_t sum = 0;
    for (const auto& e : entries) sum += e.tos_seconds;
    return sum;
}

std::optional<ScheduleEntry> AdSchedule::top() const {
    std::optional<ScheduleEntry> best;
    for (const auto& e : entries)
        if (!best || e.tos_seconds > best->tos_seconds ||
            (e.tos_seconds == best->tos_seconds && e.ad < best->ad))
            best = e;
    return best;
}

std::optional<Ad> pick_ad(const AudienceCategory& category, std::span<const Ad> ads) {
    std::optional<Ad> best;
    for (const auto& ad : ads) {
        if (ad.category != category) continue;
        if (!best || ad.weight > best->weight || (ad.weight == best->weight && ad.id < best->id))
            best = ad;
    }
    return best;
}

bool strict_order_feasible(std::span<const std::int64_t> counts, std::int64_t slot_seconds) {
    std::vector<std::int64_t> levels(counts.begin(), counts.end());
    std::sort(levels.begin(), levels.end());
    levels.erase(std::unique(levels.begin(), levels.end()), levels.end());
    std::int64_t needed = 0;
    for (auto c : counts)
        needed += std::lower_bound(levels.begin(), levels.end(), c) - levels.begin();
    return slot_seconds >= needed;
}

std::vector<std::int64_t> proportional_tos(std::span<const std::int64_t> counts,
                                           std::int64_t slot_seconds) {
    auto tos = apportion(counts, slot_seconds);
    if (counts.size() < 2 || !strict_order_feasible(counts, slot_seconds)) return tos;

    std::vector<std::int64_t> levels(counts.begin(), counts.end());
    std::sort(levels.begin(), levels.end());
    levels.erase(std::unique(levels.begin(), levels.end()), levels.end());
    std::vector<std::size_t> level_of(counts.size());
    for (std::size_t i = 0; i < counts.size(); ++i)
        level_of[i] = static_cast<std::size_t>(
            std::lower_bound(levels.begin(), levels.end(), counts[i]) - levels.begin());

    // Lift each level just above the one below it.
    std::vector<std::int64_t> level_max(levels.size(), 0);
    std::int64_t below = -1;
    for (std::size_t L = 0; L < levels.size(); ++L) {
        std::int64_t top = below + 1;
        for (std::size_t i = 0; i < counts.size(); ++i) {
            if (level_of[i] != L) continue;
            tos[i] = std::max(tos[i], below + 1);
            top = std::max(top, tos[i]);
        }
        level_max[L] = top;
        below = top;
    }

    // Give back the lifted seconds from the largest shares that have slack.
    std::int64_t excess = std::accumulate(tos.begin(), tos.end(), std::int64_t{0}) - slot_seconds;
    while (excess > 0) {
        std::optional<std::size_t> pick;
        for (std::size_t i = 0; i < counts.size(); ++i) {
            const auto L = level_of[i];
            if (tos[i] != level_max[L]) continue;
            const std::int64_t lowest = L == 0 ? 0 : level_max[L - 1] + 1;
            if (tos[i] - 1 < lowest) continue;
            if (!pick || tos[i] > tos[*pick] ||
                (tos[i] == tos[*pick] && counts[i] >= counts[*pick]))
                pick = i;
        }
        if (!pick) break;  // unreachable when feasible
        --tos[*pick];
        --excess;
        const auto L = level_of[*pick];
        level_max[L] = 0;
        for (std::size_t i = 0; i < counts.size(); ++i)
            if (level_of[i] == L) level_max[L] = std::max(level_max[L], tos[i]);
    }
    return tos;
}

AdSchedule policy_max_audience(const AudienceHistogram& hist, std::span<const Ad> ads,
                               std::int64_t slot_seconds) {
    std::optional<Ad> chosen;
    std::int64_t best = 0;
    for (const auto& [cat, n] : hist.counts) {  // ascending names: ties keep the first
        if (n <= best) continue;
        if (auto ad = pick_ad(cat, ads)) {
            chosen = ad;
            best = n;
        }
    }
    if (!chosen) return fallback_schedule(hist.station, hist.band, ads, slot_seconds);
    return single_ad(hist.station, hist.band, slot_seconds, ScheduleSource::MaxAudience,
                     chosen->id);
}

AdSchedule policy_audience_ratio(const AudienceHistogram& hist, std::span<const Ad> ads,
                                 std::int64_t slot_seconds) {
    std::map<AdId, std::int64_t> by_ad;
    for (const auto& [cat, n] : hist.counts) {
        if (n <= 0) continue;
        if (auto ad = pick_ad(cat, ads)) by_ad[ad->id] += n;
    }
    if (by_ad.empty()) return fallback_schedule(hist.station, hist.band, ads, slot_seconds);
    return ratio_schedule(hist.station, hist.band, slot_seconds, ScheduleSource::AudienceRatio,
                          by_ad);
}

AdSchedule policy_nearest_buildings(const Station& station, TimeBand band,
                                    std::span<const Ad> ads, std::int64_t slot_seconds) {
    std::vector<std::size_t> active;
    for (std::size_t b = 0; b < station.buildings.size(); ++b)
        if (station.buildings[b].active_band == band) active.push_back(b);
    std::stable_sort(active.begin(), active.end(), [&](std::size_t a, std::size_t b) {
        return station.buildings[a].density > station.buildings[b].density;
    });
    for (auto b : active)
        if (auto ad = pick_ad(station.buildings[b].category, ads))
            return single_ad(station.id, band, slot_seconds, ScheduleSource::NearestBuildings,
                             ad->id);
    return fallback_schedule(station.id, band, ads, slot_seconds);
}

AdSchedule policy_building_ratio(const Station& station, TimeBand band,
                                 const std::map<std::size_t, std::int64_t>& visitor_counts,
                                 std::span<const Ad> ads, std::int64_t slot_seconds) {
    std::map<AdId, std::int64_t> by_ad;
    for (const auto& [b, n] : visitor_counts) {
        if (b >= station.buildings.size())
            throw InputError("building index " + std::to_string(b) + " not at station " +
                             station.name);
        if (n < 0) throw InputError("negative visitor count");
        if (n == 0) continue;
        if (auto ad = pick_ad(station.buildings[b].category, ads)) by_ad[ad->id] += n;
    }
    if (by_ad.empty()) return fallback_schedule(station.id, band, ads, slot_seconds);
    return ratio_schedule(station.id, band, slot_seconds, ScheduleSource::BuildingRatio, by_ad);
}

AdSchedule fallback_schedule(StationId station, TimeBand band, std::span<const Ad> ads,
                             std::int64_t slot_seconds, std::int64_t rotation) {
    auto s = make_schedule(station, band, slot_seconds, ScheduleSource::Fallback);
    if (ads.empty()) {
        s.entries.push_back({kHouseAd, slot_seconds});
        return s;
    }
    std::vector<AdId> ids;
    for (const auto& ad : ads) ids.push_back(ad.id);
    std::sort(ids.begin(), ids.end());
    ids.erase(std::unique(ids.begin(), ids.end()), ids.end());
    const auto n = static_cast<std::int64_t>(ids.size());
    const auto base = slot_seconds / n;
    const auto extra = slot_seconds % n;
    const auto start = ((rotation % n) + n) % n;
    for (std::int64_t k = 0; k < n; ++k) {
        const bool bonus = ((k - start + n) % n) < extra;
        s.entries.push_back({ids[static_cast<std::size_t>(k)], base + (bonus ? 1 : 0)});
    }
    return s;
}

std::vector<Ad> apply_feedback(std::vector<Ad> ads, std::span<const FeedbackEvent> events,
                               double decay, double floor) {
    if (!(decay > 0.0 && decay <= 1.0)) throw ConfigError("feedback decay must be in (0, 1]");
    if (!(floor > 0.0)) throw ConfigError("weight floor must be positive");
    for (const auto& e : events) {
        auto it = std::find_if(ads.begin(), ads.end(), [&](const Ad& a) { return a.id == e.ad; });
        if (it == ads.end()) throw InputError("feedback for unknown ad " + std::to_string(e.ad.value));
        if (e.polarity == Polarity::Negative) it->weight = std::max(it->weight * decay, floor);
    }
    return ads;
}

std::vector<Ad> ads_from_brands(const World& world) {
    std::vector<Ad> ads;
    for (const auto& b : world.brands) ads.push_back({AdId(b.id.value), b.id, b.category, 1.0});
    return ads;
}

std::vector<Ad> ads_at_station(std::span<const Ad> ads, const World& world, StationId station) {
    std::vector<Ad> out;
    for (const auto& ad : ads)
        if (world.brand(ad.brand).station == station) out.push_back(ad);
    return out;
}

DaySchedule build_day_schedule(const World& world, const AudienceModel& audience,
                               std::span<const Ad> ads, PolicyId policy, std::int32_t day,
                               const ScheduleParams& params) {
    const bool ratio_family =
        policy == PolicyId::AudienceRatio || policy == PolicyId::BuildingRatio;
    DaySchedule out;
    for (const auto& station : world.stations) {
        const auto local = ads_at_station(ads, world, station.id);
        for (auto band : kAllBands) {
            const auto& hist = audience.at(station.id, band);
            AdSchedule s;
            if (hist.total() >= params.density_threshold) {
                s = ratio_family ? policy_audience_ratio(hist, local, params.slot_seconds)
                                 : policy_max_audience(hist, local, params.slot_seconds);
            } else if (station.buildings.empty()) {
                s = fallback_schedule(station.id, band, local, params.slot_seconds, day);
            } else {
                s = ratio_family
                        ? policy_building_ratio(station, band, audience.visitors(station.id, band),
                                                local, params.slot_seconds)
                        : policy_nearest_buildings(station, band, local, params.slot_seconds);
            }
            if (s.source == ScheduleSource::Fallback)
                s = fallback_schedule(station.id, band, local, params.slot_seconds, day);
            out[{station.id, band}] = std::move(s);
        }
    }
    return out;
}

void write_schedule_csv(std::ostream& out, const DaySchedule& schedule) {
    out << "station,band,ad_id,tos_seconds\n";
    for (const auto& [key, s] : schedule)
        for (const auto& e : s.entries)
            out << s.station.value << ',' << to_string(s.band) << ',' << e.ad.value << ','
                << e.tos_seconds << '\n';
}

void to_json(json& j, const Ad& a) {
    j = json{{"id", a.id}, {"brand", a.brand}, {"category", a.category}, {"weight", a.weight}};
}

void from_json(const json& j, Ad& a) {
    j.at("id").get_to(a.id);
    j.at("brand").get_to(a.brand);
    j.at("category").get_to(a.category);
    a.weight = j.value("weight", 1.0);
    if (!(a.weight > 0.0)) throw InputError("ad weight must be positive");
}

void to_json(json& j, const AdSchedule& s) {
    json entries = json::array();
    for (const auto& e : s.entries) entries.push_back({{"ad_id", e.ad}, {"tos_seconds", e.tos_seconds}});
    j = json{{"station", s.station},
             {"band", s.band},
             {"slot_seconds", s.slot_seconds},
             {"source", std::string(to_string(s.source))},
             {"entries", entries}};
}

void from_json(const json& j, AdSchedule& s) {
    j.at("station").get_to(s.station);
    j.at("band").get_to(s.band);
    j.at("slot_seconds").get_to(s.slot_seconds);
    const auto source = j.at("source").get<std::string>();
    s.source = ScheduleSource::Fallback;
    for (auto src : {ScheduleSource::MaxAudience, ScheduleSource::AudienceRatio,
                     ScheduleSource::NearestBuildings, ScheduleSource::BuildingRatio})
        if (to_string(src) == source) s.source = src;
    s.entries.clear();
    for (const auto& e : j.at("entries"))
        s.entries.push_back({e.at("ad_id").get<AdId>(), e.at("tos_seconds").get<std::int64_t>()});
}

void to_json(json& j, const ScheduleParams& p) {
    j = json{{"slot_seconds", p.slot_seconds},
             {"density_threshold", p.density_threshold},
             {"feedback_decay", p.feedback_decay},
             {"weight_floor", p.weight_floor}};
}

void from_json(const json& j, ScheduleParams& p) {
    const ScheduleParams d;
    p.slot_seconds = j.value("slot_seconds", d.slot_seconds);
    p.density_threshold = j.value("density_threshold", d.density_threshold);
    p.feedback_decay = j.value("feedback_decay", d.feedback_decay);
    p.weight_floor = j.value("weight_floor", d.weight_floor);
    if (p.slot_seconds <= 0 || p.density_threshold < 0 || !(p.feedback_decay > 0.0) ||
        p.feedback_decay > 1.0 || !(p.weight_floor > 0.0))
        throw ConfigError("invalid schedule parameters");
}

void to_json(json& j, const FeedbackEvent& e) {
    j = json{{"person", e.person},
             {"ad", e.ad},
             {"polarity", std::string(to_string(e.polarity))},
             {"time", e.time}};
}

void from_json(const json& j, FeedbackEvent& e) {
    j.at("person").get_to(e.person);
    j.at("ad").get_to(e.ad);
    e.polarity = parse_polarity(j.at("polarity").get<std::string>());
    j.at("time").get_to(e.time);
}

json schedule_to_json(const DaySchedule& schedule) {
    json arr = json::array();
    for (const auto& [key, s] : schedule) arr.push_back(s);
    return arr;
}

DaySchedule schedule_from_json(const json& j) {
    DaySchedule out;
    for (const auto& item : j) {
        auto s = item.get<AdSchedule>();
        out[{s.station, s.band}] = std::move(s);
    }
    return out;
}

void write_feedback_csv(std::ostream& out, std::span<const FeedbackEvent> events) {
    out << "person_id,ad_id,polarity,time\n";
    for (const auto& e : events)
        out << e.person.value << ',' << e.ad.value << ',' << to_string(e.polarity) << ','
            << format_iso(e.time) << '\n';
}

std::vector<FeedbackEvent> read_feedback_csv(std::istream& in) {
    std::vector<FeedbackEvent> events;
    std::string line;
    std::size_t line_no = 0;
    auto fail = [&](const std::string& what) {
        throw InputError("line " + std::to_string(line_no) + ": " + what);
    };
    auto parse_u32 = [&](std::string_view text, const char* field) {
        std::uint32_t v = 0;
        auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
        if (text.empty() || ec != std::errc{} || ptr != text.data() + text.size())
            fail(std::string("field '") + field + "': expected an integer");
        return v;
    };
    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line_no == 1) {
            if (line != "person_id,ad_id,polarity,time") fail("unexpected feedback header");
            continue;
        }
        if (line.empty()) continue;
        std::vector<std::string_view> f;
        std::string_view rest(line);
        for (auto comma = rest.find(','); comma != std::string_view::npos; comma = rest.find(',')) {
            f.push_back(rest.substr(0, comma));
            rest.remove_prefix(comma + 1);
        }
        f.push_back(rest);
        if (f.size() != 4) fail("expected 4 fields");
        FeedbackEvent e;
        e.person = PersonId(parse_u32(f[0], "person_id"));
        e.ad = AdId(parse_u32(f[1], "ad_id"));
        try {
            e.polarity = parse_polarity(f[2]);
        } catch (const InputError& err) {
            fail(std::string("field 'polarity': ") + err.what());
        }
        const auto t = parse_iso(f[3]);
        if (!t) fail("field 'time': expected YYYY-MM-DDTHH:MM");
        e.time = *t;
        events.push_back(e);
    }
    return events;
}

}  // namespace transit_ads

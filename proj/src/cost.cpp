#include "transit_ads/cost.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <ostream>

namespace transit_ads {

std::string_view to_string(CostModel model) {
    return model == CostModel::VisitorDensity ? "visitor_density" : "building_density";
}

std::string_view to_string(CostMode mode) {
    return mode == CostMode::Literal ? "literal" : "consistent";
}

CostMode parse_cost_mode(std::string_view text) {
    if (text == "literal") return CostMode::Literal;
    if (text == "consistent") return CostMode::Consistent;
    throw InputError("unknown cost mode '" + std::string(text) + "'");
}

double relevant_view_cost(const ViewRecord& record) {
    return record.per_viewer_second_rate * static_cast<double>(record.display_seconds);
}

CostReport cost_by_visitor_density(std::span<const ViewRecord> records) {
    CostReport report;
    report.model = CostModel::VisitorDensity;
    for (const auto& r : records) {
        if (r.relevant_views < 0 || r.display_seconds < 0 || r.per_viewer_second_rate < 0.0)
            throw InputError("view record fields must be non-negative");
        const double line = static_cast<double>(r.relevant_views) * relevant_view_cost(r);
        report.line_items.push_back({r.ad, line});
        report.total += line;
    }
    return report;
}

double cost_by_building_density(double per_second_rate, double business_factor,
                                double seconds, CostMode mode) {
    if (per_second_rate < 0.0 || business_factor < 0.0 || seconds < 0.0)
        throw InputError("building-density cost inputs must be non-negative");
    const double ad_cost = per_second_rate * seconds;
    return mode == CostMode::Literal ? per_second_rate * business_factor * ad_cost
                                     : business_factor * ad_cost;
}

double station_business_factor(const World& world, StationId station, TimeBand band) {
    auto active_density = [band](const Station& s) {
        double sum = 0.0;
        for (const auto& b : s.buildings)
            if (b.active_band == band) sum += b.density;
        return sum;
    };
    const double own = active_density(world.station(station));
    double mean = 0.0;
    for (const auto& s : world.stations) mean += active_density(s);
    mean /= static_cast<double>(world.stations.size());
    if (!(mean > 0.0)) return 0.0;
    return std::max(0.0, own / mean);
}

std::int64_t band_display_seconds(std::int64_t tos_seconds, std::int64_t slot_seconds,
                                  TimeBand band, const BandTable& table) {
    const auto hours = std::count(table.begin(), table.end(), band);
    const std::int64_t cycles = hours * 3600 / slot_seconds;
    return tos_seconds * cycles;
}

std::vector<CostReport> price_schedule(const World& world, const AudienceModel& audience,
                                       const DaySchedule& schedule, std::span<const Ad> ads,
                                       std::int32_t day, const CostParams& params,
                                       const BandTable& table) {
    auto find_ad = [&](AdId id) -> const Ad& {
        for (const auto& a : ads)
            if (a.id == id) return a;
        throw InputError("schedule references unknown ad " + std::to_string(id.value));
    };
    std::vector<CostReport> reports;
    for (const auto& [key, s] : schedule) {
        const auto& hist = audience.at(s.station, s.band);
        const double sbf = station_business_factor(world, s.station, s.band);

        std::vector<ViewRecord> views;
        CostReport building;
        building.model = CostModel::BuildingDensity;
        for (const auto& e : s.entries) {
            if (e.ad == kHouseAd) continue;
            const auto& ad = find_ad(e.ad);
            const auto seconds = band_display_seconds(e.tos_seconds, s.slot_seconds, s.band, table);
            const auto it = hist.counts.find(ad.category);
            views.push_back({ad.id, it == hist.counts.end() ? 0 : it->second,
                             params.per_viewer_second_rate, seconds});
            const double c = cost_by_building_density(world.brand(ad.brand).per_second_rate, sbf,
                                                      static_cast<double>(seconds), params.mode);
            building.line_items.push_back({ad.id, c});
            building.total += c;
        }
        auto visitor = cost_by_visitor_density(views);
        for (auto* r : {&visitor, &building}) {
            r->station = s.station;
            r->band = s.band;
            r->day = day;
            reports.push_back(std::move(*r));
        }
    }
    return reports;
}

void write_cost_csv(std::ostream& out, std::span<const CostReport> reports) {
    out << "station,band,day,model,ad_id,cost\n";
    char buf[64];
    for (const auto& r : reports)
        for (const auto& line : r.line_items) {
            std::snprintf(buf, sizeof buf, "%.2f", line.cost);
            out << r.station.value << ',' << to_string(r.band) << ',' << r.day << ','
                << to_string(r.model) << ',' << line.ad.value << ',' << buf << '\n';
        }
}

void to_json(json& j, const CostReport& r) {
    json lines = json::array();
    for (const auto& l : r.line_items) lines.push_back({{"ad_id", l.ad}, {"cost", l.cost}});
    j = json{{"station", r.station},
             {"band", r.band},
             {"day", r.day},
             {"model", std::string(to_string(r.model))},
             {"line_items", lines},
             {"total", r.total}};
}

void to_json(json& j, const CostParams& p) {
    j = json{{"mode", std::string(to_string(p.mode))},
             {"per_viewer_second_rate", p.per_viewer_second_rate}};
}

void from_json(const json& j, CostParams& p) {
    const CostParams d;
    p.mode = j.contains("mode") ? parse_cost_mode(j.at("mode").get<std::string>()) : d.mode;
    p.per_viewer_second_rate = j.value("per_viewer_second_rate", d.per_viewer_second_rate);
    if (p.per_viewer_second_rate < 0.0) throw ConfigError("per_viewer_second_rate must be >= 0");
}

}  // namespace transit_ads

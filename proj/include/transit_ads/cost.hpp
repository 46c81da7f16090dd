#pragma once

// Ad-slot pricing: by relevant-viewer density and by nearby-building density.

#include <cstdint>
#include <iosfwd>
#include <span>
#include <string_view>
#include <vector>

#include "transit_ads/scheduler.hpp"

namespace transit_ads {

enum class CostModel { VisitorDensity, BuildingDensity };

/// `Literal` evaluates PR x SBF x (PR x T) as written; `Consistent` drops the
/// repeated rate and evaluates SBF x (PR x T).
enum class CostMode { Literal, Consistent };

std::string_view to_string(CostModel model);
std::string_view to_string(CostMode mode);
CostMode parse_cost_mode(std::string_view text);

struct ViewRecord {
    AdId ad;
    std::int64_t relevant_views = 0;       // VR
    double per_viewer_second_rate = 0.0;   // single-user per-second view cost
    std::int64_t display_seconds = 0;      // total time on screen

    friend bool operator==(const ViewRecord&, const ViewRecord&) = default;
};

struct CostLine {
    AdId ad;
    double cost = 0.0;

    friend bool operator==(const CostLine&, const CostLine&) = default;
};

struct CostReport {
    StationId station;
    TimeBand band = TimeBand::T1Peak;
    std::int32_t day = 0;
    CostModel model = CostModel::VisitorDensity;
    std::vector<CostLine> line_items;
    double total = 0.0;

    friend bool operator==(const CostReport&, const CostReport&) = default;
};

/// Cost of one relevant view: rate x seconds.
double relevant_view_cost(const ViewRecord& record);

/// One line per record, VR x C(VR); total is the sum of lines.
CostReport cost_by_visitor_density(std::span<const ViewRecord> records);

/// Throws InputError on negative inputs.
double cost_by_building_density(double per_second_rate, double business_factor,
                                double seconds, CostMode mode = CostMode::Consistent);

/// Sum of building densities active in `band` at the station, relative to the
/// mean of the same sum over all stations. Zero when every station sums to zero.
double station_business_factor(const World& world, StationId station, TimeBand band);

struct CostParams {
    CostMode mode = CostMode::Consistent;
    double per_viewer_second_rate = 0.0001;

    friend bool operator==(const CostParams&, const CostParams&) = default;
};

/// Seconds an entry is on screen over a whole band: its slot share times the
/// number of complete slots that fit in the band's hours.
std::int64_t band_display_seconds(std::int64_t tos_seconds, std::int64_t slot_seconds,
                                  TimeBand band, const BandTable& table);

/// Prices every schedule under both models. The house ad is not billed.
std::vector<CostReport> price_schedule(const World& world, const AudienceModel& audience,
                                       const DaySchedule& schedule, std::span<const Ad> ads,
                                       std::int32_t day, const CostParams& params,
                                       const BandTable& table);

/// station,band,day,model,ad_id,cost (cost with two decimals)
void write_cost_csv(std::ostream& out, std::span<const CostReport> reports);

void to_json(json& j, const CostReport& r);
void to_json(json& j, const CostParams& p);
void from_json(const json& j, CostParams& p);

}  // namespace transit_ads

#pragma once

// Spatial and temporal trip clusters, and per-station audience prediction.

#include <cstdint>
#include <map>
#include <utility>
#include <vector>

#include "transit_ads/dbscan.hpp"
#include "transit_ads/ridership.hpp"

namespace transit_ads {

using CategoryCounts = std::map<AudienceCategory, std::int64_t>;

std::int64_t total(const CategoryCounts& counts);

/// Most frequent category; ties go to the lexicographically smaller name.
/// Empty or all-zero counts give an empty category.
AudienceCategory dominant_category(const CategoryCounts& counts);

/// Predicted riders per category at one station and band.
struct AudienceHistogram {
    StationId station;
    TimeBand band = TimeBand::T1Peak;
    CategoryCounts counts;

    std::int64_t total() const { return transit_ads::total(counts); }

    friend bool operator==(const AudienceHistogram&, const AudienceHistogram&) = default;
};

struct SpatialCluster {
    int id = 0;
    std::vector<std::size_t> member_trip_indices;
    std::pair<StationId, StationId> dominant_od_pair;
    CategoryCounts category_mix;

    friend bool operator==(const SpatialCluster&, const SpatialCluster&) = default;
};

struct TemporalCluster {
    int id = 0;
    std::vector<std::size_t> member_trip_indices;
    int window_start = 0;  // minute of day, inclusive
    int window_end = 0;    // minute of day, inclusive; may wrap past midnight
    TimeBand band = TimeBand::T1Peak;

    int width() const { return (window_end - window_start + kMinutesPerDay) % kMinutesPerDay; }
    bool covers(int minute) const {
        return (minute - window_start + kMinutesPerDay) % kMinutesPerDay <= width();
    }

    friend bool operator==(const TemporalCluster&, const TemporalCluster&) = default;
};

struct MiningParams {
    double temporal_eps_minutes = 25.0;
    /// Spatial radius in multiples of the station spacing.
    double spatial_eps_spacing = 0.5;
    int min_pts = 4;

    friend bool operator==(const MiningParams&, const MiningParams&) = default;
};

/// DBSCAN over (check-in x, y, check-out x, y) with the euclidean metric.
/// Every trip's person must be in `population`.
std::vector<SpatialCluster> spatial_clusters(const TripLog& log, const World& world,
                                             const Population& population, double eps,
                                             int min_pts);

/// DBSCAN over check-in minute of day with the circular metric. Each cluster
/// carries the smallest circular window covering its members and the band of
/// its circular mean.
std::vector<TemporalCluster> temporal_clusters(const TripLog& log, const BandTable& table,
                                               double eps_minutes, int min_pts);

/// Per category, the number of distinct persons checking in at `station`
/// during `band`, averaged over the log's days and rounded half up.
AudienceHistogram predict_audience(const TripLog& log, const Population& population,
                                   const World& world, StationId station, TimeBand band,
                                   const BandTable& table);

/// Everything the scheduler needs from the trip history.
struct AudienceModel {
    std::vector<AudienceHistogram> histograms;  // station-major, bands in order
    /// (station, band) -> building index -> visitor count. Visitors are
    /// distinct (person, day) check-outs at the station in the band by riders
    /// of the building's category, summed over the whole history and split
    /// across same-category buildings by density.
    std::map<std::pair<StationId, TimeBand>, std::map<std::size_t, std::int64_t>> building_visitors;

    const AudienceHistogram& at(StationId station, TimeBand band) const;
    std::map<std::size_t, std::int64_t> visitors(StationId station, TimeBand band) const;

    friend bool operator==(const AudienceModel&, const AudienceModel&) = default;
};

AudienceModel build_audience_model(const TripLog& log, const Population& population,
                                   const World& world, const BandTable& table);

struct ClusterReport {
    MiningParams params;
    std::vector<SpatialCluster> spatial;
    std::vector<TemporalCluster> temporal;
    AudienceModel audience;

    friend bool operator==(const ClusterReport&, const ClusterReport&) = default;
};

ClusterReport mine_patterns(const TripLog& log, const Population& population, const World& world,
                            const BandTable& table, double station_spacing,
                            const MiningParams& params);

void to_json(json& j, const MiningParams& p);
void from_json(const json& j, MiningParams& p);
void to_json(json& j, const AudienceHistogram& h);
void from_json(const json& j, AudienceHistogram& h);
void to_json(json& j, const SpatialCluster& c);
void from_json(const json& j, SpatialCluster& c);
void to_json(json& j, const TemporalCluster& c);
void from_json(const json& j, TemporalCluster& c);
void to_json(json& j, const AudienceModel& m);
void from_json(const json& j, AudienceModel& m);
void to_json(json& j, const ClusterReport& r);
void from_json(const json& j, ClusterReport& r);

}  // namespace transit_ads

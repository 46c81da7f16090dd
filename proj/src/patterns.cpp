#include "transit_ads/patterns.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <set>
#include <tuple>

#include "transit_ads/apportion.hpp"

namespace transit_ads {

namespace {

json counts_to_json(const CategoryCounts& counts) {
    json j = json::object();
    for (const auto& [cat, n] : counts) j[cat.name] = n;
    return j;
}

CategoryCounts counts_from_json(const json& j) {
    CategoryCounts counts;
    for (const auto& [name, n] : j.items()) counts[AudienceCategory{name}] = n.get<std::int64_t>();
    return counts;
}

std::pair<int, int> covering_window(std::vector<int> minutes) {
    std::sort(minutes.begin(), minutes.end());
    minutes.erase(std::unique(minutes.begin(), minutes.end()), minutes.end());
    if (minutes.size() == 1) return {minutes[0], minutes[0]};
    // the window is the complement of the largest circular gap
    std::size_t after_gap = 0;
    int best = minutes.front() + kMinutesPerDay - minutes.back();
    for (std::size_t i = 1; i < minutes.size(); ++i) {
        const int gap = minutes[i] - minutes[i - 1];
        if (gap > best) {
            best = gap;
            after_gap = i;
        }
    }
    const auto before_gap = after_gap == 0 ? minutes.size() - 1 : after_gap - 1;
    return {minutes[after_gap], minutes[before_gap]};
}

int circular_mean_minute(const std::vector<int>& minutes, int window_start, int width) {
    double s = 0.0, c = 0.0;
    for (int m : minutes) {
        const double theta = 2.0 * std::numbers::pi * m / kMinutesPerDay;
        s += std::sin(theta);
        c += std::cos(theta);
    }
    if (std::hypot(s, c) < 1e-9 * static_cast<double>(minutes.size()))
        return (window_start + width / 2) % kMinutesPerDay;
    double theta = std::atan2(s, c);
    if (theta < 0) theta += 2.0 * std::numbers::pi;
    const int m = static_cast<int>(std::floor(theta * kMinutesPerDay / (2.0 * std::numbers::pi)));
    return std::clamp(m, 0, kMinutesPerDay - 1);
}

std::size_t station_index(const World& world, StationId id) {
    const auto idx = world.index_of(id);
    if (!idx) throw InputError("unknown station id " + std::to_string(id.value));
    return *idx;
}

}  // namespace

std::int64_t total(const CategoryCounts& counts) {
    std::int64_t sum = 0;
    for (const auto& [cat, n] : counts) sum += n;
    return sum;
}

AudienceCategory dominant_category(const CategoryCounts& counts) {
    AudienceCategory best;
    std::int64_t best_count = 0;
    for (const auto& [cat, n] : counts) {
        if (n > best_count) {
            best = cat;
            best_count = n;
        }
    }
    return best;
}

std::vector<SpatialCluster> spatial_clusters(const TripLog& log, const World& world,
                                             const Population& population, double eps,
                                             int min_pts) {
    PointSet<double> set;
    set.points.resize(static_cast<Eigen::Index>(log.events.size()), 4);
    for (std::size_t i = 0; i < log.events.size(); ++i) {
        const auto& e = log.events[i];
        const auto& from = world.station(e.check_in_station).location;
        const auto& to = world.station(e.check_out_station).location;
        set.points.row(static_cast<Eigen::Index>(i)) << from.x(), from.y(), to.x(), to.y();
    }
    const auto clustering = dbscan(set, eps, min_pts);

    std::vector<SpatialCluster> clusters(static_cast<std::size_t>(clustering.cluster_count));
    std::vector<std::map<std::pair<StationId, StationId>, std::size_t>> od_counts(clusters.size());
    for (std::size_t i = 0; i < clusters.size(); ++i) clusters[i].id = static_cast<int>(i);
    for (std::size_t i = 0; i < log.events.size(); ++i) {
        const int label = clustering.labels[i];
        if (label == kNoise) continue;
        auto& cl = clusters[static_cast<std::size_t>(label)];
        const auto& e = log.events[i];
        cl.member_trip_indices.push_back(i);
        ++od_counts[static_cast<std::size_t>(label)][{e.check_in_station, e.check_out_station}];
        ++cl.category_mix[population.person(e.person).category];
    }
    for (std::size_t c = 0; c < clusters.size(); ++c) {
        std::size_t best = 0;
        for (const auto& [pair, n] : od_counts[c]) {
            if (n > best) {
                best = n;
                clusters[c].dominant_od_pair = pair;
            }
        }
    }
    return clusters;
}

std::vector<TemporalCluster> temporal_clusters(const TripLog& log, const BandTable& table,
                                               double eps_minutes, int min_pts) {
    PointSet<double> set;
    set.metric = Metric::CircularMinutes;
    set.points.resize(static_cast<Eigen::Index>(log.events.size()), 1);
    for (std::size_t i = 0; i < log.events.size(); ++i)
        set.points(static_cast<Eigen::Index>(i), 0) = log.events[i].check_in_time.minute;
    const auto clustering = dbscan(set, eps_minutes, min_pts);

    std::vector<TemporalCluster> clusters(static_cast<std::size_t>(clustering.cluster_count));
    std::vector<std::vector<int>> minutes(clusters.size());
    for (std::size_t i = 0; i < log.events.size(); ++i) {
        const int label = clustering.labels[i];
        if (label == kNoise) continue;
        clusters[static_cast<std::size_t>(label)].member_trip_indices.push_back(i);
        minutes[static_cast<std::size_t>(label)].push_back(log.events[i].check_in_time.minute);
    }
    for (std::size_t c = 0; c < clusters.size(); ++c) {
        auto& cl = clusters[c];
        cl.id = static_cast<int>(c);
        std::tie(cl.window_start, cl.window_end) = covering_window(minutes[c]);
        const int mean = circular_mean_minute(minutes[c], cl.window_start, cl.width());
        cl.band = classify_hour(mean / 60, table);
    }
    return clusters;
}

AudienceHistogram predict_audience(const TripLog& log, const Population& population,
                                   const World& world, StationId station, TimeBand band,
                                   const BandTable& table) {
    station_index(world, station);
    std::set<std::pair<std::int32_t, PersonId>> riders;
    for (const auto& e : log.events)
        if (e.check_in_station == station && trip_band(e, table) == band)
            riders.insert({e.check_in_time.day, e.person});

    CategoryCounts sums;
    for (const auto& [day, person] : riders) ++sums[population.person(person).category];
    AudienceHistogram hist{station, band, {}};
    const std::int64_t days = std::max<std::int32_t>(1, log.day_count);
    for (const auto& [cat, n] : sums) {
        const auto mean = (2 * n + days) / (2 * days);  // half up
        if (mean > 0) hist.counts[cat] = mean;
    }
    return hist;
}

const AudienceHistogram& AudienceModel::at(StationId station, TimeBand band) const {
    for (const auto& h : histograms)
        if (h.station == station && h.band == band) return h;
    throw InputError("no audience prediction for station " + std::to_string(station.value) +
                     " at " + std::string(to_string(band)));
}

std::map<std::size_t, std::int64_t> AudienceModel::visitors(StationId station,
                                                            TimeBand band) const {
    const auto it = building_visitors.find({station, band});
    return it == building_visitors.end() ? std::map<std::size_t, std::int64_t>{} : it->second;
}

AudienceModel build_audience_model(const TripLog& log, const Population& population,
                                   const World& world, const BandTable& table) {
    AudienceModel model;
    const auto n_stations = world.stations.size();
    // distinct (day, person) per station and band, for check-ins and check-outs
    std::vector<std::set<std::pair<std::int32_t, PersonId>>> boarding(n_stations * 3),
        alighting(n_stations * 3);
    for (const auto& e : log.events) {
        const auto in = station_index(world, e.check_in_station);
        const auto out = station_index(world, e.check_out_station);
        boarding[in * 3 + band_index(trip_band(e, table))].insert(
            {e.check_in_time.day, e.person});
        alighting[out * 3 + band_index(classify_hour(e.check_out_time.minute / 60, table))].insert(
            {e.check_out_time.day, e.person});
    }
    const std::int64_t days = std::max<std::int32_t>(1, log.day_count);
    for (std::size_t s = 0; s < n_stations; ++s) {
        const auto& station = world.stations[s];
        for (auto band : kAllBands) {
            const auto slot = s * 3 + band_index(band);
            CategoryCounts sums;
            for (const auto& [day, person] : boarding[slot])
                ++sums[population.person(person).category];
            AudienceHistogram hist{station.id, band, {}};
            for (const auto& [cat, n] : sums) {
                const auto mean = (2 * n + days) / (2 * days);
                if (mean > 0) hist.counts[cat] = mean;
            }
            model.histograms.push_back(std::move(hist));

            CategoryCounts arrivals;
            for (const auto& [day, person] : alighting[slot])
                ++arrivals[population.person(person).category];
            std::map<std::size_t, std::int64_t> visitors;
            for (const auto& [cat, n] : arrivals) {
                std::vector<std::size_t> idx;
                std::vector<double> density;
                for (std::size_t b = 0; b < station.buildings.size(); ++b) {
                    const auto& bld = station.buildings[b];
                    if (bld.category == cat && bld.active_band == band) {
                        idx.push_back(b);
                        density.push_back(bld.density);
                    }
                }
                if (idx.empty()) continue;
                const auto split = apportion_real(density, n);
                for (std::size_t k = 0; k < idx.size(); ++k)
                    if (split[k] > 0) visitors[idx[k]] = split[k];
            }
            if (!visitors.empty()) model.building_visitors[{station.id, band}] = std::move(visitors);
        }
    }
    return model;
}

ClusterReport mine_patterns(const TripLog& log, const Population& population, const World& world,
                            const BandTable& table, double station_spacing,
                            const MiningParams& params) {
    ClusterReport report;
    report.params = params;
    report.spatial = spatial_clusters(log, world, population,
                                      params.spatial_eps_spacing * station_spacing, params.min_pts);
    report.temporal = temporal_clusters(log, table, params.temporal_eps_minutes, params.min_pts);
    report.audience = build_audience_model(log, population, world, table);
    return report;
}

void to_json(json& j, const MiningParams& p) {
    j = json{{"temporal_eps_minutes", p.temporal_eps_minutes},
             {"spatial_eps_spacing", p.spatial_eps_spacing},
             {"min_pts", p.min_pts}};
}

void from_json(const json& j, MiningParams& p) {
    const MiningParams d;
    p.temporal_eps_minutes = j.value("temporal_eps_minutes", d.temporal_eps_minutes);
    p.spatial_eps_spacing = j.value("spatial_eps_spacing", d.spatial_eps_spacing);
    p.min_pts = j.value("min_pts", d.min_pts);
    if (!(p.temporal_eps_minutes > 0) || !(p.spatial_eps_spacing > 0) || p.min_pts < 1)
        throw ConfigError("invalid mining parameters");
}

void to_json(json& j, const AudienceHistogram& h) {
    j = json{{"station", h.station}, {"band", h.band}, {"counts", counts_to_json(h.counts)}};
}

void from_json(const json& j, AudienceHistogram& h) {
    j.at("station").get_to(h.station);
    j.at("band").get_to(h.band);
    h.counts = counts_from_json(j.at("counts"));
}

void to_json(json& j, const SpatialCluster& c) {
    j = json{{"id", c.id},
             {"dominant_od_pair", {c.dominant_od_pair.first, c.dominant_od_pair.second}},
             {"category_mix", counts_to_json(c.category_mix)},
             {"size", c.member_trip_indices.size()},
             {"members", c.member_trip_indices}};
}

void from_json(const json& j, SpatialCluster& c) {
    j.at("id").get_to(c.id);
    c.dominant_od_pair = {j.at("dominant_od_pair").at(0).get<StationId>(),
                          j.at("dominant_od_pair").at(1).get<StationId>()};
    c.category_mix = counts_from_json(j.at("category_mix"));
    j.at("members").get_to(c.member_trip_indices);
}

void to_json(json& j, const TemporalCluster& c) {
    j = json{{"id", c.id},
             {"window", {{"start", c.window_start}, {"end", c.window_end}}},
             {"band", c.band},
             {"size", c.member_trip_indices.size()},
             {"members", c.member_trip_indices}};
}

void from_json(const json& j, TemporalCluster& c) {
    j.at("id").get_to(c.id);
    j.at("window").at("start").get_to(c.window_start);
    j.at("window").at("end").get_to(c.window_end);
    j.at("band").get_to(c.band);
    j.at("members").get_to(c.member_trip_indices);
}

void to_json(json& j, const AudienceModel& m) {
    json visitors = json::array();
    for (const auto& [key, counts] : m.building_visitors) {
        json per = json::object();
        for (const auto& [b, n] : counts) per[std::to_string(b)] = n;
        visitors.push_back({{"station", key.first}, {"band", key.second}, {"counts", per}});
    }
    j = json{{"histograms", m.histograms}, {"building_visitors", visitors}};
}

void from_json(const json& j, AudienceModel& m) {
    j.at("histograms").get_to(m.histograms);
    m.building_visitors.clear();
    for (const auto& v : j.at("building_visitors")) {
        std::map<std::size_t, std::int64_t> counts;
        for (const auto& [b, n] : v.at("counts").items())
            counts[std::stoul(b)] = n.get<std::int64_t>();
        m.building_visitors[{v.at("station").get<StationId>(), v.at("band").get<TimeBand>()}] =
            std::move(counts);
    }
}

void to_json(json& j, const ClusterReport& r) {
    j = json{{"params", r.params},
             {"spatial", r.spatial},
             {"temporal", r.temporal},
             {"audience", r.audience}};
}

void from_json(const json& j, ClusterReport& r) {
    j.at("params").get_to(r.params);
    j.at("spatial").get_to(r.spatial);
    j.at("temporal").get_to(r.temporal);
    j.at("audience").get_to(r.audience);
}

}  // namespace transit_ads

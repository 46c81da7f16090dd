#include "transit_ads/pipeline.hpp"

#include <algorithm>
#include <fstream>
#include <map>
#include <set>
#include <sstream>

namespace transit_ads {

namespace {

constexpr const char* kWorldFile = "world.json";
constexpr const char* kAdsFile = "ads.json";
constexpr const char* kPersonsFile = "persons.csv";
constexpr const char* kTripsFile = "trips.csv";
constexpr const char* kClustersFile = "clusters.json";
constexpr const char* kSchedulesCsv = "schedules.csv";
constexpr const char* kSchedulesJson = "schedules.json";
constexpr const char* kAdsFeedbackFile = "ads_feedback.json";
constexpr const char* kCostsCsv = "costs.csv";
constexpr const char* kCostsJson = "costs.json";
constexpr const char* kReportFile = "report.json";
constexpr const char* kScenarioFile = "scenario.json";

/// Which stage produces each artifact, for "run X first" diagnostics.
Stage producer_of(const std::string& file) {
    if (file == kClustersFile) return Stage::Cluster;
    if (file == kSchedulesJson || file == kSchedulesCsv) return Stage::Schedule;
    if (file == kCostsJson || file == kCostsCsv) return Stage::Cost;
    return Stage::Simulate;
}

std::string read_text(const fs::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw InputError("cannot read " + path.string());
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

class StageContext {
public:
    StageContext(Stage stage, const RunOptions& options)
        : stage_(stage), options_(options),
          in_dir_(options.in_dir.value_or(options.out_dir)) {}

    Stage stage() const { return stage_; }
    const RunOptions& options() const { return options_; }

    fs::path upstream(const std::string& file) {
        const auto path = in_dir_ / file;
        if (!fs::exists(path))
            throw PipelineError(stage_, "missing_input",
                                "missing " + path.string() + "; run the '" +
                                    std::string(to_string(producer_of(file))) +
                                    "' stage first");
        inputs_.push_back(path);
        return path;
    }

    std::optional<fs::path> optional_upstream(const std::string& file) {
        const auto path = in_dir_ / file;
        if (!fs::exists(path)) return std::nullopt;
        inputs_.push_back(path);
        return path;
    }

    fs::path external(const fs::path& path) {
        if (!fs::exists(path))
            throw PipelineError(stage_, "missing_input", "missing " + path.string());
        inputs_.push_back(path);
        return path;
    }

    json read_json(const fs::path& path) {
        try {
            return json::parse(read_text(path));
        } catch (const json::exception& e) {
            throw PipelineError(stage_, "input", path.string() + ": " + e.what());
        }
    }

    void write(const std::string& file, const std::string& contents) {
        fs::create_directories(options_.out_dir);
        const auto path = options_.out_dir / file;
        std::ofstream out(path, std::ios::binary | std::ios::trunc);
        if (!out) throw PipelineError(stage_, "io", "cannot write " + path.string());
        out << contents;
        if (!out) throw PipelineError(stage_, "io", "failed writing " + path.string());
        outputs_.push_back(path);
    }

    void write_json(const std::string& file, const json& j) { write(file, j.dump(2) + "\n"); }

    RunResult finish(const PipelineConfig& config, std::vector<std::string> warnings,
                     std::string summary) {
        // Upstream manifests (if any) contribute the executed stage chain.
        std::vector<std::string> stages;
        for (auto s : {Stage::Simulate, Stage::Cluster, Stage::Schedule, Stage::Cost}) {
            const auto m = in_dir_ / ("manifest_" + std::string(to_string(s)) + ".json");
            if (s != stage_ && fs::exists(m) && std::find(stages.begin(), stages.end(),
                                                          std::string(to_string(s))) == stages.end()) {
                try {
                    for (const auto& st : json::parse(read_text(m)).at("stages"))
                        if (std::find(stages.begin(), stages.end(), st.get<std::string>()) ==
                            stages.end())
                            stages.push_back(st.get<std::string>());
                } catch (const std::exception&) {
                }
            }
        }
        stages.push_back(std::string(to_string(stage_)));

        json inputs = json::array(), outputs = json::array();
        for (const auto& p : inputs_)
            inputs.push_back({{"path", fs::absolute(p).lexically_normal().string()},
                              {"fnv1a64", hex64(fnv1a64(read_text(p)))}});
        for (const auto& p : outputs_)
            outputs.push_back({{"path", p.filename().string()},
                               {"fnv1a64", hex64(fnv1a64(read_text(p)))}});
        json manifest{
            {"tool", "transit-ads"},
            {"version", TRANSIT_ADS_VERSION},
            {"stage", std::string(to_string(stage_))},
            {"stages", stages},
            {"seed", config.world.rng_seed},
            {"config", config},
            {"options",
             {{"policy", std::string(to_string(options_.policy))},
              {"cost_mode", std::string(to_string(config.cost.mode))},
              {"days", config.days},
              {"day", options_.day},
              {"feedback", options_.feedback_path
                               ? fs::absolute(*options_.feedback_path).lexically_normal().string()
                               : std::string()},
              {"fixture_dir", fs::absolute(options_.fixture_dir).lexically_normal().string()}}},
            {"in_dir", fs::absolute(in_dir_).lexically_normal().string()},
            {"out_dir", fs::absolute(options_.out_dir).lexically_normal().string()},
            {"inputs", inputs},
            {"outputs", outputs}};
        const auto name = "manifest_" + std::string(to_string(stage_)) + ".json";
        fs::create_directories(options_.out_dir);
        std::ofstream(options_.out_dir / name, std::ios::binary | std::ios::trunc)
            << manifest.dump(2) << "\n";

        RunResult result;
        result.outputs = outputs_;
        result.manifest = options_.out_dir / name;
        result.warnings = std::move(warnings);
        result.summary = std::move(summary);
        return result;
    }

private:
    Stage stage_;
    const RunOptions& options_;
    fs::path in_dir_;
    std::vector<fs::path> inputs_;
    std::vector<fs::path> outputs_;
};

PipelineConfig effective_config(const RunOptions& options) {
    PipelineConfig config;
    if (options.config)
        config = *options.config;
    else if (options.config_path)
        config = load_config(*options.config_path);
    if (options.seed) config.world.rng_seed = *options.seed;
    if (options.cost_mode) config.cost.mode = *options.cost_mode;
    if (options.days) config.days = *options.days;
    validate(config.world);
    if (config.days < 1) throw ConfigError("days must be at least 1");
    return config;
}

template <typename T>
std::string to_csv(void (*writer)(std::ostream&, const T&), const T& value) {
    std::ostringstream out;
    writer(out, value);
    return out.str();
}

World load_world(StageContext& ctx, const fs::path& path) {
    auto world = ctx.read_json(path).get<World>();
    validate(world);
    return world;
}

std::vector<Ad> load_ads(StageContext& ctx, const fs::path& path) {
    return ctx.read_json(path).get<std::vector<Ad>>();
}

Population load_population(const fs::path& path, const World& world,
                           const std::vector<AudienceCategory>& categories) {
    std::ifstream in(path, std::ios::binary);
    return read_population_csv(in, &world, categories);
}

std::vector<FeedbackEvent> load_feedback(const fs::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw InputError("cannot read " + path.string());
    return read_feedback_csv(in);
}

std::string band_share_summary(const TripLog& log, const BandTable& table) {
    std::array<std::size_t, 3> counts{};
    for (const auto& e : log.events) ++counts[band_index(trip_band(e, table))];
    std::ostringstream s;
    for (auto b : kAllBands) s << ' ' << to_string(b) << '=' << counts[band_index(b)];
    return s.str();
}

RunResult run_simulate(StageContext& ctx, const PipelineConfig& config) {
    const auto world = generate_world(config.world);
    const auto population = generate_population(config.world, world);
    const auto log = simulate_trips(population, world, config.world, config.simulation, config.days);
    ctx.write_json(kWorldFile, world);
    ctx.write_json(kAdsFile, ads_from_brands(world));
    ctx.write(kPersonsFile, to_csv(&write_population_csv, population));
    ctx.write(kTripsFile, to_csv(&write_trip_csv, log));
    std::ostringstream summary;
    summary << "simulated " << population.persons.size() << " persons, " << world.stations.size()
            << " stations, " << world.brands.size() << " brands, " << log.events.size()
            << " trips over " << config.days << " days;" << band_share_summary(log, config.world.band_table);
    return ctx.finish(config, {}, summary.str());
}

RunResult run_cluster(StageContext& ctx, const PipelineConfig& config) {
    const auto world = load_world(ctx, ctx.upstream(kWorldFile));
    const auto population =
        load_population(ctx.upstream(kPersonsFile), world, config.world.category_table);
    auto ingest = ingest_trip_log(ctx.upstream(kTripsFile), &world);
    const auto report = mine_patterns(ingest.log, population, world, config.world.band_table,
                                      config.world.station_spacing, config.mining);
    ctx.write_json(kClustersFile, report);
    std::ostringstream summary;
    summary << "read " << ingest.rows << " trips; " << report.spatial.size()
            << " spatial clusters, " << report.temporal.size() << " temporal clusters";
    return ctx.finish(config, std::move(ingest.warnings), summary.str());
}

RunResult run_schedule(StageContext& ctx, const PipelineConfig& config) {
    const auto world = load_world(ctx, ctx.upstream(kWorldFile));
    auto ads = load_ads(ctx, ctx.upstream(kAdsFile));
    const auto report = ctx.read_json(ctx.upstream(kClustersFile)).get<ClusterReport>();
    if (const auto& fb = ctx.options().feedback_path) {
        const auto events = load_feedback(ctx.external(*fb));
        ads = apply_feedback(std::move(ads), events, config.schedule.feedback_decay,
                             config.schedule.weight_floor);
        ctx.write_json(kAdsFeedbackFile, ads);
    }
    const auto schedule = build_day_schedule(world, report.audience, ads, ctx.options().policy,
                                             ctx.options().day, config.schedule);
    ctx.write(kSchedulesCsv, to_csv(&write_schedule_csv, schedule));
    ctx.write_json(kSchedulesJson, schedule_to_json(schedule));
    return ctx.finish(config, {},
                      std::to_string(schedule.size()) + " schedules (" +
                          std::string(to_string(ctx.options().policy)) + ")");
}

RunResult run_cost(StageContext& ctx, const PipelineConfig& config) {
    const auto world = load_world(ctx, ctx.upstream(kWorldFile));
    const auto ads = load_ads(ctx, ctx.upstream(kAdsFile));
    const auto report = ctx.read_json(ctx.upstream(kClustersFile)).get<ClusterReport>();
    const auto schedule = schedule_from_json(ctx.read_json(ctx.upstream(kSchedulesJson)));
    const auto costs = price_schedule(world, report.audience, schedule, ads, ctx.options().day,
                                      config.cost, config.world.band_table);
    std::ostringstream csv;
    write_cost_csv(csv, costs);
    ctx.write(kCostsCsv, csv.str());
    json j = costs;
    ctx.write_json(kCostsJson, j);
    double visitor = 0.0, building = 0.0;
    for (const auto& c : costs) (c.model == CostModel::VisitorDensity ? visitor : building) += c.total;
    std::ostringstream summary;
    summary << costs.size() << " cost reports; visitor_density total " << visitor
            << ", building_density (" << to_string(config.cost.mode) << ") total " << building;
    return ctx.finish(config, {}, summary.str());
}

RunResult run_report(StageContext& ctx, const PipelineConfig& config) {
    const auto world = load_world(ctx, ctx.upstream(kWorldFile));
    const auto population =
        load_population(ctx.upstream(kPersonsFile), world, config.world.category_table);
    auto ingest = ingest_trip_log(ctx.upstream(kTripsFile), &world);
    const auto& table = config.world.band_table;

    json report;
    report["persons"] = population.persons.size();
    report["stations"] = world.stations.size();
    report["brands"] = world.brands.size();
    report["trips"] = ingest.log.events.size();
    report["days"] = ingest.log.day_count;
    json shares = json::object();
    std::array<std::size_t, 3> counts{};
    for (const auto& e : ingest.log.events) ++counts[band_index(trip_band(e, table))];
    for (auto b : kAllBands)
        shares[std::string(to_string(b))] =
            ingest.log.events.empty()
                ? 0.0
                : static_cast<double>(counts[band_index(b)]) / static_cast<double>(ingest.log.events.size());
    report["band_shares"] = shares;
    if (auto p = ctx.optional_upstream(kClustersFile)) {
        const auto clusters = ctx.read_json(*p).get<ClusterReport>();
        report["spatial_clusters"] = clusters.spatial.size();
        report["temporal_clusters"] = clusters.temporal.size();
    }
    if (auto p = ctx.optional_upstream(kSchedulesJson)) {
        const auto schedule = schedule_from_json(ctx.read_json(*p));
        std::map<std::string, int> sources;
        for (const auto& [key, s] : schedule) ++sources[std::string(to_string(s.source))];
        report["schedules"] = schedule.size();
        report["schedule_sources"] = sources;
    }
    if (auto p = ctx.optional_upstream(kCostsJson)) {
        double visitor = 0.0, building = 0.0;
        for (const auto& c : ctx.read_json(*p)) {
            (c.at("model") == "visitor_density" ? visitor : building) += c.at("total").get<double>();
        }
        report["cost_totals"] = {{"visitor_density", visitor}, {"building_density", building}};
    }
    ctx.write_json(kReportFile, report);
    return ctx.finish(config, std::move(ingest.warnings), report.dump(2));
}

RunResult run_scenario(StageContext& ctx, const PipelineConfig&) {
    const auto& dir = ctx.options().fixture_dir;
    for (const auto* f : {"config.json", kWorldFile, kAdsFile, kPersonsFile, kTripsFile,
                          "feedback.csv", kScenarioFile})
        ctx.external(dir / f);
    const auto config = load_config(dir / "config.json");
    const auto outcome = run_scenario_analysis(dir, ctx.options().policy);
    const auto world = ctx.read_json(dir / kWorldFile).get<World>();
    const auto ads = ctx.read_json(dir / kAdsFile).get<std::vector<Ad>>();

    ctx.write_json(kClustersFile, outcome.clusters);
    ctx.write(kSchedulesCsv, to_csv(&write_schedule_csv, outcome.schedule_before));
    ctx.write_json(kSchedulesJson, schedule_to_json(outcome.schedule_before));
    ctx.write(std::string("schedules_after_feedback.csv"),
              to_csv(&write_schedule_csv, outcome.schedule_after));
    const auto costs = price_schedule(world, outcome.clusters.audience, outcome.schedule_before,
                                      ads, 0, config.cost, config.world.band_table);
    std::ostringstream csv;
    write_cost_csv(csv, costs);
    ctx.write(kCostsCsv, csv.str());
    ctx.write_json(kScenarioFile, outcome);

    std::ostringstream summary;
    summary << "rider " << outcome.rider.value << " (" << outcome.home_station << " -> "
            << outcome.work_station << ")";
    if (outcome.morning_cluster)
        summary << "; morning window " << format_clock(outcome.morning_cluster->window_start)
                << "-" << format_clock(outcome.morning_cluster->window_end);
    summary << "; top ad at " << outcome.work_station << " T1_peak: "
            << (outcome.work_peak_schedule.top() ? outcome.work_peak_schedule.top()->ad.value : 0)
            << " (" << outcome.top_ad_category.name << "); after feedback: "
            << outcome.selected_after.value;
    return ctx.finish(config, {}, summary.str());
}

}  // namespace

void to_json(json& j, const PipelineConfig& c) {
    j = json{{"world", c.world},
             {"simulation", c.simulation},
             {"days", c.days},
             {"mining", c.mining},
             {"schedule", c.schedule},
             {"cost", c.cost}};
}

void from_json(const json& j, PipelineConfig& c) {
    const PipelineConfig d;
    c.world = j.contains("world") ? j.at("world").get<WorldConfig>() : d.world;
    c.simulation = j.contains("simulation") ? j.at("simulation").get<SimulationParams>() : d.simulation;
    c.days = j.value("days", d.days);
    c.mining = j.contains("mining") ? j.at("mining").get<MiningParams>() : d.mining;
    c.schedule = j.contains("schedule") ? j.at("schedule").get<ScheduleParams>() : d.schedule;
    c.cost = j.contains("cost") ? j.at("cost").get<CostParams>() : d.cost;
}

PipelineConfig load_config(const fs::path& path) {
    std::string text;
    try {
        text = read_text(path);
    } catch (const InputError& e) {
        throw ConfigError(e.what());
    }
    try {
        auto config = json::parse(text).get<PipelineConfig>();
        validate(config.world);
        return config;
    } catch (const json::exception& e) {
        throw ConfigError(path.string() + ": " + e.what());
    }
}

std::string_view to_string(Stage stage) {
    switch (stage) {
    case Stage::Simulate: return "simulate";
    case Stage::Cluster: return "cluster";
    case Stage::Schedule: return "schedule";
    case Stage::Cost: return "cost";
    case Stage::Report: return "report";
    case Stage::Scenario: return "scenario";
    }
    return "?";
}

Stage parse_stage(std::string_view text) {
    for (auto s : {Stage::Simulate, Stage::Cluster, Stage::Schedule, Stage::Cost, Stage::Report,
                   Stage::Scenario})
        if (to_string(s) == text) return s;
    throw InputError("unknown stage '" + std::string(text) + "'");
}

RunResult run_stage(Stage stage, const RunOptions& options) {
    StageContext ctx(stage, options);
    try {
        const auto config = effective_config(options);
        switch (stage) {
        case Stage::Simulate: return run_simulate(ctx, config);
        case Stage::Cluster: return run_cluster(ctx, config);
        case Stage::Schedule: return run_schedule(ctx, config);
        case Stage::Cost: return run_cost(ctx, config);
        case Stage::Report: return run_report(ctx, config);
        case Stage::Scenario: return run_scenario(ctx, config);
        }
    } catch (const PipelineError&) {
        throw;
    } catch (const ConfigError& e) {
        throw PipelineError(stage, "config", e.what());
    } catch (const InputError& e) {
        throw PipelineError(stage, "input", e.what());
    } catch (const json::exception& e) {
        throw PipelineError(stage, "input", e.what());
    } catch (const fs::filesystem_error& e) {
        throw PipelineError(stage, "io", e.what());
    }
    throw PipelineError(stage, "input", "unknown stage");
}

RunOptions options_from_manifest(const fs::path& manifest_path) {
    json m;
    try {
        m = json::parse(read_text(manifest_path));
    } catch (const std::exception& e) {
        throw InputError("cannot load manifest " + manifest_path.string() + ": " + e.what());
    }
    RunOptions o;
    o.config = m.at("config").get<PipelineConfig>();
    const auto& opt = m.at("options");
    o.policy = parse_policy(opt.at("policy").get<std::string>());
    o.cost_mode = parse_cost_mode(opt.at("cost_mode").get<std::string>());
    o.days = opt.at("days").get<int>();
    o.day = opt.at("day").get<std::int32_t>();
    if (const auto fb = opt.at("feedback").get<std::string>(); !fb.empty()) o.feedback_path = fb;
    o.fixture_dir = opt.at("fixture_dir").get<std::string>();
    o.in_dir = fs::path(m.at("in_dir").get<std::string>());
    o.out_dir = fs::path(m.at("out_dir").get<std::string>());
    return o;
}

IngestResult ingest_trip_log(const fs::path& path, const World* world) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw InputError("cannot read trip log " + path.string());
    IngestResult result;
    result.log = read_trip_csv(in, world);
    result.rows = result.log.events.size();
    if (result.rows == 0) result.warnings.push_back("trip log " + path.string() + " is empty");
    return result;
}

ScenarioOutcome run_scenario_analysis(const fs::path& dir, PolicyId policy) {
    const auto config = load_config(dir / "config.json");
    World world;
    std::vector<Ad> ads;
    json scenario;
    try {
        world = json::parse(read_text(dir / kWorldFile)).get<World>();
        ads = json::parse(read_text(dir / kAdsFile)).get<std::vector<Ad>>();
        scenario = json::parse(read_text(dir / kScenarioFile));
    } catch (const json::exception& e) {
        throw InputError(std::string("scenario fixture: ") + e.what());
    }
    validate(world);
    const auto& table = config.world.band_table;
    const auto population =
        load_population(dir / kPersonsFile, world, config.world.category_table);
    const auto log = ingest_trip_log(dir / kTripsFile, &world).log;

    ScenarioOutcome out;
    out.rider = scenario.at("rider").get<PersonId>();
    const auto& rider = population.person(out.rider);
    out.home_station = world.station(rider.home_station).name;
    out.work_station = world.station(rider.work_station).name;
    out.clusters = mine_patterns(log, population, world, table, config.world.station_spacing,
                                 config.mining);

    // (a) the rider's own habit windows
    TripLog own;
    own.first_day = log.first_day;
    own.day_count = log.day_count;
    std::vector<std::size_t> commute_trips;  // indices into the full log
    for (std::size_t i = 0; i < log.events.size(); ++i) {
        const auto& e = log.events[i];
        if (e.person != out.rider) continue;
        own.events.push_back(e);
        if (e.check_in_station == rider.home_station && e.check_out_station == rider.work_station)
            commute_trips.push_back(i);
    }
    std::vector<std::size_t> home_checkins;  // indices into `own`
    for (std::size_t i = 0; i < own.events.size(); ++i)
        if (own.events[i].check_in_station == rider.home_station &&
            !is_weekend(own.events[i].check_in_time.day))
            home_checkins.push_back(i);
    out.weekday_home_checkins = home_checkins.size();
    std::size_t best_overlap = 0;
    for (const auto& c : temporal_clusters(own, table, config.mining.temporal_eps_minutes,
                                           config.mining.min_pts)) {
        std::size_t overlap = 0;
        for (auto i : home_checkins)
            if (std::binary_search(c.member_trip_indices.begin(), c.member_trip_indices.end(), i))
                ++overlap;
        if (overlap > best_overlap) {
            best_overlap = overlap;
            out.morning_cluster = c;
        }
    }
    out.morning_cluster_covers_home_checkins =
        out.morning_cluster && !home_checkins.empty() && best_overlap == home_checkins.size() &&
        std::all_of(home_checkins.begin(), home_checkins.end(), [&](std::size_t i) {
            return out.morning_cluster->covers(own.events[i].check_in_time.minute);
        });

    // (b) the spatial cluster that holds the rider's commute
    std::size_t best_commute = 0;
    for (const auto& c : out.clusters.spatial) {
        std::size_t overlap = 0;
        for (auto i : commute_trips)
            if (std::binary_search(c.member_trip_indices.begin(), c.member_trip_indices.end(), i))
                ++overlap;
        if (overlap > best_commute) {
            best_commute = overlap;
            out.commute_cluster = c;
        }
    }
    if (out.commute_cluster) out.commute_cluster_category = dominant_category(out.commute_cluster->category_mix);

    // (c) peak schedule where the rider gets off, then one feedback cycle
    auto ad_category = [&](const std::vector<Ad>& pool, AdId id) {
        for (const auto& a : pool)
            if (a.id == id) return a.category;
        return AudienceCategory{};
    };
    out.schedule_before = build_day_schedule(world, out.clusters.audience, ads, policy, 0, config.schedule);
    out.work_peak_schedule = out.schedule_before.at({rider.work_station, TimeBand::T1Peak});
    if (const auto top = out.work_peak_schedule.top()) {
        out.top_ad_category = ad_category(ads, top->ad);
        out.selected_before = top->ad;
    }

    out.feedback = load_feedback(dir / scenario.value("feedback", std::string("feedback.csv")));
    const auto adjusted = apply_feedback(ads, out.feedback, config.schedule.feedback_decay,
                                         config.schedule.weight_floor);
    out.schedule_after =
        build_day_schedule(world, out.clusters.audience, adjusted, policy, 1, config.schedule);
    out.work_peak_schedule_after = out.schedule_after.at({rider.work_station, TimeBand::T1Peak});
    const auto local_after = ads_at_station(adjusted, world, rider.work_station);
    if (const auto pick = pick_ad(out.top_ad_category, local_after)) out.selected_after = pick->id;
    return out;
}

void to_json(json& j, const ScenarioOutcome& s) {
    j = json{{"rider", s.rider},
             {"home_station", s.home_station},
             {"work_station", s.work_station},
             {"weekday_home_checkins", s.weekday_home_checkins},
             {"morning_cluster_covers_home_checkins", s.morning_cluster_covers_home_checkins},
             {"commute_cluster_category", s.commute_cluster_category},
             {"work_peak_schedule", s.work_peak_schedule},
             {"top_ad_category", s.top_ad_category},
             {"feedback", s.feedback},
             {"selected_before", s.selected_before},
             {"selected_after", s.selected_after},
             {"work_peak_schedule_after", s.work_peak_schedule_after}};
    if (s.morning_cluster) {
        j["morning_cluster"] = {{"start", format_clock(s.morning_cluster->window_start)},
                                {"end", format_clock(s.morning_cluster->window_end)},
                                {"band", s.morning_cluster->band},
                                {"size", s.morning_cluster->member_trip_indices.size()}};
    }
    if (s.commute_cluster) {
        j["commute_cluster"] = {{"id", s.commute_cluster->id},
                                {"dominant_od_pair",
                                 {s.commute_cluster->dominant_od_pair.first,
                                  s.commute_cluster->dominant_od_pair.second}},
                                {"size", s.commute_cluster->member_trip_indices.size()}};
    }
}

}  // namespace transit_ads

#pragma once

// File-based pipeline stages behind the command-line tool. Each stage reads
// its upstream artifacts from the input directory, writes its outputs to the
// output directory, and records a manifest that is enough to re-run it.

#include <cstdint>
#include <filesystem>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "transit_ads/cost.hpp"
#include "transit_ads/scheduler.hpp"
#include "transit_ads/trip_csv.hpp"

namespace transit_ads {

namespace fs = std::filesystem;

struct PipelineConfig {
    WorldConfig world;
    SimulationParams simulation;
    int days = 30;
    MiningParams mining;
    ScheduleParams schedule;
    CostParams cost;

    friend bool operator==(const PipelineConfig&, const PipelineConfig&) = default;
};

void to_json(json& j, const PipelineConfig& c);
void from_json(const json& j, PipelineConfig& c);

/// Reads a JSON config file; absent keys keep their defaults.
PipelineConfig load_config(const fs::path& path);

enum class Stage { Simulate, Cluster, Schedule, Cost, Report, Scenario };

std::string_view to_string(Stage stage);
Stage parse_stage(std::string_view text);

/// Failure of a stage, carrying a short machine-readable code
/// (missing_input, input, config, io).
class PipelineError : public std::runtime_error {
public:
    PipelineError(Stage stage, std::string code, const std::string& message)
        : std::runtime_error(message), stage_(stage), code_(std::move(code)) {}

    Stage stage() const { return stage_; }
    const std::string& code() const { return code_; }

private:
    Stage stage_;
    std::string code_;
};

struct RunOptions {
    std::optional<fs::path> config_path;
    /// Takes precedence over `config_path`; used when replaying a manifest.
    std::optional<PipelineConfig> config;
    std::optional<std::uint64_t> seed;
    PolicyId policy = PolicyId::AudienceRatio;
    std::optional<CostMode> cost_mode;
    std::optional<int> days;
    std::int32_t day = 0;
    fs::path out_dir = "out";
    /// Where upstream artifacts are read from; defaults to `out_dir`.
    std::optional<fs::path> in_dir;
    std::optional<fs::path> feedback_path;
    fs::path fixture_dir = "fixtures/scenario";
};

struct RunResult {
    std::vector<fs::path> outputs;
    fs::path manifest;
    std::vector<std::string> warnings;
    std::string summary;
};

RunResult run_stage(Stage stage, const RunOptions& options);

/// Options that reproduce the run recorded in a manifest file.
RunOptions options_from_manifest(const fs::path& manifest_path);

struct IngestResult {
    TripLog log;
    std::size_t rows = 0;
    std::vector<std::string> warnings;
};

/// Reads a trip CSV file, validating station ids against `world` when given.
IngestResult ingest_trip_log(const fs::path& path, const World* world = nullptr);

/// Outcome of replaying the commuter scenario fixture.
struct ScenarioOutcome {
    PersonId rider;
    std::string home_station;
    std::string work_station;
    std::size_t weekday_home_checkins = 0;

    // (a) temporal clusters of the rider's own check-ins
    std::optional<TemporalCluster> morning_cluster;
    bool morning_cluster_covers_home_checkins = false;

    // (b) spatial cluster holding the rider's home->work trips
    std::optional<SpatialCluster> commute_cluster;
    AudienceCategory commute_cluster_category;

    // (c) peak schedule at the work station
    AdSchedule work_peak_schedule;
    AudienceCategory top_ad_category;

    // feedback cycle
    std::vector<FeedbackEvent> feedback;
    AdId selected_before;
    AdId selected_after;
    AdSchedule work_peak_schedule_after;

    DaySchedule schedule_before;
    DaySchedule schedule_after;
    ClusterReport clusters;
};

/// Loads the fixture directory (config.json, world.json, ads.json,
/// persons.csv, trips.csv, feedback.csv, scenario.json) and runs the full
/// mining, scheduling and feedback cycle for the fixture's rider.
ScenarioOutcome run_scenario_analysis(const fs::path& fixture_dir, PolicyId policy);

void to_json(json& j, const ScenarioOutcome& s);

}  // namespace transit_ads

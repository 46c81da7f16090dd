// transit-ads: simulate ridership, mine audience clusters, schedule screen ads
// and price them. Stages communicate only through files in --out.

#include <cstdlib>
#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "transit_ads/pipeline.hpp"

namespace {

std::string one_line(std::string text) {
    for (auto& c : text)
        if (c == '\n' || c == '\r') c = ' ';
    for (std::size_t pos = 0; (pos = text.find('"', pos)) != std::string::npos; pos += 2)
        text.replace(pos, 1, "\\\"");
    return text;
}

int report_error(std::string_view stage, std::string_view code, const std::string& message) {
    std::cerr << "error stage=" << stage << " code=" << code << " message=\"" << one_line(message)
              << "\"\n";
    return 2;
}

}  // namespace

int main(int argc, char** argv) {
    using namespace transit_ads;

    CLI::App app{"Context-aware transit screen advertising: simulate, cluster, schedule, cost"};
    app.require_subcommand(1);
    app.fallthrough();
    app.set_version_flag("--version", TRANSIT_ADS_VERSION);

    std::string config_path, policy = "audience_ratio", cost_mode, out_dir = "out", in_dir,
                            feedback, manifest, fixtures = TRANSIT_ADS_DEFAULT_FIXTURES;
    std::uint64_t seed = 0;
    int days = 0;
    int day = 0;

    auto* seed_opt = app.add_option("--seed", seed, "RNG seed (overrides the config)");
    app.add_option("--config", config_path, "JSON config file")->check(CLI::ExistingFile);
    app.add_option("--policy", policy, "Ad policy")
        ->check(CLI::IsMember({"max_audience", "audience_ratio", "nearest_buildings",
                               "building_ratio"}));
    app.add_option("--cost-mode", cost_mode, "Building-density cost formula")
        ->check(CLI::IsMember({"literal", "consistent"}));
    app.add_option("--out", out_dir, "Output directory");
    app.add_option("--in", in_dir, "Directory with upstream artifacts (default: --out)");
    auto* days_opt = app.add_option("--days", days, "Days to simulate")->check(CLI::PositiveNumber);
    app.add_option("--day", day, "Day index the schedule is built for");
    app.add_option("--feedback", feedback, "Feedback CSV applied before scheduling")
        ->check(CLI::ExistingFile);
    app.add_option("--fixtures", fixtures, "Scenario fixture directory");
    auto* manifest_opt = app.add_option("--from-manifest", manifest,
                                        "Re-run the stage recorded in a manifest")
                             ->check(CLI::ExistingFile);

    for (auto stage : {Stage::Simulate, Stage::Cluster, Stage::Schedule, Stage::Cost, Stage::Report,
                       Stage::Scenario}) {
        const std::string name(to_string(stage));
        app.add_subcommand(name, [&] {
            switch (stage) {
            case Stage::Simulate: return "Generate world, population and trips.csv";
            case Stage::Cluster: return "Mine spatial/temporal clusters and audience predictions";
            case Stage::Schedule: return "Build the day's screen schedules";
            case Stage::Cost: return "Price the schedules under both cost models";
            case Stage::Report: return "Summarize the artifacts in --out";
            case Stage::Scenario: return "Replay the commuter scenario fixture end to end";
            }
            return "";
        }());
    }

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForVersion& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        return report_error("cli", "usage", e.what());
    }

    const auto* sub = app.get_subcommands().front();
    Stage stage = parse_stage(sub->get_name());
    RunOptions options;
    try {
        if (!manifest_opt->empty()) {
            options = options_from_manifest(manifest);
            if (app.count("--out")) options.out_dir = out_dir;
        } else {
            if (!config_path.empty()) options.config_path = config_path;
            if (!seed_opt->empty()) options.seed = seed;
            options.policy = parse_policy(policy);
            if (!cost_mode.empty()) options.cost_mode = parse_cost_mode(cost_mode);
            if (!days_opt->empty()) options.days = days;
            options.day = day;
            options.out_dir = out_dir;
            if (!in_dir.empty()) options.in_dir = in_dir;
            if (!feedback.empty()) options.feedback_path = feedback;
            options.fixture_dir = fixtures;
        }
        const auto result = run_stage(stage, options);
        for (const auto& w : result.warnings) std::cerr << "warning: " << w << "\n";
        std::cout << sub->get_name() << ": " << result.summary << "\n";
        for (const auto& p : result.outputs) std::cout << "  wrote " << p.string() << "\n";
        std::cout << "  manifest " << result.manifest.string() << "\n";
    } catch (const PipelineError& e) {
        return report_error(to_string(e.stage()), e.code(), e.what());
    } catch (const std::exception& e) {
        return report_error(to_string(stage), "input", e.what());
    }
    return EXIT_SUCCESS;
}

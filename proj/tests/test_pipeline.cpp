#include <doctest.h>

#include <sys/wait.h>

#include <cstdlib>
#include <fstream>
#include <sstream>

#include "transit_ads/pipeline.hpp"

using namespace transit_ads;

namespace {

fs::path fresh_dir(const std::string& name) {
    const auto dir = fs::temp_directory_path() / ("transit_ads_test_" + name);
    fs::remove_all(dir);
    fs::create_directories(dir);
    return dir;
}

std::string slurp(const fs::path& path) {
    std::ifstream in(path, std::ios::binary);
    std::ostringstream s;
    s << in.rdbuf();
    return s.str();
}

void spit(const fs::path& path, const std::string& text) {
    std::ofstream(path, std::ios::binary) << text;
}

fs::path small_config(const fs::path& dir) {
    const auto path = dir / "config.json";
    spit(path, R"({"world": {"persons": 150, "rng_seed": 99}, "days": 4})");
    return path;
}

struct Command {
    int status;
    std::string err;
};

Command run_cli(const std::string& args, const fs::path& dir) {
    const auto err = dir / "stderr.txt";
    const std::string cmd = std::string(TEST_CLI_PATH) + " " + args + " > /dev/null 2> " + err.string();
    const int raw = std::system(cmd.c_str());
    return {WIFEXITED(raw) ? WEXITSTATUS(raw) : -1, slurp(err)};
}

std::size_t lines_in(const std::string& text) {
    std::size_t n = 0;
    for (char c : text) n += c == '\n';
    return n;
}

}  // namespace

TEST_CASE("ingest a small trip file") {
    const auto dir = fresh_dir("ingest");
    spit(dir / "trips.csv",
         "card_id,in_station,in_time,out_station,out_time\n"
         "2,3,2023-01-02T17:05,1,2023-01-02T17:11\n"
         "1,1,2023-01-02T08:40,3,2023-01-02T08:46\n"
         "3,2,2023-01-03T12:00,4,2023-01-03T12:06\n");
    const auto r = ingest_trip_log(dir / "trips.csv");
    REQUIRE(r.log.events.size() == 3);
    CHECK(r.log.events[0].person == PersonId(1));
    CHECK(r.log.events[1].person == PersonId(2));
    CHECK(r.log.events[2].person == PersonId(3));
    CHECK(r.log.first_day == 1);
    CHECK(r.log.day_count == 2);

    spit(dir / "bad.csv",
         "card_id,in_station,in_time,out_station,out_time\n"
         "1,1,2023-01-02T08:40,3,2023-01-02T08:46\n"
         "1,3,2023-01-02T17:40,1,2023-01-02T17:30\n");
    try {
        ingest_trip_log(dir / "bad.csv");
        FAIL("expected an error");
    } catch (const InputError& e) {
        CHECK(std::string(e.what()).find("line 3") != std::string::npos);
    }

    spit(dir / "empty.csv", "");
    const auto empty = ingest_trip_log(dir / "empty.csv");
    CHECK(empty.log.events.empty());
    CHECK(empty.warnings.size() == 1);

    World world;
    for (std::uint32_t i = 1; i <= 2; ++i) {
        Station s;
        s.id = StationId(i);
        s.name = std::to_string(i);
        s.location = Eigen::Vector2d(i, 0);
        world.stations.push_back(s);
    }
    CHECK_THROWS_AS(ingest_trip_log(dir / "trips.csv", &world), InputError);
}

TEST_CASE("ingest the scenario fixture") {
    const fs::path fixture = TEST_FIXTURE_DIR;
    const auto world = json::parse(slurp(fixture / "world.json")).get<World>();
    const auto r = ingest_trip_log(fixture / "trips.csv", &world);
    CHECK(world.stations.size() == 24);
    CHECK(r.log.day_count == 28);
    const auto home = *world.find_station("6th-Road");
    const auto work = *world.find_station("Kechahri");
    int morning = 0, evening = 0, weekdays = 0;
    for (const auto& t : r.log.events) {
        if (t.person != PersonId(1) || is_weekend(t.check_in_time.day)) continue;
        const int m = t.check_in_time.minute;
        if (t.check_in_station == home) {
            ++weekdays;
            morning += t.check_out_station == work && m >= 510 && m <= 540;
        }
        if (t.check_in_station == work) evening += t.check_out_station == home && m >= 1020 && m <= 1050;
    }
    CHECK(weekdays == 20);
    CHECK(morning >= 18);
    CHECK(evening >= 18);
}

TEST_CASE("default simulate stage") {
    const auto dir = fresh_dir("default_sim");
    RunOptions o;
    o.out_dir = dir;
    const auto r = run_stage(Stage::Simulate, o);
    CHECK(fs::exists(r.manifest));
    const auto world = json::parse(slurp(dir / "world.json")).get<World>();
    CHECK(world.stations.size() == 7);
    CHECK(world.brands.size() == 70);
    CHECK(lines_in(slurp(dir / "persons.csv")) == 1001);
    CHECK(slurp(dir / "trips.csv").rfind("card_id,in_station,in_time,out_station,out_time\n", 0) == 0);
}

TEST_CASE("stages chain through files") {
    const auto dir = fresh_dir("chain");
    RunOptions o;
    o.out_dir = dir;
    o.config_path = small_config(dir);

    try {
        run_stage(Stage::Schedule, o);
        FAIL("expected missing input");
    } catch (const PipelineError& e) {
        CHECK(e.code() == "missing_input");
        CHECK(std::string(e.what()).find("simulate") != std::string::npos);
    }

    run_stage(Stage::Simulate, o);
    try {
        run_stage(Stage::Schedule, o);
        FAIL("expected missing input");
    } catch (const PipelineError& e) {
        CHECK(e.code() == "missing_input");
        CHECK(std::string(e.what()).find("cluster") != std::string::npos);
    }
    run_stage(Stage::Cluster, o);
    o.policy = PolicyId::AudienceRatio;
    const auto r = run_stage(Stage::Schedule, o);
    CHECK(r.summary.rfind("21 schedules", 0) == 0);
    CHECK(lines_in(slurp(dir / "schedules.csv")) > 21);
    run_stage(Stage::Cost, o);
    run_stage(Stage::Report, o);
    const auto report = json::parse(slurp(dir / "report.json"));
    CHECK(report.at("persons") == 150);
    CHECK(report.at("schedules") == 21);
}

TEST_CASE("manifest replay is byte identical") {
    const auto dir = fresh_dir("replay_a");
    const auto again = fresh_dir("replay_b");
    RunOptions o;
    o.out_dir = dir;
    o.config_path = small_config(dir);
    o.policy = PolicyId::BuildingRatio;
    o.cost_mode = CostMode::Literal;
    for (auto stage : {Stage::Simulate, Stage::Cluster, Stage::Schedule, Stage::Cost}) {
        const auto first = run_stage(stage, o);
        auto replay = options_from_manifest(first.manifest);
        replay.out_dir = again;
        const auto second = run_stage(stage, replay);
        REQUIRE(first.outputs.size() == second.outputs.size());
        for (std::size_t i = 0; i < first.outputs.size(); ++i) {
            CHECK(first.outputs[i].filename() == second.outputs[i].filename());
            CHECK(slurp(first.outputs[i]) == slurp(second.outputs[i]));
        }
    }
}

TEST_CASE("the fixture generator reproduces the committed fixture") {
    const auto dir = fresh_dir("fixture");
    const std::string cmd = std::string(TEST_FIXTURE_TOOL) + " " + dir.string() + " > /dev/null";
    REQUIRE(std::system(cmd.c_str()) == 0);
    for (const auto& entry : fs::directory_iterator(TEST_FIXTURE_DIR)) {
        INFO(entry.path().filename().string());
        CHECK(slurp(entry.path()) == slurp(dir / entry.path().filename()));
    }
}

TEST_CASE("scenario stage") {
    const auto dir = fresh_dir("scenario");
    RunOptions o;
    o.out_dir = dir;
    o.fixture_dir = TEST_FIXTURE_DIR;
    run_stage(Stage::Scenario, o);
    const auto s = json::parse(slurp(dir / "scenario.json"));
    CHECK(s.at("home_station") == "6th-Road");
    CHECK(s.at("work_station") == "Kechahri");
    CHECK(s.at("selected_before") != s.at("selected_after"));
}

TEST_CASE("cli errors are one line on stderr") {
    const auto dir = fresh_dir("cli");
    auto c = run_cli("schedule --out " + dir.string(), dir);
    CHECK(c.status != 0);
    CHECK(lines_in(c.err) == 1);
    CHECK(c.err.rfind("error stage=schedule code=missing_input", 0) == 0);

    c = run_cli("simulate --policy nope --out " + dir.string(), dir);
    CHECK(c.status != 0);
    CHECK(lines_in(c.err) == 1);
    CHECK(c.err.rfind("error stage=cli code=usage", 0) == 0);

    spit(dir / "broken.json", "{\"world\": ");
    c = run_cli("simulate --config " + (dir / "broken.json").string() + " --out " + dir.string(), dir);
    CHECK(c.status != 0);
    CHECK(lines_in(c.err) == 1);
    CHECK(c.err.rfind("error stage=simulate code=config", 0) == 0);

    c = run_cli("", dir);
    CHECK(c.status != 0);
    CHECK(lines_in(c.err) == 1);

    c = run_cli("simulate --days 2 --config " + small_config(dir).string() + " --out " + dir.string(), dir);
    CHECK(c.status == 0);
    c = run_cli("schedule --from-manifest " + (dir / "manifest_simulate.json").string(), dir);
    CHECK(c.status != 0);
    CHECK(lines_in(c.err) == 1);
}

#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <set>
#include <sstream>

#include "navsim/errors.hpp"
#include "navsim/harness.hpp"
#include "navsim/scenario.hpp"

using namespace navsim;
namespace fs = std::filesystem;

namespace {

const std::string kScenarios = NAVSIM_SCENARIO_DIR;

const char* kSmall = R"(
world:
  width: 3.0
  height: 2.0
  resolution: 0.05
  boxes:
    - [1.4, 0.0, 1.6, 0.9]
robot:
  start: [0.5, 0.5, 0.0]
scan:
  beam_count: 90
  noise_sigma: 0.01
odometry: {sigma_trans: 0.01, sigma_rot: 0.01}
localization: {mode: mcl, particles: 100}
perception: {provider: none}
control: {goal_tolerance: 0.1}
plan:
  goal: [2.5, 0.5, 0.0]
sim: {dt: 0.05, t_max: 30.0, seed: 4}
)";

ScenarioConfig small_config() { return parse_scenario(YAML::Load(kSmall)); }

TraceRecord rec(double t, double x, double y, Mode mode = Mode::Tracking)
{
    TraceRecord r;
    r.t = t;
    r.pose = {x, y, 0.0};
    r.estimate = r.pose;
    r.mode = mode;
    r.clearance = 1.0;
    return r;
}

}  // namespace

TEST_CASE("run_scenario is deterministic and reaches the goal")
{
    const ScenarioConfig cfg = small_config();
    const RunResult a = run_scenario(cfg);
    const RunResult b = run_scenario(cfg);
    CHECK(serialize_trace(a.trace) == serialize_trace(b.trace));
    CHECK(a.metrics.success);
    CHECK(a.metrics.collisions == 0);
    CHECK(a.metrics.path_length >= distance(cfg.start.position(), a.path.waypoints.back()));
    CHECK(distance(a.trace.back().pose.position(), a.path.waypoints.back()) <= cfg.goal_tolerance);
    const RunResult c = run_scenario(cfg, 99);
    CHECK(trace_hash(c.trace) != trace_hash(a.trace));
}

TEST_CASE("trace times advance by dt")
{
    const RunResult r = run_scenario(small_config());
    for (std::size_t i = 0; i < r.trace.size(); ++i)
        REQUIRE(r.trace[i].t == doctest::Approx(0.05 * static_cast<double>(i + 1)).epsilon(1e-12));
}

TEST_CASE("goal equal to start")
{
    ScenarioConfig cfg = small_config();
    cfg.plan.goal = cfg.start;
    const RunResult r = run_scenario(cfg);
    CHECK(r.metrics.success);
    REQUIRE(r.trace.size() == 1);
    CHECK(r.trace[0].t == doctest::Approx(cfg.dt));
    CHECK(r.metrics.path_length == doctest::Approx(0.0));
}

TEST_CASE("collision halts the run")
{
    ScenarioConfig cfg = small_config();
    cfg.localization.mode = LocalizationMode::GroundTruth;
    const std::vector<Point2D> into_wall{{0.5, 0.5}, {1.5, 0.5}};
    const RunResult r = run_scenario(cfg, std::nullopt, into_wall);
    CHECK(r.metrics.collisions == 1);
    CHECK_FALSE(r.metrics.success);
    CHECK(r.trace.back().collision);
}

TEST_CASE("compute_metrics")
{
    const ScenarioConfig cfg = small_config();
    Trace two{rec(0.05, 0.0, 0.0), rec(0.1, 1.0, 0.0, Mode::Done)};
    Metrics m = compute_metrics(two, cfg, {1.0, 0.0});
    CHECK(m.path_length == doctest::Approx(1.0));
    CHECK(m.collisions == 0);
    CHECK(m.success);
    REQUIRE(m.time_to_goal.has_value());
    CHECK(*m.time_to_goal == doctest::Approx(0.1));

    two.back().mode = Mode::Tracking;
    m = compute_metrics(two, cfg, {1.0, 0.0});
    CHECK_FALSE(m.success);
    CHECK_FALSE(m.time_to_goal.has_value());

    two.back().mode = Mode::Done;
    m = compute_metrics(two, cfg, {2.0, 0.0});
    CHECK_FALSE(m.success);

    two[0].mode = Mode::Reactive;
    two[0].clearance = -0.2;
    m = compute_metrics(two, cfg, {1.0, 0.0});
    CHECK(m.entered_reactive_or_recovery);
    CHECK(m.min_clearance == doctest::Approx(-0.2));

    CHECK_THROWS_AS(compute_metrics({}, cfg, {0.0, 0.0}), ContractError);
}

TEST_CASE("trace round trip")
{
    const RunResult r = run_scenario(small_config());
    const fs::path p = fs::temp_directory_path() / "navsim_trace_roundtrip.jsonl";
    write_trace(r.trace, p.string());
    const Trace back = read_trace(p.string());
    CHECK(back == r.trace);
    CHECK(trace_hash(back) == trace_hash(r.trace));
    CHECK(parse_trace("").empty());

    const std::string text = serialize_trace(r.trace);
    const std::string first = text.substr(0, text.find('\n') + 1);
    CHECK(first.rfind("{\"t\":", 0) == 0);
    CHECK(first.find("\"x\"") < first.find("\"est_x\""));
    CHECK(first.find("\"mode\"") < first.find("\"collision\""));
    CHECK(first.find("\"collision\"") < first.find("\"clearance\""));
}

TEST_CASE("truncated trace line names the line")
{
    Trace t{rec(0.05, 0.0, 0.0), rec(0.1, 0.1, 0.0), rec(0.15, 0.2, 0.0)};
    std::string text = serialize_trace(t);
    text.resize(text.size() - 12);
    try {
        parse_trace(text);
        FAIL("expected ParseError");
    } catch (const ParseError& e) {
        CHECK(e.line() == 3);
    }
}

TEST_CASE("metrics output")
{
    Metrics m;
    m.success = true;
    m.collisions = 0;
    m.time_to_goal = 3.5;
    m.path_length = 1.25;
    const std::string line = metrics_summary(m, 0xabcULL);
    CHECK(line.find('\n') == std::string::npos);
    CHECK(line.find("success=1") != std::string::npos);
    CHECK(line.find("trace_hash=0000000000000abc") != std::string::npos);
    std::istringstream ss(line);
    std::string field;
    while (ss >> field)
        CHECK(field.find('=') != std::string::npos);
    const auto j = metrics_json(m);
    CHECK(j.find("\"time_to_goal\": 3.5") != std::string::npos);
}

TEST_CASE("scenario parsing errors name the key")
{
    auto expect_key = [](const std::string& text, const std::string& key) {
        try {
            parse_scenario(YAML::Load(text));
            FAIL("expected ConfigError for " << key);
        } catch (const ConfigError& e) {
            CHECK(e.key() == key);
        }
    };
    const std::string base = "world: {width: 3.0, height: 2.0}\nplan: {goal: [1.0, 1.0, 0.0]}\n";
    expect_key(base, "robot.start");
    expect_key(base + "robot: {start: [0.5, 0.5, 0.0], wheels: 3}\n", "robot.wheels");
    expect_key(base + "robot: {start: [0.5, 0.5, 0.0]}\nsim: {dt: 0.1, t_max: 0.05}\n", "sim.t_max");
    expect_key(base + "robot: {start: [0.5, 0.5, 0.0]}\nlocalization: {mode: slam}\n", "localization.mode");
    expect_key(base + "robot: {start: [9.5, 0.5, 0.0]}\n", "robot.start");
    expect_key(base + "robot: {start: [0.5, 0.5, 0.0]}\nextras: {}\n", "extras");
}

TEST_CASE("control presets from the scenario file")
{
    const std::string base = "world: {width: 3.0, height: 2.0}\nplan: {goal: [1.0, 1.0, 0.0]}\n"
                             "robot: {start: [0.5, 0.5, 0.0], v_max: 0.3}\n";
    const ScenarioConfig ground = parse_scenario(YAML::Load(base));
    CHECK(ground.control.alpha == 0.3);
    CHECK(ground.control.v_max == 0.3);
    const ScenarioConfig drone = parse_scenario(YAML::Load(base + "control: {preset: drone}\n"));
    CHECK(drone.control.alpha == 0.7);
    CHECK(drone.control.beta == 0.5);
}

TEST_CASE("batch rows match single runs in seed order")
{
    ScenarioConfig cfg = small_config();
    cfg.localization.particles = 50;
    const auto rows = run_batch(cfg, 3, 6, std::nullopt, 3);
    REQUIRE(rows.size() == 4);
    for (std::size_t i = 0; i < rows.size(); ++i) {
        CHECK(rows[i].seed == 3 + i);
        CHECK(rows[i].hash == trace_hash(run_scenario(cfg, rows[i].seed).trace));
    }
    const std::string table = batch_table(rows);
    CHECK(std::count(table.begin(), table.end(), '\n') == 5);
}

TEST_CASE("perception latency delays the scan seen by the executive")
{
    ScenarioConfig cfg = small_config();
    cfg.perception.enabled = true;
    cfg.localization.mode = LocalizationMode::GroundTruth;
    const RunResult now = run_scenario(cfg);
    cfg.perception.latency_steps = 3;
    const RunResult late = run_scenario(cfg);
    // Same trajectory up to the first step where p_t changes.
    std::size_t k = 0;
    while (k + 1 < now.trace.size() && now.trace[k + 1].p_t == now.trace[k].p_t)
        ++k;
    REQUIRE(k + 4 < late.trace.size());
    CHECK(late.trace[k + 1].p_t == now.trace[k].p_t);
}

TEST_CASE("render")
{
    const ScenarioConfig cfg = small_config();
    const auto blank = render_ppm(cfg.world, {});
    const std::string header = "P6\n240 160\n255\n";
    REQUIRE(blank.size() == header.size() + 240 * 160 * 3);
    CHECK(std::string(blank.begin(), blank.begin() + static_cast<long>(header.size())) == header);
    std::set<std::uint8_t> greys;
    for (std::size_t i = header.size(); i < blank.size(); i += 3) {
        CHECK(blank[i] == blank[i + 1]);
        greys.insert(blank[i]);
    }
    CHECK(greys == std::set<std::uint8_t>{0, 254});

    Trace walk;
    for (int i = 0; i < 30; ++i) {
        TraceRecord r = rec(0.05 * (i + 1), 0.3 + 0.05 * i, 1.5);
        r.estimate = {0.3 + 0.05 * i, 1.2, 0.0};
        walk.push_back(r);
    }
    const auto img = render_ppm(cfg.world, walk);
    CHECK(img == render_ppm(cfg.world, walk));
    std::size_t green = 0, red = 0;
    for (std::size_t i = header.size(); i < img.size(); i += 3) {
        green += img[i] == colors::kTruth[0] && img[i + 1] == colors::kTruth[1] && img[i + 2] == colors::kTruth[2];
        red += img[i] == colors::kEstimate[0] && img[i + 1] == colors::kEstimate[1] &&
               img[i + 2] == colors::kEstimate[2];
    }
    CHECK(green >= walk.size());
    CHECK(red >= walk.size());

    const fs::path out = fs::temp_directory_path() / "navsim_render.ppm";
    render(cfg.world, walk, out.string());
    std::ifstream in(out, std::ios::binary);
    const std::vector<std::uint8_t> bytes((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
    CHECK(bytes == img);
}

TEST_CASE("mapping tour of the test world")
{
    const ScenarioConfig cfg = load_scenario(kScenarios + "/mapping_world.yaml");
    const auto tour = load_tour(kScenarios + "/mapping_tour.yaml");
    CHECK(tour.size() > 50);
    Rng rng(1);
    const OccupancyGrid map = build_map(cfg.world, tour, cfg.scan, rng);
    CHECK(map.geometry().width == cfg.world.geometry().width);
    std::size_t wrong = 0;
    for (int r = 0; r < map.geometry().height; ++r)
        for (int c = 0; c < map.geometry().width; ++c)
            if (map.classify({c, r}) == CellState::Occupied)
                wrong += !cfg.world.occupied({c, r});
    CHECK(wrong == 0);
    CHECK_THROWS_AS(load_tour(kScenarios + "/nope.yaml"), IoError);
}

#include "navsim/cli.hpp"

#include <filesystem>
#include <fstream>
#include <ostream>
#include <sstream>

#include <CLI11.hpp>

#include "navsim/errors.hpp"
#include "navsim/harness.hpp"

namespace navsim {

namespace fs = std::filesystem;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitRuntime = 1;
constexpr int kExitUsage = 2;

class UsageError : public Error {
  public:
    using Error::Error;
};

Pose2D parse_xy(const std::string& s, const char* flag)
{
    std::istringstream in(s);
    double x = 0.0, y = 0.0;
    char comma = 0;
    if (!(in >> x >> comma >> y) || comma != ',' || !in.eof())
        throw UsageError(std::string(flag) + " expects X,Y");
    return {x, y, 0.0};
}

std::pair<std::uint64_t, std::uint64_t> parse_seed_range(const std::string& s)
{
    const auto dots = s.find("..");
    if (dots == std::string::npos)
        throw UsageError("--seeds expects A..B");
    try {
        std::size_t used = 0;
        const auto a = std::stoull(s.substr(0, dots), &used);
        if (used != dots)
            throw UsageError("--seeds expects A..B");
        const std::string rest = s.substr(dots + 2);
        const auto b = std::stoull(rest, &used);
        if (used != rest.size() || b < a)
            throw UsageError("--seeds expects A..B with A <= B");
        return {a, b};
    } catch (const std::logic_error&) {
        throw UsageError("--seeds expects A..B");
    }
}

std::pair<std::string, std::string> split_base(const std::string& base)
{
    const fs::path p(base);
    return {p.parent_path().string().empty() ? "." : p.parent_path().string(), p.filename().string()};
}

void write_text(const fs::path& path, const std::string& text)
{
    std::ofstream f(path, std::ios::binary);
    if (!f)
        throw IoError(path.string(), "cannot open for writing");
    f << text;
}

void ensure_dir(const std::string& dir)
{
    std::error_code ec;
    fs::create_directories(dir, ec);
    if (ec)
        throw IoError(dir, ec.message());
}

}  // namespace

int dispatch(int argc, const char* const* argv, std::ostream& out, std::ostream& err)
{
    CLI::App app{"Deterministic 2D navigation simulator", "navsim"};
    app.require_subcommand(1);

    std::string scenario, tour, out_path, map_base, start_s, goal_s, algo = "dijkstra", trace_path, path_file, seeds;
    std::string name = "map";
    std::optional<std::uint64_t> seed;
    double weight = 1.0, robot_radius = 0.15, inflation_radius = 0.35, cost_scaling = 10.0, simplify = 0.05;
    int scale = 4;
    unsigned jobs = 0;

    auto* map_cmd = app.add_subcommand("map", "Build and save a map from a scripted tour");
    map_cmd->add_option("--scenario", scenario, "Scenario document")->required();
    map_cmd->add_option("--tour", tour, "Tour document (poses: [[x, y, theta], ...])")->required();
    map_cmd->add_option("--out", out_path, "Output directory")->required();
    map_cmd->add_option("--name", name, "Map basename");

    auto* plan_cmd = app.add_subcommand("plan", "Plan a path on a saved map");
    plan_cmd->add_option("--map", map_base, "Saved map as DIR/basename")->required();
    plan_cmd->add_option("--start", start_s, "Start X,Y")->required();
    plan_cmd->add_option("--goal", goal_s, "Goal X,Y")->required();
    plan_cmd->add_option("--algo", algo, "dijkstra or astar")->check(CLI::IsMember({"dijkstra", "astar"}));
    plan_cmd->add_option("--weight", weight, "A* heuristic weight")->check(CLI::NonNegativeNumber);
    plan_cmd->add_option("--robot-radius", robot_radius, "Footprint radius (m)")->check(CLI::PositiveNumber);
    plan_cmd->add_option("--inflation-radius", inflation_radius, "Inflation radius (m)")->check(CLI::PositiveNumber);
    plan_cmd->add_option("--cost-scaling", cost_scaling, "Inflation decay rate");
    plan_cmd->add_option("--simplify", simplify, "Simplification tolerance (m)")->check(CLI::NonNegativeNumber);
    plan_cmd->add_option("--out", out_path, "Output path file (JSONL)")->required();

    auto* run_cmd = app.add_subcommand("run", "Run one scenario");
    run_cmd->add_option("--scenario", scenario, "Scenario document")->required();
    run_cmd->add_option("--seed", seed, "Seed override");
    run_cmd->add_option("--path", path_file, "Saved path to follow");
    run_cmd->add_option("--out", out_path, "Output directory")->required();

    auto* render_cmd = app.add_subcommand("render", "Render a trace to a PPM image");
    render_cmd->add_option("--trace", trace_path, "Trace JSONL")->required();
    render_cmd->add_option("--scenario", scenario, "Scenario document")->required();
    render_cmd->add_option("--out", out_path, "Output image")->required();
    render_cmd->add_option("--path", path_file, "Path overlay (JSONL)");
    render_cmd->add_option("--map", map_base, "Saved map background as DIR/basename");
    render_cmd->add_option("--scale", scale, "Pixels per cell")->check(CLI::PositiveNumber);

    auto* batch_cmd = app.add_subcommand("batch", "Run a seed range");
    batch_cmd->add_option("--scenario", scenario, "Scenario document")->required();
    batch_cmd->add_option("--seeds", seeds, "Seed range A..B")->required();
    batch_cmd->add_option("--path", path_file, "Saved path to follow");
    batch_cmd->add_option("--out", out_path, "Output directory")->required();
    batch_cmd->add_option("--jobs", jobs, "Worker threads (0 = all cores)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp&) {
        out << app.help();
        return kExitOk;
    } catch (const CLI::CallForAllHelp&) {
        out << app.help("", CLI::AppFormatMode::All);
        return kExitOk;
    } catch (const CLI::ParseError& e) {
        err << "error: " << e.what() << "\n" << app.help();
        return kExitUsage;
    }

    try {
        if (*map_cmd) {
            const ScenarioConfig cfg = load_scenario(scenario);
            const auto poses = load_tour(tour);
            Rng rng(cfg.seed);
            const OccupancyGrid grid = build_map(step_dynamics(cfg.world, 0.0), poses, cfg.scan, rng);
            ensure_dir(out_path);
            save_map(grid, out_path, name);
            out << "map=" << (fs::path(out_path) / (name + ".yaml")).string() << " width=" << grid.geometry().width
                << " height=" << grid.geometry().height << " poses=" << poses.size() << "\n";
        } else if (*plan_cmd) {
            const Pose2D start = parse_xy(start_s, "--start");
            const Pose2D goal = parse_xy(goal_s, "--goal");
            const auto [dir, base] = split_base(map_base);
            const LoadedMap map = load_map(dir, base);
            PlanOptions opts;
            opts.algorithm = algo == "astar" ? PlanAlgorithm::AStar : PlanAlgorithm::Dijkstra;
            opts.heuristic_weight = weight;
            opts.robot_radius = robot_radius;
            opts.inflation_radius = std::max(inflation_radius, robot_radius);
            opts.cost_scaling = cost_scaling;
            opts.simplify_tolerance = simplify;
            const PreparedPath p = plan_on_map(map.grid, start, goal, opts);
            write_path(p.waypoints, out_path);
            out << "path=" << out_path << " waypoints=" << p.waypoints.size()
                << " cost=" << p.grid_path->total_cost << " length=" << p.grid_path->length();
            if (p.goal_adjusted)
                out << " note=goal_adjusted goal=" << p.goal.x << "," << p.goal.y;
            out << "\n";
        } else if (*run_cmd) {
            const ScenarioConfig cfg = load_scenario(scenario);
            std::optional<std::vector<Point2D>> route;
            if (!path_file.empty())
                route = read_path(path_file);
            const RunResult r = run_scenario(cfg, seed, route);
            ensure_dir(out_path);
            write_trace(r.trace, (fs::path(out_path) / "trace.jsonl").string());
            write_text(fs::path(out_path) / "metrics.json", metrics_json(r.metrics));
            out << metrics_summary(r.metrics, trace_hash(r.trace)) << "\n";
        } else if (*render_cmd) {
            const ScenarioConfig cfg = load_scenario(scenario);
            const Trace trace = read_trace(trace_path);
            std::optional<std::vector<Point2D>> overlay;
            std::optional<LoadedMap> map;
            RenderOptions opts;
            opts.pixels_per_cell = scale;
            if (!path_file.empty()) {
                overlay = read_path(path_file);
                opts.path = &*overlay;
            }
            if (!map_base.empty()) {
                const auto [dir, base] = split_base(map_base);
                map = load_map(dir, base);
                opts.map = &map->grid;
            }
            render(cfg.world, trace, out_path, opts);
            out << "image=" << out_path << " records=" << trace.size() << "\n";
        } else if (*batch_cmd) {
            const auto [first, last] = parse_seed_range(seeds);
            const ScenarioConfig cfg = load_scenario(scenario);
            std::optional<std::vector<Point2D>> route;
            if (!path_file.empty())
                route = read_path(path_file);
            const auto rows = run_batch(cfg, first, last, route, jobs);
            ensure_dir(out_path);
            write_text(fs::path(out_path) / "summary.tsv", batch_table(rows));
            std::size_t ok = 0, clean = 0;
            for (const auto& r : rows) {
                ok += r.metrics.success ? 1 : 0;
                clean += r.metrics.collisions == 0 ? 1 : 0;
            }
            out << "runs=" << rows.size() << " success=" << ok << " collision_free=" << clean
                << " summary=" << (fs::path(out_path) / "summary.tsv").string() << "\n";
        }
    } catch (const UsageError& e) {
        err << "error: " << e.what() << "\n";
        return kExitUsage;
    } catch (const Error& e) {
        err << "error: " << e.what() << "\n";
        return kExitRuntime;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << "\n";
        return kExitRuntime;
    }
    return kExitOk;
}

}  // namespace navsim

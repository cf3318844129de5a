#include "navsim/harness.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <deque>
#include <filesystem>
#include <limits>
#include <sstream>
#include <thread>

#include <json.hpp>

#include "navsim/errors.hpp"
#include "navsim/localization.hpp"
#include "navsim/perception.hpp"

namespace navsim {

namespace {

OccupancyGrid planning_grid(const ScenarioConfig& config)
{
    if (config.plan.map.empty())
        return *config.world.static_grid;
    const std::filesystem::path base(config.plan.map);
    return load_map(base.parent_path().string(), base.filename().string()).grid;
}

Pose2D jittered_start(const ScenarioConfig& config, Rng& rng)
{
    Pose2D s = config.start;
    s.x += rng.gaussian(config.start_jitter[0]);
    s.y += rng.gaussian(config.start_jitter[1]);
    s.theta = normalize_angle(s.theta + rng.gaussian(config.start_jitter[2]));
    return s;
}

}  // namespace

Costmap planning_costmap(const ScenarioConfig& config)
{
    return inflate(to_costmap(planning_grid(config)), config.robot.footprint_radius, config.plan.inflation_radius,
                   config.plan.cost_scaling);
}

PlanOptions plan_options(const ScenarioConfig& config)
{
    return {config.plan.algorithm,        config.plan.heuristic_weight, config.robot.footprint_radius,
            config.plan.inflation_radius, config.plan.cost_scaling,     config.plan.simplify_tolerance};
}

PreparedPath plan_on_map(const OccupancyGrid& map, const Pose2D& start, const Pose2D& goal, const PlanOptions& options)
{
    const Costmap cm =
        inflate(to_costmap(map), options.robot_radius, options.inflation_radius, options.cost_scaling);
    PreparedPath out;
    out.goal = carrot_adjust_goal(cm, start, goal);
    out.goal_adjusted = out.goal.position() != goal.position();
    out.grid_path = plan(cm, PlanRequest{start, out.goal, options.algorithm, options.heuristic_weight});
    out.waypoints = simplify_path(out.grid_path->world_points, options.simplify_tolerance);
    out.waypoints.back() = out.goal.position();
    return out;
}

PreparedPath prepare_path(const ScenarioConfig& config)
{
    if (config.plan.path_file.empty())
        return plan_on_map(planning_grid(config), config.start, config.plan.goal, plan_options(config));

    PreparedPath out;
    out.waypoints = read_path(config.plan.path_file);
    if (out.waypoints.empty())
        throw ValidationError(config.plan.path_file + ": saved path is empty");
    out.goal = {out.waypoints.back().x, out.waypoints.back().y, config.plan.goal.theta};
    return out;
}

RunResult run_scenario(const ScenarioConfig& config, std::optional<std::uint64_t> seed_override,
                       const std::optional<std::vector<Point2D>>& waypoints)
{
    RunResult result;
    if (waypoints) {
        if (waypoints->empty())
            throw ContractError("run_scenario: empty waypoint override");
        result.path.waypoints = *waypoints;
        result.path.goal = {waypoints->back().x, waypoints->back().y, 0.0};
    } else {
        result.path = prepare_path(config);
    }
    const auto& route = result.path.waypoints;

    Rng rng(seed_override.value_or(config.seed));
    Pose2D pose = jittered_start(config, rng);

    const bool use_mcl = config.localization.mode == LocalizationMode::Mcl;
    std::optional<LikelihoodField> field;
    ParticleSet particles;
    if (use_mcl) {
        field.emplace(planning_grid(config));
        const auto& lc = config.localization;
        ParticlePrior prior = UniformPrior{};
        if (!lc.uniform_init)
            prior = GaussianPrior{config.start, lc.init_sigma_xy, lc.init_sigma_theta};
        particles = init_particles(lc.particles, *field, prior, rng);
    }

    std::optional<OraclePerception> oracle;
    if (config.perception.enabled)
        oracle.emplace(config.perception.oracle);
    std::deque<LaserScan> pending;

    ControlState state;
    const auto steps = static_cast<std::size_t>(std::floor(config.t_max / config.dt + 1e-9));
    for (std::size_t k = 1; k <= steps; ++k) {
        const double t = static_cast<double>(k) * config.dt;
        const World world = step_dynamics(config.world, t);

        TraceRecord rec;
        rec.t = t;
        rec.pose = pose;
        const bool inside = world.geometry().contains(pose.position());
        rec.collision = !inside || check_collision(world, pose, config.robot.footprint_radius, t);
        rec.clearance = clearance(world, pose, config.robot.footprint_radius, t);

        std::optional<LaserScan> scan;
        if (inside)
            scan = ray_cast(world, pose, config.scan, t, rng);

        Pose2D est = pose;
        if (use_mcl && scan) {
            measurement_update(particles, *scan, *field, config.localization.sensor);
            if (effective_sample_size(particles) < static_cast<double>(particles.size()) / 2.0)
                resample(particles, rng);
            est = estimate(particles).mean;
        } else if (use_mcl) {
            est = estimate(particles).mean;
        }
        rec.estimate = est;

        std::optional<PerceptionOutput> seen;
        if (oracle && scan) {
            pending.push_back(crop_scan(*scan, config.perception.fov / 2.0));
            while (pending.size() > static_cast<std::size_t>(config.perception.latency_steps) + 1)
                pending.pop_front();
            seen = oracle->perceive(pending.front());
            rec.p_t = seen->p_t;
            rec.s_k = seen->s_k;
        }

        const ControlCommand cmd = executive_step(state, est, seen, route, config.control, t);
        rec.v = cmd.v;
        rec.w = cmd.w;
        rec.mode = state.mode;
        result.trace.push_back(rec);

        if (rec.collision && config.halt_on_collision)
            break;
        if (state.mode == Mode::Done || !inside)
            break;

        const Twist2D twist = clamp_to_wheel_limits({cmd.v, cmd.w}, config.robot);
        const Pose2D next = integrate_pose(pose, twist, config.dt);
        if (use_mcl) {
            const PoseDelta odom = noisy_odometry(relative(pose, next), config.odometry, rng);
            motion_update(particles, odom, config.localization.filter_noise, rng);
        }
        pose = next;
    }

    result.metrics = compute_metrics(result.trace, config, route.back());
    return result;
}

Metrics compute_metrics(const Trace& trace, const ScenarioConfig& config, Point2D goal)
{
    if (trace.empty())
        throw ContractError("compute_metrics: empty trace");
    Metrics m;
    m.min_clearance = std::numeric_limits<double>::infinity();
    double loc_err = 0.0;
    for (std::size_t i = 0; i < trace.size(); ++i) {
        const auto& r = trace[i];
        if (i > 0)
            m.path_length += distance(trace[i - 1].pose.position(), r.pose.position());
        m.collisions += r.collision ? 1 : 0;
        m.min_clearance = std::min(m.min_clearance, r.clearance);
        loc_err += distance(r.pose.position(), r.estimate.position());
        m.entered_reactive_or_recovery =
            m.entered_reactive_or_recovery || r.mode == Mode::Reactive || r.mode == Mode::Recovery;
    }
    m.mean_localization_error = loc_err / static_cast<double>(trace.size());
    const auto& last = trace.back();
    if (last.mode == Mode::Done)
        m.time_to_goal = last.t;
    m.success = last.mode == Mode::Done && m.collisions == 0 &&
                distance(last.pose.position(), goal) <= config.goal_tolerance;
    return m;
}

std::string metrics_json(const Metrics& m)
{
    nlohmann::ordered_json j;
    j["success"] = m.success;
    j["collisions"] = m.collisions;
    j["time_to_goal"] = m.time_to_goal ? nlohmann::ordered_json(*m.time_to_goal) : nlohmann::ordered_json(nullptr);
    j["path_length"] = m.path_length;
    j["min_clearance"] = m.min_clearance;
    j["mean_localization_error"] = m.mean_localization_error;
    j["entered_reactive_or_recovery"] = m.entered_reactive_or_recovery;
    return j.dump(2) + "\n";
}

std::string metrics_summary(const Metrics& m, std::uint64_t hash)
{
    std::ostringstream os;
    os.precision(6);
    os << "success=" << (m.success ? 1 : 0) << " collisions=" << m.collisions << " time_to_goal=";
    if (m.time_to_goal)
        os << *m.time_to_goal;
    else
        os << "nan";
    os << " path_length=" << m.path_length << " min_clearance=" << m.min_clearance
       << " loc_error=" << m.mean_localization_error << " trace_hash=" << hex(hash);
    return os.str();
}

OccupancyGrid build_map(const World& world, const std::vector<Pose2D>& tour, const ScanParams& scan, Rng& rng,
                        LogOddsModel model)
{
    OccupancyGrid grid(world.geometry(), model);
    for (const Pose2D& p : tour) {
        const LaserScan s = ray_cast(world, p, scan, world.time, rng);
        integrate_scan(grid, p, s);
    }
    return grid;
}

std::vector<Pose2D> load_tour(const std::string& path)
{
    if (!std::filesystem::exists(path))
        throw IoError(path, "no such file");
    YAML::Node doc;
    try {
        doc = YAML::LoadFile(path);
    } catch (const YAML::Exception& e) {
        throw ParseError(e.mark.line + 1, path + ": " + e.msg);
    }
    const YAML::Node poses = doc["poses"];
    if (!poses || !poses.IsSequence())
        throw ConfigError("poses", "tour needs a list of [x, y, theta]");
    std::vector<Pose2D> tour;
    for (std::size_t i = 0; i < poses.size(); ++i) {
        std::vector<double> v;
        try {
            v = poses[i].as<std::vector<double>>();
        } catch (const YAML::Exception&) {
            v.clear();
        }
        if (v.size() != 3)
            throw ConfigError("poses[" + std::to_string(i) + "]", "expected [x, y, theta]");
        tour.push_back({v[0], v[1], v[2]});
    }
    return tour;
}

std::vector<BatchRow> run_batch(const ScenarioConfig& config, std::uint64_t first, std::uint64_t last,
                                const std::optional<std::vector<Point2D>>& waypoints, unsigned jobs)
{
    if (last < first)
        throw ContractError("run_batch: empty seed range");
    // Plan once; every seed follows the same route.
    const std::vector<Point2D> route = waypoints ? *waypoints : prepare_path(config).waypoints;

    const std::size_t n = static_cast<std::size_t>(last - first) + 1;
    std::vector<BatchRow> rows(n);
    if (jobs == 0)
        jobs = std::max(1u, std::thread::hardware_concurrency());
    jobs = static_cast<unsigned>(std::min<std::size_t>(jobs, n));

    std::atomic<std::size_t> next{0};
    std::vector<std::exception_ptr> errors(n);
    const auto worker = [&] {
        for (std::size_t i = next++; i < n; i = next++) {
            try {
                const std::uint64_t seed = first + i;
                const RunResult r = run_scenario(config, seed, route);
                rows[i] = {seed, r.metrics, trace_hash(r.trace)};
            } catch (...) {
                errors[i] = std::current_exception();
            }
        }
    };
    std::vector<std::thread> pool;
    for (unsigned j = 1; j < jobs; ++j)
        pool.emplace_back(worker);
    worker();
    for (auto& th : pool)
        th.join();
    for (const auto& e : errors)
        if (e)
            std::rethrow_exception(e);
    return rows;
}

std::string batch_table(const std::vector<BatchRow>& rows)
{
    std::ostringstream os;
    os.precision(6);
    os << "seed\tsuccess\tcollisions\ttime_to_goal\tpath_length\tmin_clearance\tloc_error\treactive\ttrace_hash\n";
    for (const auto& r : rows) {
        os << r.seed << '\t' << (r.metrics.success ? 1 : 0) << '\t' << r.metrics.collisions << '\t';
        if (r.metrics.time_to_goal)
            os << *r.metrics.time_to_goal;
        else
            os << "nan";
        os << '\t' << r.metrics.path_length << '\t' << r.metrics.min_clearance << '\t'
           << r.metrics.mean_localization_error << '\t' << (r.metrics.entered_reactive_or_recovery ? 1 : 0) << '\t'
           << hex(r.hash) << '\n';
    }
    return os.str();
}

}  // namespace navsim

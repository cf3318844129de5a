#include "navsim/scenario.hpp"

#include <filesystem>
#include <set>

#include "navsim/errors.hpp"

namespace navsim {

namespace fs = std::filesystem;

namespace {

// Typed access to one mapping of the document, naming keys by dotted path.
class Section {
  public:
    Section(const YAML::Node& node, std::string name, std::set<std::string> allowed)
        : node_(node), name_(std::move(name))
    {
        if (!node_)
            return;
        if (!node_.IsMap())
            throw ConfigError(name_, "expected a mapping");
        for (const auto& kv : node_) {
            const auto key = kv.first.as<std::string>();
            if (!allowed.contains(key))
                throw ConfigError(name_ + "." + key, "unknown key");
        }
    }

    bool has(const std::string& key) const { return node_ && node_[key]; }

    template <typename T>
    T get(const std::string& key) const
    {
        if (!has(key))
            throw ConfigError(name_ + "." + key, "missing required key");
        try {
            return node_[key].as<T>();
        } catch (const YAML::Exception&) {
            throw ConfigError(name_ + "." + key, "wrong type");
        }
    }

    template <typename T>
    T get(const std::string& key, T fallback) const
    {
        return has(key) ? get<T>(key) : fallback;
    }

    std::string path(const std::string& key) const { return name_ + "." + key; }

  private:
    YAML::Node node_;
    std::string name_;
};

Pose2D pose_from(const std::vector<double>& v, const std::string& key)
{
    if (v.size() == 2)
        return {v[0], v[1], 0.0};
    if (v.size() == 3)
        return {v[0], v[1], v[2]};
    throw ConfigError(key, "expected [x, y] or [x, y, theta]");
}

std::string resolve(const std::string& p, const std::string& base_dir)
{
    if (p.empty() || fs::path(p).is_absolute())
        return p;
    return (fs::path(base_dir) / p).lexically_normal().string();
}

template <typename F>
void validated(F&& check, const std::string& key)
{
    try {
        check();
    } catch (const ValidationError& e) {
        throw ConfigError(key, e.what());
    }
}

}  // namespace

ScenarioConfig parse_scenario(const YAML::Node& doc, const std::string& base_dir)
{
    if (!doc || !doc.IsMap())
        throw ConfigError("<root>", "scenario document must be a mapping");
    for (const auto& kv : doc) {
        static const std::set<std::string> top{"world",      "robot",        "scan",    "odometry", "localization",
                                               "perception", "control",      "plan",    "sim"};
        const auto key = kv.first.as<std::string>();
        if (!top.contains(key))
            throw ConfigError(key, "unknown key");
    }

    ScenarioConfig cfg;
    cfg.world = load_world(doc);

    const Section robot(doc["robot"], "robot",
                        {"wheel_radius", "wheel_base", "footprint_radius", "v_max", "w_max", "start", "start_jitter"});
    cfg.robot.wheel_radius = robot.get("wheel_radius", cfg.robot.wheel_radius);
    cfg.robot.wheel_base = robot.get("wheel_base", cfg.robot.wheel_base);
    cfg.robot.footprint_radius = robot.get("footprint_radius", cfg.robot.footprint_radius);
    cfg.robot.v_max = robot.get("v_max", cfg.robot.v_max);
    cfg.robot.w_max = robot.get("w_max", cfg.robot.w_max);
    validated([&] { cfg.robot.validate(); }, "robot");
    cfg.start = pose_from(robot.get<std::vector<double>>("start"), robot.path("start"));
    if (robot.has("start_jitter")) {
        const auto j = robot.get<std::vector<double>>("start_jitter");
        if (j.size() != 3 || j[0] < 0.0 || j[1] < 0.0 || j[2] < 0.0)
            throw ConfigError(robot.path("start_jitter"), "expected three non-negative sigmas");
        cfg.start_jitter = {j[0], j[1], j[2]};
    }

    const Section scan(doc["scan"], "scan", {"beam_count", "angle_min", "angle_max", "max_range", "noise_sigma"});
    cfg.scan.beam_count = scan.get("beam_count", cfg.scan.beam_count);
    cfg.scan.angle_min = scan.get("angle_min", cfg.scan.angle_min);
    cfg.scan.angle_max = scan.get("angle_max", cfg.scan.angle_max);
    cfg.scan.max_range = scan.get("max_range", cfg.scan.max_range);
    cfg.scan.range_noise_sigma = scan.get("noise_sigma", cfg.scan.range_noise_sigma);
    validated([&] { cfg.scan.validate(); }, "scan");

    const Section odom(doc["odometry"], "odometry", {"sigma_trans", "sigma_rot"});
    cfg.odometry.sigma_trans = odom.get("sigma_trans", cfg.odometry.sigma_trans);
    cfg.odometry.sigma_rot = odom.get("sigma_rot", cfg.odometry.sigma_rot);
    if (cfg.odometry.sigma_trans < 0.0 || cfg.odometry.sigma_rot < 0.0)
        throw ConfigError("odometry", "sigmas must be non-negative");

    const Section loc(doc["localization"], "localization",
                      {"mode", "particles", "init", "init_sigma_xy", "init_sigma_theta", "filter_sigma_trans",
                       "filter_sigma_rot", "z_hit", "z_rand", "sigma_hit", "max_beams"});
    auto& lc = cfg.localization;
    const auto mode = loc.get<std::string>("mode", "ground_truth");
    if (mode == "mcl")
        lc.mode = LocalizationMode::Mcl;
    else if (mode != "ground_truth")
        throw ConfigError(loc.path("mode"), "expected mcl or ground_truth");
    const int particles = loc.get("particles", static_cast<int>(lc.particles));
    if (particles < 1)
        throw ConfigError(loc.path("particles"), "must be >= 1");
    lc.particles = static_cast<std::size_t>(particles);
    const auto init = loc.get<std::string>("init", "gaussian");
    if (init != "uniform" && init != "gaussian")
        throw ConfigError(loc.path("init"), "expected uniform or gaussian");
    lc.uniform_init = init == "uniform";
    lc.init_sigma_xy = loc.get("init_sigma_xy", lc.init_sigma_xy);
    lc.init_sigma_theta = loc.get("init_sigma_theta", lc.init_sigma_theta);
    lc.filter_noise.sigma_trans = loc.get("filter_sigma_trans", lc.filter_noise.sigma_trans);
    lc.filter_noise.sigma_rot = loc.get("filter_sigma_rot", lc.filter_noise.sigma_rot);
    lc.sensor.z_hit = loc.get("z_hit", lc.sensor.z_hit);
    lc.sensor.z_rand = loc.get("z_rand", lc.sensor.z_rand);
    lc.sensor.sigma_hit = loc.get("sigma_hit", lc.sensor.sigma_hit);
    lc.sensor.max_beams = loc.get("max_beams", lc.sensor.max_beams);

    const Section per(doc["perception"], "perception",
                      {"provider", "cone_half_angle", "d_stop", "d_free", "sector_count", "fov", "latency_steps"});
    auto& pc = cfg.perception;
    const auto provider = per.get<std::string>("provider", "oracle");
    if (provider != "oracle" && provider != "none")
        throw ConfigError(per.path("provider"), "only 'oracle' (or 'none') is available");
    pc.enabled = provider == "oracle";
    pc.oracle.cone_half_angle = per.get("cone_half_angle", pc.oracle.cone_half_angle);
    pc.oracle.d_stop = per.get("d_stop", pc.oracle.d_stop);
    pc.oracle.d_free = per.get("d_free", pc.oracle.d_free);
    pc.oracle.sector_count = per.get("sector_count", pc.oracle.sector_count);
    pc.fov = per.get("fov", pc.fov);
    pc.latency_steps = per.get("latency_steps", pc.latency_steps);
    validated([&] { pc.oracle.validate(); }, "perception");
    if (pc.latency_steps < 0)
        throw ConfigError(per.path("latency_steps"), "must be >= 0");

    const Section ctl(doc["control"], "control",
                      {"preset", "alpha", "beta", "v_max", "override_on", "override_off", "override_hold", "lookahead",
                       "goal_tolerance", "stuck_speed", "stuck_time", "recovery_spin"});
    const auto preset = ctl.get<std::string>("preset", "ground_robot");
    if (preset == "ground_robot")
        cfg.control = ControlParams::ground_robot_preset();
    else if (preset == "drone")
        cfg.control = ControlParams::drone_preset();
    else
        throw ConfigError(ctl.path("preset"), "expected ground_robot or drone");
    auto& cp = cfg.control;
    cp.alpha = ctl.get("alpha", cp.alpha);
    cp.beta = ctl.get("beta", cp.beta);
    cp.v_max = ctl.get("v_max", cfg.robot.v_max);
    cp.w_max = cfg.robot.w_max;
    cp.override_on = ctl.get("override_on", cp.override_on);
    cp.override_off = ctl.get("override_off", cp.override_off);
    cp.override_hold = ctl.get("override_hold", cp.override_hold);
    cp.lookahead = ctl.get("lookahead", cp.lookahead);
    cp.goal_tolerance = ctl.get("goal_tolerance", cp.goal_tolerance);
    cp.stuck_speed = ctl.get("stuck_speed", cp.stuck_speed);
    cp.stuck_time = ctl.get("stuck_time", cp.stuck_time);
    cp.recovery_spin = ctl.get("recovery_spin", cp.recovery_spin);
    validated([&] { cp.validate(); }, "control");

    const Section pl(doc["plan"], "plan",
                     {"goal", "algorithm", "heuristic_weight", "inflation_radius", "cost_scaling", "simplify_tolerance",
                      "path_file", "map"});
    auto& plc = cfg.plan;
    plc.goal = pose_from(pl.get<std::vector<double>>("goal"), pl.path("goal"));
    const auto algo = pl.get<std::string>("algorithm", "dijkstra");
    if (algo == "astar")
        plc.algorithm = PlanAlgorithm::AStar;
    else if (algo != "dijkstra")
        throw ConfigError(pl.path("algorithm"), "expected dijkstra or astar");
    plc.heuristic_weight = pl.get("heuristic_weight", plc.heuristic_weight);
    plc.inflation_radius = pl.get("inflation_radius", plc.inflation_radius);
    plc.cost_scaling = pl.get("cost_scaling", plc.cost_scaling);
    plc.simplify_tolerance = pl.get("simplify_tolerance", plc.simplify_tolerance);
    plc.path_file = resolve(pl.get<std::string>("path_file", ""), base_dir);
    plc.map = resolve(pl.get<std::string>("map", ""), base_dir);
    if (plc.heuristic_weight < 0.0)
        throw ConfigError(pl.path("heuristic_weight"), "must be >= 0");
    if (plc.inflation_radius < cfg.robot.footprint_radius)
        throw ConfigError(pl.path("inflation_radius"), "must be >= robot.footprint_radius");

    const Section sim(doc["sim"], "sim", {"dt", "t_max", "seed", "halt_on_collision", "goal_tolerance"});
    cfg.dt = sim.get("dt", cfg.dt);
    cfg.t_max = sim.get("t_max", cfg.t_max);
    cfg.seed = sim.get<std::uint64_t>("seed", cfg.seed);
    cfg.halt_on_collision = sim.get("halt_on_collision", cfg.halt_on_collision);
    cfg.goal_tolerance = sim.get("goal_tolerance", cfg.goal_tolerance);
    if (!(cfg.dt > 0.0))
        throw ConfigError(sim.path("dt"), "must be positive");
    if (!(cfg.goal_tolerance > 0.0))
        throw ConfigError(sim.path("goal_tolerance"), "must be positive");
    if (!(cfg.t_max > cfg.dt))
        throw ConfigError(sim.path("t_max"), "must exceed dt");

    if (!cfg.world.geometry().contains(cfg.start.position()))
        throw ConfigError(robot.path("start"), "outside world bounds");
    return cfg;
}

ScenarioConfig load_scenario(const std::string& path)
{
    if (!fs::exists(path))
        throw IoError(path, "no such file");
    YAML::Node doc;
    try {
        doc = YAML::LoadFile(path);
    } catch (const YAML::Exception& e) {
        throw ParseError(e.mark.line + 1, path + ": " + e.msg);
    }
    return parse_scenario(doc, fs::path(path).parent_path().string());
}

}  // namespace navsim

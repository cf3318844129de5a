#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <string>

#include <yaml-cpp/yaml.h>

#include "navsim/control.hpp"
#include "navsim/kinematics.hpp"
#include "navsim/localization.hpp"
#include "navsim/perception.hpp"
#include "navsim/planning.hpp"
#include "navsim/scan.hpp"
#include "navsim/world.hpp"

namespace navsim {

enum class LocalizationMode { GroundTruth, Mcl };

struct LocalizationConfig {
    LocalizationMode mode = LocalizationMode::GroundTruth;
    std::size_t particles = 500;
    bool uniform_init = false;
    double init_sigma_xy = 0.1;
    double init_sigma_theta = 0.1;
    OdometryNoise filter_noise{0.02, 0.02};
    SensorModel sensor;
};

struct PerceptionConfig {
    bool enabled = true;  ///< provider "oracle"; "none" disables perception
    OracleParams oracle;
    double fov = 3.141592653589793;  ///< full width of the simulated camera view
    int latency_steps = 0;
};

struct PlanConfig {
    Pose2D goal;
    PlanAlgorithm algorithm = PlanAlgorithm::Dijkstra;
    double heuristic_weight = 1.0;
    double inflation_radius = 0.35;
    double cost_scaling = 10.0;
    double simplify_tolerance = 0.05;
    std::string path_file;  ///< saved path to follow instead of planning
    std::string map;        ///< "<dir>/<basename>" of a saved map; empty plans on ground truth
};

struct ScenarioConfig {
    World world;
    RobotParams robot;
    Pose2D start;
    std::array<double, 3> start_jitter{};  ///< sigmas for x, y, theta
    ScanParams scan;
    OdometryNoise odometry{0.01, 0.01};
    LocalizationConfig localization;
    PerceptionConfig perception;
    ControlParams control;
    PlanConfig plan;
    double dt = 0.05;
    double t_max = 60.0;
    std::uint64_t seed = 1;
    bool halt_on_collision = true;
    /// Success radius around the final waypoint, judged on the true pose.
    /// Independent of control.goal_tolerance, which acts on the estimate.
    double goal_tolerance = 0.15;
};

/// Parses a scenario document. Relative file references resolve against base_dir.
ScenarioConfig parse_scenario(const YAML::Node& doc, const std::string& base_dir = ".");
ScenarioConfig load_scenario(const std::string& path);

}  // namespace navsim

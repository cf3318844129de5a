#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "navsim/control.hpp"
#include "navsim/occupancy_grid.hpp"
#include "navsim/planning.hpp"
#include "navsim/scenario.hpp"

namespace navsim {

/// One simulation tick. JSONL key order: t, x, y, theta, est_x, est_y,
/// est_theta, v, w, p_t, s_k, mode, collision, clearance.
struct TraceRecord {
    double t = 0.0;
    Pose2D pose;
    Pose2D estimate;
    double v = 0.0;
    double w = 0.0;
    double p_t = 0.0;
    double s_k = 0.0;
    Mode mode = Mode::Tracking;
    bool collision = false;
    double clearance = 0.0;

    friend bool operator==(const TraceRecord&, const TraceRecord&) = default;
};

using Trace = std::vector<TraceRecord>;

struct Metrics {
    bool success = false;
    std::size_t collisions = 0;
    std::optional<double> time_to_goal;
    double path_length = 0.0;
    double min_clearance = 0.0;
    double mean_localization_error = 0.0;
    bool entered_reactive_or_recovery = false;
};

/// Path preparation output: the goal actually used and the waypoints followed.
struct PreparedPath {
    Pose2D goal;
    bool goal_adjusted = false;
    std::optional<Path> grid_path;  ///< absent when following a saved path
    std::vector<Point2D> waypoints;
};

struct RunResult {
    Trace trace;
    Metrics metrics;
    PreparedPath path;
};

/// Costmap the planner sees: the saved map when plan.map is set, otherwise
/// the ground-truth static raster, inflated for the robot footprint.
Costmap planning_costmap(const ScenarioConfig& config);

struct PlanOptions {
    PlanAlgorithm algorithm = PlanAlgorithm::Dijkstra;
    double heuristic_weight = 1.0;
    double robot_radius = 0.15;
    double inflation_radius = 0.35;
    double cost_scaling = 10.0;
    double simplify_tolerance = 0.05;
};

PlanOptions plan_options(const ScenarioConfig& config);

/// Inflates the map, applies carrot goal adjustment, plans and simplifies.
/// The final waypoint is the (possibly adjusted) goal itself.
PreparedPath plan_on_map(const OccupancyGrid& map, const Pose2D& start, const Pose2D& goal, const PlanOptions& options);

/// Loads the saved path or plans one (with carrot goal adjustment).
PreparedPath prepare_path(const ScenarioConfig& config);

/// Fixed-step closed loop. Entirely determined by (config, seed).
/// `waypoints` overrides whatever the config would follow.
RunResult run_scenario(const ScenarioConfig& config, std::optional<std::uint64_t> seed_override = std::nullopt,
                       const std::optional<std::vector<Point2D>>& waypoints = std::nullopt);

/// goal is the final waypoint; success requires mode Done, no collision
/// and the final true pose within config.goal_tolerance of it.
Metrics compute_metrics(const Trace& trace, const ScenarioConfig& config, Point2D goal);

std::string serialize_trace(const Trace& trace);
void write_trace(const Trace& trace, const std::string& path);
Trace read_trace(const std::string& path);
Trace parse_trace(const std::string& text, const std::string& origin = "<memory>");

/// FNV-1a 64 of the serialized trace.
std::uint64_t trace_hash(const Trace& trace);
std::string hex(std::uint64_t v);

std::string metrics_json(const Metrics& m);
/// Single-line `key=value` summary.
std::string metrics_summary(const Metrics& m, std::uint64_t hash);

/// Mapping with known poses: noiseless-or-configured scans from each tour
/// pose integrated into a fresh grid matching the world raster.
OccupancyGrid build_map(const World& world, const std::vector<Pose2D>& tour, const ScanParams& scan, Rng& rng,
                        LogOddsModel model = {});

/// Reads `poses: [[x, y, theta], ...]`.
std::vector<Pose2D> load_tour(const std::string& path);

struct BatchRow {
    std::uint64_t seed = 0;
    Metrics metrics;
    std::uint64_t hash = 0;
};

/// Runs seeds [first, last] on `jobs` threads; rows come back in seed order.
std::vector<BatchRow> run_batch(const ScenarioConfig& config, std::uint64_t first, std::uint64_t last,
                                const std::optional<std::vector<Point2D>>& waypoints = std::nullopt,
                                unsigned jobs = 0);
std::string batch_table(const std::vector<BatchRow>& rows);

/// Raster overlay colours (RGB).
namespace colors {
inline constexpr std::uint8_t kPath[3] = {0, 0, 255};
inline constexpr std::uint8_t kEstimate[3] = {255, 0, 0};
inline constexpr std::uint8_t kTruth[3] = {0, 160, 0};
inline constexpr std::uint8_t kObstacle[3] = {255, 140, 0};
}  // namespace colors

struct RenderOptions {
    int pixels_per_cell = 4;
    const OccupancyGrid* map = nullptr;          ///< background instead of the world raster
    const std::vector<Point2D>* path = nullptr;  ///< planned path overlay
};

/// Binary PPM (P6). Background grey levels follow the map file encoding.
std::vector<std::uint8_t> render_ppm(const World& world, const Trace& trace, const RenderOptions& options = {});
void render(const World& world, const Trace& trace, const std::string& out_path, const RenderOptions& options = {});

}  // namespace navsim

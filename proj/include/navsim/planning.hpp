#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "navsim/errors.hpp"
#include "navsim/grid.hpp"
#include "navsim/occupancy_grid.hpp"
#include "navsim/pose.hpp"

namespace navsim {

/// Exact path cost (straight + diagonal * sqrt(2)) / 128.
///
/// A step between cells with costs a and b contributes (128 + a + b) units
/// to the straight or the diagonal part, i.e. base * (1 + avg(a, b) / 64).
/// Keeping the two integer parts apart makes cost comparisons exact.
struct PathCost {
    std::int64_t straight = 0;
    std::int64_t diagonal = 0;

    static constexpr double kScale = 128.0;

    double value() const;
    PathCost operator+(const PathCost& o) const { return {straight + o.straight, diagonal + o.diagonal}; }
    friend bool operator==(const PathCost&, const PathCost&) = default;
    friend std::strong_ordering operator<=>(const PathCost& a, const PathCost& b);
};

/// Cost of moving between two 8-adjacent cells of a costmap.
PathCost step_cost(const Costmap& costmap, CellIndex from, CellIndex to);

struct Path {
    std::vector<CellIndex> cells;
    std::vector<Point2D> world_points;
    PathCost cost;
    /// Equals cost.value(), in cell units.
    double total_cost = 0.0;

    /// Metric length of the cell-centre polyline.
    double length() const;
};

enum class PlanAlgorithm { Dijkstra, AStar };

struct PlanRequest {
    Pose2D start;
    Pose2D goal;
    PlanAlgorithm algorithm = PlanAlgorithm::Dijkstra;
    double heuristic_weight = 1.0;
};

class PlanningError : public Error {
  public:
    enum class Code { NoPath, InvalidStart, InvalidGoal };
    PlanningError(Code code, const std::string& what) : Error(what), code_(code) {}
    Code code() const noexcept { return code_; }

  private:
    Code code_;
};

/// 253 * exp(-cost_scaling * (d - robot_radius)), the cost just outside the inscribed radius.
double inflation_cost(double d, double robot_radius, double cost_scaling);

/// Inflates lethal cells by exact Euclidean distance. Cells within
/// robot_radius become lethal, cells out to inflation_radius receive the
/// decaying cost (never lowering an existing one). Unknown cells stay unknown.
Costmap inflate(const Costmap& costmap, double robot_radius, double inflation_radius, double cost_scaling);

Path plan_dijkstra(const Costmap& costmap, const Pose2D& start, const Pose2D& goal);
/// heuristic = weight * octile distance. weight <= 1 keeps the result optimal.
Path plan_astar(const Costmap& costmap, const Pose2D& start, const Pose2D& goal, double heuristic_weight);
Path plan(const Costmap& costmap, const PlanRequest& request);

/// Cell-index planners used by plan_dijkstra / plan_astar.
Path plan_cells(const Costmap& costmap, CellIndex start, CellIndex goal, double heuristic_weight);

/// If the goal cell is blocked, walks from goal towards the robot in
/// resolution/2 steps and returns the first traversable sample; the robot
/// position when none is found.
Pose2D carrot_adjust_goal(const Costmap& costmap, const Pose2D& robot, const Pose2D& goal);

/// Douglas-Peucker reduction. A point is kept when its deviation is >= tolerance,
/// so tolerance 0 retains everything.
std::vector<Point2D> simplify_path(const std::vector<Point2D>& points, double tolerance);

/// One JSON object {"x":..,"y":..} per line.
void write_path(const std::vector<Point2D>& points, const std::string& path);
std::vector<Point2D> read_path(const std::string& path);

}  // namespace navsim

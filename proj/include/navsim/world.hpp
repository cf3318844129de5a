#pragma once

#include <memory>
#include <vector>

#include <yaml-cpp/yaml.h>

#include "navsim/occupancy_grid.hpp"
#include "navsim/pose.hpp"
#include "navsim/random.hpp"
#include "navsim/scan.hpp"

namespace navsim {

struct TimedPoint {
    double t = 0.0;
    Point2D position;
};

/// Disc moving along a piecewise-linear schedule; clamps outside it.
struct DynamicObstacle {
    double radius = 0.0;
    std::vector<TimedPoint> waypoints;
    Point2D center;

    Point2D position_at(double t) const;
};

/// Axis-aligned static block burned into the ground-truth raster.
struct Box {
    double x_min = 0.0;
    double y_min = 0.0;
    double x_max = 0.0;
    double y_max = 0.0;
};

/// Ground truth: a free/occupied raster plus scripted discs.
///
/// The raster is shared between copies, so snapshots produced by
/// step_dynamics are cheap.
struct World {
    std::shared_ptr<const OccupancyGrid> static_grid;
    std::vector<DynamicObstacle> dynamic_obstacles;
    double time = 0.0;

    const GridGeometry& geometry() const { return static_grid->geometry(); }
    bool occupied(CellIndex c) const { return static_grid->is_occupied(c); }
};

/// Builds a world from the `world` section of a scenario document.
/// Throws ConfigError for schema violations, ValidationError for
/// inconsistent content.
World load_world(const YAML::Node& doc);

/// Builds a world directly. Boxes are rasterized by cell centre; border
/// adds a one-cell wall ring.
World make_world(GridGeometry geometry, const std::vector<Box>& boxes, bool border,
                 std::vector<DynamicObstacle> obstacles = {});

World step_dynamics(const World& world, double t);

/// Simulated scan from the robot centre at time t. Throws DomainError when
/// the pose is outside the world.
LaserScan ray_cast(const World& world, const Pose2D& pose, const ScanParams& params, double t, Rng& rng);

/// Noise-free distance from `origin` along `angle` to the first static cell or
/// disc, or nullopt within max_range.
std::optional<double> cast_beam(const World& world, Point2D origin, double angle, double max_range, double t);

bool check_collision(const World& world, const Pose2D& pose, double footprint_radius, double t);

/// Distance from the footprint edge to the nearest obstacle surface at time t,
/// searched out to `horizon` meters. Negative when overlapping.
double clearance(const World& world, const Pose2D& pose, double footprint_radius, double t, double horizon = 5.0);

}  // namespace navsim

#include "navsim/occupancy_grid.hpp"

#include <algorithm>

#include "navsim/errors.hpp"

namespace navsim {

OccupancyGrid::OccupancyGrid(GridGeometry geometry, LogOddsModel model)
    : geometry_(geometry),
      model_(model),
      log_odds_(),
      occupied_logit_(probability_to_log_odds(kDefaultOccupiedThresh))
{
    if (geometry_.width <= 0 || geometry_.height <= 0)
        throw ValidationError("occupancy grid dimensions must be positive");
    if (!(geometry_.resolution > 0.0))
        throw ValidationError("occupancy grid resolution must be positive");
    if (!(model_.min <= 0.0 && 0.0 <= model_.max))
        throw ValidationError("log-odds clamp must bracket the prior");
    log_odds_.assign(geometry_.size(), 0.0);
}

void OccupancyGrid::set_log_odds(CellIndex c, double l)
{
    log_odds_[geometry_.index(c)] = std::clamp(l, model_.min, model_.max);
}

void OccupancyGrid::update(CellIndex c, double dl)
{
    double& l = log_odds_[geometry_.index(c)];
    l = std::clamp(l + dl, model_.min, model_.max);
}

void OccupancyGrid::set_state(CellIndex c, CellState s)
{
    switch (s) {
    case CellState::Free: log_odds_[geometry_.index(c)] = model_.min; break;
    case CellState::Occupied: log_odds_[geometry_.index(c)] = model_.max; break;
    case CellState::Unknown: log_odds_[geometry_.index(c)] = 0.0; break;
    }
}

CellState OccupancyGrid::classify(CellIndex c, double occupied_thresh, double free_thresh) const
{
    const double p = probability(c);
    if (p > occupied_thresh)
        return CellState::Occupied;
    if (p < free_thresh)
        return CellState::Free;
    return CellState::Unknown;
}

OccupancyGrid new_grid(int width, int height, double resolution, Pose2D origin, LogOddsModel model)
{
    return OccupancyGrid(GridGeometry{width, height, resolution, origin}, model);
}

void integrate_scan(OccupancyGrid& grid, const Pose2D& pose, const LaserScan& scan)
{
    const GridGeometry& g = grid.geometry();
    const auto sensor_cell = g.cell_at(pose.position());
    if (!sensor_cell)
        throw DomainError("integrate_scan: pose outside grid");
    if (scan.hit_flags.size() != scan.ranges.size())
        throw ContractError("integrate_scan: hit flags and ranges differ in length");

    const LogOddsModel& m = grid.model();
    for (std::size_t i = 0; i < scan.ranges.size(); ++i) {
        const double range = scan.ranges[i];
        const bool hit = scan.hit_flags[i];
        const double angle = pose.theta + scan.params.bearing(i);
        walk_ray(g, pose.position(), angle, range + g.resolution, [&](CellIndex c, double, double t_exit) {
            if (t_exit <= range) {
                if (c != *sensor_cell)
                    grid.update(c, m.miss);
                return true;
            }
            if (hit && c != *sensor_cell)
                grid.update(c, m.hit);
            return false;
        });
    }
}

Costmap to_costmap(const OccupancyGrid& grid, double occupied_thresh, double free_thresh)
{
    Costmap cm{grid.geometry(), std::vector<std::uint8_t>(grid.geometry().size(), Costmap::kFree)};
    for (std::size_t i = 0; i < cm.cost.size(); ++i) {
        switch (grid.classify(cm.geometry.cell_of_index(i), occupied_thresh, free_thresh)) {
        case CellState::Occupied: cm.cost[i] = Costmap::kLethal; break;
        case CellState::Unknown: cm.cost[i] = Costmap::kUnknown; break;
        case CellState::Free: break;
        }
    }
    return cm;
}

}  // namespace navsim

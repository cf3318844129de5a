#pragma once

#include <cmath>
#include <compare>
#include <cstddef>
#include <cstdint>
#include <limits>
#include <optional>
#include <span>
#include <vector>

#include "navsim/pose.hpp"

namespace navsim {

/// Column/row address of a grid cell. Row 0 is the row touching the map origin.
struct CellIndex {
    int col = 0;
    int row = 0;

    friend bool operator==(const CellIndex&, const CellIndex&) = default;
    /// Row-major order: (row, col) lexicographic.
    friend std::strong_ordering operator<=>(const CellIndex& a, const CellIndex& b)
    {
        if (auto c = a.row <=> b.row; c != 0)
            return c;
        return a.col <=> b.col;
    }
};

/// Raster placement shared by occupancy grids and costmaps.
///
/// origin is the world pose of the outer corner of cell (0,0); its yaw is
/// carried for metadata round trips but rasters are always axis aligned.
struct GridGeometry {
    int width = 0;
    int height = 0;
    double resolution = 0.0;
    Pose2D origin{};

    std::size_t size() const { return static_cast<std::size_t>(width) * static_cast<std::size_t>(height); }
    bool contains(CellIndex c) const { return c.col >= 0 && c.row >= 0 && c.col < width && c.row < height; }
    std::size_t index(CellIndex c) const
    {
        return static_cast<std::size_t>(c.row) * static_cast<std::size_t>(width) + static_cast<std::size_t>(c.col);
    }
    CellIndex cell_of_index(std::size_t i) const
    {
        return {static_cast<int>(i % static_cast<std::size_t>(width)), static_cast<int>(i / static_cast<std::size_t>(width))};
    }

    /// Cell containing a world point, without bounds checking.
    CellIndex cell_floor(Point2D p) const
    {
        return {static_cast<int>(std::floor((p.x - origin.x) / resolution)),
                static_cast<int>(std::floor((p.y - origin.y) / resolution))};
    }
    std::optional<CellIndex> cell_at(Point2D p) const
    {
        const CellIndex c = cell_floor(p);
        if (!contains(c))
            return std::nullopt;
        return c;
    }
    Point2D center_of(CellIndex c) const
    {
        return {origin.x + (c.col + 0.5) * resolution, origin.y + (c.row + 0.5) * resolution};
    }
    double min_x() const { return origin.x; }
    double min_y() const { return origin.y; }
    double max_x() const { return origin.x + width * resolution; }
    double max_y() const { return origin.y + height * resolution; }
    bool contains(Point2D p) const { return p.x >= min_x() && p.y >= min_y() && p.x < max_x() && p.y < max_y(); }

    friend bool operator==(const GridGeometry&, const GridGeometry&) = default;
};

/// Exact cell-stepping walk (Amanatides & Woo) from `start` along `angle`.
///
/// Calls visit(cell, t_enter, t_exit) for every cell the ray touches, in
/// order, where t is metric distance from start. Stops when visit returns
/// false, the ray leaves the grid, or a cell is entered at or beyond
/// max_dist. On an exact corner crossing the x neighbour is visited first
/// (with an empty interval), so no corner cell is skipped.
template <typename Visitor>
void walk_ray(const GridGeometry& g, Point2D start, double angle, double max_dist, Visitor&& visit)
{
    constexpr double inf = std::numeric_limits<double>::infinity();
    const double dx = std::cos(angle);
    const double dy = std::sin(angle);
    const double gx = (start.x - g.origin.x) / g.resolution;
    const double gy = (start.y - g.origin.y) / g.resolution;
    CellIndex cell{static_cast<int>(std::floor(gx)), static_cast<int>(std::floor(gy))};

    const int step_x = dx > 0.0 ? 1 : (dx < 0.0 ? -1 : 0);
    const int step_y = dy > 0.0 ? 1 : (dy < 0.0 ? -1 : 0);
    double t_max_x = step_x > 0 ? (cell.col + 1 - gx) / dx * g.resolution
                     : step_x < 0 ? (gx - cell.col) / -dx * g.resolution
                                  : inf;
    double t_max_y = step_y > 0 ? (cell.row + 1 - gy) / dy * g.resolution
                     : step_y < 0 ? (gy - cell.row) / -dy * g.resolution
                                  : inf;
    const double t_delta_x = step_x != 0 ? g.resolution / std::abs(dx) : inf;
    const double t_delta_y = step_y != 0 ? g.resolution / std::abs(dy) : inf;

    double t = 0.0;
    while (g.contains(cell) && t < max_dist) {
        const double t_exit = std::min(t_max_x, t_max_y);
        if (!visit(cell, t, t_exit))
            return;
        if (t_max_x <= t_max_y) {
            cell.col += step_x;
            t = t_max_x;
            t_max_x += t_delta_x;
        } else {
            cell.row += step_y;
            t = t_max_y;
            t_max_y += t_delta_y;
        }
    }
}

/// Exact Euclidean distance (meters, centre to centre) from every cell to
/// the nearest cell flagged in `sites`. Cells with no site get +infinity.
std::vector<double> distance_transform(const GridGeometry& g, std::span<const std::uint8_t> sites);

}  // namespace navsim

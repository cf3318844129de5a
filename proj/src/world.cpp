#include "navsim/world.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <set>
#include <string>

#include "navsim/errors.hpp"

namespace navsim {

namespace {

constexpr double kMinRange = 1e-6;

void reject_unknown_keys(const YAML::Node& node, const std::string& prefix, const std::set<std::string>& allowed)
{
    for (const auto& kv : node) {
        const auto key = kv.first.as<std::string>();
        if (!allowed.contains(key))
            throw ConfigError(prefix + key, "unknown key");
    }
}

template <typename T>
T get(const YAML::Node& node, const std::string& key, const std::string& path)
{
    const YAML::Node n = node[key];
    if (!n)
        throw ConfigError(path, "missing required key");
    try {
        return n.as<T>();
    } catch (const YAML::Exception&) {
        throw ConfigError(path, "wrong type");
    }
}

template <typename T>
T get_or(const YAML::Node& node, const std::string& key, const std::string& path, T fallback)
{
    if (!node[key])
        return fallback;
    return get<T>(node, key, path);
}

// Distance from a point to an axis-aligned cell rectangle.
double distance_to_cell(const GridGeometry& g, CellIndex c, Point2D p)
{
    const double x0 = g.origin.x + c.col * g.resolution;
    const double y0 = g.origin.y + c.row * g.resolution;
    const double dx = std::max({x0 - p.x, 0.0, p.x - (x0 + g.resolution)});
    const double dy = std::max({y0 - p.y, 0.0, p.y - (y0 + g.resolution)});
    return std::hypot(dx, dy);
}

// Cells outside the raster count as solid.
bool blocked(const World& w, CellIndex c) { return !w.geometry().contains(c) || w.occupied(c); }

std::optional<double> ray_disc(Point2D o, double dx, double dy, Point2D c, double r)
{
    const double ox = o.x - c.x;
    const double oy = o.y - c.y;
    const double b = dx * ox + dy * oy;
    const double cc = ox * ox + oy * oy - r * r;
    if (cc <= 0.0)
        return 0.0;
    const double disc = b * b - cc;
    if (disc < 0.0)
        return std::nullopt;
    const double t = -b - std::sqrt(disc);
    if (t < 0.0)
        return std::nullopt;
    return t;
}

}  // namespace

void ScanParams::validate() const
{
    if (beam_count < 2)
        throw ValidationError("scan: beam_count must be >= 2");
    if (!(angle_min < angle_max))
        throw ValidationError("scan: angle_min must be < angle_max");
    if (!(max_range > 0.0))
        throw ValidationError("scan: max_range must be positive");
    if (!(range_noise_sigma >= 0.0))
        throw ValidationError("scan: range_noise_sigma must be >= 0");
}

Point2D DynamicObstacle::position_at(double t) const
{
    if (waypoints.empty())
        return center;
    if (t <= waypoints.front().t)
        return waypoints.front().position;
    if (t >= waypoints.back().t)
        return waypoints.back().position;
    const auto next = std::upper_bound(waypoints.begin(), waypoints.end(), t,
                                       [](double v, const TimedPoint& w) { return v < w.t; });
    const auto prev = next - 1;
    const double u = (t - prev->t) / (next->t - prev->t);
    return {prev->position.x + u * (next->position.x - prev->position.x),
            prev->position.y + u * (next->position.y - prev->position.y)};
}

World make_world(GridGeometry geometry, const std::vector<Box>& boxes, bool border,
                 std::vector<DynamicObstacle> obstacles)
{
    OccupancyGrid grid(geometry);
    for (int r = 0; r < geometry.height; ++r) {
        for (int c = 0; c < geometry.width; ++c) {
            const CellIndex cell{c, r};
            const Point2D p = geometry.center_of(cell);
            bool occ = border && (c == 0 || r == 0 || c == geometry.width - 1 || r == geometry.height - 1);
            for (const Box& b : boxes)
                occ = occ || (p.x >= b.x_min && p.x <= b.x_max && p.y >= b.y_min && p.y <= b.y_max);
            grid.set_state(cell, occ ? CellState::Occupied : CellState::Free);
        }
    }

    const auto inside = [&](Point2D p) {
        return p.x >= geometry.min_x() && p.x <= geometry.max_x() && p.y >= geometry.min_y() &&
               p.y <= geometry.max_y();
    };
    for (std::size_t i = 0; i < obstacles.size(); ++i) {
        auto& ob = obstacles[i];
        const std::string tag = "dynamic obstacle " + std::to_string(i);
        if (!(ob.radius > 0.0))
            throw ValidationError(tag + ": radius must be positive");
        if (ob.waypoints.empty())
            throw ValidationError(tag + ": needs at least one waypoint");
        for (std::size_t k = 0; k < ob.waypoints.size(); ++k) {
            if (k > 0 && !(ob.waypoints[k].t > ob.waypoints[k - 1].t))
                throw ValidationError(tag + ": waypoint times must be strictly increasing");
            if (!inside(ob.waypoints[k].position))
                throw ValidationError(tag + ": waypoint outside world bounds");
        }
        ob.center = ob.position_at(0.0);
    }

    World w;
    w.static_grid = std::make_shared<const OccupancyGrid>(std::move(grid));
    w.dynamic_obstacles = std::move(obstacles);
    return w;
}

World load_world(const YAML::Node& doc)
{
    const YAML::Node node = doc["world"];
    if (!node || !node.IsMap())
        throw ConfigError("world", "missing or not a mapping");
    reject_unknown_keys(node, "world.",
                        {"width", "height", "resolution", "origin", "border", "boxes", "dynamic_obstacles"});

    const double width = get<double>(node, "width", "world.width");
    const double height = get<double>(node, "height", "world.height");
    const double res = get_or<double>(node, "resolution", "world.resolution", 0.05);
    const auto origin = get_or<std::vector<double>>(node, "origin", "world.origin", {0.0, 0.0});
    if (!(width > 0.0))
        throw ConfigError("world.width", "must be positive");
    if (!(height > 0.0))
        throw ConfigError("world.height", "must be positive");
    if (!(res > 0.0))
        throw ConfigError("world.resolution", "must be positive");
    if (origin.size() != 2)
        throw ConfigError("world.origin", "expected [x, y]");

    GridGeometry g{static_cast<int>(std::lround(width / res)), static_cast<int>(std::lround(height / res)), res,
                   {origin[0], origin[1], 0.0}};
    if (g.width <= 0 || g.height <= 0)
        throw ConfigError("world.resolution", "coarser than the world extent");

    std::vector<Box> boxes;
    if (const YAML::Node bn = node["boxes"]) {
        for (std::size_t i = 0; i < bn.size(); ++i) {
            const std::string key = "world.boxes[" + std::to_string(i) + "]";
            std::vector<double> v;
            try {
                v = bn[i].as<std::vector<double>>();
            } catch (const YAML::Exception&) {
                throw ConfigError(key, "expected [x_min, y_min, x_max, y_max]");
            }
            if (v.size() != 4)
                throw ConfigError(key, "expected [x_min, y_min, x_max, y_max]");
            Box b{v[0], v[1], v[2], v[3]};
            if (!(b.x_min < b.x_max && b.y_min < b.y_max))
                throw ValidationError(key + ": min corner must be below max corner");
            if (b.x_min < g.min_x() || b.y_min < g.min_y() || b.x_max > g.max_x() || b.y_max > g.max_y())
                throw ValidationError(key + ": extends outside world bounds");
            boxes.push_back(b);
        }
    }

    std::vector<DynamicObstacle> obstacles;
    if (const YAML::Node dn = node["dynamic_obstacles"]) {
        for (std::size_t i = 0; i < dn.size(); ++i) {
            const std::string key = "world.dynamic_obstacles[" + std::to_string(i) + "]";
            reject_unknown_keys(dn[i], key + ".", {"radius", "waypoints"});
            DynamicObstacle ob;
            ob.radius = get<double>(dn[i], "radius", key + ".radius");
            const YAML::Node wn = dn[i]["waypoints"];
            if (!wn || !wn.IsSequence())
                throw ConfigError(key + ".waypoints", "missing or not a list");
            for (std::size_t k = 0; k < wn.size(); ++k) {
                const std::string wkey = key + ".waypoints[" + std::to_string(k) + "]";
                std::vector<double> v;
                try {
                    v = wn[k].as<std::vector<double>>();
                } catch (const YAML::Exception&) {
                    throw ConfigError(wkey, "expected [t, x, y]");
                }
                if (v.size() != 3)
                    throw ConfigError(wkey, "expected [t, x, y]");
                ob.waypoints.push_back({v[0], {v[1], v[2]}});
            }
            obstacles.push_back(std::move(ob));
        }
    }

    return make_world(g, boxes, get_or<bool>(node, "border", "world.border", true), std::move(obstacles));
}

World step_dynamics(const World& world, double t)
{
    World next = world;
    next.time = t;
    for (auto& ob : next.dynamic_obstacles)
        ob.center = ob.position_at(t);
    return next;
}

std::optional<double> cast_beam(const World& world, Point2D origin, double angle, double max_range, double t)
{
    std::optional<double> best;
    walk_ray(world.geometry(), origin, angle, max_range, [&](CellIndex c, double t_enter, double) {
        if (world.occupied(c)) {
            best = t_enter;
            return false;
        }
        return true;
    });

    const double dx = std::cos(angle);
    const double dy = std::sin(angle);
    for (const auto& ob : world.dynamic_obstacles) {
        if (auto d = ray_disc(origin, dx, dy, ob.position_at(t), ob.radius); d && (!best || *d < *best))
            best = d;
    }
    if (best && *best >= max_range)
        return std::nullopt;
    return best;
}

LaserScan ray_cast(const World& world, const Pose2D& pose, const ScanParams& params, double t, Rng& rng)
{
    if (!world.geometry().contains(pose.position()))
        throw DomainError("ray_cast: pose outside world bounds");
    params.validate();

    LaserScan scan;
    scan.params = params;
    scan.stamp = t;
    scan.ranges.resize(static_cast<std::size_t>(params.beam_count));
    scan.hit_flags.resize(static_cast<std::size_t>(params.beam_count));
    for (std::size_t i = 0; i < scan.ranges.size(); ++i) {
        const auto hit = cast_beam(world, pose.position(), pose.theta + params.bearing(i), params.max_range, t);
        double range = params.max_range;
        bool flag = false;
        if (hit) {
            range = *hit + rng.gaussian(params.range_noise_sigma);
            flag = range < params.max_range;
            range = std::clamp(range, kMinRange, params.max_range);
        }
        scan.ranges[i] = range;
        scan.hit_flags[i] = flag;
    }
    return scan;
}

bool check_collision(const World& world, const Pose2D& pose, double footprint_radius, double t)
{
    const GridGeometry& g = world.geometry();
    const Point2D p = pose.position();
    const CellIndex lo = g.cell_floor({p.x - footprint_radius, p.y - footprint_radius});
    const CellIndex hi = g.cell_floor({p.x + footprint_radius, p.y + footprint_radius});
    for (int r = lo.row; r <= hi.row; ++r)
        for (int c = lo.col; c <= hi.col; ++c)
            if (blocked(world, {c, r}) && distance_to_cell(g, {c, r}, p) < footprint_radius)
                return true;
    for (const auto& ob : world.dynamic_obstacles)
        if (distance(ob.position_at(t), p) < ob.radius + footprint_radius)
            return true;
    return false;
}

double clearance(const World& world, const Pose2D& pose, double footprint_radius, double t, double horizon)
{
    const GridGeometry& g = world.geometry();
    const Point2D p = pose.position();
    const CellIndex centre = g.cell_floor(p);
    double best = horizon;
    const int rings = static_cast<int>(std::ceil(horizon / g.resolution)) + 1;
    for (int k = 0; k <= rings; ++k) {
        if ((k - 1) * g.resolution > best)
            break;
        for (int r = centre.row - k; r <= centre.row + k; ++r) {
            const bool edge_row = r == centre.row - k || r == centre.row + k;
            for (int c = centre.col - k; c <= centre.col + k; c += edge_row ? 1 : 2 * k) {
                if (blocked(world, {c, r}))
                    best = std::min(best, distance_to_cell(g, {c, r}, p));
                if (k == 0)
                    break;
            }
        }
    }
    for (const auto& ob : world.dynamic_obstacles)
        best = std::min(best, distance(ob.position_at(t), p) - ob.radius);
    return best - footprint_radius;
}

}  // namespace navsim

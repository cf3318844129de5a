#include "navsim/planning.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <numbers>
#include <queue>

#include <json.hpp>

namespace navsim {

namespace {

constexpr std::int64_t kUnit = 128;

struct QueueEntry {
    double f;
    PathCost g;
    CellIndex cell;
};

// Min-heap order: f, then exact g, then (row, col).
struct LaterFirst {
    bool operator()(const QueueEntry& a, const QueueEntry& b) const
    {
        if (a.f != b.f)
            return a.f > b.f;
        if (a.g != b.g)
            return a.g > b.g;
        return a.cell > b.cell;
    }
};

constexpr int kNeighbours[8][2] = {{-1, -1}, {0, -1}, {1, -1}, {-1, 0}, {1, 0}, {-1, 1}, {0, 1}, {1, 1}};

double octile(CellIndex a, CellIndex b)
{
    const double dx = std::abs(a.col - b.col);
    const double dy = std::abs(a.row - b.row);
    return std::max(dx, dy) - std::min(dx, dy) + std::numbers::sqrt2 * std::min(dx, dy);
}

CellIndex require_cell(const Costmap& cm, const Pose2D& p, PlanningError::Code code, const char* what)
{
    const auto c = cm.geometry.cell_at(p.position());
    if (!c || !cm.traversable(*c))
        throw PlanningError(code, std::string(what) + " is outside the map, lethal or unknown");
    return *c;
}

}  // namespace

double PathCost::value() const
{
    return (static_cast<double>(straight) + std::numbers::sqrt2 * static_cast<double>(diagonal)) / kScale;
}

std::strong_ordering operator<=>(const PathCost& a, const PathCost& b)
{
    // Compare ds against dd * sqrt(2) exactly.
    const std::int64_t ds = a.straight - b.straight;
    const std::int64_t dd = b.diagonal - a.diagonal;
    if (ds == 0 && dd == 0)
        return std::strong_ordering::equal;
    if (ds >= 0 && dd <= 0)
        return std::strong_ordering::greater;
    if (ds <= 0 && dd >= 0)
        return std::strong_ordering::less;
    const std::int64_t lhs = ds * ds;
    const std::int64_t rhs = 2 * dd * dd;
    if (ds > 0)
        return lhs > rhs ? std::strong_ordering::greater : std::strong_ordering::less;
    return lhs > rhs ? std::strong_ordering::less : std::strong_ordering::greater;
}

PathCost step_cost(const Costmap& costmap, CellIndex from, CellIndex to)
{
    const std::int64_t units = kUnit + costmap.at(from) + costmap.at(to);
    const bool diagonal = from.col != to.col && from.row != to.row;
    return diagonal ? PathCost{0, units} : PathCost{units, 0};
}

double Path::length() const
{
    double len = 0.0;
    for (std::size_t i = 1; i < world_points.size(); ++i)
        len += distance(world_points[i - 1], world_points[i]);
    return len;
}

double inflation_cost(double d, double robot_radius, double cost_scaling)
{
    return Costmap::kInscribed * std::exp(-cost_scaling * (d - robot_radius));
}

Costmap inflate(const Costmap& costmap, double robot_radius, double inflation_radius, double cost_scaling)
{
    if (!(inflation_radius >= robot_radius))
        throw ContractError("inflate: inflation_radius must be >= robot_radius");
    const GridGeometry& g = costmap.geometry;
    std::vector<std::uint8_t> lethal(g.size());
    bool any = false;
    for (std::size_t i = 0; i < g.size(); ++i) {
        lethal[i] = costmap.cost[i] == Costmap::kLethal;
        any = any || lethal[i];
    }
    Costmap out = costmap;
    if (!any)
        return out;

    const std::vector<double> dist = distance_transform(g, lethal);
    // Tolerance for distances that are exactly k cells but carry rounding.
    const double eps = 1e-9 * g.resolution;
    for (std::size_t i = 0; i < g.size(); ++i) {
        std::uint8_t& c = out.cost[i];
        if (c == Costmap::kLethal || c == Costmap::kUnknown)
            continue;
        const double d = dist[i];
        if (d <= robot_radius + eps) {
            c = Costmap::kLethal;
        } else if (d <= inflation_radius + eps) {
            const auto v = static_cast<std::uint8_t>(inflation_cost(d, robot_radius, cost_scaling));
            c = std::max(c, v);
        }
    }
    return out;
}

Path plan_cells(const Costmap& cm, CellIndex start, CellIndex goal, double heuristic_weight)
{
    if (!cm.traversable(start))
        throw PlanningError(PlanningError::Code::InvalidStart, "start cell is outside the map, lethal or unknown");
    if (!cm.traversable(goal))
        throw PlanningError(PlanningError::Code::InvalidGoal, "goal cell is outside the map, lethal or unknown");
    if (!(heuristic_weight >= 0.0))
        throw ContractError("heuristic weight must be >= 0");

    const GridGeometry& g = cm.geometry;
    constexpr std::size_t kNone = std::numeric_limits<std::size_t>::max();
    std::vector<PathCost> best(g.size());
    std::vector<std::uint8_t> seen(g.size(), 0);
    std::vector<std::size_t> parent(g.size(), kNone);

    std::priority_queue<QueueEntry, std::vector<QueueEntry>, LaterFirst> open;
    const auto h = [&](CellIndex c) { return heuristic_weight == 0.0 ? 0.0 : heuristic_weight * octile(c, goal); };

    best[g.index(start)] = {};
    seen[g.index(start)] = 1;
    open.push({h(start), {}, start});

    bool found = false;
    while (!open.empty()) {
        const QueueEntry top = open.top();
        open.pop();
        const std::size_t ti = g.index(top.cell);
        if (top.g != best[ti])
            continue;
        if (top.cell == goal) {
            found = true;
            break;
        }
        for (const auto& [dc, dr] : kNeighbours) {
            const CellIndex nb{top.cell.col + dc, top.cell.row + dr};
            if (!cm.traversable(nb))
                continue;
            if (dc != 0 && dr != 0 && !cm.traversable({top.cell.col + dc, top.cell.row}) &&
                !cm.traversable({top.cell.col, top.cell.row + dr}))
                continue;
            const PathCost ng = top.g + step_cost(cm, top.cell, nb);
            const std::size_t ni = g.index(nb);
            if (seen[ni] && !(ng < best[ni]))
                continue;
            seen[ni] = 1;
            best[ni] = ng;
            parent[ni] = ti;
            open.push({ng.value() + h(nb), ng, nb});
        }
    }
    if (!found)
        throw PlanningError(PlanningError::Code::NoPath, "goal is unreachable from start");

    Path path;
    for (std::size_t i = g.index(goal); i != kNone; i = parent[i])
        path.cells.push_back(g.cell_of_index(i));
    std::reverse(path.cells.begin(), path.cells.end());
    for (const auto& c : path.cells)
        path.world_points.push_back(g.center_of(c));
    path.cost = best[g.index(goal)];
    path.total_cost = path.cost.value();
    return path;
}

Path plan_dijkstra(const Costmap& costmap, const Pose2D& start, const Pose2D& goal)
{
    const CellIndex s = require_cell(costmap, start, PlanningError::Code::InvalidStart, "start");
    const CellIndex t = require_cell(costmap, goal, PlanningError::Code::InvalidGoal, "goal");
    return plan_cells(costmap, s, t, 0.0);
}

Path plan_astar(const Costmap& costmap, const Pose2D& start, const Pose2D& goal, double heuristic_weight)
{
    const CellIndex s = require_cell(costmap, start, PlanningError::Code::InvalidStart, "start");
    const CellIndex t = require_cell(costmap, goal, PlanningError::Code::InvalidGoal, "goal");
    return plan_cells(costmap, s, t, heuristic_weight);
}

Path plan(const Costmap& costmap, const PlanRequest& request)
{
    if (request.algorithm == PlanAlgorithm::AStar)
        return plan_astar(costmap, request.start, request.goal, request.heuristic_weight);
    return plan_dijkstra(costmap, request.start, request.goal);
}

Pose2D carrot_adjust_goal(const Costmap& costmap, const Pose2D& robot, const Pose2D& goal)
{
    const auto free_at = [&](Point2D p) {
        const auto c = costmap.geometry.cell_at(p);
        return c && costmap.traversable(*c);
    };
    if (free_at(goal.position()))
        return goal;

    const double dist = distance(robot.position(), goal.position());
    const double step = costmap.geometry.resolution / 2.0;
    const double ux = (robot.x - goal.x) / dist;
    const double uy = (robot.y - goal.y) / dist;
    for (int k = 1; k * step < dist; ++k) {
        const Point2D p{goal.x + k * step * ux, goal.y + k * step * uy};
        if (free_at(p))
            return {p.x, p.y, goal.theta};
    }
    return {robot.x, robot.y, goal.theta};
}

namespace {

double segment_deviation(Point2D p, Point2D a, Point2D b)
{
    const double dx = b.x - a.x;
    const double dy = b.y - a.y;
    const double len2 = dx * dx + dy * dy;
    if (len2 == 0.0)
        return distance(p, a);
    const double u = std::clamp(((p.x - a.x) * dx + (p.y - a.y) * dy) / len2, 0.0, 1.0);
    return distance(p, {a.x + u * dx, a.y + u * dy});
}

}  // namespace

std::vector<Point2D> simplify_path(const std::vector<Point2D>& points, double tolerance)
{
    if (points.size() <= 2)
        return points;
    std::vector<std::uint8_t> keep(points.size(), 0);
    keep[0] = 1;
    keep[points.size() - 1] = 1;
    std::vector<std::pair<std::size_t, std::size_t>> stack{{0, points.size() - 1}};
    while (!stack.empty()) {
        const auto [lo, hi] = stack.back();
        stack.pop_back();
        if (hi <= lo + 1)
            continue;
        double worst = -1.0;
        std::size_t at = lo;
        for (std::size_t i = lo + 1; i < hi; ++i) {
            const double d = segment_deviation(points[i], points[lo], points[hi]);
            if (d > worst) {
                worst = d;
                at = i;
            }
        }
        if (worst >= tolerance) {
            keep[at] = 1;
            stack.push_back({lo, at});
            stack.push_back({at, hi});
        }
    }
    std::vector<Point2D> out;
    for (std::size_t i = 0; i < points.size(); ++i)
        if (keep[i])
            out.push_back(points[i]);
    return out;
}

void write_path(const std::vector<Point2D>& points, const std::string& path)
{
    std::ofstream out(path);
    if (!out)
        throw IoError(path, "cannot open for writing");
    for (const auto& p : points) {
        nlohmann::ordered_json j;
        j["x"] = p.x;
        j["y"] = p.y;
        out << j.dump() << '\n';
    }
    if (!out)
        throw IoError(path, "write failed");
}

std::vector<Point2D> read_path(const std::string& path)
{
    std::ifstream in(path);
    if (!in)
        throw IoError(path, "no such file");
    std::vector<Point2D> points;
    std::string line;
    std::size_t n = 0;
    while (std::getline(in, line)) {
        ++n;
        if (line.empty())
            continue;
        try {
            const auto j = nlohmann::json::parse(line);
            points.push_back({j.at("x").get<double>(), j.at("y").get<double>()});
        } catch (const nlohmann::json::exception& e) {
            throw ParseError(n, path + ": " + e.what());
        }
    }
    return points;
}

}  // namespace navsim

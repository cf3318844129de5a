#include "navsim/localization.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>

#include "navsim/errors.hpp"

namespace navsim {

namespace {

constexpr double kNormTolerance = 1e-9;

void require_normalized(const ParticleSet& set, const char* what)
{
    if (set.particles.empty())
        throw ContractError(std::string(what) + ": empty particle set");
    double sum = 0.0;
    for (const auto& p : set.particles)
        sum += p.weight;
    if (std::abs(sum - 1.0) > kNormTolerance)
        throw ContractError(std::string(what) + ": particle weights are not normalized");
}

}  // namespace

LikelihoodField::LikelihoodField(const OccupancyGrid& map, double max_distance)
    : map_(map), max_distance_(max_distance)
{
    const GridGeometry& g = map_.geometry();
    std::vector<std::uint8_t> occupied(g.size(), 0);
    free_.assign(g.size(), 0);
    for (std::size_t i = 0; i < g.size(); ++i) {
        const CellState s = map_.classify(g.cell_of_index(i));
        occupied[i] = s == CellState::Occupied;
        if (s == CellState::Free) {
            free_[i] = 1;
            free_cells_.push_back(g.cell_of_index(i));
        }
    }
    distance_ = distance_transform(g, occupied);
    for (double& d : distance_)
        d = std::min(d, max_distance_);
}

double LikelihoodField::distance_at(Point2D p) const
{
    const auto c = map_.geometry().cell_at(p);
    if (!c)
        return max_distance_;
    return distance_[map_.geometry().index(*c)];
}

ParticleSet init_particles(std::size_t n, const LikelihoodField& field, const ParticlePrior& prior, Rng& rng)
{
    if (n == 0)
        throw ContractError("init_particles: n must be >= 1");
    ParticleSet set;
    set.particles.resize(n);
    set.normalized = true;
    const double w = 1.0 / static_cast<double>(n);

    if (const auto* g = std::get_if<GaussianPrior>(&prior)) {
        for (auto& p : set.particles) {
            p.pose = {g->mean.x + rng.gaussian(g->sigma_xy), g->mean.y + rng.gaussian(g->sigma_xy),
                      normalize_angle(g->mean.theta + rng.gaussian(g->sigma_theta))};
            p.weight = w;
        }
        return set;
    }

    const auto& cells = field.free_cells();
    if (cells.empty())
        throw ValidationError("init_particles: map has no free cells");
    const GridGeometry& geo = field.map().geometry();
    for (auto& p : set.particles) {
        const CellIndex c = cells[rng.index(cells.size())];
        const double x = geo.origin.x + (c.col + rng.uniform(0.0, 1.0)) * geo.resolution;
        const double y = geo.origin.y + (c.row + rng.uniform(0.0, 1.0)) * geo.resolution;
        p.pose = {x, y, normalize_angle(rng.uniform(-std::numbers::pi, std::numbers::pi))};
        p.weight = w;
    }
    return set;
}

void motion_update(ParticleSet& set, const PoseDelta& odom, const OdometryNoise& noise, Rng& rng)
{
    for (auto& p : set.particles)
        p.pose = compose(p.pose, noisy_odometry(odom, noise, rng));
}

void measurement_update(ParticleSet& set, const LaserScan& scan, const LikelihoodField& field,
                        const SensorModel& model)
{
    if (set.particles.empty())
        throw ContractError("measurement_update: empty particle set");
    const std::size_t beams = scan.ranges.size();
    const std::size_t stride =
        std::max<std::size_t>(1, beams / static_cast<std::size_t>(std::max(1, model.max_beams)));
    const double max_range = scan.params.max_range;
    const double norm = 1.0 / (model.sigma_hit * std::sqrt(2.0 * std::numbers::pi));
    const double denom = 2.0 * model.sigma_hit * model.sigma_hit;
    const double rand_term = model.z_rand / max_range;

    double total = 0.0;
    for (auto& p : set.particles) {
        const double c = std::cos(p.pose.theta);
        const double s = std::sin(p.pose.theta);
        double likelihood = 1.0;
        for (std::size_t i = 0; i < beams; i += stride) {
            if (!scan.hit_flags[i])
                continue;
            const double r = scan.ranges[i];
            const double bearing = scan.params.bearing(i);
            const double bx = r * std::cos(bearing);
            const double by = r * std::sin(bearing);
            const Point2D end{p.pose.x + c * bx - s * by, p.pose.y + s * bx + c * by};
            const double d = field.distance_at(end);
            likelihood *= model.z_hit * norm * std::exp(-d * d / denom) + rand_term;
        }
        p.weight *= likelihood;
        total += p.weight;
    }

    set.weight_reset = !(total > 0.0) || !std::isfinite(total);
    const double n = static_cast<double>(set.particles.size());
    for (auto& p : set.particles)
        p.weight = set.weight_reset ? 1.0 / n : p.weight / total;
    set.normalized = true;
}

void resample_with_offset(ParticleSet& set, double offset)
{
    require_normalized(set, "resample");
    const std::size_t n = set.particles.size();
    const double step = 1.0 / static_cast<double>(n);
    if (!(offset >= 0.0 && offset < step))
        throw ContractError("resample: offset outside [0, 1/n)");

    std::vector<Particle> out;
    out.reserve(n);
    double cumulative = set.particles[0].weight;
    std::size_t i = 0;
    for (std::size_t m = 0; m < n; ++m) {
        const double u = offset + static_cast<double>(m) * step;
        while (u >= cumulative && i + 1 < n)
            cumulative += set.particles[++i].weight;
        out.push_back({set.particles[i].pose, step});
    }
    set.particles = std::move(out);
    set.normalized = true;
}

void resample(ParticleSet& set, Rng& rng)
{
    require_normalized(set, "resample");
    resample_with_offset(set, rng.uniform(0.0, 1.0 / static_cast<double>(set.particles.size())));
}

double effective_sample_size(const ParticleSet& set)
{
    require_normalized(set, "effective_sample_size");
    double sq = 0.0;
    for (const auto& p : set.particles)
        sq += p.weight * p.weight;
    return 1.0 / sq;
}

PoseEstimate estimate(const ParticleSet& set)
{
    require_normalized(set, "estimate");
    double mx = 0.0, my = 0.0, ss = 0.0, sc = 0.0;
    for (const auto& p : set.particles) {
        mx += p.weight * p.pose.x;
        my += p.weight * p.pose.y;
        ss += p.weight * std::sin(p.pose.theta);
        sc += p.weight * std::cos(p.pose.theta);
    }
    PoseEstimate est;
    est.mean = {mx, my, normalize_angle(std::atan2(ss, sc))};

    auto& cov = est.covariance;
    for (const auto& p : set.particles) {
        const std::array<double, 3> e{p.pose.x - mx, p.pose.y - my, angle_diff(p.pose.theta, est.mean.theta)};
        for (int a = 0; a < 3; ++a)
            for (int b = 0; b < 3; ++b)
                cov[a][b] += p.weight * e[a] * e[b];
    }
    return est;
}

}  // namespace navsim

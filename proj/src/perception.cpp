#include "navsim/perception.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <vector>

#include "navsim/errors.hpp"

namespace navsim {

namespace {

// Beam bearings are accumulated in floating point; without slack a beam
// sitting on the cone edge can fall in on one side and out on the other.
constexpr double kAngleSlack = 1e-9;

}  // namespace

void OracleParams::validate() const
{
    if (!(cone_half_angle > 0.0))
        throw ValidationError("perception: cone_half_angle must be positive");
    if (!(0.0 < d_stop && d_stop < d_free))
        throw ValidationError("perception: require 0 < d_stop < d_free");
    if (sector_count < 3 || sector_count % 2 == 0)
        throw ValidationError("perception: sector_count must be odd and >= 3");
}

double collision_probability(double d_min, const OracleParams& params)
{
    if (d_min <= params.d_stop)
        return 1.0;
    if (d_min >= params.d_free)
        return 0.0;
    return (params.d_free - d_min) / (params.d_free - params.d_stop);
}

PerceptionOutput oracle_perception(const LaserScan& scan, const OracleParams& params)
{
    params.validate();
    const std::size_t n = scan.ranges.size();

    double d_min = std::numeric_limits<double>::infinity();
    bool covered = false;
    for (std::size_t i = 0; i < n; ++i) {
        if (std::abs(scan.params.bearing(i)) <= params.cone_half_angle + kAngleSlack) {
            covered = true;
            d_min = std::min(d_min, scan.ranges[i]);
        }
    }
    if (!covered)
        throw ContractError("oracle_perception: scan does not cover the frontal cone");

    // Beam i belongs to sector floor((i + 1/2) * S / n); with S odd no beam
    // sits on a boundary, so the partition is mirror symmetric.
    const auto sectors = static_cast<std::size_t>(params.sector_count);
    std::vector<double> sum(sectors, 0.0);
    std::vector<std::size_t> count(sectors, 0);
    for (std::size_t i = 0; i < n; ++i) {
        const std::size_t s = ((2 * i + 1) * sectors) / (2 * n);
        sum[s] += scan.ranges[i];
        ++count[s];
    }

    const std::size_t centre = sectors / 2;
    std::size_t best = centre;
    double best_mean = -1.0;
    const auto distance_from_centre = [&](std::size_t s) { return s > centre ? s - centre : centre - s; };
    for (std::size_t s = 0; s < sectors; ++s) {
        if (count[s] == 0)
            continue;
        const double mean = sum[s] / static_cast<double>(count[s]);
        const double tol = 1e-12 * std::max(std::abs(mean), std::abs(best_mean));
        bool better = mean > best_mean + tol;
        if (!better && std::abs(mean - best_mean) <= tol) {
            const std::size_t ds = distance_from_centre(s);
            const std::size_t db = distance_from_centre(best);
            // Higher index means larger bearing, i.e. further left.
            better = ds < db || (ds == db && s > best);
        }
        if (better) {
            best = s;
            best_mean = mean;
        }
    }

    const double span = scan.params.angle_max - scan.params.angle_min;
    const double bearing = scan.params.angle_min + (static_cast<double>(best) + 0.5) * span / params.sector_count;
    PerceptionOutput out;
    out.p_t = collision_probability(d_min, params);
    out.s_k = std::clamp(bearing / (std::numbers::pi / 2.0), -1.0, 1.0);
    out.stamp = scan.stamp;
    return out;
}

LaserScan crop_scan(const LaserScan& scan, double half_fov)
{
    std::size_t first = scan.ranges.size();
    std::size_t last = 0;
    for (std::size_t i = 0; i < scan.ranges.size(); ++i) {
        if (std::abs(scan.params.bearing(i)) <= half_fov + kAngleSlack) {
            first = std::min(first, i);
            last = i;
        }
    }
    if (first >= scan.ranges.size() || last == first)
        throw ContractError("crop_scan: fewer than two beams inside the field of view");

    LaserScan out;
    out.stamp = scan.stamp;
    out.params = scan.params;
    out.params.angle_min = scan.params.bearing(first);
    out.params.angle_max = scan.params.bearing(last);
    out.params.beam_count = static_cast<int>(last - first + 1);
    out.ranges.assign(scan.ranges.begin() + static_cast<std::ptrdiff_t>(first),
                      scan.ranges.begin() + static_cast<std::ptrdiff_t>(last + 1));
    out.hit_flags.assign(scan.hit_flags.begin() + static_cast<std::ptrdiff_t>(first),
                         scan.hit_flags.begin() + static_cast<std::ptrdiff_t>(last + 1));
    return out;
}

}  // namespace navsim

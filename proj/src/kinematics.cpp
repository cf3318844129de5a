#include "navsim/kinematics.hpp"

#include <algorithm>
#include <cmath>

#include "navsim/errors.hpp"

namespace navsim {

void RobotParams::validate() const
{
    if (!(wheel_radius > 0.0 && wheel_base > 0.0 && footprint_radius > 0.0 && v_max > 0.0 && w_max > 0.0))
        throw ValidationError("robot parameters must all be strictly positive");
}

Twist2D body_twist_from_wheels(const WheelRates& rates, const RobotParams& params)
{
    return {params.wheel_radius / 2.0 * (rates.v_r + rates.v_l),
            params.wheel_radius / params.wheel_base * (rates.v_r - rates.v_l)};
}

WheelRates wheels_from_body_twist(const Twist2D& twist, const RobotParams& params)
{
    const double wl = twist.w * params.wheel_base;
    return {(2.0 * twist.v + wl) / (2.0 * params.wheel_radius), (2.0 * twist.v - wl) / (2.0 * params.wheel_radius)};
}

Pose2D integrate_pose(const Pose2D& pose, const Twist2D& twist, double dt)
{
    if (!(dt > 0.0))
        throw ContractError("integrate_pose: dt must be positive");
    const double dtheta = twist.w * dt;
    if (std::abs(twist.w) < kArcEpsilon) {
        // Second-order expansion of the arc keeps the branch switch continuous.
        const double heading = pose.theta + 0.5 * dtheta;
        return {pose.x + twist.v * dt * std::cos(heading), pose.y + twist.v * dt * std::sin(heading),
                normalize_angle(pose.theta + dtheta)};
    }
    const double radius = twist.v / twist.w;
    return {pose.x + radius * (std::sin(pose.theta + dtheta) - std::sin(pose.theta)),
            pose.y - radius * (std::cos(pose.theta + dtheta) - std::cos(pose.theta)),
            normalize_angle(pose.theta + dtheta)};
}

PoseDelta noisy_odometry(const PoseDelta& true_delta, const OdometryNoise& noise, Rng& rng)
{
    if (noise.sigma_trans < 0.0 || noise.sigma_rot < 0.0)
        throw ContractError("noisy_odometry: sigmas must be non-negative");
    if (noise.sigma_trans == 0.0 && noise.sigma_rot == 0.0)
        return true_delta;

    const double trans = std::hypot(true_delta.dx, true_delta.dy);
    // In-place rotations have no meaningful travel bearing.
    const double rot1 = trans < 1e-9 ? 0.0 : std::atan2(true_delta.dy, true_delta.dx);
    const double rot2 = angle_diff(true_delta.dtheta, rot1);

    const double n_rot1 = rot1 + rng.gaussian(noise.sigma_rot);
    const double n_trans = trans + rng.gaussian(noise.sigma_trans);
    const double n_rot2 = rot2 + rng.gaussian(noise.sigma_rot);
    return {n_trans * std::cos(n_rot1), n_trans * std::sin(n_rot1), normalize_angle(n_rot1 + n_rot2)};
}

Twist2D clamp_to_wheel_limits(const Twist2D& twist, const RobotParams& params)
{
    const double max_rate = params.v_max / params.wheel_radius;
    const WheelRates rates = wheels_from_body_twist(twist, params);
    const double peak = std::max(std::abs(rates.v_r), std::abs(rates.v_l));
    if (peak <= max_rate)
        return twist;
    const double scale = max_rate / peak;
    return {twist.v * scale, twist.w * scale};
}

}  // namespace navsim

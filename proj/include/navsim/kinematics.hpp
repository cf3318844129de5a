#pragma once

#include "navsim/pose.hpp"
#include "navsim/random.hpp"

namespace navsim {

/// Differential-drive geometry and limits.
struct RobotParams {
    double wheel_radius = 0.033;  ///< R, meters
    double wheel_base = 0.16;     ///< L, distance between the wheels, meters
    double footprint_radius = 0.15;
    double v_max = 0.4;
    double w_max = 1.5;

    void validate() const;
};

/// Wheel angular rates, rad/s.
struct WheelRates {
    double v_r = 0.0;
    double v_l = 0.0;
};

/// v = R/2 (v_r + v_l), w = R/L (v_r - v_l).
Twist2D body_twist_from_wheels(const WheelRates& rates, const RobotParams& params);

/// Exact inverse of body_twist_from_wheels.
WheelRates wheels_from_body_twist(const Twist2D& twist, const RobotParams& params);

/// Below this yaw rate integrate_pose uses the straight-line limit.
inline constexpr double kArcEpsilon = 1e-6;

/// Advances a pose along the constant-twist arc for dt seconds.
Pose2D integrate_pose(const Pose2D& pose, const Twist2D& twist, double dt);

/// Standard deviations applied to the (rot1, trans, rot2) decomposition.
struct OdometryNoise {
    double sigma_trans = 0.0;
    double sigma_rot = 0.0;
};

/// Perturbs a body-frame increment through its (rot1, trans, rot2)
/// decomposition. Zero sigmas return the input unchanged.
PoseDelta noisy_odometry(const PoseDelta& true_delta, const OdometryNoise& noise, Rng& rng);

/// Scales a twist so neither wheel exceeds max_wheel_rate, keeping curvature.
Twist2D clamp_to_wheel_limits(const Twist2D& twist, const RobotParams& params);

}  // namespace navsim

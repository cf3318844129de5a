#pragma once

#include <optional>
#include <string>
#include <vector>

#include "navsim/perception.hpp"
#include "navsim/pose.hpp"

namespace navsim {

struct ControlParams {
    double alpha = 0.3;  ///< velocity low-pass coefficient
    double beta = 0.5;   ///< steering low-pass coefficient
    double v_max = 0.4;
    double w_max = 1.5;
    double override_on = 0.7;
    double override_off = 0.4;
    double override_hold = 1.0;
    double lookahead = 0.4;
    double goal_tolerance = 0.15;
    double stuck_speed = 0.01;
    double stuck_time = 3.0;
    double recovery_spin = 0.5;

    void validate() const;

    /// alpha = 0.3, beta = 0.5 (retuned for a ground robot).
    static ControlParams ground_robot_preset();
    /// alpha = 0.7, beta = 0.5 (original drone tuning).
    static ControlParams drone_preset();
};

enum class Mode { Tracking, Reactive, Recovery, Done };

std::string to_string(Mode m);
Mode mode_from_string(const std::string& s);

struct ControlState {
    double v_prev = 0.0;
    double theta_prev = 0.0;
    Mode mode = Mode::Tracking;
    double mode_entered_at = 0.0;
    std::optional<double> below_off_since;
    std::optional<double> slow_since;
};

struct ControlCommand {
    double v = 0.0;
    double w = 0.0;
};

/// v_k = (1 - alpha) v_{k-1} + alpha (1 - p_t) v_max; stores v_k in state.
double lpf_velocity(ControlState& state, double p_t, const ControlParams& params);

/// theta_k = (1 - beta) theta_{k-1} + beta (pi/2) s_k; stores theta_k in state.
double lpf_steering(ControlState& state, double s_k, const ControlParams& params);

struct PursuitOutput {
    double v_ref = 0.0;
    double w_ref = 0.0;
    bool goal_reached = false;
};

/// Geometric follower towards the path point one lookahead of arc length
/// beyond the closest point on the waypoint polyline.
PursuitOutput pure_pursuit(const Pose2D& pose, const std::vector<Point2D>& waypoints, const ControlParams& params);

/// Forward-speed factor for a given bearing error: 1 up to 45 deg, then
/// linear down to 0.2 at 180 deg.
double heading_speed_scale(double bearing_error);

/// One tick of the navigation executive.
///
/// Tracking follows the path with its speed capped by the low-passed
/// velocity; Reactive drives on the low-passed perception outputs alone;
/// Recovery spins in place until the frontal cone is clear (p_t == 0).
/// perception may be empty, which is treated as p_t = 0, s_k = 0.
ControlCommand executive_step(ControlState& state, const Pose2D& pose, const std::optional<PerceptionOutput>& perception,
                              const std::vector<Point2D>& waypoints, const ControlParams& params, double t);

}  // namespace navsim

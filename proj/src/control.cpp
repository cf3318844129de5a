#include "navsim/control.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "navsim/errors.hpp"

namespace navsim {

namespace {

constexpr double kHalfPi = std::numbers::pi / 2.0;

void enter(ControlState& state, Mode mode, double t)
{
    if (state.mode == mode)
        return;
    state.mode = mode;
    state.mode_entered_at = t;
    state.below_off_since.reset();
    state.slow_since.reset();
}

}  // namespace

void ControlParams::validate() const
{
    if (!(alpha >= 0.0 && alpha <= 1.0))
        throw ValidationError("control: alpha must lie in [0, 1]");
    if (!(beta >= 0.0 && beta <= 1.0))
        throw ValidationError("control: beta must lie in [0, 1]");
    if (!(override_off < override_on))
        throw ValidationError("control: override_off must be below override_on");
    if (!(v_max > 0.0 && w_max > 0.0 && lookahead > 0.0 && goal_tolerance > 0.0 && stuck_speed > 0.0 &&
          stuck_time > 0.0 && recovery_spin > 0.0 && override_hold >= 0.0))
        throw ValidationError("control: dimensional parameters must be positive");
}

ControlParams ControlParams::ground_robot_preset()
{
    ControlParams p;
    p.alpha = 0.3;
    p.beta = 0.5;
    return p;
}

ControlParams ControlParams::drone_preset()
{
    ControlParams p;
    p.alpha = 0.7;
    p.beta = 0.5;
    return p;
}

std::string to_string(Mode m)
{
    switch (m) {
    case Mode::Tracking: return "tracking";
    case Mode::Reactive: return "reactive";
    case Mode::Recovery: return "recovery";
    case Mode::Done: return "done";
    }
    return "tracking";
}

Mode mode_from_string(const std::string& s)
{
    if (s == "tracking")
        return Mode::Tracking;
    if (s == "reactive")
        return Mode::Reactive;
    if (s == "recovery")
        return Mode::Recovery;
    if (s == "done")
        return Mode::Done;
    throw ContractError("unknown mode '" + s + "'");
}

double lpf_velocity(ControlState& state, double p_t, const ControlParams& params)
{
    if (!(p_t >= 0.0 && p_t <= 1.0))
        throw ContractError("lpf_velocity: p_t outside [0, 1]");
    state.v_prev = (1.0 - params.alpha) * state.v_prev + params.alpha * (1.0 - p_t) * params.v_max;
    return state.v_prev;
}

double lpf_steering(ControlState& state, double s_k, const ControlParams& params)
{
    if (!(s_k >= -1.0 && s_k <= 1.0))
        throw ContractError("lpf_steering: s_k outside [-1, 1]");
    state.theta_prev = (1.0 - params.beta) * state.theta_prev + params.beta * kHalfPi * s_k;
    return state.theta_prev;
}

double heading_speed_scale(double bearing_error)
{
    constexpr double kFullSpeed = std::numbers::pi / 4.0;
    constexpr double kFloor = 0.2;
    const double e = std::abs(bearing_error);
    if (e <= kFullSpeed)
        return 1.0;
    return 1.0 - (1.0 - kFloor) * (e - kFullSpeed) / (std::numbers::pi - kFullSpeed);
}

PursuitOutput pure_pursuit(const Pose2D& pose, const std::vector<Point2D>& waypoints, const ControlParams& params)
{
    if (waypoints.empty())
        throw ContractError("pure_pursuit: empty waypoint list");
    const Point2D here = pose.position();
    if (distance(here, waypoints.back()) <= params.goal_tolerance)
        return {0.0, 0.0, true};

    // Closest point on the polyline.
    std::size_t seg = 0;
    double seg_u = 0.0;
    double best = distance(here, waypoints.front());
    for (std::size_t i = 0; i + 1 < waypoints.size(); ++i) {
        const Point2D a = waypoints[i];
        const Point2D b = waypoints[i + 1];
        const double dx = b.x - a.x;
        const double dy = b.y - a.y;
        const double len2 = dx * dx + dy * dy;
        const double u = len2 > 0.0 ? std::clamp(((here.x - a.x) * dx + (here.y - a.y) * dy) / len2, 0.0, 1.0) : 0.0;
        const double d = distance(here, {a.x + u * dx, a.y + u * dy});
        if (d < best) {
            best = d;
            seg = i;
            seg_u = u;
        }
    }

    // Walk forward one lookahead of arc length.
    Point2D target = waypoints.back();
    double remaining = params.lookahead;
    for (std::size_t i = seg; i + 1 < waypoints.size(); ++i) {
        const Point2D a = waypoints[i];
        const Point2D b = waypoints[i + 1];
        const double len = distance(a, b);
        const double start_u = i == seg ? seg_u : 0.0;
        const double avail = len * (1.0 - start_u);
        if (avail >= remaining && len > 0.0) {
            const double u = start_u + remaining / len;
            target = {a.x + u * (b.x - a.x), a.y + u * (b.y - a.y)};
            break;
        }
        remaining -= avail;
    }

    const double error = angle_diff(std::atan2(target.y - here.y, target.x - here.x), pose.theta);
    PursuitOutput out;
    out.v_ref = params.v_max * heading_speed_scale(error);
    out.w_ref = 2.0 * out.v_ref * std::sin(error) / params.lookahead;
    return out;
}

ControlCommand executive_step(ControlState& state, const Pose2D& pose, const std::optional<PerceptionOutput>& perception,
                              const std::vector<Point2D>& waypoints, const ControlParams& params, double t)
{
    if (state.mode == Mode::Done)
        return {};

    const double p_t = perception ? perception->p_t : 0.0;
    const double s_k = perception ? perception->s_k : 0.0;
    const PursuitOutput pursuit = pure_pursuit(pose, waypoints, params);
    if (pursuit.goal_reached) {
        enter(state, Mode::Done, t);
        return {};
    }

    // Both filters run every tick so their state stays continuous across modes.
    const double v_k = lpf_velocity(state, p_t, params);
    const double theta_k = lpf_steering(state, s_k, params);

    if (state.mode == Mode::Tracking && p_t > params.override_on)
        enter(state, Mode::Reactive, t);

    if (state.mode == Mode::Reactive) {
        if (p_t < params.override_off) {
            if (!state.below_off_since)
                state.below_off_since = t;
            if (t - *state.below_off_since >= params.override_hold)
                enter(state, Mode::Tracking, t);
        } else {
            state.below_off_since.reset();
        }
    }

    if (state.mode == Mode::Recovery && p_t == 0.0)
        enter(state, Mode::Tracking, t);

    ControlCommand cmd;
    switch (state.mode) {
    case Mode::Tracking:
        cmd.v = std::min(pursuit.v_ref, v_k);
        cmd.w = pursuit.w_ref;
        break;
    case Mode::Reactive:
        cmd.v = v_k;
        cmd.w = theta_k;
        break;
    case Mode::Recovery:
        cmd.v = 0.0;
        cmd.w = params.recovery_spin;
        break;
    case Mode::Done: break;
    }

    if (state.mode != Mode::Recovery) {
        if (std::abs(cmd.v) < params.stuck_speed) {
            if (!state.slow_since)
                state.slow_since = t;
            if (t - *state.slow_since >= params.stuck_time) {
                enter(state, Mode::Recovery, t);
                cmd = {0.0, params.recovery_spin};
            }
        } else {
            state.slow_since.reset();
        }
    }

    cmd.v = std::clamp(cmd.v, -params.v_max, params.v_max);
    cmd.w = std::clamp(cmd.w, -params.w_max, params.w_max);
    return cmd;
}

}  // namespace navsim

#pragma once

#include <cmath>
#include <numbers>

namespace navsim {

struct Point2D {
    double x = 0.0;
    double y = 0.0;

    friend bool operator==(const Point2D&, const Point2D&) = default;
};

inline double distance(const Point2D& a, const Point2D& b) { return std::hypot(a.x - b.x, a.y - b.y); }

/// Wraps an angle into (-pi, pi].
inline double normalize_angle(double a)
{
    constexpr double two_pi = 2.0 * std::numbers::pi;
    a = std::fmod(a, two_pi);
    if (a <= -std::numbers::pi)
        a += two_pi;
    else if (a > std::numbers::pi)
        a -= two_pi;
    return a;
}

/// Signed smallest rotation taking b onto a.
inline double angle_diff(double a, double b) { return normalize_angle(a - b); }

struct Pose2D {
    double x = 0.0;
    double y = 0.0;
    double theta = 0.0;

    Point2D position() const { return {x, y}; }
    friend bool operator==(const Pose2D&, const Pose2D&) = default;
};

/// Body-frame velocity: forward speed and yaw rate.
struct Twist2D {
    double v = 0.0;
    double w = 0.0;
};

/// Pose increment expressed in the frame of the pose it starts from.
struct PoseDelta {
    double dx = 0.0;
    double dy = 0.0;
    double dtheta = 0.0;

    friend bool operator==(const PoseDelta&, const PoseDelta&) = default;
};

/// Applies a body-frame increment to a pose.
inline Pose2D compose(const Pose2D& p, const PoseDelta& d)
{
    const double c = std::cos(p.theta);
    const double s = std::sin(p.theta);
    return {p.x + c * d.dx - s * d.dy, p.y + s * d.dx + c * d.dy, normalize_angle(p.theta + d.dtheta)};
}

/// The increment that takes `from` onto `to`, in the frame of `from`.
inline PoseDelta relative(const Pose2D& from, const Pose2D& to)
{
    const double c = std::cos(from.theta);
    const double s = std::sin(from.theta);
    const double ex = to.x - from.x;
    const double ey = to.y - from.y;
    return {c * ex + s * ey, -s * ex + c * ey, angle_diff(to.theta, from.theta)};
}

}  // namespace navsim

#pragma once

#include <cstddef>
#include <vector>

namespace navsim {

/// Planar range sensor configuration. Beam i has bearing
/// angle_min + i * (angle_max - angle_min) / (beam_count - 1), relative to
/// the robot heading.
struct ScanParams {
    int beam_count = 360;
    double angle_min = -3.141592653589793;
    double angle_max = 3.141592653589793;
    double max_range = 3.5;
    double range_noise_sigma = 0.0;

    double angle_increment() const { return (angle_max - angle_min) / (beam_count - 1); }
    double bearing(std::size_t i) const { return angle_min + static_cast<double>(i) * angle_increment(); }

    /// Throws ValidationError when an invariant is broken.
    void validate() const;
};

struct LaserScan {
    std::vector<double> ranges;
    std::vector<bool> hit_flags;
    ScanParams params;
    double stamp = 0.0;

    std::size_t size() const { return ranges.size(); }
};

}  // namespace navsim

#pragma once

#include <memory>

#include "navsim/scan.hpp"

namespace navsim {

/// DroNet-style output: collision probability and scaled steering.
struct PerceptionOutput {
    double p_t = 0.0;  ///< [0, 1]
    double s_k = 0.0;  ///< [-1, 1], positive turns left
    double stamp = 0.0;
};

struct OracleParams {
    double cone_half_angle = 0.5235987755982988;  // 30 deg
    double d_stop = 0.3;
    double d_free = 1.5;
    int sector_count = 9;

    void validate() const;
};

/// Source of (p_t, s_k). Implementations must be pure functions of the scan.
class PerceptionProvider {
  public:
    virtual ~PerceptionProvider() = default;
    virtual PerceptionOutput perceive(const LaserScan& scan) const = 0;
};

/// Collision probability from the nearest return in the frontal cone:
/// 1 at or below d_stop, 0 at or beyond d_free, linear in between.
double collision_probability(double d_min, const OracleParams& params);

/// Range-based stand-in for the learned network.
///
/// Steering picks the sector with the largest mean range; ties go to the
/// sector nearest the centre, then to the left one.
PerceptionOutput oracle_perception(const LaserScan& scan, const OracleParams& params);

class OraclePerception final : public PerceptionProvider {
  public:
    explicit OraclePerception(OracleParams params) : params_(params) { params_.validate(); }
    PerceptionOutput perceive(const LaserScan& scan) const override { return oracle_perception(scan, params_); }
    const OracleParams& params() const { return params_; }

  private:
    OracleParams params_;
};

/// Keeps only beams whose bearing lies within +-half_fov, e.g. to model a
/// forward camera from a full-circle lidar.
LaserScan crop_scan(const LaserScan& scan, double half_fov);

}  // namespace navsim

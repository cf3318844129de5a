#pragma once

#include <array>
#include <variant>
#include <vector>

#include "navsim/kinematics.hpp"
#include "navsim/occupancy_grid.hpp"
#include "navsim/pose.hpp"
#include "navsim/random.hpp"
#include "navsim/scan.hpp"

namespace navsim {

struct Particle {
    Pose2D pose;
    double weight = 0.0;
};

struct ParticleSet {
    std::vector<Particle> particles;
    bool normalized = false;
    /// Set by measurement_update when every weight underflowed and the set was reset.
    bool weight_reset = false;

    std::size_t size() const { return particles.size(); }
};

struct UniformPrior {};
struct GaussianPrior {
    Pose2D mean;
    double sigma_xy = 0.0;
    double sigma_theta = 0.0;
};
using ParticlePrior = std::variant<UniformPrior, GaussianPrior>;

/// Static map plus its precomputed distance-to-obstacle field.
class LikelihoodField {
  public:
    /// max_distance caps the field; cells farther than that read as max_distance.
    explicit LikelihoodField(const OccupancyGrid& map, double max_distance = 2.0);

    const OccupancyGrid& map() const { return map_; }
    /// Distance to the nearest occupied cell; max_distance outside the map.
    double distance_at(Point2D p) const;
    bool is_free(CellIndex c) const { return free_[map_.geometry().index(c)] != 0; }
    const std::vector<CellIndex>& free_cells() const { return free_cells_; }

  private:
    OccupancyGrid map_;
    double max_distance_;
    std::vector<double> distance_;
    std::vector<std::uint8_t> free_;
    std::vector<CellIndex> free_cells_;
};

struct SensorModel {
    double z_hit = 0.95;
    double z_rand = 0.05;
    double sigma_hit = 0.1;
    int max_beams = 30;
};

ParticleSet init_particles(std::size_t n, const LikelihoodField& field, const ParticlePrior& prior, Rng& rng);

/// Moves every particle by its own noisy sample of the odometry increment.
void motion_update(ParticleSet& set, const PoseDelta& odom, const OdometryNoise& noise, Rng& rng);

/// Reweights by the likelihood-field model and normalizes. If every weight
/// underflows, weights reset to uniform and set.weight_reset is raised.
void measurement_update(ParticleSet& set, const LaserScan& scan, const LikelihoodField& field,
                        const SensorModel& model);

/// Low-variance systematic resampling. Throws ContractError on an
/// unnormalized set.
void resample(ParticleSet& set, Rng& rng);

/// Systematic resampling with an explicit first-stratum offset in [0, 1/n).
void resample_with_offset(ParticleSet& set, double offset);

double effective_sample_size(const ParticleSet& set);

struct PoseEstimate {
    Pose2D mean;
    /// Row-major (x, y, theta), angular residuals wrapped.
    std::array<std::array<double, 3>, 3> covariance{};
};

PoseEstimate estimate(const ParticleSet& set);

}  // namespace navsim

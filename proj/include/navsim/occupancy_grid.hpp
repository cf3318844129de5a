#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "navsim/grid.hpp"
#include "navsim/pose.hpp"
#include "navsim/scan.hpp"

namespace navsim {

enum class CellState : std::uint8_t { Free, Occupied, Unknown };

/// Inverse sensor model increments and clamp bounds, in log-odds.
struct LogOddsModel {
    double hit = 0.85;
    double miss = -0.4;
    double min = -4.0;
    double max = 4.0;
};

inline constexpr double kDefaultOccupiedThresh = 0.65;
inline constexpr double kDefaultFreeThresh = 0.196;

inline double log_odds_to_probability(double l) { return 1.0 / (1.0 + std::exp(-l)); }
inline double probability_to_log_odds(double p) { return std::log(p / (1.0 - p)); }

/// Occupancy belief raster backed by per-cell log-odds.
class OccupancyGrid {
  public:
    OccupancyGrid(GridGeometry geometry, LogOddsModel model = {});

    const GridGeometry& geometry() const { return geometry_; }
    const LogOddsModel& model() const { return model_; }

    double log_odds(CellIndex c) const { return log_odds_[geometry_.index(c)]; }
    /// Stores l clamped to the model bounds.
    void set_log_odds(CellIndex c, double l);
    /// Adds dl and clamps.
    void update(CellIndex c, double dl);
    void set_state(CellIndex c, CellState s);

    double probability(CellIndex c) const { return log_odds_to_probability(log_odds(c)); }
    CellState classify(CellIndex c, double occupied_thresh = kDefaultOccupiedThresh,
                       double free_thresh = kDefaultFreeThresh) const;
    bool is_occupied(CellIndex c) const { return log_odds(c) > occupied_logit_; }

    std::span<const double> data() const { return log_odds_; }

  private:
    GridGeometry geometry_;
    LogOddsModel model_;
    std::vector<double> log_odds_;
    double occupied_logit_;
};

/// All cells at the prior (log-odds 0, p = 0.5).
OccupancyGrid new_grid(int width, int height, double resolution, Pose2D origin, LogOddsModel model = {});

/// Inverse-sensor-model update for one scan taken at `pose`.
///
/// Cells strictly between the sensor cell and the beam endpoint receive
/// model.miss; the endpoint cell receives model.hit when the beam hit
/// something. Throws DomainError when the pose is outside the grid.
void integrate_scan(OccupancyGrid& grid, const Pose2D& pose, const LaserScan& scan);

/// Metadata file contents in the map_server layout.
struct MapMetadata {
    std::string image_name;
    double resolution = 0.05;
    Pose2D origin{};
    int negate = 0;
    double occupied_thresh = kDefaultOccupiedThresh;
    double free_thresh = kDefaultFreeThresh;

    void validate() const;
};

struct LoadedMap {
    OccupancyGrid grid;
    MapMetadata metadata;
};

/// Writes <basename>.pgm and <basename>.yaml under directory.
void save_map(const OccupancyGrid& grid, const std::string& directory, const std::string& basename,
              double occupied_thresh = kDefaultOccupiedThresh, double free_thresh = kDefaultFreeThresh);
LoadedMap load_map(const std::string& directory, const std::string& basename);

/// Pixel values written for each class.
inline constexpr std::uint8_t kPixelFree = 254;
inline constexpr std::uint8_t kPixelOccupied = 0;
inline constexpr std::uint8_t kPixelUnknown = 205;

/// Traversal cost raster. 0 free, 253 inscribed, 254 lethal, 255 unknown.
struct Costmap {
    static constexpr std::uint8_t kFree = 0;
    static constexpr std::uint8_t kInscribed = 253;
    static constexpr std::uint8_t kLethal = 254;
    static constexpr std::uint8_t kUnknown = 255;

    GridGeometry geometry;
    std::vector<std::uint8_t> cost;

    std::uint8_t at(CellIndex c) const { return cost[geometry.index(c)]; }
    std::uint8_t& at(CellIndex c) { return cost[geometry.index(c)]; }
    bool traversable(CellIndex c) const { return geometry.contains(c) && at(c) < kLethal; }
};

Costmap to_costmap(const OccupancyGrid& grid, double occupied_thresh = kDefaultOccupiedThresh,
                   double free_thresh = kDefaultFreeThresh);

}  // namespace navsim

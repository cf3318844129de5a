#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <numbers>
#include <random>
#include <sstream>

#include "navsim/errors.hpp"
#include "navsim/occupancy_grid.hpp"

using namespace navsim;
namespace fs = std::filesystem;

namespace {

fs::path scratch_dir(const std::string& name)
{
    const fs::path dir = fs::temp_directory_path() / ("navsim_mapping_" + name);
    fs::remove_all(dir);
    fs::create_directories(dir);
    return dir;
}

std::string slurp(const fs::path& p)
{
    std::ifstream in(p, std::ios::binary);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

LaserScan make_scan(std::vector<double> ranges, std::vector<bool> hits, double amin, double amax)
{
    LaserScan s;
    s.params.beam_count = static_cast<int>(ranges.size());
    s.params.angle_min = amin;
    s.params.angle_max = amax;
    s.params.max_range = 3.5;
    s.ranges = std::move(ranges);
    s.hit_flags = std::move(hits);
    return s;
}

double point_segment(double px, double py, double ax, double ay, double bx, double by)
{
    const double dx = bx - ax, dy = by - ay;
    const double t = std::clamp(((px - ax) * dx + (py - ay) * dy) / (dx * dx + dy * dy), 0.0, 1.0);
    return std::hypot(px - ax - t * dx, py - ay - t * dy);
}

}  // namespace

TEST_CASE("new_grid prior")
{
    const OccupancyGrid g = new_grid(10, 10, 0.05, {});
    CHECK(g.data().size() == 100);
    for (double l : g.data())
        CHECK(l == 0.0);
    CHECK(g.probability({3, 3}) == 0.5);
    CHECK(g.classify({3, 3}) == CellState::Unknown);
    CHECK_THROWS_AS(new_grid(0, 10, 0.05, {}), ValidationError);
    CHECK_THROWS_AS(new_grid(10, 10, 0.0, {}), ValidationError);
}

TEST_CASE("integrate_scan: double hit gives logistic of the sum")
{
    OccupancyGrid g = new_grid(40, 40, 0.1, {});
    // Two beams straight ahead and straight behind; only the first hits.
    const LaserScan s = make_scan({1.03, 3.5}, {true, false}, 0.0, std::numbers::pi);
    const Pose2D pose{1.05, 2.05, 0.0};
    integrate_scan(g, pose, s);
    integrate_scan(g, pose, s);
    const CellIndex hit = *g.geometry().cell_at({2.08, 2.05});
    CHECK(g.log_odds(hit) == doctest::Approx(1.7).epsilon(1e-14));
    CHECK(g.probability(hit) == doctest::Approx(0.8455).epsilon(1e-4));
    CHECK(g.log_odds(*g.geometry().cell_at({1.55, 2.05})) == doctest::Approx(-0.8));
    CHECK(g.log_odds(*g.geometry().cell_at({1.05, 2.05})) == 0.0);
}

TEST_CASE("integrate_scan: no-hit beams only decrement")
{
    OccupancyGrid g = new_grid(100, 100, 0.1, {});
    std::vector<double> r(36, 3.5);
    integrate_scan(g, {5.0, 5.0, 0.3}, make_scan(r, std::vector<bool>(36, false), -3.0, 3.0));
    int touched = 0;
    for (double l : g.data()) {
        CHECK(l <= 0.0);
        touched += l < 0.0;
    }
    CHECK(touched > 0);
}

TEST_CASE("integrate_scan: repeated scans reach the clamp and stop")
{
    OccupancyGrid g = new_grid(50, 50, 0.1, {});
    const LaserScan s = make_scan({1.0, 2.0, 1.5, 0.7}, {true, true, true, false}, -1.0, 2.0);
    for (int i = 0; i < 40; ++i)
        integrate_scan(g, {2.5, 2.5, 0.0}, s);
    const std::vector<double> settled(g.data().begin(), g.data().end());
    integrate_scan(g, {2.5, 2.5, 0.0}, s);
    for (std::size_t i = 0; i < settled.size(); ++i) {
        CHECK(g.data()[i] == settled[i]);
        CHECK((settled[i] == 0.0 || settled[i] == 4.0 || settled[i] == -4.0));
    }
}

TEST_CASE("integrate_scan: order independence inside the clamp bounds")
{
    std::mt19937_64 gen(2);
    std::uniform_real_distribution<double> range(0.3, 3.0), p(1.0, 4.0), th(-3.0, 3.0);
    for (int trial = 0; trial < 20; ++trial) {
        std::vector<double> ra, rb;
        for (int i = 0; i < 6; ++i) {
            ra.push_back(range(gen));
            rb.push_back(range(gen));
        }
        const LaserScan a = make_scan(ra, std::vector<bool>(6, true), -2.5, 2.5);
        const LaserScan b = make_scan(rb, std::vector<bool>(6, true), -2.0, 2.8);
        const Pose2D pa{p(gen), p(gen), th(gen)}, pb{p(gen), p(gen), th(gen)};
        OccupancyGrid ab = new_grid(50, 50, 0.1, {}), ba = new_grid(50, 50, 0.1, {});
        integrate_scan(ab, pa, a);
        integrate_scan(ab, pb, b);
        integrate_scan(ba, pb, b);
        integrate_scan(ba, pa, a);
        for (std::size_t i = 0; i < ab.data().size(); ++i) {
            REQUIRE(std::abs(ab.data()[i]) < 4.0);
            REQUIRE(std::abs(ab.data()[i] - ba.data()[i]) <= 1e-12);
        }
    }
}

TEST_CASE("integrate_scan: cells away from every beam keep the prior")
{
    std::mt19937_64 gen(6);
    std::uniform_real_distribution<double> range(0.3, 3.0);
    OccupancyGrid g = new_grid(60, 60, 0.1, {});
    std::vector<double> r;
    for (int i = 0; i < 12; ++i)
        r.push_back(range(gen));
    const LaserScan s = make_scan(r, std::vector<bool>(12, true), -3.0, 2.5);
    const Pose2D pose{3.02, 2.97, 0.4};
    integrate_scan(g, pose, s);
    const auto& geo = g.geometry();
    for (int row = 0; row < geo.height; ++row) {
        for (int col = 0; col < geo.width; ++col) {
            const Point2D c = geo.center_of({col, row});
            double nearest = INFINITY;
            for (std::size_t i = 0; i < s.size(); ++i) {
                const double a = pose.theta + s.params.bearing(i);
                const double len = s.ranges[i] + geo.resolution;
                nearest = std::min(nearest, point_segment(c.x, c.y, pose.x, pose.y, pose.x + len * std::cos(a),
                                                          pose.y + len * std::sin(a)));
            }
            if (nearest > geo.resolution)
                REQUIRE(g.log_odds({col, row}) == 0.0);
        }
    }
}

TEST_CASE("integrate_scan: pose outside the grid")
{
    OccupancyGrid g = new_grid(10, 10, 0.1, {});
    CHECK_THROWS_AS(integrate_scan(g, {-1.0, 0.5, 0.0}, make_scan({1.0, 1.0}, {true, true}, 0.0, 1.0)), DomainError);
}

TEST_CASE("save and load round trip")
{
    const fs::path dir = scratch_dir("roundtrip");
    OccupancyGrid g = new_grid(23, 17, 0.05, {-1.25, 0.5, 0.1});
    std::mt19937_64 gen(1);
    std::uniform_real_distribution<double> l(-4.0, 4.0);
    for (int r = 0; r < 17; ++r)
        for (int c = 0; c < 23; ++c)
            if ((r + c) % 3 != 0)
                g.set_log_odds({c, r}, l(gen));
    save_map(g, dir.string(), "m");
    const LoadedMap loaded = load_map(dir.string(), "m");
    CHECK(loaded.grid.geometry().width == 23);
    CHECK(loaded.grid.geometry().height == 17);
    CHECK(loaded.metadata.resolution == 0.05);
    CHECK(loaded.metadata.origin.x == -1.25);
    CHECK(loaded.metadata.origin.y == 0.5);
    CHECK(loaded.metadata.origin.theta == 0.1);
    CHECK(loaded.metadata.image_name == "m.pgm");
    for (int r = 0; r < 17; ++r)
        for (int c = 0; c < 23; ++c)
            REQUIRE(loaded.grid.classify({c, r}) == g.classify({c, r}));

    const std::string pgm = slurp(dir / "m.pgm");
    const std::string yaml = slurp(dir / "m.yaml");
    save_map(g, dir.string(), "m");
    CHECK(slurp(dir / "m.pgm") == pgm);
    CHECK(slurp(dir / "m.yaml") == yaml);
    CHECK(yaml.find("image") < yaml.find("resolution"));
    CHECK(yaml.find("resolution") < yaml.find("origin"));
    CHECK(yaml.find("origin") < yaml.find("negate"));
    CHECK(yaml.find("negate") < yaml.find("occupied_thresh"));
    CHECK(yaml.find("occupied_thresh") < yaml.find("free_thresh"));
}

TEST_CASE("saved image rows run from the top of the map")
{
    const fs::path dir = scratch_dir("rows");
    OccupancyGrid g = new_grid(3, 2, 1.0, {});
    g.set_state({0, 1}, CellState::Occupied);  // top-left in the image
    g.set_state({2, 0}, CellState::Free);
    save_map(g, dir.string(), "r");
    const std::string pgm = slurp(dir / "r.pgm");
    const std::string pixels = pgm.substr(pgm.size() - 6);
    CHECK(static_cast<unsigned char>(pixels[0]) == kPixelOccupied);
    CHECK(static_cast<unsigned char>(pixels[1]) == kPixelUnknown);
    CHECK(static_cast<unsigned char>(pixels[5]) == kPixelFree);
}

TEST_CASE("all-unknown grid encodes 205")
{
    const fs::path dir = scratch_dir("unknown");
    save_map(new_grid(8, 5, 0.1, {}), dir.string(), "u");
    const std::string pgm = slurp(dir / "u.pgm");
    for (std::size_t i = pgm.size() - 40; i < pgm.size(); ++i)
        CHECK(static_cast<unsigned char>(pgm[i]) == 205);
}

namespace {

void write_handmade(const fs::path& dir, const std::string& pixels, double occ, double fr, int negate = 0)
{
    std::ofstream pgm(dir / "h.pgm", std::ios::binary);
    pgm << "P5\n# hand written\n" << pixels.size() << " 1\n255\n" << pixels;
    std::ofstream yaml(dir / "h.yaml");
    yaml << "image: h.pgm\nresolution: 0.1\norigin: [0.0, 0.0, 0.0]\nnegate: " << negate
         << "\noccupied_thresh: " << occ << "\nfree_thresh: " << fr << "\n";
}

}  // namespace

TEST_CASE("load_map pixel semantics")
{
    const fs::path dir = scratch_dir("pixels");
    write_handmade(dir, std::string{char(254), char(0), char(205), char(100)}, 0.65, 0.196);
    const LoadedMap m = load_map(dir.string(), "h");
    CHECK(m.grid.classify({0, 0}) == CellState::Free);
    CHECK(m.grid.classify({1, 0}) == CellState::Occupied);
    CHECK(m.grid.classify({2, 0}) == CellState::Unknown);
    // occupancy (255 - 100) / 255 = 0.608: between the thresholds
    CHECK(m.grid.classify({3, 0}) == CellState::Unknown);

    write_handmade(dir, std::string{char(254), char(0)}, 0.65, 0.196, 1);
    const LoadedMap neg = load_map(dir.string(), "h");
    CHECK(neg.grid.classify({0, 0}) == CellState::Occupied);
    CHECK(neg.grid.classify({1, 0}) == CellState::Free);
}

TEST_CASE("load_map errors")
{
    const fs::path dir = scratch_dir("errors");
    CHECK_THROWS_AS(load_map(dir.string(), "missing"), IoError);
    write_handmade(dir, "ab", 0.3, 0.5);
    CHECK_THROWS_AS(load_map(dir.string(), "h"), ValidationError);
    write_handmade(dir, "ab", 0.65, 0.196);
    std::ofstream(dir / "h.pgm", std::ios::binary) << "P2\n2 1\n255\n1 2\n";
    CHECK_THROWS_AS(load_map(dir.string(), "h"), ParseError);
}

TEST_CASE("to_costmap")
{
    OccupancyGrid g = new_grid(4, 4, 0.1, {});
    for (int r = 0; r < 4; ++r)
        for (int c = 0; c < 4; ++c)
            g.set_state({c, r}, CellState::Free);
    Costmap cm = to_costmap(g);
    for (auto v : cm.cost)
        CHECK(v == 0);
    g.set_state({1, 2}, CellState::Occupied);
    g.set_state({3, 3}, CellState::Unknown);
    cm = to_costmap(g);
    CHECK(cm.at({1, 2}) == Costmap::kLethal);
    CHECK(cm.at({3, 3}) == Costmap::kUnknown);
    CHECK_FALSE(cm.traversable({3, 3}));
    CHECK(std::count(cm.cost.begin(), cm.cost.end(), Costmap::kLethal) == 1);
    CHECK(cm.geometry.width == 4);
}

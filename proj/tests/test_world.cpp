#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "navsim/errors.hpp"
#include "navsim/world.hpp"

using namespace navsim;

namespace {

// 4 x 4 m interior with a 0.05 m wall ring, centred on the origin.
World room()
{
    return make_world(GridGeometry{82, 82, 0.05, {-2.05, -2.05, 0.0}}, {}, true);
}

World open_field(std::vector<DynamicObstacle> obs = {})
{
    return make_world(GridGeometry{200, 200, 0.05, {-5.0, -5.0, 0.0}}, {}, false, std::move(obs));
}

ScanParams noiseless(int beams = 360)
{
    ScanParams p;
    p.beam_count = beams;
    p.range_noise_sigma = 0.0;
    return p;
}

}  // namespace

TEST_CASE("load_world: empty room has free interior")
{
    const auto doc = YAML::Load("world: {width: 4.0, height: 4.0, resolution: 0.05}");
    const World w = load_world(doc);
    const auto& g = w.geometry();
    CHECK(g.width == 80);
    CHECK(g.height == 80);
    for (int r = 1; r < g.height - 1; ++r)
        for (int c = 1; c < g.width - 1; ++c)
            REQUIRE_FALSE(w.occupied({c, r}));
    CHECK(w.occupied({0, 10}));
    CHECK(w.static_grid->classify({5, 5}) == CellState::Free);
}

TEST_CASE("load_world: wall box is burned into the raster")
{
    const auto doc = YAML::Load(R"(
world:
  width: 4.0
  height: 4.0
  resolution: 0.1
  border: false
  boxes:
    - [1.5, 0.0, 2.5, 4.0]
)");
    const World w = load_world(doc);
    for (int c = 0; c < w.geometry().width; ++c) {
        const double x = w.geometry().center_of({c, 7}).x;
        CHECK(w.occupied({c, 7}) == (x > 1.5 && x < 2.5));
    }
}

TEST_CASE("load_world: validation and schema errors")
{
    CHECK_THROWS_AS(load_world(YAML::Load(R"(
world:
  width: 4.0
  height: 4.0
  dynamic_obstacles:
    - radius: 0.2
      waypoints: [[2.0, 1.0, 1.0], [1.0, 2.0, 2.0]]
)")),
                    ValidationError);
    CHECK_THROWS_AS(load_world(YAML::Load("world: {width: 4.0, height: 4.0, boxes: [[3.0, 3.0, 5.0, 3.5]]}")),
                    ValidationError);
    try {
        load_world(YAML::Load("world: {height: 4.0}"));
        FAIL("expected ConfigError");
    } catch (const ConfigError& e) {
        CHECK(e.key() == "world.width");
    }
    try {
        load_world(YAML::Load("world: {width: 4.0, height: 4.0, colour: red}"));
        FAIL("expected ConfigError");
    } catch (const ConfigError& e) {
        CHECK(e.key() == "world.colour");
    }
    CHECK_THROWS_AS(load_world(YAML::Load("world: {width: 4.0, height: 4.0, dynamic_obstacles: [{radius: -1, "
                                          "waypoints: [[0, 1, 1]]}]}")),
                    ValidationError);
}

TEST_CASE("step_dynamics interpolates and clamps")
{
    DynamicObstacle ob{0.2, {{0.0, {0.0, 0.0}}, {2.0, {2.0, 0.0}}}, {}};
    const World w = open_field({ob});
    CHECK(step_dynamics(w, 1.0).dynamic_obstacles[0].center == Point2D{1.0, 0.0});
    CHECK(step_dynamics(w, 5.0).dynamic_obstacles[0].center == Point2D{2.0, 0.0});
    CHECK(step_dynamics(w, 0.0).dynamic_obstacles[0].center == Point2D{0.0, 0.0});
    const World once = step_dynamics(w, 1.3);
    const World twice = step_dynamics(once, 1.3);
    CHECK(once.dynamic_obstacles[0].center == twice.dynamic_obstacles[0].center);
    CHECK(once.time == twice.time);
}

TEST_CASE("ray_cast: wall two meters ahead")
{
    const World w = room();
    Rng rng(1);
    const ScanParams p = noiseless();
    const LaserScan s = ray_cast(w, {0.0, 0.0, 0.0}, p, 0.0, rng);
    // Beam pointing along +x: bearing closest to 0.
    std::size_t ahead = 0;
    for (std::size_t i = 0; i < s.size(); ++i)
        if (std::abs(p.bearing(i)) < std::abs(p.bearing(ahead)))
            ahead = i;
    const double expected = 2.0 / std::cos(p.bearing(ahead));
    CHECK(std::abs(s.ranges[ahead] - expected) <= 0.025);
    CHECK(s.hit_flags[ahead]);
}

TEST_CASE("ray_cast: noiseless error within half a cell in an axis-aligned room")
{
    const World w = room();
    Rng rng(1);
    std::mt19937_64 gen(5);
    std::uniform_real_distribution<double> pos(-1.0, 1.0), ang(-3.14, 3.14);
    for (int trial = 0; trial < 20; ++trial) {
        const Pose2D pose{pos(gen), pos(gen), ang(gen)};
        const ScanParams p = noiseless(90);
        const LaserScan s = ray_cast(w, pose, p, 0.0, rng);
        for (std::size_t i = 0; i < s.size(); ++i) {
            const double a = pose.theta + p.bearing(i);
            const double c = std::cos(a), sn = std::sin(a);
            const double tx = c > 0 ? (2.0 - pose.x) / c : c < 0 ? (-2.0 - pose.x) / c : INFINITY;
            const double ty = sn > 0 ? (2.0 - pose.y) / sn : sn < 0 ? (-2.0 - pose.y) / sn : INFINITY;
            const double analytic = std::min(tx, ty);
            if (analytic >= p.max_range) {
                REQUIRE(s.ranges[i] == p.max_range);
                REQUIRE_FALSE(s.hit_flags[i]);
            } else {
                REQUIRE(std::abs(s.ranges[i] - analytic) <= 0.025);
            }
        }
    }
}

TEST_CASE("ray_cast: no hit reports max range")
{
    const World w = open_field();
    Rng rng(1);
    const LaserScan s = ray_cast(w, {0.0, 0.0, 0.0}, noiseless(), 0.0, rng);
    for (std::size_t i = 0; i < s.size(); ++i) {
        CHECK(s.ranges[i] == 3.5);
        CHECK_FALSE(s.hit_flags[i]);
    }
}

TEST_CASE("ray_cast: dynamic disc ahead")
{
    const World w = open_field({DynamicObstacle{0.3, {{0.0, {1.0, 0.0}}}, {}}});
    Rng rng(1);
    ScanParams p = noiseless(3);
    p.angle_min = -0.5;
    p.angle_max = 0.5;
    const LaserScan s = ray_cast(w, {0.0, 0.0, 0.0}, p, 0.0, rng);
    CHECK(s.ranges[1] == doctest::Approx(0.7).epsilon(1e-12));
    CHECK(s.hit_flags[1]);
}

TEST_CASE("ray_cast: moving the blocker away never shortens the beam")
{
    Rng rng(1);
    ScanParams p = noiseless(5);
    p.angle_min = -0.2;
    p.angle_max = 0.2;
    double previous = 0.0;
    for (double d = 0.5; d < 3.4; d += 0.137) {
        const World w = open_field({DynamicObstacle{0.2, {{0.0, {d, 0.05}}}, {}}});
        const LaserScan s = ray_cast(w, {0.0, 0.0, 0.0}, p, 0.0, rng);
        CHECK(s.ranges[2] >= previous);
        previous = s.ranges[2];
    }
}

TEST_CASE("ray_cast: noise stays within (0, max_range] and is reproducible")
{
    const World w = room();
    ScanParams p;
    p.range_noise_sigma = 0.5;
    Rng a(42), b(42);
    const LaserScan s1 = ray_cast(w, {1.5, 1.5, 0.3}, p, 0.0, a);
    const LaserScan s2 = ray_cast(w, {1.5, 1.5, 0.3}, p, 0.0, b);
    CHECK(s1.ranges == s2.ranges);
    for (std::size_t i = 0; i < s1.size(); ++i) {
        CHECK(s1.ranges[i] > 0.0);
        CHECK(s1.ranges[i] <= p.max_range);
        if (!s1.hit_flags[i])
            CHECK(s1.ranges[i] == p.max_range);
    }
}

TEST_CASE("ray_cast: pose outside bounds is a domain error")
{
    Rng rng(1);
    CHECK_THROWS_AS(ray_cast(room(), {5.0, 0.0, 0.0}, ScanParams{}, 0.0, rng), DomainError);
}

TEST_CASE("check_collision")
{
    const World w = room();
    CHECK_FALSE(check_collision(w, {0.0, 0.0, 0.0}, 0.2, 0.0));
    CHECK(check_collision(w, {1.9, 0.0, 0.0}, 0.2, 0.0));

    const World d = open_field({DynamicObstacle{0.3, {{0.0, {0.49, 0.0}}}, {}}});
    CHECK(check_collision(d, {0.0, 0.0, 0.0}, 0.2, 0.0));
    const World far = open_field({DynamicObstacle{0.3, {{0.0, {0.51, 0.0}}}, {}}});
    CHECK_FALSE(check_collision(far, {0.0, 0.0, 0.0}, 0.2, 0.0));

    // Depends only on (pose, t).
    const World moving = open_field({DynamicObstacle{0.3, {{0.0, {3.0, 0.0}}, {10.0, {0.0, 0.0}}}, {}}});
    const bool first = check_collision(moving, {0.0, 0.0, 0.0}, 0.2, 9.5);
    check_collision(moving, {0.0, 0.0, 0.0}, 0.2, 1.0);
    CHECK(check_collision(moving, {0.0, 0.0, 0.0}, 0.2, 9.5) == first);
    CHECK(first);
}

TEST_CASE("clearance agrees with collision")
{
    const World w = room();
    CHECK(clearance(w, {0.0, 0.0, 0.0}, 0.2, 0.0) == doctest::Approx(1.8));
    CHECK(clearance(w, {1.9, 0.0, 0.0}, 0.2, 0.0) < 0.0);
}

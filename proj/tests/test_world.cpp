#include <doctest.h>

#include <boost/multiprecision/cpp_bin_float.hpp>
#include <cmath>

#include "agarcl/scenario.hpp"
#include "support.hpp"

using namespace agarcl;
using namespace agarcl::test;

namespace {

double oracle_speed(double mass) {
  using boost::multiprecision::cpp_bin_float_50;
  const cpp_bin_float_50 m(mass);
  return static_cast<double>(cpp_bin_float_50(100) / pow(m, cpp_bin_float_50("0.439")));
}

double clearance(const WorldState& w, Vec2 p, double r) {
  double best = 1e300;
  for (const auto& pl : w.players)
    for (const auto& c : pl.cells)
      if (c.mass > w.config.mass_floor) best = std::min(best, distance(p, c.position) - r - radius_of(c.mass));
  for (const auto& v : w.viruses) best = std::min(best, distance(p, v.position) - r - radius_of(rules::kVirusMass));
  return best;
}

}  // namespace

TEST_CASE("radius_of examples") {
  CHECK(radius_of(25) == 5.0);
  CHECK(radius_of(100) == 10.0);
  CHECK(radius_of(1) == 1.0);
  CHECK_THROWS_AS(radius_of(0), DomainError);
  CHECK_THROWS_AS(radius_of(-3), DomainError);
  // Area additivity under absorption.
  for (double a : {1.0, 14.0, 25.0, 333.3})
    for (double b : {1.0, 100.0, 2500.0})
      CHECK(std::pow(radius_of(a + b), 2) == doctest::Approx(std::pow(radius_of(a), 2) + std::pow(radius_of(b), 2)));
}

TEST_CASE("speed_of examples") {
  CHECK(speed_of(1) == 100.0);
  CHECK(speed_of(25) == doctest::Approx(oracle_speed(25)).epsilon(1e-12));
  CHECK(speed_of(25) == doctest::Approx(24.34).epsilon(1e-3));
  CHECK(speed_of(1000) == doctest::Approx(oracle_speed(1000)).epsilon(1e-12));
  CHECK(speed_of(1000) == doctest::Approx(4.82).epsilon(1e-3));
  CHECK(speed_of(1000) < speed_of(25));
  CHECK_THROWS_AS(speed_of(0), DomainError);
}

TEST_CASE("create_world: full game") {
  const ScenarioSpec& full = find_scenario("full");
  WorldConfig cfg = full.world;
  cfg.seed = 11;
  const WorldState w = create_world(cfg, full.layout());
  CHECK(w.tick == 0);
  CHECK(w.pellets.size() == 500);
  CHECK(w.viruses.size() == 10);
  REQUIRE(w.players.size() == 9);
  for (const auto& p : w.players) {
    REQUIRE(p.cells.size() == 1);
    CHECK(p.cells[0].mass == 25.0);
    CHECK(w.in_arena(p.cells[0].position));
  }
  CHECK(w.players[0].is_learning_agent);
  const double vr = radius_of(rules::kVirusMass);
  for (std::size_t i = 0; i < w.viruses.size(); ++i)
    for (std::size_t j = i + 1; j < w.viruses.size(); ++j)
      CHECK(distance(w.viruses[i].position, w.viruses[j].position) >= 2 * vr);
  for (const auto& p : w.pellets.items())
    for (const auto& v : w.viruses) CHECK(distance(p.position, v.position) > vr + 1.0);
}

TEST_CASE("create_world: empty arena") {
  WorldConfig cfg = bare_config();
  WorldLayout layout;
  layout.players.push_back(PlayerSetup{});
  const WorldState w = create_world(cfg, layout);
  CHECK(w.pellets.size() == 0);
  CHECK(w.viruses.empty());
  REQUIRE(w.players.size() == 1);
  REQUIRE(w.players[0].cells.size() == 1);
  CHECK(w.players[0].cells[0].mass == 25.0);
}

TEST_CASE("create_world: crowded arena is a construction error") {
  WorldConfig cfg = bare_config(40);
  cfg.min_viruses = 10;
  CHECK_THROWS_AS(create_world(cfg, {}), ConstructionError);
}

TEST_CASE("state_hash") {
  WorldConfig cfg = find_scenario("full").world;
  cfg.seed = 42;
  const auto layout = find_scenario("full").layout();
  WorldState a = create_world(cfg, layout);
  const WorldState b = create_world(cfg, layout);
  CHECK(state_hash(a) == state_hash(b));

  WorldState c = b;
  c.pellets.erase(c.pellets.items().front().id.serial);
  CHECK(state_hash(c) != state_hash(b));

  cfg.seed = 43;
  CHECK(state_hash(create_world(cfg, layout)) != state_hash(b));

  // Stepping from one snapshot twice with the same controls.
  WorldState s1 = a, s2 = a;
  for (int t = 0; t < 1000; ++t) {
    std::vector<ControlInput> c1, c2;
    for (const auto& p : s1.players) c1.push_back(bot_decide(BotParams{BotKind::Hungry}, s1, p));
    for (const auto& p : s2.players) c2.push_back(bot_decide(BotParams{BotKind::Hungry}, s2, p));
    step_tick(s1, c1);
    step_tick(s2, c2);
  }
  CHECK(state_hash(s1) == state_hash(s2));
  CHECK(state_hash(s1) != state_hash(a));
}

TEST_CASE("respawn_position: empty arena") {
  WorldState w = make_world(bare_config(100), {});
  for (int i = 0; i < 200; ++i) {
    const Vec2 p = respawn_position(w);
    CHECK(p.x >= 5.0);
    CHECK(p.y >= 5.0);
    CHECK(p.x <= 95.0);
    CHECK(p.y <= 95.0);
  }
  // Fixed generator state, fixed point.
  WorldState a = make_world(bare_config(100), {}), b = a;
  CHECK(respawn_position(a) == respawn_position(b));
}

TEST_CASE("respawn_position: arena mostly covered by one giant cell") {
  for (std::uint64_t seed = 1; seed <= 20; ++seed) {
    WorldConfig cfg = bare_config(200);
    cfg.seed = seed;
    WorldState w = make_world(cfg, {{{100, 100}, 10000.0}});  // radius 100
    // Brute-force: free space exists for a radius-5 circle.
    double best = -1e300;
    for (double x = 5; x <= 195; x += 1)
      for (double y = 5; y <= 195; y += 1) best = std::max(best, clearance(w, {x, y}, 5.0));
    REQUIRE(best >= 0.0);
    const Vec2 p = respawn_position(w);
    CHECK(clearance(w, p, 5.0) >= 0.0);
  }
}

TEST_CASE("respawn_position: no free space falls back to the best candidate") {
  WorldConfig cfg = bare_config(100);
  WorldState w = make_world(cfg, {{{50, 50}, 40000.0}});
  const Vec2 p = respawn_position(w);
  CHECK(w.in_arena(p));
  CHECK(clearance(w, p, 5.0) < 0.0);
}

TEST_CASE("config invariants") {
  WorldConfig c;
  CHECK_NOTHROW(c.validate());
  c.cell_cap = 13;
  CHECK_THROWS_AS(c.validate(), ConfigError);
  c = WorldConfig{};
  c.decay_interval = 70;
  CHECK_THROWS_AS(c.validate(), ConfigError);
  c = WorldConfig{};
  c.pellet_placement = PelletPlacement::SquarePath;
  c.square_path.half_side = 200;
  CHECK_THROWS_AS(c.validate(), ConfigError);
  c = WorldConfig{};
  c.initial_mass = 10;
  CHECK_THROWS_AS(c.validate(), ConfigError);
  CHECK(config_hash(WorldConfig{}) == config_hash(WorldConfig{}));
  WorldConfig d;
  d.max_pellets = 499;
  CHECK(config_hash(d) != config_hash(WorldConfig{}));
}

#include <doctest.h>

#include <cmath>
#include <cstring>
#include <random>

#include <json.hpp>

#include "agarcl/env.hpp"
#include "agarcl/observation.hpp"
#include "oracles.hpp"

using namespace agarcl;
using namespace agarcl::test;

namespace {

ScenarioSpec quiet_spec() {
  ScenarioSpec s;
  s.name = "quiet";
  s.world = bare_config(350);
  s.mode = EpisodeMode::Continual;
  s.agent_position = Vec2{175, 175};
  return s;
}

}  // namespace

TEST_CASE("rasterizer equals the per-pixel oracle on random scenes") {
  std::mt19937_64 g(2718);
  for (int scene = 0; scene < 100; ++scene) {
    const WorldState w = random_scene(g);
    ObservationParams params;
    params.fully_observable = scene % 5 == 0;
    const std::uint32_t n = 16 + static_cast<std::uint32_t>(g() % 49);
    const PixelObservation obs = render_pixel_obs(w, w.players[0], n, params);
    REQUIRE(obs.data.size() == 4u * n * n);
    const auto expect = oracle_raster(w, w.players[0], n, params);
    std::size_t mismatches = 0;
    for (std::size_t i = 0; i < expect.size(); ++i) mismatches += obs.data[i] != expect[i];
    INFO("scene " << scene);
    CHECK(mismatches == 0);
  }
}

TEST_CASE("pixel shape and empty channels") {
  Env env(find_scenario("full"), 1);
  const auto& obs = env.pixel_observation();
  CHECK(obs.resolution == 128);
  CHECK(obs.data.size() == 128u * 128u * 4u);

  Env quiet(quiet_spec(), 1);
  const auto& q = quiet.pixel_observation();
  for (float v : q.plane(Channel::Pellets)) REQUIRE(v == 0.0f);
  for (float v : q.plane(Channel::Viruses)) REQUIRE(v == 0.0f);
  for (float v : q.plane(Channel::Enemies)) REQUIRE(v == 0.0f);
  CHECK(render_pixel_obs(quiet.world(), quiet.agent(), 16).resolution == 16);
  CHECK_THROWS_AS(render_pixel_obs(quiet.world(), quiet.agent(), 15), DomainError);
}

TEST_CASE("enemy disc at the viewport centre") {
  WorldState w = make_world(bare_config(350), {{{175, 175}, 25}, {{175, 175}, 100}});
  const std::uint32_t n = 128;
  const auto obs = render_pixel_obs(w, w.players[0], n);
  const Viewport vp = compute_viewport(w, w.players[0]);
  const double pixel_r = std::round(10.0 * n / vp.side);
  CHECK(obs.at(Channel::Enemies, n / 2, n / 2) == 1.0f);
  std::uint32_t width = 0;
  for (std::uint32_t col = 0; col < n; ++col) width += obs.at(Channel::Enemies, n / 2, col) > 0.0f;
  CHECK(std::abs(static_cast<double>(width) - 2 * pixel_r) <= 1.0);
  // Own cell is only in channel 3.
  CHECK(obs.at(Channel::Self, n / 2, n / 2) == 1.0f);
}

TEST_CASE("compute_viewport") {
  WorldState w = make_world(bare_config(350), {{{175, 175}, 25}});
  CHECK(compute_viewport(w, w.players[0]).side == 60.0);
  CHECK(compute_viewport(w, w.players[0]).center == Vec2{175, 175});

  WorldState two = make_world(bare_config(350), {{{100, 100}, 100}});
  add_cell(two, 0, {180, 100}, 100);
  const Viewport vp = compute_viewport(two, two.players[0]);
  CHECK(vp.side >= 1.5 * 100);
  for (const auto& c : two.players[0].cells) CHECK(vp.contains_circle(c.position, radius_of(c.mass)));

  double last = 0;
  for (double m = 25; m < 20000; m *= 1.3) {
    w.players[0].cells[0].mass = m;
    const double side = compute_viewport(w, w.players[0]).side;
    CHECK(side >= last);
    last = side;
  }

  ObservationParams full;
  full.fully_observable = true;
  CHECK(compute_viewport(w, w.players[0], full).side == 350.0);
}

TEST_CASE("disjointness, role separation and containment over random steps") {
  Env env(find_scenario("full"), 77, {std::nullopt, 0.0, ObsMode::Pixel});
  std::mt19937_64 g(1);
  for (int step = 0; step < 1500; ++step) {
    const Discrete d = static_cast<Discrete>(g() % 3);
    env.step({{2 * unit(g) - 1, 2 * unit(g) - 1}, d});
    const auto& obs = env.pixel_observation();
    const auto p0 = obs.plane(Channel::Pellets), p1 = obs.plane(Channel::Viruses);
    for (std::size_t i = 0; i < p0.size(); ++i) REQUIRE(!(p0[i] > 0 && p1[i] > 0));
    const Viewport vp = env.viewport();
    for (const auto& c : env.agent().cells) {
      const double r = radius_of(c.mass);
      const Vec2 lo = vp.lower(), hi = vp.upper();
      REQUIRE(c.position.x - r > lo.x);
      REQUIRE(c.position.x + r < hi.x);
      REQUIRE(c.position.y - r > lo.y);
      REQUIRE(c.position.y + r < hi.y);
    }
    if (step % 100 == 0) {
      // Full-intensity self pixels belong to own cells; enemy pixels to enemies.
      const auto expect = oracle_raster(env.world(), env.agent(), obs.resolution, env.spec().observation);
      REQUIRE(std::equal(expect.begin(), expect.end(), obs.data.begin()));
    }
  }
}

TEST_CASE("encode_symbolic") {
  Env env(find_scenario("full"), 3);
  const auto& s = env.symbolic_observation();
  CHECK(s.arena_width == 350);
  CHECK(s.arena_height == 350);
  CHECK(s.elapsed_ticks == 0);
  CHECK(s.score == 25);
  CHECK_FALSE(s.can_split);
  CHECK_FALSE(s.can_eject);

  WorldState w = make_world(bare_config(350), {{{175, 175}, 25}});
  add_pellet(w, {180, 180});
  add_pellet(w, {170, 190});
  add_pellet(w, {150, 150});
  add_pellet(w, {100, 100});  // outside the 60-wide view
  add_virus(w, {200, 175});
  add_virus(w, {300, 300});
  const auto obs = encode_symbolic(w, w.players[0]);
  // Brute force: entities whose disc meets the view square.
  const Viewport vp = compute_viewport(w, w.players[0]);
  std::size_t expect = 0;
  for (const auto& p : w.pellets.items()) expect += vp.intersects_circle(p.position, 1.0);
  for (const auto& v : w.viruses) expect += vp.intersects_circle(v.position, 10.0);
  expect += 1;  // own cell
  CHECK(expect == 5);
  CHECK(obs.overlap.size() == expect);
  for (std::size_t i = 1; i < obs.overlap.size(); ++i) CHECK(obs.overlap[i - 1].serial < obs.overlap[i].serial);

  // Every visible pellet lights channel 0 (pellet radius is >= 1 pixel here).
  const auto px = render_pixel_obs(w, w.players[0], 128);
  for (const auto& e : obs.overlap) {
    if (e.kind != EntityKind::Pellet) continue;
    const double scale = vp.side / 128;
    const int col = static_cast<int>((e.position.x - vp.lower().x) / scale);
    const int row = static_cast<int>((e.position.y - vp.lower().y) / scale);
    bool lit = false;
    for (int dr = -1; dr <= 1; ++dr)
      for (int dc = -1; dc <= 1; ++dc) {
        const int r = row + dr, c = col + dc;
        if (r >= 0 && c >= 0 && r < 128 && c < 128) lit |= px.at(Channel::Pellets, r, c) > 0;
      }
    CHECK(lit);
  }

  for (int i = 0; i < 13; ++i) add_cell(w, 0, {160.0 + i, 175}, 100);
  const auto capped = encode_symbolic(w, w.players[0]);
  CHECK_FALSE(capped.can_split);
  CHECK(capped.can_eject);
}

TEST_CASE("symbolic JSON schema") {
  Env env(find_scenario("full"), 3);
  const auto j = nlohmann::json::parse(symbolic_to_json(env.symbolic_observation()));
  CHECK(j["schema"] == "agarcl.symbolic/1");
  CHECK(j["global"]["map_size"][0] == 350.0);
  CHECK(j["global"]["elapsed_ticks"] == 0);
  CHECK(j["player"]["score"] == 25.0);
  const auto& overlap = j["player"]["overlap"];
  REQUIRE(overlap.is_array());
  bool own = false;
  for (const auto& e : overlap) {
    CHECK(e.contains("kind"));
    CHECK(e.contains("x"));
    CHECK(e.contains("vx"));
    if (e["kind"] == "cell") CHECK(e.contains("owner"));
    own |= e["own"].get<bool>();
  }
  CHECK(own);
}

TEST_CASE("pixel bytes are little-endian float32, plane-major") {
  Env env(find_scenario("full"), 3);
  const auto& obs = env.pixel_observation();
  const auto bytes = pixel_to_bytes(obs);
  REQUIRE(bytes.size() == obs.data.size() * 4);
  float f;
  std::memcpy(&f, bytes.data() + 4 * (3 * 128 * 128 + 64 * 128 + 64), 4);
  CHECK(f == obs.at(Channel::Self, 64, 64));
}

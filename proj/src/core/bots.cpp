#include "agarcl/bots.hpp"

#include <limits>
#include <optional>

#include "agarcl/rules.hpp"

namespace agarcl {
namespace {

struct Target {
  Vec2 position;
  double dist_sq;
  std::uint64_t serial;
};

bool better(const Target& a, const std::optional<Target>& b) {
  return !b || a.dist_sq < b->dist_sq || (a.dist_sq == b->dist_sq && a.serial < b->serial);
}

double largest_cell_mass(const PlayerState& player) {
  double m = 0.0;
  for (const Cell& c : player.cells) m = std::max(m, c.mass);
  return m;
}

}  // namespace

Vec2 player_centroid(const PlayerState& player) {
  Vec2 sum;
  double total = 0.0;
  for (const Cell& c : player.cells) {
    sum += c.position * c.mass;
    total += c.mass;
  }
  return total > 0.0 ? sum * (1.0 / total) : Vec2{};
}

ControlInput bot_decide(const BotParams& params, const WorldState& world, const PlayerState& self) {
  ControlInput out;
  out.player = self.index;
  const Vec2 centroid = player_centroid(self);
  out.cursor_world = centroid;
  if (params.kind == BotKind::Stationary || self.cells.empty()) return out;

  const double own = largest_cell_mass(self);
  const bool shy = params.kind == BotKind::HungryShy || params.kind == BotKind::AggressiveShy;
  const bool aggressive = params.kind == BotKind::Aggressive || params.kind == BotKind::AggressiveShy;

  if (shy || aggressive) {
    std::optional<Target> threat, prey;
    const double shy_sq = params.shy_radius * params.shy_radius;
    const double hunt_sq = params.hunt_radius * params.hunt_radius;
    for (const PlayerState& other : world.players) {
      if (other.index == self.index) continue;
      for (const Cell& c : other.cells) {
        const Target t{c.position, distance_sq(c.position, centroid), c.id.serial};
        if (shy && c.mass >= rules::kEatRatio * own && t.dist_sq <= shy_sq && better(t, threat)) threat = t;
        if (aggressive && own >= rules::kEatRatio * c.mass && t.dist_sq <= hunt_sq && better(t, prey)) prey = t;
      }
    }
    if (threat) {
      const Vec2 away = normalized_or(centroid - threat->position, Vec2{1.0, 0.0});
      out.cursor_world = centroid + away * params.shy_radius;
      return out;
    }
    if (prey) {
      out.cursor_world = prey->position;
      return out;
    }
  }

  if (auto pellet = world.pellets.nearest(centroid)) out.cursor_world = pellet->position;
  return out;
}

}  // namespace agarcl

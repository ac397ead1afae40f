#pragma once

#include <initializer_list>
#include <vector>

#include "agarcl/bots.hpp"
#include "agarcl/dynamics.hpp"
#include "agarcl/rules.hpp"
#include "agarcl/world.hpp"

namespace agarcl::test {

/// Empty arena: no pellets, no viruses, no decay, nothing regenerates.
inline WorldConfig bare_config(double size = 200.0) {
  WorldConfig c;
  c.arena_width = size;
  c.arena_height = size;
  c.max_pellets = 0;
  c.min_viruses = 0;
  c.mass_decay_enabled = false;
  c.virus_regen_enabled = false;
  c.noise_std = 0.0;
  return c;
}

struct Spawn {
  Vec2 position;
  double mass = 25.0;
};

/// One single-cell player per entry, in order, at fixed positions.
inline WorldState make_world(const WorldConfig& config, std::initializer_list<Spawn> players) {
  WorldLayout layout;
  for (const Spawn& s : players) {
    PlayerSetup setup;
    setup.spawn_mass = config.initial_mass;  // respawns come back at the initial mass
    setup.fixed_position = s.position;
    layout.players.push_back(setup);
  }
  WorldState w = create_world(config, layout);
  auto it = players.begin();
  for (auto& p : w.players) p.cells.front().mass = (it++)->mass;
  return w;
}

inline Cell& add_cell(WorldState& w, PlayerIndex player, Vec2 position, double mass) {
  return spawn_cell(w, w.players[player], position, mass);
}

inline void add_pellet(WorldState& w, Vec2 position) {
  w.pellets.insert(Pellet{w.next_id(EntityKind::Pellet), position});
}

inline Virus& add_virus(WorldState& w, Vec2 position) {
  w.viruses.push_back(Virus{w.next_id(EntityKind::Virus), position, {}, 0, {1.0, 0.0}});
  return w.viruses.back();
}

/// Every player holds position.
inline std::vector<ControlInput> hold(const WorldState& w) {
  std::vector<ControlInput> out;
  for (const auto& p : w.players) out.push_back({p.index, player_centroid(p), Discrete::None});
  return out;
}

inline double total_cell_mass(const WorldState& w) {
  double m = 0.0;
  for (const auto& p : w.players) m += p.total_mass();
  return m;
}

}  // namespace agarcl::test

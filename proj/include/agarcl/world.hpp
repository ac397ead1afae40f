#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "agarcl/pellet_store.hpp"
#include "agarcl/rng.hpp"
#include "agarcl/types.hpp"

namespace agarcl {

/// How one player enters a new world.
struct PlayerSetup {
  bool is_learning_agent = false;
  std::optional<BotParams> bot;
  double spawn_mass = 25.0;
  std::optional<Vec2> fixed_position;
};

/// Extra static entities a scenario may require (e.g. a wall of viruses).
struct WorldLayout {
  std::vector<PlayerSetup> players;
  std::vector<Vec2> fixed_viruses;
};

struct WorldState {
  WorldConfig config;
  Tick tick = 0;
  std::vector<PlayerState> players;
  PelletStore pellets;
  std::vector<Virus> viruses;
  std::vector<EjectedBlob> blobs;
  Philox placement_rng;
  Philox respawn_rng;
  std::uint64_t id_counter = 0;

  EntityId next_id(EntityKind kind) { return {kind, ++id_counter}; }
  bool in_arena(Vec2 p) const {
    return p.x >= 0.0 && p.y >= 0.0 && p.x <= config.arena_width && p.y <= config.arena_height;
  }
  Vec2 clamp_to_arena(Vec2 p) const;
};

/// r = sqrt(mass). Throws DomainError for mass <= 0.
double radius_of(double mass);
/// speed = 100 / mass^0.439 world-units per second. Throws DomainError for mass <= 0.
double speed_of(double mass);

/// Builds a world at tick 0. Viruses are placed first (non-overlapping), then
/// pellets (clear of viruses), then players (clear of larger cells).
WorldState create_world(const WorldConfig& config, const WorldLayout& layout);

/// 64-bit digest of the canonical serialization (config, tick, players, then
/// all entities in serial order, doubles as exact bit patterns, RNG state).
std::uint64_t state_hash(const WorldState& world);

/// Digest of a config alone; used to detect scenario drift in recordings.
std::uint64_t config_hash(const WorldConfig& config);

/// Uniform spawn point for a mass-`mass` cell that does not overlap any cell
/// heavier than the floor or any virus; after rules::kSpawnRetries rejections
/// the candidate with the largest clearance wins. Draws from respawn_rng.
Vec2 respawn_position(WorldState& world, double mass = 25.0);

/// Random pellet position for the configured placement rule. Draws from
/// placement_rng; retries to keep pellets clear of viruses.
Vec2 pellet_position(WorldState& world);

/// Adds one cell to the player at `position`.
Cell& spawn_cell(WorldState& world, PlayerState& player, Vec2 position, double mass);

}  // namespace agarcl

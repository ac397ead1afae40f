#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "agarcl/world.hpp"

namespace agarcl {

enum class Discrete : std::uint8_t { None = 0, Split = 1, Eject = 2 };

struct ControlInput {
  PlayerIndex player = 0;
  Vec2 cursor_world;
  Discrete discrete = Discrete::None;
};

constexpr PlayerIndex kNoOwner = 0xFFFFFFFFu;

struct EatEvent {
  Tick tick;
  EntityId eater;
  PlayerIndex eater_owner;
  EntityId eaten;
  PlayerIndex eaten_owner;  // kNoOwner for pellets, blobs and viruses
  double mass;
};

struct DeathEvent {
  Tick tick;
  PlayerIndex player;
  double death_mass;
};

struct RespawnEvent {
  Tick tick;
  PlayerIndex player;
  EntityId cell;
  double mass;
};

struct SplitEvent {
  Tick tick;
  PlayerIndex player;
  EntityId parent;
  EntityId child;
  double child_mass;
};

struct EjectEvent {
  Tick tick;
  PlayerIndex player;
  EntityId cell;
  EntityId blob;
  double cost;
};

struct MergeEvent {
  Tick tick;
  PlayerIndex player;
  EntityId kept;
  EntityId absorbed;
  double absorbed_mass;
};

struct VirusPopEvent {
  Tick tick;
  PlayerIndex player;
  EntityId cell;
  EntityId virus;
  std::uint32_t fragments;
};

struct VirusFeedEvent {
  Tick tick;
  EntityId virus;
  EntityId blob;
  std::uint32_t feed_count;
};

struct VirusSpawnEvent {
  Tick tick;
  EntityId parent;  // serial 0 when spawned by regeneration
  EntityId spawned;
};

struct DecayEvent {
  Tick tick;
  PlayerIndex player;
  double loss;
};

struct TickEvents {
  std::vector<EatEvent> eats;
  std::vector<DeathEvent> deaths;
  std::vector<RespawnEvent> respawns;
  std::vector<SplitEvent> splits;
  std::vector<EjectEvent> ejects;
  std::vector<MergeEvent> merges;
  std::vector<VirusPopEvent> virus_pops;
  std::vector<VirusFeedEvent> virus_feeds;
  std::vector<VirusSpawnEvent> virus_spawns;
  std::vector<DecayEvent> decays;

  void append(const TickEvents& other);
  void clear();
  /// Net mass change of `player` implied by the events (gains minus losses).
  double mass_delta(PlayerIndex player) const;
  /// Digest of the event lists, for trajectory logging.
  std::uint64_t digest() const;
};

/// Advances the world one tick. Stages run in a fixed order:
/// discrete actions, movement, virus feeding, consumption, virus
/// collisions, merging, decay, regeneration, death/respawn.
/// Throws ProtocolError (before mutating anything) unless `controls` holds
/// exactly one entry per player.
TickEvents step_tick(WorldState& world, std::span<const ControlInput> controls);

// Individual stages, exposed for testing. They assume world.tick has already
// been advanced for the current tick.
void do_split(WorldState& world, PlayerState& player, Vec2 cursor_world, TickEvents& events);
void do_eject(WorldState& world, PlayerState& player, Vec2 cursor_world, TickEvents& events);
void apply_movement(WorldState& world, std::span<const ControlInput> controls);
void feed_viruses(WorldState& world, TickEvents& events);
void resolve_consumption(WorldState& world, TickEvents& events);
void virus_interaction(WorldState& world, TickEvents& events);
void merge_pass(WorldState& world, TickEvents& events);
void apply_decay(WorldState& world, TickEvents& events);
void regeneration_pass(WorldState& world, TickEvents& events);
void death_respawn_pass(WorldState& world, TickEvents& events);

/// Removes every pellet lying under `virus` (pellets never overlap viruses).
void crush_pellets_under(WorldState& world, const Virus& virus);

}  // namespace agarcl

#pragma once

#include <cmath>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace agarcl {

class AgarError : public std::runtime_error {
  using runtime_error::runtime_error;
};

/// Invalid argument to a pure function (non-positive mass and the like).
class DomainError : public AgarError {
  using AgarError::AgarError;
};

/// Scenario/config problems: unknown preset, invariant violation, bad file.
class ConfigError : public AgarError {
  using AgarError::AgarError;
};

/// World cannot be built (arena too crowded after bounded retries).
class ConstructionError : public AgarError {
  using AgarError::AgarError;
};

/// Caller violated a usage contract (step after termination, bad control list).
class ProtocolError : public AgarError {
  using AgarError::AgarError;
};

using Tick = std::uint64_t;
using PlayerIndex = std::uint32_t;

constexpr double kTickRate = 60.0;

struct Vec2 {
  double x = 0.0;
  double y = 0.0;

  constexpr Vec2 operator+(Vec2 o) const { return {x + o.x, y + o.y}; }
  constexpr Vec2 operator-(Vec2 o) const { return {x - o.x, y - o.y}; }
  constexpr Vec2 operator*(double s) const { return {x * s, y * s}; }
  constexpr Vec2& operator+=(Vec2 o) {
    x += o.x;
    y += o.y;
    return *this;
  }
  constexpr bool operator==(const Vec2&) const = default;

  constexpr double dot(Vec2 o) const { return x * o.x + y * o.y; }
  constexpr double norm_sq() const { return x * x + y * y; }
  double norm() const { return std::sqrt(norm_sq()); }
};

inline double distance_sq(Vec2 a, Vec2 b) { return (a - b).norm_sq(); }
inline double distance(Vec2 a, Vec2 b) { return std::sqrt(distance_sq(a, b)); }

/// Unit vector along `v`, or `fallback` when `v` is (numerically) zero.
inline Vec2 normalized_or(Vec2 v, Vec2 fallback) {
  const double n = v.norm();
  if (!(n > 1e-12)) return fallback;
  return v * (1.0 / n);
}

enum class EntityKind : std::uint8_t { Cell = 0, Pellet = 1, Virus = 2, Blob = 3 };

struct EntityId {
  EntityKind kind = EntityKind::Cell;
  std::uint64_t serial = 0;

  constexpr bool operator==(const EntityId&) const = default;
};

struct Cell {
  EntityId id;
  PlayerIndex owner = 0;
  double mass = 0.0;
  Vec2 position;
  Vec2 velocity;       // displacement applied on the last tick
  Vec2 split_impulse;  // world-units/tick, decays each tick
  Tick merge_ready_tick = 0;
  Tick created_tick = 0;
};

struct Pellet {
  EntityId id;
  Vec2 position;
};

struct Virus {
  EntityId id;
  Vec2 position;
  Vec2 velocity;
  std::uint32_t feed_count = 0;
  Vec2 last_feed_direction{1.0, 0.0};
};

struct EjectedBlob {
  EntityId id;
  Vec2 position;
  Vec2 velocity;
  double mass = 0.0;
  PlayerIndex source_owner = 0;
};

enum class BotKind : std::uint8_t { Hungry, HungryShy, Aggressive, AggressiveShy, Stationary };

std::string to_string(BotKind kind);
std::optional<BotKind> bot_kind_from_string(const std::string& name);

struct BotParams {
  BotKind kind = BotKind::Hungry;
  double hunt_radius = 100.0;
  double shy_radius = 80.0;

  bool operator==(const BotParams&) const = default;
};

struct PlayerState {
  PlayerIndex index = 0;
  std::vector<Cell> cells;
  std::uint32_t virus_eat_streak = 0;
  Tick last_virus_eat_tick = 0;
  double decay_multiplier = 1.0;
  std::uint64_t lifetime_deaths = 0;
  bool is_learning_agent = false;
  std::optional<BotParams> bot;
  double spawn_mass = 25.0;

  double total_mass() const {
    double m = 0.0;
    for (const auto& c : cells) m += c.mass;
    return m;
  }
  bool alive() const { return !cells.empty(); }
};

enum class PelletPlacement : std::uint8_t { Uniform, SquarePath };

/// Pellets live on the outline of a square centred in the arena.
struct SquarePathParams {
  double half_side = 60.0;
  double band_width = 6.0;

  bool operator==(const SquarePathParams&) const = default;
};

struct WorldConfig {
  double arena_width = 350.0;
  double arena_height = 350.0;
  std::uint32_t max_pellets = 500;
  std::uint32_t pellet_regen_interval = 600;
  std::uint32_t min_viruses = 10;
  double decay_rate = 0.002;  // fraction per second
  std::uint32_t decay_interval = 60;
  double initial_mass = 25.0;
  double mass_floor = 25.0;
  std::uint32_t cell_cap = 14;
  std::uint32_t virus_split_feeds = 7;
  PelletPlacement pellet_placement = PelletPlacement::Uniform;
  SquarePathParams square_path;
  bool mass_decay_enabled = true;
  bool virus_regen_enabled = true;
  double noise_std = 1.0;
  std::uint32_t obs_resolution = 128;
  std::uint64_t seed = 0;

  /// Throws ConfigError listing every violated invariant.
  void validate() const;

  bool operator==(const WorldConfig&) const = default;
};

}  // namespace agarcl

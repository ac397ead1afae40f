#pragma once

#include <cstdint>
#include <optional>

#include "agarcl/dynamics.hpp"
#include "agarcl/observation.hpp"
#include "agarcl/scenario.hpp"

namespace agarcl {

enum class ObsMode : std::uint8_t { Pixel = 0, Symbolic = 1 };

/// One agent decision: cursor in [-1,1]^2 (+y up) plus an optional discrete action.
struct ActionCommand {
  Vec2 cursor;
  Discrete discrete = Discrete::None;
};

struct StepInfo {
  double mass = 0.0;        // agent total after the block
  std::uint32_t deaths = 0;  // agent deaths inside the block
  Tick tick = 0;
  std::uint64_t events_digest = 0;
};

struct StepResult {
  double reward = 0.0;
  bool terminated = false;
  bool truncated = false;
  StepInfo info;
};

struct EnvOptions {
  std::optional<std::uint32_t> frame_skip;  // scenario value when unset
  std::optional<double> noise_std;          // scenario world.noise_std when unset
  ObsMode obs_mode = ObsMode::Pixel;
};

/// Seed of the k-th episode of an env constructed with `seed`.
inline std::uint64_t episode_seed(std::uint64_t seed, std::uint64_t episode) { return seed + episode; }

/// Single-agent view of a world: the learning agent is player 0, every other
/// player is a bot that re-decides each tick.
class Env {
 public:
  Env(ScenarioSpec spec, std::uint64_t seed, EnvOptions options = {});

  /// Runs frame_skip ticks under one decision. Throws ProtocolError for a
  /// malformed action or when an episodic run is over and needs reset().
  StepResult step(const ActionCommand& action);

  /// Rebuilds the world with the next episode seed. Episodic scenarios only.
  void reset();

  /// Observation of the current world, rendered on first access after a change.
  const PixelObservation& pixel_observation();
  const SymbolicObservation& symbolic_observation();

  /// The action a bot of the given kind would take in the agent's place,
  /// expressed in cursor space. Does not touch any RNG.
  ActionCommand bot_action(const BotParams& params) const;

  const ScenarioSpec& spec() const { return spec_; }
  const WorldState& world() const { return world_; }
  const PlayerState& agent() const { return world_.players[kAgent]; }
  double agent_mass() const { return agent().total_mass(); }
  Viewport viewport() const { return compute_viewport(world_, agent(), spec_.observation); }
  /// Events of every tick of the last step, in order.
  const TickEvents& block_events() const { return block_events_; }

  std::uint32_t frame_skip() const { return frame_skip_; }
  double noise_std() const { return noise_std_; }
  ObsMode obs_mode() const { return obs_mode_; }
  std::uint64_t seed() const { return seed_; }
  std::uint64_t episode() const { return episode_; }
  std::uint64_t steps() const { return steps_; }
  bool episode_over() const { return over_; }
  std::uint64_t state_hash() const;

  static constexpr PlayerIndex kAgent = 0;

 private:
  void build();

  ScenarioSpec spec_;
  std::uint64_t seed_;
  std::uint32_t frame_skip_;
  double noise_std_;
  ObsMode obs_mode_;
  std::uint64_t episode_ = 0;
  std::uint64_t steps_ = 0;
  bool over_ = false;
  WorldState world_;
  Philox noise_rng_;
  TickEvents block_events_;
  std::vector<ControlInput> controls_;
  PixelObservation pixel_;
  SymbolicObservation symbolic_;
  bool pixel_fresh_ = false;
  bool symbolic_fresh_ = false;
};

/// Validates a cursor/discrete pair; throws ProtocolError.
void validate_action(const ActionCommand& action);

}  // namespace agarcl

#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "agarcl/observation.hpp"
#include "agarcl/types.hpp"
#include "agarcl/world.hpp"

namespace agarcl {

constexpr int kScenarioSchemaVersion = 1;

enum class EpisodeMode : std::uint8_t { Episodic, Continual };

/// What ends an episodic run early.
enum class Termination : std::uint8_t {
  None,        // only max_steps
  AgentEaten,  // the learning agent loses its last cell
  AnyEaten,    // any player loses its last cell
};

/// How a death inside a decision block is reflected in the reward.
enum class RespawnReward : std::uint8_t {
  MassDifference,         // plain m_t - m_{t-1}; the respawn contributes initial - death mass
  DeathMassLessInitial,   // the respawn contributes death mass - initial mass instead
};

struct BotGroup {
  BotParams params;
  std::uint32_t count = 1;
  double spawn_mass = 25.0;
  std::optional<Vec2> position;

  bool operator==(const BotGroup&) const = default;
};

struct VirusLine {
  Vec2 from;
  Vec2 to;
  std::uint32_t count = 0;

  bool operator==(const VirusLine&) const = default;
};

struct ScenarioSpec {
  std::string name;
  std::string description;
  WorldConfig world;
  EpisodeMode mode = EpisodeMode::Continual;
  std::uint32_t max_steps = 0;
  Termination termination = Termination::None;
  std::optional<double> truncate_at_mass;
  std::optional<Vec2> agent_position;  // random when unset
  std::vector<BotGroup> bots;
  std::optional<VirusLine> virus_line;
  ObservationParams observation;
  std::uint32_t frame_skip = 4;
  RespawnReward respawn_reward = RespawnReward::MassDifference;

  /// Throws ConfigError on contract violations (world config, mode fields).
  void validate() const;
  /// Players (agent first, then bots in group order) and fixed viruses.
  WorldLayout layout() const;
  std::uint32_t bot_count() const;
  std::optional<double> stationary_bot_mass() const;

  bool operator==(const ScenarioSpec&) const = default;
};

/// Parses one scenario document (a mapping), or a catalog document with a
/// `scenarios:` list. `extends: <name>` copies an earlier entry first.
std::vector<ScenarioSpec> parse_scenarios_yaml(const std::string& text);
ScenarioSpec load_scenario_file(const std::string& path);
/// Fully expanded, versioned YAML for one scenario; parses back to an equal spec.
std::string scenario_to_yaml(const ScenarioSpec& spec);
void save_scenario_file(const ScenarioSpec& spec, const std::string& path);

/// Shipped presets, parsed once from the embedded catalog.
const std::vector<ScenarioSpec>& scenario_library();
/// Throws ConfigError for unknown names.
const ScenarioSpec& find_scenario(const std::string& name);
/// Raw text of the embedded catalog.
std::string_view catalog_source();

/// Every problem found, prefixed with the preset name and field. Empty when
/// all presets satisfy the config invariants and the reference parameter table.
std::vector<std::string> validate_catalog(std::span<const ScenarioSpec> presets);
std::vector<std::string> validate_catalog();

std::string to_string(EpisodeMode mode);
std::string to_string(Termination t);
std::string to_string(RespawnReward r);

}  // namespace agarcl

#include "agarcl/scenario.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <map>
#include <set>
#include <sstream>

#include <yaml-cpp/yaml.h>

namespace agarcl {

// Defined in the generated catalog source.
extern const char* const kEmbeddedCatalog;

namespace {

[[noreturn]] void fail(const std::string& where, const std::string& what) {
  throw ConfigError(where + ": " + what);
}

void check_keys(const YAML::Node& node, const std::string& where, std::initializer_list<const char*> allowed) {
  if (!node.IsMap()) fail(where, "expected a mapping");
  const std::set<std::string> ok(allowed.begin(), allowed.end());
  for (const auto& kv : node) {
    const auto key = kv.first.as<std::string>();
    if (!ok.contains(key)) fail(where, "unknown key '" + key + "'");
  }
}

template <typename T>
void read(const YAML::Node& node, const char* key, T& out, const std::string& where) {
  if (const YAML::Node v = node[key]) {
    try {
      out = v.as<T>();
    } catch (const YAML::Exception& e) {
      fail(where + "." + key, std::string("bad value: ") + e.what());
    }
  }
}

Vec2 read_vec(const YAML::Node& v, const std::string& where) {
  if (!v.IsSequence() || v.size() != 2) fail(where, "expected [x, y]");
  return {v[0].as<double>(), v[1].as<double>()};
}

PelletPlacement placement_from(const std::string& s, const std::string& where) {
  if (s == "uniform") return PelletPlacement::Uniform;
  if (s == "square_path") return PelletPlacement::SquarePath;
  fail(where, "unknown pellet_placement '" + s + "'");
}

std::string to_string(PelletPlacement p) { return p == PelletPlacement::SquarePath ? "square_path" : "uniform"; }

void apply_world(const YAML::Node& node, WorldConfig& w, const std::string& where) {
  check_keys(node, where,
             {"arena_width", "arena_height", "max_pellets", "pellet_regen_interval", "min_viruses", "decay_rate",
              "decay_interval", "initial_mass", "mass_floor", "cell_cap", "virus_split_feeds", "pellet_placement",
              "square_path", "mass_decay_enabled", "virus_regen_enabled", "noise_std", "obs_resolution", "seed"});
  read(node, "arena_width", w.arena_width, where);
  read(node, "arena_height", w.arena_height, where);
  read(node, "max_pellets", w.max_pellets, where);
  read(node, "pellet_regen_interval", w.pellet_regen_interval, where);
  read(node, "min_viruses", w.min_viruses, where);
  read(node, "decay_rate", w.decay_rate, where);
  read(node, "decay_interval", w.decay_interval, where);
  read(node, "initial_mass", w.initial_mass, where);
  read(node, "mass_floor", w.mass_floor, where);
  read(node, "cell_cap", w.cell_cap, where);
  read(node, "virus_split_feeds", w.virus_split_feeds, where);
  if (node["pellet_placement"])
    w.pellet_placement = placement_from(node["pellet_placement"].as<std::string>(), where);
  if (const YAML::Node sp = node["square_path"]) {
    check_keys(sp, where + ".square_path", {"half_side", "band_width"});
    read(sp, "half_side", w.square_path.half_side, where);
    read(sp, "band_width", w.square_path.band_width, where);
  }
  read(node, "mass_decay_enabled", w.mass_decay_enabled, where);
  read(node, "virus_regen_enabled", w.virus_regen_enabled, where);
  read(node, "noise_std", w.noise_std, where);
  read(node, "obs_resolution", w.obs_resolution, where);
  read(node, "seed", w.seed, where);
}

void apply_mode(const YAML::Node& node, ScenarioSpec& s, const std::string& where) {
  check_keys(node, where, {"kind", "max_steps", "termination", "truncate_at_mass"});
  s.max_steps = 0;
  s.termination = Termination::None;
  s.truncate_at_mass.reset();
  const auto kind = node["kind"] ? node["kind"].as<std::string>() : std::string("continual");
  if (kind == "episodic") {
    s.mode = EpisodeMode::Episodic;
  } else if (kind == "continual") {
    s.mode = EpisodeMode::Continual;
  } else {
    fail(where, "unknown mode kind '" + kind + "'");
  }
  read(node, "max_steps", s.max_steps, where);
  if (node["termination"]) {
    const auto t = node["termination"].as<std::string>();
    if (t == "none") s.termination = Termination::None;
    else if (t == "agent_eaten") s.termination = Termination::AgentEaten;
    else if (t == "any_eaten") s.termination = Termination::AnyEaten;
    else fail(where, "unknown termination '" + t + "'");
  }
  if (node["truncate_at_mass"]) s.truncate_at_mass = node["truncate_at_mass"].as<double>();
}

BotGroup parse_bot(const YAML::Node& node, const std::string& where) {
  check_keys(node, where, {"kind", "count", "mass", "hunt_radius", "shy_radius", "position"});
  BotGroup g;
  const auto kind = node["kind"] ? node["kind"].as<std::string>() : std::string();
  auto parsed = bot_kind_from_string(kind);
  if (!parsed) fail(where, "unknown bot kind '" + kind + "'");
  g.params.kind = *parsed;
  read(node, "count", g.count, where);
  read(node, "mass", g.spawn_mass, where);
  read(node, "hunt_radius", g.params.hunt_radius, where);
  read(node, "shy_radius", g.params.shy_radius, where);
  if (node["position"]) g.position = read_vec(node["position"], where + ".position");
  return g;
}

ScenarioSpec parse_one(const YAML::Node& node, const std::map<std::string, ScenarioSpec>& earlier) {
  std::string where = "scenario";
  if (node["name"]) where += " '" + node["name"].as<std::string>() + "'";
  check_keys(node, where,
             {"schema_version", "name", "extends", "description", "mode", "world", "agent", "bots", "viruses",
              "observation", "env"});
  ScenarioSpec s;
  if (const YAML::Node base = node["extends"]) {
    auto it = earlier.find(base.as<std::string>());
    if (it == earlier.end()) fail(where, "extends unknown scenario '" + base.as<std::string>() + "'");
    s = it->second;
  }
  if (!node["name"]) fail(where, "missing name");
  s.name = node["name"].as<std::string>();
  read(node, "description", s.description, where);
  if (node["mode"]) apply_mode(node["mode"], s, where + ".mode");
  if (node["world"]) apply_world(node["world"], s.world, where + ".world");
  if (const YAML::Node agent = node["agent"]) {
    check_keys(agent, where + ".agent", {"position"});
    const YAML::Node pos = agent["position"];
    if (pos && pos.IsScalar() && pos.as<std::string>() == "random") s.agent_position.reset();
    else if (pos) s.agent_position = read_vec(pos, where + ".agent.position");
  }
  if (const YAML::Node bots = node["bots"]) {
    if (!bots.IsSequence()) fail(where + ".bots", "expected a list");
    s.bots.clear();
    for (std::size_t i = 0; i < bots.size(); ++i)
      s.bots.push_back(parse_bot(bots[i], where + ".bots[" + std::to_string(i) + "]"));
  }
  if (const YAML::Node viruses = node["viruses"]) {
    check_keys(viruses, where + ".viruses", {"line"});
    if (const YAML::Node line = viruses["line"]) {
      check_keys(line, where + ".viruses.line", {"from", "to", "count"});
      VirusLine vl;
      vl.from = read_vec(line["from"], where + ".viruses.line.from");
      vl.to = read_vec(line["to"], where + ".viruses.line.to");
      read(line, "count", vl.count, where);
      s.virus_line = vl;
    } else {
      s.virus_line.reset();
    }
  }
  if (const YAML::Node obs = node["observation"]) {
    check_keys(obs, where + ".observation",
               {"fully_observable", "base_view", "fov_margin", "grid_pitch", "gridline_intensity"});
    read(obs, "fully_observable", s.observation.fully_observable, where);
    read(obs, "base_view", s.observation.base_view, where);
    read(obs, "fov_margin", s.observation.fov_margin, where);
    read(obs, "grid_pitch", s.observation.grid_pitch, where);
    read(obs, "gridline_intensity", s.observation.gridline_intensity, where);
  }
  if (const YAML::Node env = node["env"]) {
    check_keys(env, where + ".env", {"frame_skip", "respawn_reward"});
    read(env, "frame_skip", s.frame_skip, where);
    if (env["respawn_reward"]) {
      const auto r = env["respawn_reward"].as<std::string>();
      if (r == "mass_difference") s.respawn_reward = RespawnReward::MassDifference;
      else if (r == "death_mass_less_initial") s.respawn_reward = RespawnReward::DeathMassLessInitial;
      else fail(where + ".env", "unknown respawn_reward '" + r + "'");
    }
  }
  return s;
}

void check_schema(const YAML::Node& root) {
  if (const YAML::Node v = root["schema_version"]) {
    if (v.as<int>() != kScenarioSchemaVersion)
      throw ConfigError("unsupported scenario schema_version " + v.as<std::string>() + " (expected " +
                        std::to_string(kScenarioSchemaVersion) + ")");
  } else {
    throw ConfigError("scenario document lacks schema_version");
  }
}

}  // namespace

std::string to_string(EpisodeMode mode) { return mode == EpisodeMode::Episodic ? "episodic" : "continual"; }

std::string to_string(Termination t) {
  switch (t) {
    case Termination::None: return "none";
    case Termination::AgentEaten: return "agent_eaten";
    case Termination::AnyEaten: return "any_eaten";
  }
  return "none";
}

std::string to_string(RespawnReward r) {
  return r == RespawnReward::MassDifference ? "mass_difference" : "death_mass_less_initial";
}

void ScenarioSpec::validate() const {
  world.validate();
  if (name.empty()) throw ConfigError("scenario name is empty");
  if (mode == EpisodeMode::Episodic && max_steps == 0)
    throw ConfigError(name + ": episodic scenarios need max_steps > 0");
  if (mode == EpisodeMode::Continual && (max_steps != 0 || termination != Termination::None))
    throw ConfigError(name + ": continual scenarios define no max_steps or termination");
  if (frame_skip == 0) throw ConfigError(name + ": frame_skip must be >= 1");
  for (const auto& g : bots) {
    if (!(g.params.hunt_radius > 0.0) || !(g.params.shy_radius > 0.0))
      throw ConfigError(name + ": bot radii must be positive");
    if (!(g.spawn_mass >= world.mass_floor)) throw ConfigError(name + ": bot mass below the mass floor");
  }
}

std::uint32_t ScenarioSpec::bot_count() const {
  std::uint32_t n = 0;
  for (const auto& g : bots) n += g.count;
  return n;
}

std::optional<double> ScenarioSpec::stationary_bot_mass() const {
  for (const auto& g : bots)
    if (g.params.kind == BotKind::Stationary) return g.spawn_mass;
  return std::nullopt;
}

WorldLayout ScenarioSpec::layout() const {
  WorldLayout layout;
  PlayerSetup agent;
  agent.is_learning_agent = true;
  agent.spawn_mass = world.initial_mass;
  agent.fixed_position = agent_position;
  layout.players.push_back(agent);
  for (const auto& g : bots) {
    for (std::uint32_t i = 0; i < g.count; ++i) {
      PlayerSetup bot;
      bot.bot = g.params;
      bot.spawn_mass = g.spawn_mass;
      bot.fixed_position = g.position;
      layout.players.push_back(bot);
    }
  }
  if (virus_line && virus_line->count > 0) {
    const auto n = virus_line->count;
    for (std::uint32_t i = 0; i < n; ++i) {
      const double t = n == 1 ? 0.5 : static_cast<double>(i) / static_cast<double>(n - 1);
      layout.fixed_viruses.push_back(virus_line->from + (virus_line->to - virus_line->from) * t);
    }
  }
  return layout;
}

std::vector<ScenarioSpec> parse_scenarios_yaml(const std::string& text) {
  YAML::Node root;
  try {
    root = YAML::Load(text);
  } catch (const YAML::Exception& e) {
    throw ConfigError(std::string("scenario YAML: ") + e.what());
  }
  if (!root.IsMap()) throw ConfigError("scenario YAML: top level must be a mapping");
  check_schema(root);
  std::vector<ScenarioSpec> out;
  std::map<std::string, ScenarioSpec> by_name;
  try {
    if (const YAML::Node list = root["scenarios"]) {
      for (const auto& entry : list) {
        ScenarioSpec s = parse_one(entry, by_name);
        if (by_name.contains(s.name)) throw ConfigError("duplicate scenario name '" + s.name + "'");
        by_name[s.name] = s;
        out.push_back(std::move(s));
      }
    } else {
      out.push_back(parse_one(root, by_name));
    }
  } catch (const YAML::Exception& e) {
    throw ConfigError(std::string("scenario YAML: ") + e.what());
  }
  for (const auto& s : out) s.validate();
  return out;
}

ScenarioSpec load_scenario_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open scenario file '" + path + "'");
  std::stringstream buf;
  buf << in.rdbuf();
  auto specs = parse_scenarios_yaml(buf.str());
  if (specs.size() != 1) throw ConfigError("scenario file '" + path + "' must define exactly one scenario");
  return specs.front();
}

std::string scenario_to_yaml(const ScenarioSpec& s) {
  YAML::Emitter out;
  out.SetDoublePrecision(17);
  out << YAML::BeginMap;
  out << YAML::Key << "schema_version" << YAML::Value << kScenarioSchemaVersion;
  out << YAML::Key << "name" << YAML::Value << s.name;
  out << YAML::Key << "description" << YAML::Value << s.description;

  out << YAML::Key << "mode" << YAML::Value << YAML::BeginMap;
  out << YAML::Key << "kind" << YAML::Value << to_string(s.mode);
  if (s.mode == EpisodeMode::Episodic) {
    out << YAML::Key << "max_steps" << YAML::Value << s.max_steps;
    out << YAML::Key << "termination" << YAML::Value << to_string(s.termination);
  }
  if (s.truncate_at_mass) out << YAML::Key << "truncate_at_mass" << YAML::Value << *s.truncate_at_mass;
  out << YAML::EndMap;

  const WorldConfig& w = s.world;
  out << YAML::Key << "world" << YAML::Value << YAML::BeginMap;
  out << YAML::Key << "arena_width" << YAML::Value << w.arena_width;
  out << YAML::Key << "arena_height" << YAML::Value << w.arena_height;
  out << YAML::Key << "max_pellets" << YAML::Value << w.max_pellets;
  out << YAML::Key << "pellet_regen_interval" << YAML::Value << w.pellet_regen_interval;
  out << YAML::Key << "min_viruses" << YAML::Value << w.min_viruses;
  out << YAML::Key << "decay_rate" << YAML::Value << w.decay_rate;
  out << YAML::Key << "decay_interval" << YAML::Value << w.decay_interval;
  out << YAML::Key << "initial_mass" << YAML::Value << w.initial_mass;
  out << YAML::Key << "mass_floor" << YAML::Value << w.mass_floor;
  out << YAML::Key << "cell_cap" << YAML::Value << w.cell_cap;
  out << YAML::Key << "virus_split_feeds" << YAML::Value << w.virus_split_feeds;
  out << YAML::Key << "pellet_placement" << YAML::Value << to_string(w.pellet_placement);
  out << YAML::Key << "square_path" << YAML::Value << YAML::Flow << YAML::BeginMap;
  out << YAML::Key << "half_side" << YAML::Value << w.square_path.half_side;
  out << YAML::Key << "band_width" << YAML::Value << w.square_path.band_width;
  out << YAML::EndMap;
  out << YAML::Key << "mass_decay_enabled" << YAML::Value << w.mass_decay_enabled;
  out << YAML::Key << "virus_regen_enabled" << YAML::Value << w.virus_regen_enabled;
  out << YAML::Key << "noise_std" << YAML::Value << w.noise_std;
  out << YAML::Key << "obs_resolution" << YAML::Value << w.obs_resolution;
  out << YAML::Key << "seed" << YAML::Value << w.seed;
  out << YAML::EndMap;

  out << YAML::Key << "agent" << YAML::Value << YAML::BeginMap << YAML::Key << "position" << YAML::Value;
  if (s.agent_position) out << YAML::Flow << YAML::BeginSeq << s.agent_position->x << s.agent_position->y << YAML::EndSeq;
  else out << "random";
  out << YAML::EndMap;

  out << YAML::Key << "bots" << YAML::Value << YAML::BeginSeq;
  for (const auto& g : s.bots) {
    out << YAML::Flow << YAML::BeginMap;
    out << YAML::Key << "kind" << YAML::Value << to_string(g.params.kind);
    out << YAML::Key << "count" << YAML::Value << g.count;
    out << YAML::Key << "mass" << YAML::Value << g.spawn_mass;
    out << YAML::Key << "hunt_radius" << YAML::Value << g.params.hunt_radius;
    out << YAML::Key << "shy_radius" << YAML::Value << g.params.shy_radius;
    if (g.position)
      out << YAML::Key << "position" << YAML::Value << YAML::Flow << YAML::BeginSeq << g.position->x
          << g.position->y << YAML::EndSeq;
    out << YAML::EndMap;
  }
  out << YAML::EndSeq;

  if (s.virus_line) {
    out << YAML::Key << "viruses" << YAML::Value << YAML::BeginMap << YAML::Key << "line" << YAML::Value
        << YAML::Flow << YAML::BeginMap;
    out << YAML::Key << "from" << YAML::Value << YAML::Flow << YAML::BeginSeq << s.virus_line->from.x
        << s.virus_line->from.y << YAML::EndSeq;
    out << YAML::Key << "to" << YAML::Value << YAML::Flow << YAML::BeginSeq << s.virus_line->to.x
        << s.virus_line->to.y << YAML::EndSeq;
    out << YAML::Key << "count" << YAML::Value << s.virus_line->count;
    out << YAML::EndMap << YAML::EndMap;
  }

  out << YAML::Key << "observation" << YAML::Value << YAML::BeginMap;
  out << YAML::Key << "fully_observable" << YAML::Value << s.observation.fully_observable;
  out << YAML::Key << "base_view" << YAML::Value << s.observation.base_view;
  out << YAML::Key << "fov_margin" << YAML::Value << s.observation.fov_margin;
  out << YAML::Key << "grid_pitch" << YAML::Value << s.observation.grid_pitch;
  // Shortest text that reads back to the same float (0.2, not 0.200000003).
  char gi[32];
  const auto res = std::to_chars(gi, gi + sizeof gi, s.observation.gridline_intensity);
  out << YAML::Key << "gridline_intensity" << YAML::Value << std::string(gi, res.ptr);
  out << YAML::EndMap;

  out << YAML::Key << "env" << YAML::Value << YAML::BeginMap;
  out << YAML::Key << "frame_skip" << YAML::Value << s.frame_skip;
  out << YAML::Key << "respawn_reward" << YAML::Value << to_string(s.respawn_reward);
  out << YAML::EndMap;

  out << YAML::EndMap;
  return std::string(out.c_str()) + "\n";
}

void save_scenario_file(const ScenarioSpec& spec, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw ConfigError("cannot write scenario file '" + path + "'");
  out << scenario_to_yaml(spec);
  if (!out) throw ConfigError("failed writing scenario file '" + path + "'");
}

std::string_view catalog_source() { return kEmbeddedCatalog; }

const std::vector<ScenarioSpec>& scenario_library() {
  static const std::vector<ScenarioSpec> library = parse_scenarios_yaml(std::string(kEmbeddedCatalog));
  return library;
}

const ScenarioSpec& find_scenario(const std::string& name) {
  for (const auto& s : scenario_library())
    if (s.name == name) return s;
  throw ConfigError("unknown scenario '" + name + "'");
}

namespace {

/// Reference values each preset must carry. Sources are listed per row in
/// docs/scenarios.md.
struct Expected {
  const char* name;
  EpisodeMode mode;
  std::uint32_t max_steps;
  Termination termination;
  double arena;
  std::uint32_t pellets;
  PelletPlacement placement;
  bool decay;
  double agent_mass;
  std::uint32_t bots;
  std::uint32_t viruses;
  std::uint32_t regen;
};

constexpr auto E = EpisodeMode::Episodic;
constexpr auto C = EpisodeMode::Continual;
constexpr auto SQ = PelletPlacement::SquarePath;
constexpr auto UN = PelletPlacement::Uniform;
constexpr auto TN = Termination::None;
constexpr auto TA = Termination::AgentEaten;
constexpr auto TY = Termination::AnyEaten;

const Expected kReference[] = {
    {"mini-1", E, 500, TN, 350, 500, SQ, false, 25, 0, 0, 600},
    {"mini-2", E, 500, TN, 350, 500, SQ, true, 25, 0, 0, 600},
    {"mini-3", E, 500, TN, 350, 500, SQ, true, 1000, 0, 0, 600},
    {"mini-4", E, 3000, TN, 350, 500, UN, false, 25, 0, 0, 600},
    {"mini-5", E, 3000, TN, 350, 500, UN, true, 25, 0, 0, 600},
    {"mini-6", E, 3000, TN, 350, 500, UN, true, 1000, 0, 0, 600},
    {"mini-1c", C, 0, TN, 350, 500, SQ, false, 25, 0, 0, 600},
    {"mini-2c", C, 0, TN, 350, 500, SQ, true, 25, 0, 0, 600},
    {"mini-3c", C, 0, TN, 350, 500, SQ, true, 1000, 0, 0, 600},
    {"mini-4c", C, 0, TN, 350, 500, UN, false, 25, 0, 0, 600},
    {"mini-5c", C, 0, TN, 350, 500, UN, true, 25, 0, 0, 600},
    {"mini-6c", C, 0, TN, 350, 500, UN, true, 1000, 0, 0, 600},
    {"mini-4c-sparse", C, 0, TN, 350, 250, UN, false, 25, 0, 0, 600},
    {"mini-5c-sparse", C, 0, TN, 350, 250, UN, true, 25, 0, 0, 600},
    {"mini-6c-sparse", C, 0, TN, 350, 250, UN, true, 1000, 0, 0, 600},
    {"mini-7-large-dense", E, 10000, TA, 350, 500, UN, true, 25, 1, 0, 600},
    {"mini-7-small-sparse", E, 10000, TA, 200, 250, UN, true, 25, 1, 0, 600},
    {"mini-7-small-sparse-200", E, 10000, TA, 200, 200, UN, true, 25, 1, 0, 600},
    {"mini-8-large-dense", E, 10000, TA, 350, 500, UN, true, 25, 1, 0, 600},
    {"mini-8-small-sparse", E, 10000, TA, 200, 250, UN, true, 25, 1, 0, 600},
    {"mini-8-small-sparse-200", E, 10000, TA, 200, 200, UN, true, 25, 1, 0, 600},
    {"mini-9", E, 1000, TY, 350, 0, UN, false, 3000, 1, 0, 600},
    {"full", C, 0, TN, 350, 500, UN, true, 25, 8, 10, 600},
    {"full-easy", C, 0, TN, 350, 1024, UN, true, 25, 8, 10, 120},
    {"full-128", C, 0, TN, 128, 500, UN, true, 25, 8, 10, 600},
};

}  // namespace

std::vector<std::string> validate_catalog(std::span<const ScenarioSpec> presets) {
  std::vector<std::string> errors;
  auto report = [&](const std::string& name, const std::string& field, const std::string& what) {
    errors.push_back(name + ": " + field + ": " + what);
  };
  std::set<std::string> names;
  for (const auto& s : presets) {
    if (!names.insert(s.name).second) report(s.name, "name", "duplicate");
    try {
      s.validate();
    } catch (const ConfigError& e) {
      report(s.name, "invariants", e.what());
    }
  }
  for (const Expected& ref : kReference) {
    auto it = std::find_if(presets.begin(), presets.end(), [&](const ScenarioSpec& s) { return s.name == ref.name; });
    if (it == presets.end()) {
      report(ref.name, "name", "preset missing");
      continue;
    }
    const ScenarioSpec& s = *it;
    auto expect = [&](bool ok, const char* field, const std::string& detail) {
      if (!ok) report(s.name, field, detail);
    };
    expect(s.mode == ref.mode, "mode", "expected " + to_string(ref.mode));
    expect(s.max_steps == ref.max_steps, "max_steps", "expected " + std::to_string(ref.max_steps));
    expect(s.termination == ref.termination, "termination", "expected " + to_string(ref.termination));
    expect(s.world.arena_width == ref.arena && s.world.arena_height == ref.arena, "arena",
           "expected " + std::to_string(static_cast<int>(ref.arena)) + " square");
    expect(s.world.max_pellets == ref.pellets, "max_pellets", "expected " + std::to_string(ref.pellets));
    expect(s.world.pellet_placement == ref.placement, "pellet_placement", "expected " + to_string(ref.placement));
    expect(s.world.mass_decay_enabled == ref.decay, "mass_decay_enabled", ref.decay ? "expected on" : "expected off");
    expect(s.world.initial_mass == ref.agent_mass, "initial_mass", "expected " + std::to_string(ref.agent_mass));
    expect(s.bot_count() == ref.bots, "bots", "expected " + std::to_string(ref.bots));
    expect(s.world.min_viruses == ref.viruses, "min_viruses", "expected " + std::to_string(ref.viruses));
    expect(s.world.pellet_regen_interval == ref.regen, "pellet_regen_interval",
           "expected " + std::to_string(ref.regen));
    expect(s.world.cell_cap == 14, "cell_cap", "expected 14");
    expect(s.world.virus_split_feeds == 7, "virus_split_feeds", "expected 7");
    expect(s.world.decay_rate == 0.002, "decay_rate", "expected 0.002");
    expect(s.world.decay_interval == 60, "decay_interval", "expected 60");
    expect(s.world.mass_floor == 25.0, "mass_floor", "expected 25");
    expect(s.frame_skip == 4, "frame_skip", "expected 4");
  }
  if (auto it = std::find_if(presets.begin(), presets.end(), [](const auto& s) { return s.name == "mini-9"; });
      it != presets.end()) {
    const auto bot_mass = it->stationary_bot_mass();
    if (!bot_mass || *bot_mass != 5000.0) report("mini-9", "bots", "expected a stationary bot of mass 5000");
    if (!it->observation.fully_observable) report("mini-9", "observation", "expected fully observable");
    if (it->world.virus_regen_enabled) report("mini-9", "virus_regen_enabled", "expected off");
    if (!it->virus_line || it->virus_line->count == 0) report("mini-9", "viruses", "expected a virus line");
  }
  for (const char* name : {"mini-7-large-dense", "mini-7-small-sparse", "mini-7-small-sparse-200"}) {
    auto it = std::find_if(presets.begin(), presets.end(), [&](const auto& s) { return s.name == name; });
    if (it != presets.end() && (it->bots.size() != 1 || it->bots[0].params.kind != BotKind::Hungry))
      report(name, "bots", "expected one hungry bot");
  }
  for (const char* name : {"mini-8-large-dense", "mini-8-small-sparse", "mini-8-small-sparse-200"}) {
    auto it = std::find_if(presets.begin(), presets.end(), [&](const auto& s) { return s.name == name; });
    if (it != presets.end() && (it->bots.size() != 1 || it->bots[0].params.kind != BotKind::Aggressive))
      report(name, "bots", "expected one aggressive bot");
  }
  if (auto it = std::find_if(presets.begin(), presets.end(), [](const auto& s) { return s.name == "mini-4c"; });
      it != presets.end() && !it->truncate_at_mass) {
    report("mini-4c", "truncate_at_mass", "expected a max-mass truncation threshold");
  }
  return errors;
}

std::vector<std::string> validate_catalog() { return validate_catalog(scenario_library()); }

}  // namespace agarcl

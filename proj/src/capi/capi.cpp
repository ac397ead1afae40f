#include "agarcl/agarcl.h"

#include <cstring>
#include <memory>
#include <new>
#include <string>

#include "agarcl/env.hpp"

struct agarcl_env {
  agarcl::Env env;
};

namespace {

thread_local std::string g_last_error;

agarcl_status set_error(agarcl_status status, std::string message) {
  g_last_error = std::move(message);
  return status;
}

/// Maps exceptions escaping `fn` onto status codes.
template <typename Fn>
agarcl_status guarded(Fn&& fn) {
  try {
    return fn();
  } catch (const agarcl::ConfigError& e) {
    return set_error(AGARCL_E_CONFIG, e.what());
  } catch (const agarcl::ProtocolError& e) {
    return set_error(AGARCL_E_PROTOCOL, e.what());
  } catch (const agarcl::ConstructionError& e) {
    return set_error(AGARCL_E_CONSTRUCTION, e.what());
  } catch (const agarcl::DomainError& e) {
    return set_error(AGARCL_E_DOMAIN, e.what());
  } catch (const std::bad_alloc&) {
    return set_error(AGARCL_E_INTERNAL, "out of memory");
  } catch (const std::exception& e) {
    return set_error(AGARCL_E_INTERNAL, e.what());
  } catch (...) {
    return set_error(AGARCL_E_INTERNAL, "unknown error");
  }
}

agarcl_status write_string(const std::string& s, char* buf, size_t cap, size_t* len) {
  if (len) *len = s.size();
  if (!buf || cap <= s.size())
    return set_error(AGARCL_E_BUFFER_TOO_SMALL, "buffer needs " + std::to_string(s.size() + 1) + " bytes");
  std::memcpy(buf, s.data(), s.size());
  buf[s.size()] = '\0';
  return AGARCL_OK;
}

agarcl::EnvOptions to_options(const agarcl_env_options* o) {
  agarcl::EnvOptions opts;
  if (!o) return opts;
  if (o->frame_skip != 0) opts.frame_skip = o->frame_skip;
  if (o->has_noise_std) opts.noise_std = o->noise_std;
  if (o->obs_mode != AGARCL_OBS_PIXEL && o->obs_mode != AGARCL_OBS_SYMBOLIC)
    throw agarcl::ConfigError("obs_mode must be 0 (pixel) or 1 (symbolic)");
  opts.obs_mode = static_cast<agarcl::ObsMode>(o->obs_mode);
  return opts;
}

agarcl_status create(const agarcl::ScenarioSpec& spec, uint64_t seed, const agarcl_env_options* options,
                     agarcl_env** out) {
  *out = new agarcl_env{agarcl::Env(spec, seed, to_options(options))};
  return AGARCL_OK;
}

#define REQUIRE(ptr)                                                                       \
  do {                                                                                     \
    if (!(ptr)) return set_error(AGARCL_E_INVALID_ARGUMENT, #ptr " must not be null");     \
  } while (0)

}  // namespace

extern "C" {

uint32_t agarcl_abi_version(void) { return AGARCL_ABI_VERSION; }

const char* agarcl_version(void) { return "1.0.0"; }

const char* agarcl_last_error(void) { return g_last_error.c_str(); }

const char* agarcl_status_name(agarcl_status status) {
  switch (status) {
    case AGARCL_OK: return "ok";
    case AGARCL_E_INVALID_ARGUMENT: return "invalid_argument";
    case AGARCL_E_CONFIG: return "config";
    case AGARCL_E_PROTOCOL: return "protocol";
    case AGARCL_E_CONSTRUCTION: return "construction";
    case AGARCL_E_DOMAIN: return "domain";
    case AGARCL_E_IO: return "io";
    case AGARCL_E_BUFFER_TOO_SMALL: return "buffer_too_small";
    case AGARCL_E_INTERNAL: return "internal";
  }
  return "unknown";
}

agarcl_status agarcl_env_create(const char* scenario, uint64_t seed, const agarcl_env_options* options,
                                agarcl_env** out) {
  REQUIRE(scenario);
  REQUIRE(out);
  *out = nullptr;
  return guarded([&] { return create(agarcl::find_scenario(scenario), seed, options, out); });
}

agarcl_status agarcl_env_create_from_yaml(const char* yaml, uint64_t seed, const agarcl_env_options* options,
                                          agarcl_env** out) {
  REQUIRE(yaml);
  REQUIRE(out);
  *out = nullptr;
  return guarded([&] {
    const auto specs = agarcl::parse_scenarios_yaml(yaml);
    if (specs.size() != 1) throw agarcl::ConfigError("YAML must define exactly one scenario");
    return create(specs.front(), seed, options, out);
  });
}

agarcl_status agarcl_env_create_from_file(const char* path, uint64_t seed, const agarcl_env_options* options,
                                          agarcl_env** out) {
  REQUIRE(path);
  REQUIRE(out);
  *out = nullptr;
  return guarded([&] { return create(agarcl::load_scenario_file(path), seed, options, out); });
}

void agarcl_env_destroy(agarcl_env* env) { delete env; }

agarcl_status agarcl_env_reset(agarcl_env* env) {
  REQUIRE(env);
  return guarded([&] {
    env->env.reset();
    return AGARCL_OK;
  });
}

agarcl_status agarcl_env_step(agarcl_env* env, double cursor_x, double cursor_y, uint8_t discrete,
                              agarcl_step_result* out) {
  REQUIRE(env);
  REQUIRE(out);
  if (discrete > AGARCL_EJECT) return set_error(AGARCL_E_INVALID_ARGUMENT, "discrete must be 0, 1 or 2");
  return guarded([&] {
    const auto r = env->env.step({{cursor_x, cursor_y}, static_cast<agarcl::Discrete>(discrete)});
    out->reward = r.reward;
    out->terminated = r.terminated ? 1 : 0;
    out->truncated = r.truncated ? 1 : 0;
    out->mass = r.info.mass;
    out->deaths = r.info.deaths;
    out->tick = r.info.tick;
    out->events_digest = r.info.events_digest;
    return AGARCL_OK;
  });
}

agarcl_status agarcl_env_pixels(agarcl_env* env, const float** data, uint32_t* resolution) {
  REQUIRE(env);
  REQUIRE(data);
  return guarded([&] {
    const auto& obs = env->env.pixel_observation();
    *data = obs.data.data();
    if (resolution) *resolution = obs.resolution;
    return AGARCL_OK;
  });
}

agarcl_status agarcl_env_symbolic_json(agarcl_env* env, char* buf, size_t cap, size_t* len) {
  REQUIRE(env);
  return guarded([&] { return write_string(agarcl::symbolic_to_json(env->env.symbolic_observation()), buf, cap, len); });
}

agarcl_status agarcl_env_info_get(const agarcl_env* env, agarcl_env_info* out) {
  REQUIRE(env);
  REQUIRE(out);
  const agarcl::Env& e = env->env;
  out->tick = e.world().tick;
  out->steps = e.steps();
  out->episode = e.episode();
  out->seed = e.seed();
  out->mass = e.agent_mass();
  out->noise_std = e.noise_std();
  out->frame_skip = e.frame_skip();
  out->obs_resolution = e.spec().world.obs_resolution;
  out->obs_mode = static_cast<int32_t>(e.obs_mode());
  out->episodic = e.spec().mode == agarcl::EpisodeMode::Episodic ? 1 : 0;
  out->max_steps = e.spec().max_steps;
  out->episode_over = e.episode_over() ? 1 : 0;
  return AGARCL_OK;
}

agarcl_status agarcl_env_state_hash(const agarcl_env* env, uint64_t* out) {
  REQUIRE(env);
  REQUIRE(out);
  *out = env->env.state_hash();
  return AGARCL_OK;
}

agarcl_status agarcl_env_config_digest(const agarcl_env* env, uint64_t* out) {
  REQUIRE(env);
  REQUIRE(out);
  *out = agarcl::config_hash(env->env.world().config);
  return AGARCL_OK;
}

agarcl_status agarcl_env_scenario_yaml(const agarcl_env* env, char* buf, size_t cap, size_t* len) {
  REQUIRE(env);
  return guarded([&] {
    // The stored spec carries the current episode's seed; export the base seed.
    agarcl::ScenarioSpec spec = env->env.spec();
    spec.world.seed = env->env.seed();
    return write_string(agarcl::scenario_to_yaml(spec), buf, cap, len);
  });
}

agarcl_status agarcl_env_scenario_name(const agarcl_env* env, char* buf, size_t cap, size_t* len) {
  REQUIRE(env);
  return write_string(env->env.spec().name, buf, cap, len);
}

agarcl_status agarcl_env_bot_action(const agarcl_env* env, const char* kind, double* cursor_x, double* cursor_y,
                                    uint8_t* discrete) {
  REQUIRE(env);
  REQUIRE(kind);
  REQUIRE(cursor_x);
  REQUIRE(cursor_y);
  const auto parsed = agarcl::bot_kind_from_string(kind);
  if (!parsed) return set_error(AGARCL_E_INVALID_ARGUMENT, std::string("unknown bot kind '") + kind + "'");
  return guarded([&] {
    agarcl::BotParams params;
    params.kind = *parsed;
    const auto a = env->env.bot_action(params);
    *cursor_x = a.cursor.x;
    *cursor_y = a.cursor.y;
    if (discrete) *discrete = static_cast<uint8_t>(a.discrete);
    return AGARCL_OK;
  });
}

size_t agarcl_catalog_count(void) {
  try {
    return agarcl::scenario_library().size();
  } catch (...) {
    return 0;
  }
}

agarcl_status agarcl_catalog_name(size_t index, const char** name) {
  REQUIRE(name);
  return guarded([&] {
    const auto& lib = agarcl::scenario_library();
    if (index >= lib.size()) return set_error(AGARCL_E_INVALID_ARGUMENT, "catalog index out of range");
    *name = lib[index].name.c_str();
    return AGARCL_OK;
  });
}

agarcl_status agarcl_catalog_scenario_yaml(const char* name, char* buf, size_t cap, size_t* len) {
  REQUIRE(name);
  return guarded([&] { return write_string(agarcl::scenario_to_yaml(agarcl::find_scenario(name)), buf, cap, len); });
}

agarcl_status agarcl_validate_catalog(char* buf, size_t cap, size_t* len) {
  return guarded([&] {
    std::string text;
    for (const auto& e : agarcl::validate_catalog()) text += e + "\n";
    const agarcl_status st = write_string(text, buf, cap, len);
    if (st != AGARCL_OK) return st;
    if (!text.empty()) return set_error(AGARCL_E_CONFIG, "catalog has " + text);
    return AGARCL_OK;
  });
}

}  // extern "C"

#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>

#include "agarcl/agarcl.h"

namespace agarcl::harness {

/// Failure reported through the C API, with its status code kept.
class ApiError : public std::runtime_error {
 public:
  ApiError(agarcl_status status, const std::string& what) : std::runtime_error(what), status_(status) {}
  agarcl_status status() const { return status_; }

 private:
  agarcl_status status_;
};

inline void check(agarcl_status st, const char* what) {
  if (st != AGARCL_OK)
    throw ApiError(st, std::string(what) + ": " + agarcl_status_name(st) + ": " + agarcl_last_error());
}

/// Reads one of the C API's sized-string outputs into a std::string.
template <typename Fn>
std::string read_string(Fn&& fn, const char* what) {
  size_t len = 0;
  agarcl_status st = fn(nullptr, 0, &len);
  if (st != AGARCL_OK && st != AGARCL_E_BUFFER_TOO_SMALL) check(st, what);
  std::string out(len + 1, '\0');
  check(fn(out.data(), out.size(), &len), what);
  out.resize(len);
  return out;
}

struct Action {
  double x = 0.0;
  double y = 0.0;
  std::uint8_t discrete = AGARCL_NONE;
};

/// Owning wrapper around an agarcl_env handle.
class CEnv {
 public:
  struct Source {
    std::string scenario;       // catalog name, used when yaml is empty
    std::string scenario_yaml;  // full scenario document
  };

  CEnv(const Source& source, std::uint64_t seed, const agarcl_env_options& options) {
    agarcl_env* env = nullptr;
    if (!source.scenario_yaml.empty()) {
      check(agarcl_env_create_from_yaml(source.scenario_yaml.c_str(), seed, &options, &env), "create env");
    } else {
      check(agarcl_env_create(source.scenario.c_str(), seed, &options, &env), "create env");
    }
    env_ = env;
  }
  CEnv(const CEnv&) = delete;
  CEnv& operator=(const CEnv&) = delete;
  CEnv(CEnv&& o) noexcept : env_(o.env_) { o.env_ = nullptr; }
  ~CEnv() { agarcl_env_destroy(env_); }

  agarcl_step_result step(const Action& a) {
    agarcl_step_result r{};
    check(agarcl_env_step(env_, a.x, a.y, a.discrete, &r), "step");
    return r;
  }
  void reset() { check(agarcl_env_reset(env_), "reset"); }

  std::span<const float> pixels() {
    const float* data = nullptr;
    std::uint32_t n = 0;
    check(agarcl_env_pixels(env_, &data, &n), "pixels");
    return {data, static_cast<std::size_t>(n) * n * 4};
  }
  std::string symbolic_json() {
    return read_string([&](char* b, size_t c, size_t* l) { return agarcl_env_symbolic_json(env_, b, c, l); },
                       "symbolic");
  }
  std::string scenario_yaml() const {
    return read_string([&](char* b, size_t c, size_t* l) { return agarcl_env_scenario_yaml(env_, b, c, l); },
                       "scenario yaml");
  }
  std::string scenario_name() const {
    return read_string([&](char* b, size_t c, size_t* l) { return agarcl_env_scenario_name(env_, b, c, l); },
                       "scenario name");
  }
  agarcl_env_info info() const {
    agarcl_env_info i{};
    check(agarcl_env_info_get(env_, &i), "info");
    return i;
  }
  std::uint64_t state_hash() const {
    std::uint64_t h = 0;
    check(agarcl_env_state_hash(env_, &h), "state hash");
    return h;
  }
  std::uint64_t config_digest() const {
    std::uint64_t h = 0;
    check(agarcl_env_config_digest(env_, &h), "config digest");
    return h;
  }
  Action bot_action(const std::string& kind) const {
    Action a;
    check(agarcl_env_bot_action(env_, kind.c_str(), &a.x, &a.y, &a.discrete), "bot action");
    return a;
  }

 private:
  agarcl_env* env_ = nullptr;
};

inline agarcl_env_options make_options(std::uint32_t frame_skip, std::optional<double> noise_std, int obs_mode) {
  agarcl_env_options o{};
  o.frame_skip = frame_skip;
  o.has_noise_std = noise_std.has_value() ? 1 : 0;
  o.noise_std = noise_std.value_or(0.0);
  o.obs_mode = obs_mode;
  return o;
}

}  // namespace agarcl::harness

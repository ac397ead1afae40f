#include <doctest.h>

#include <cmath>
#include <cstring>
#include <string>
#include <vector>

#include "agarcl/agarcl.h"

namespace {

struct Handle {
  agarcl_env* env = nullptr;
  ~Handle() { agarcl_env_destroy(env); }
};

std::string read_string(agarcl_status (*fn)(const agarcl_env*, char*, size_t, size_t*), const agarcl_env* env) {
  size_t len = 0;
  REQUIRE(fn(env, nullptr, 0, &len) == AGARCL_E_BUFFER_TOO_SMALL);
  std::string s(len + 1, '\0');
  REQUIRE(fn(env, s.data(), s.size(), &len) == AGARCL_OK);
  s.resize(len);
  return s;
}

}  // namespace

TEST_CASE("version and status names") {
  CHECK(agarcl_abi_version() == AGARCL_ABI_VERSION);
  CHECK(std::string(agarcl_version()).size() > 0);
  CHECK(std::string(agarcl_status_name(AGARCL_E_PROTOCOL)) == "protocol");
  CHECK(std::string(agarcl_status_name(static_cast<agarcl_status>(99))) == "unknown");
}

TEST_CASE("create, step, destroy") {
  Handle h;
  REQUIRE(agarcl_env_create("mini-1", 3, nullptr, &h.env) == AGARCL_OK);
  agarcl_env_info info{};
  REQUIRE(agarcl_env_info_get(h.env, &info) == AGARCL_OK);
  CHECK(info.tick == 0);
  CHECK(info.mass == 25);
  CHECK(info.episodic == 1);
  CHECK(info.max_steps == 500);
  CHECK(info.obs_resolution == 128);

  agarcl_step_result r{};
  double total = 0;
  int steps = 0;
  for (;;) {
    REQUIRE(agarcl_env_step(h.env, 0.5, -0.25, AGARCL_NONE, &r) == AGARCL_OK);
    total += r.reward;
    ++steps;
    if (r.terminated || r.truncated) break;
  }
  CHECK(steps == 500);
  CHECK(r.truncated == 1);
  CHECK(std::abs(total - (r.mass - 25)) < 1e-9);

  CHECK(agarcl_env_step(h.env, 0, 0, AGARCL_NONE, &r) == AGARCL_E_PROTOCOL);
  CHECK(std::string(agarcl_last_error()).size() > 0);
  CHECK(agarcl_env_reset(h.env) == AGARCL_OK);
  REQUIRE(agarcl_env_info_get(h.env, &info) == AGARCL_OK);
  CHECK(info.episode == 1);
  CHECK(info.steps == 0);
}

TEST_CASE("error codes") {
  agarcl_env* env = nullptr;
  CHECK(agarcl_env_create(nullptr, 0, nullptr, &env) == AGARCL_E_INVALID_ARGUMENT);
  CHECK(agarcl_env_create("mini-1", 0, nullptr, nullptr) == AGARCL_E_INVALID_ARGUMENT);
  CHECK(agarcl_env_create("no-such-scenario", 0, nullptr, &env) == AGARCL_E_CONFIG);
  CHECK(env == nullptr);
  CHECK(std::string(agarcl_last_error()).find("no-such-scenario") != std::string::npos);
  CHECK(agarcl_env_create_from_yaml("name: [", 0, nullptr, &env) == AGARCL_E_CONFIG);
  CHECK(agarcl_env_create_from_file("/nonexistent/x.yaml", 0, nullptr, &env) == AGARCL_E_CONFIG);

  agarcl_env_options bad{};
  bad.obs_mode = 7;
  CHECK(agarcl_env_create("full", 0, &bad, &env) == AGARCL_E_CONFIG);

  CHECK(agarcl_env_create_from_yaml(
            "schema_version: 1\nname: crowded\nworld: {arena_width: 40, arena_height: 40, min_viruses: 10, max_pellets: 0}\n", 0,
            nullptr, &env) == AGARCL_E_CONSTRUCTION);

  Handle h;
  REQUIRE(agarcl_env_create("full", 0, nullptr, &h.env) == AGARCL_OK);
  CHECK(agarcl_env_reset(h.env) == AGARCL_E_PROTOCOL);
  agarcl_step_result r{};
  CHECK(agarcl_env_step(h.env, 0, 0, 3, &r) == AGARCL_E_INVALID_ARGUMENT);
  CHECK(agarcl_env_step(h.env, 1.5, 0, AGARCL_NONE, &r) == AGARCL_E_PROTOCOL);
  CHECK(agarcl_env_step(h.env, NAN, 0, AGARCL_NONE, &r) == AGARCL_E_PROTOCOL);
  CHECK(agarcl_env_step(h.env, 0, 0, AGARCL_NONE, nullptr) == AGARCL_E_INVALID_ARGUMENT);
  CHECK(agarcl_env_step(nullptr, 0, 0, AGARCL_NONE, &r) == AGARCL_E_INVALID_ARGUMENT);
  agarcl_env_info info{};
  REQUIRE(agarcl_env_info_get(h.env, &info) == AGARCL_OK);
  CHECK(info.steps == 0);

  double x, y;
  uint8_t d;
  CHECK(agarcl_env_bot_action(h.env, "sleepy", &x, &y, &d) == AGARCL_E_INVALID_ARGUMENT);
  CHECK(agarcl_env_bot_action(h.env, "hungry", &x, &y, &d) == AGARCL_OK);
  CHECK(std::abs(x) <= 1.0);
  CHECK(std::abs(y) <= 1.0);
  agarcl_env_destroy(nullptr);
}

TEST_CASE("options override scenario defaults") {
  agarcl_env_options o{};
  o.frame_skip = 1;
  o.has_noise_std = 1;
  o.noise_std = 0.0;
  o.obs_mode = AGARCL_OBS_SYMBOLIC;
  Handle h;
  REQUIRE(agarcl_env_create("full", 9, &o, &h.env) == AGARCL_OK);
  agarcl_env_info info{};
  REQUIRE(agarcl_env_info_get(h.env, &info) == AGARCL_OK);
  CHECK(info.frame_skip == 1);
  CHECK(info.noise_std == 0.0);
  CHECK(info.obs_mode == AGARCL_OBS_SYMBOLIC);
  agarcl_step_result r{};
  REQUIRE(agarcl_env_step(h.env, 0, 0, AGARCL_NONE, &r) == AGARCL_OK);
  CHECK(r.tick == 1);
  // The effective scenario records the overrides.
  const std::string yaml = read_string(agarcl_env_scenario_yaml, h.env);
  Handle again;
  REQUIRE(agarcl_env_create_from_yaml(yaml.c_str(), 9, nullptr, &again.env) == AGARCL_OK);
  uint64_t a = 0, b = 0;
  agarcl_env_config_digest(h.env, &a);
  agarcl_env_config_digest(again.env, &b);
  CHECK(a == b);
}

TEST_CASE("string buffer convention") {
  Handle h;
  REQUIRE(agarcl_env_create("mini-9", 1, nullptr, &h.env) == AGARCL_OK);
  size_t len = 123;
  char small[4] = {'x', 'x', 'x', 'x'};
  CHECK(agarcl_env_scenario_name(h.env, small, sizeof small, &len) == AGARCL_E_BUFFER_TOO_SMALL);
  CHECK(len == 6);
  CHECK(small[0] == 'x');
  char exact[6];
  CHECK(agarcl_env_scenario_name(h.env, exact, sizeof exact, &len) == AGARCL_E_BUFFER_TOO_SMALL);
  char fits[7];
  CHECK(agarcl_env_scenario_name(h.env, fits, sizeof fits, &len) == AGARCL_OK);
  CHECK(std::string(fits) == "mini-9");

  const std::string json = read_string(
      [](const agarcl_env* e, char* b, size_t c, size_t* l) {
        return agarcl_env_symbolic_json(const_cast<agarcl_env*>(e), b, c, l);
      },
      h.env);
  CHECK(json.find("\"schema\":\"agarcl.symbolic/1\"") != std::string::npos);
}

TEST_CASE("pixels are a zero-copy view") {
  Handle h;
  REQUIRE(agarcl_env_create("full", 4, nullptr, &h.env) == AGARCL_OK);
  const float* data = nullptr;
  uint32_t res = 0;
  REQUIRE(agarcl_env_pixels(h.env, &data, &res) == AGARCL_OK);
  CHECK(res == 128);
  const float* again = nullptr;
  REQUIRE(agarcl_env_pixels(h.env, &again, nullptr) == AGARCL_OK);
  CHECK(again == data);
  std::size_t lit = 0;
  for (std::size_t i = 0; i < 4u * res * res; ++i) {
    REQUIRE(data[i] >= 0.0f);
    REQUIRE(data[i] <= 1.0f);
    lit += data[i] > 0;
  }
  CHECK(lit > 0);
}

TEST_CASE("determinism through the C API") {
  Handle a, b;
  REQUIRE(agarcl_env_create("full", 77, nullptr, &a.env) == AGARCL_OK);
  REQUIRE(agarcl_env_create("full", 77, nullptr, &b.env) == AGARCL_OK);
  agarcl_step_result ra{}, rb{};
  for (int i = 0; i < 300; ++i) {
    const double x = std::sin(i * 0.1), y = std::cos(i * 0.07);
    const uint8_t d = static_cast<uint8_t>(i % 17 == 0 ? AGARCL_SPLIT : AGARCL_NONE);
    REQUIRE(agarcl_env_step(a.env, x, y, d, &ra) == AGARCL_OK);
    REQUIRE(agarcl_env_step(b.env, x, y, d, &rb) == AGARCL_OK);
    REQUIRE(ra.events_digest == rb.events_digest);
    REQUIRE(ra.reward == rb.reward);
  }
  uint64_t ha = 0, hb = 0;
  agarcl_env_state_hash(a.env, &ha);
  agarcl_env_state_hash(b.env, &hb);
  CHECK(ha == hb);
}

TEST_CASE("catalog") {
  const size_t n = agarcl_catalog_count();
  CHECK(n >= 18);
  std::vector<std::string> names;
  for (size_t i = 0; i < n; ++i) {
    const char* name = nullptr;
    REQUIRE(agarcl_catalog_name(i, &name) == AGARCL_OK);
    names.emplace_back(name);
    size_t len = 0;
    REQUIRE(agarcl_catalog_scenario_yaml(name, nullptr, 0, &len) == AGARCL_E_BUFFER_TOO_SMALL);
    std::string yaml(len + 1, '\0');
    REQUIRE(agarcl_catalog_scenario_yaml(name, yaml.data(), yaml.size(), &len) == AGARCL_OK);
    yaml.resize(len);
    agarcl_env* env = nullptr;
    REQUIRE(agarcl_env_create_from_yaml(yaml.c_str(), 0, nullptr, &env) == AGARCL_OK);
    agarcl_env_destroy(env);
  }
  const char* name = nullptr;
  CHECK(agarcl_catalog_name(n, &name) == AGARCL_E_INVALID_ARGUMENT);
  CHECK(agarcl_catalog_scenario_yaml("nope", nullptr, 0, nullptr) == AGARCL_E_CONFIG);

  size_t len = 99;
  char buf[256];
  CHECK(agarcl_validate_catalog(buf, sizeof buf, &len) == AGARCL_OK);
  CHECK(len == 0);
}

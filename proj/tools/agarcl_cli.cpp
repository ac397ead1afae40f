// agarcl: run, benchmark, replay and serve the environment from the shell.
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>

#include <CLI11.hpp>
#include <json.hpp>

#include "agarcl/agarcl.h"
#include "commands.hpp"
#include "server.hpp"

namespace fs = std::filesystem;
using namespace agarcl::harness;

namespace {

struct EnvFlags {
  EnvSpec spec;
  double noise = -1.0;  // negative: scenario default

  void add(CLI::App* cmd) {
    cmd->add_option("--scenario", spec.scenario, "Preset name from the catalog")->envname("AGARCL_SCENARIO");
    cmd->add_option("--scenario-file", spec.scenario_file, "Scenario YAML file (overrides --scenario)")
        ->envname("AGARCL_SCENARIO_FILE");
    cmd->add_option("--seed", spec.seed, "Environment seed")->envname("AGARCL_SEED");
    cmd->add_option("--frame-skip", spec.frame_skip, "Ticks per decision (0: scenario value)")
        ->envname("AGARCL_FRAME_SKIP");
    cmd->add_option("--obs", spec.obs, "Observation mode")
        ->check(CLI::IsMember({"pixel", "symbolic"}))
        ->envname("AGARCL_OBS");
    cmd->add_option("--noise-std", noise, "Cursor noise std (negative: scenario value)")
        ->envname("AGARCL_NOISE_STD");
  }
  EnvSpec resolve() const {
    EnvSpec s = spec;
    if (noise >= 0.0) s.noise_std = noise;
    return s;
  }
};

/// Fixed recipes for the checked-in replay fixtures.
struct GoldenRecipe {
  const char* name;
  const char* scenario;
  std::uint64_t seed;
  const char* policy;
  std::uint64_t steps;
  double noise;  // negative: scenario value
};

constexpr GoldenRecipe kGolden[] = {
    {"mini1_random", "mini-1", 1, "random", 300, 0.0},
    {"mini3c_stationary", "mini-3c", 2, "stationary", 200, -1.0},
    {"mini7_hungry", "mini-7-large-dense", 3, "bot:hungry", 300, -1.0},
    {"mini9_random", "mini-9", 4, "random", 200, -1.0},
    {"full_random", "full", 5, "random", 400, -1.0},
    {"full_easy_aggressive", "full-easy", 6, "bot:aggressive_shy", 300, -1.0},
};

int regenerate_golden(const std::string& dir) {
  fs::create_directories(dir);
  nlohmann::json manifest = nlohmann::json::array();
  for (const GoldenRecipe& g : kGolden) {
    RunOptions o;
    o.env.scenario = g.scenario;
    o.env.seed = g.seed;
    if (g.noise >= 0.0) o.env.noise_std = g.noise;
    o.steps = g.steps;
    o.policy = g.policy;
    o.out = (fs::path(dir) / (std::string(g.name) + ".traj")).string();
    o.hash_every = 10;
    const RunSummary s = cmd_run(o);
    manifest.push_back({{"name", g.name},
                        {"scenario", g.scenario},
                        {"seed", g.seed},
                        {"policy", g.policy},
                        {"steps", g.steps},
                        {"noise_std", g.noise},
                        {"hash_every", o.hash_every},
                        {"total_reward", s.total_reward},
                        {"final_hash", std::to_string(s.final_hash)},
                        {"file", std::string(g.name) + ".traj"}});
    std::cout << "wrote " << o.out << "\n";
  }
  std::ofstream out(fs::path(dir) / "fixtures.json");
  out << manifest.dump(2) << "\n";
  return out ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"AgarCL environment harness"};
  app.require_subcommand(1);

  EnvFlags run_env;
  RunOptions run;
  auto* run_cmd = app.add_subcommand("run", "Run a policy and optionally record a trajectory");
  run_env.add(run_cmd);
  run_cmd->add_option("--steps", run.steps, "Decisions to take")->envname("AGARCL_STEPS");
  run_cmd->add_option("--policy", run.policy, "random | stationary | bot:<kind>")->envname("AGARCL_POLICY");
  run_cmd->add_option("--out", run.out, "Trajectory output path")->envname("AGARCL_OUT");
  run_cmd->add_option("--hash-every", run.hash_every, "Store a state hash every K steps")->check(CLI::PositiveNumber);

  EnvFlags bench_env;
  BenchmarkOptions bench;
  auto* bench_cmd = app.add_subcommand("benchmark", "Random-agent throughput, IQM over trials");
  bench_env.add(bench_cmd);
  bench_cmd->add_option("--seconds", bench.seconds, "Seconds per trial")->check(CLI::PositiveNumber);
  bench_cmd->add_option("--trials", bench.trials, "Independent trials")->check(CLI::PositiveNumber);

  std::string replay_path;
  auto* replay_cmd = app.add_subcommand("replay", "Verify a recorded trajectory");
  replay_cmd->add_option("record", replay_path, "Trajectory file")->required();

  EnvFlags serve_env;
  ServerOptions serve;
  std::string serve_mode = "agent";
  auto* serve_cmd = app.add_subcommand("serve", "Websocket session server");
  serve_env.add(serve_cmd);
  serve_cmd->add_option("--port", serve.port, "TCP port")->envname("AGARCL_PORT");
  serve_cmd->add_option("--address", serve.address, "Bind address")->envname("AGARCL_ADDRESS");
  serve_cmd->add_option("--mode", serve_mode, "agent (lock-step) or human (real time)")
      ->check(CLI::IsMember({"agent", "human"}))
      ->envname("AGARCL_MODE");
  serve_cmd->add_option("--snapshot-every", serve.snapshot_every, "Human mode snapshot cadence in ticks");
  serve_cmd->add_option("--idle-timeout", serve.idle_timeout_seconds, "Agent mode client timeout, seconds");
  serve_cmd->add_option("--out", serve.record, "Trajectory log (human) or per-session prefix (agent)")
      ->envname("AGARCL_OUT");

  auto* list_cmd = app.add_subcommand("list", "List catalog presets");
  auto* validate_cmd = app.add_subcommand("validate-catalog", "Check presets against the reference table");

  std::string export_name, export_path;
  auto* export_cmd = app.add_subcommand("export-scenario", "Write a preset as a standalone scenario file");
  export_cmd->add_option("name", export_name)->required();
  export_cmd->add_option("path", export_path)->required();

  std::string golden_dir = "tests/golden";
  auto* golden_cmd = app.add_subcommand("regenerate-golden", "Rewrite the replay fixtures (review the diff!)");
  golden_cmd->add_option("--dir", golden_dir, "Fixture directory");

  CLI11_PARSE(app, argc, argv);

  try {
    if (*run_cmd) {
      run.env = run_env.resolve();
      print_summary(std::cout, cmd_run(run));
      if (!run.out.empty()) std::cout << "trajectory: " << run.out << "\n";
      return 0;
    }
    if (*bench_cmd) {
      bench.env = bench_env.resolve();
      print_benchmark(std::cout, cmd_benchmark(bench));
      return 0;
    }
    if (*replay_cmd) {
      const ReplayReport r = cmd_replay(replay_path);
      print_report(std::cout, r);
      return r.ok ? 0 : 2;
    }
    if (*serve_cmd) {
      serve.env = serve_env.resolve();
      serve.mode = serve_mode == "human" ? ServeMode::Human : ServeMode::Agent;
      if (serve.mode == ServeMode::Human && serve.record.empty()) serve.record = "human-session.traj";
      if (serve.mode == ServeMode::Human && !serve_env.spec.frame_skip) serve.env.frame_skip = 1;
      if (serve.mode == ServeMode::Human && serve_env.noise < 0.0) serve.env.noise_std = 0.0;
      Server server(serve);
      std::cout << "listening on " << serve.address << ":" << server.port() << " (" << serve_mode << " mode)"
                << std::endl;
      server.run(true);
      return 0;
    }
    if (*list_cmd) {
      for (size_t i = 0; i < agarcl_catalog_count(); ++i) {
        const char* name = nullptr;
        check(agarcl_catalog_name(i, &name), "catalog");
        std::cout << name << "\n";
      }
      return 0;
    }
    if (*validate_cmd) {
      size_t len = 0;
      agarcl_validate_catalog(nullptr, 0, &len);
      std::string text(len + 1, '\0');
      const agarcl_status st = agarcl_validate_catalog(text.data(), text.size(), &len);
      text.resize(len);
      if (st == AGARCL_OK) {
        std::cout << "catalog OK (" << agarcl_catalog_count() << " presets)\n";
        return 0;
      }
      std::cout << text;
      return 1;
    }
    if (*export_cmd) {
      const std::string yaml = read_string(
          [&](char* b, size_t c, size_t* l) { return agarcl_catalog_scenario_yaml(export_name.c_str(), b, c, l); },
          "export");
      std::ofstream out(export_path);
      out << yaml;
      if (!out) throw std::runtime_error(export_path + ": write failed");
      return 0;
    }
    if (*golden_cmd) return regenerate_golden(golden_dir);
  } catch (const std::exception& e) {
    std::cerr << "agarcl: " << e.what() << "\n";
    return 1;
  }
  return 0;
}

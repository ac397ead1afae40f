#pragma once

#include <cstdint>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "capi_env.hpp"
#include "trajectory.hpp"

namespace agarcl::harness {

struct EnvSpec {
  std::string scenario = "full";
  std::string scenario_file;  // overrides scenario when set
  std::uint64_t seed = 0;
  std::uint32_t frame_skip = 0;  // 0: scenario value
  std::optional<double> noise_std;
  std::string obs = "pixel";
};

int obs_mode_from_string(const std::string& s);
/// Builds the env an EnvSpec describes (file scenarios are read here).
CEnv open_env(const EnvSpec& spec);

struct RunOptions {
  EnvSpec env;
  std::uint64_t steps = 1000;
  std::string policy = "random";
  std::string out;  // trajectory path; empty: do not record
  std::uint32_t hash_every = 1;
  bool fetch_observations = true;
};

struct RunSummary {
  std::uint64_t steps = 0;
  std::uint64_t deaths = 0;
  double total_reward = 0.0;
  std::vector<double> episode_returns;  // completed episodes only
  double final_mass = 0.0;
  std::uint64_t final_hash = 0;
  double seconds = 0.0;
  double steps_per_second = 0.0;
};

/// Runs a policy, optionally recording a trajectory. Episodic scenarios are
/// reset automatically before the step that follows an episode's end.
RunSummary cmd_run(const RunOptions& options);

struct ReplayReport {
  bool ok = true;
  std::uint64_t steps_checked = 0;
  std::uint64_t hashes_checked = 0;
  std::optional<std::uint64_t> divergence_step;  // 0: before the first step
  std::optional<std::uint64_t> divergence_tick;
  std::string reason;
};

/// Rebuilds the env from the header, replays every action and compares
/// every stored observable and state hash.
ReplayReport cmd_replay(const std::string& path);

struct BenchmarkOptions {
  EnvSpec env;
  double seconds = 2.0;  // per trial
  std::uint32_t trials = 10;
  std::vector<std::uint32_t> frame_skips{1, 4};
};

struct BenchmarkRow {
  std::uint32_t frame_skip = 1;
  std::vector<double> steps_per_second;  // one per trial
  double iqm_steps_per_second = 0.0;
  double iqm_game_frames_per_second = 0.0;
};

/// Throughput of a random agent fetching every observation. Throws
/// std::invalid_argument when trials is 0.
std::vector<BenchmarkRow> cmd_benchmark(const BenchmarkOptions& options);

/// Interquartile mean: drops floor(n/4) values from each end.
double interquartile_mean(std::vector<double> values);

void print_summary(std::ostream& os, const RunSummary& s);
void print_report(std::ostream& os, const ReplayReport& r);
void print_benchmark(std::ostream& os, const std::vector<BenchmarkRow>& rows);

}  // namespace agarcl::harness

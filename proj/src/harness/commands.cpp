#include "commands.hpp"

#include <algorithm>
#include <bit>
#include <chrono>
#include <fstream>
#include <iomanip>
#include <numeric>
#include <sstream>
#include <stdexcept>

#include "policy.hpp"

namespace agarcl::harness {
namespace {

using Clock = std::chrono::steady_clock;

std::string read_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error(path + ": cannot open scenario file");
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void observe(CEnv& env, int obs_mode) {
  if (obs_mode == AGARCL_OBS_PIXEL) {
    (void)env.pixels();
  } else {
    (void)env.symbolic_json();
  }
}

bool same_bits(double a, double b) { return std::bit_cast<std::uint64_t>(a) == std::bit_cast<std::uint64_t>(b); }

}  // namespace

int obs_mode_from_string(const std::string& s) {
  if (s == "pixel") return AGARCL_OBS_PIXEL;
  if (s == "symbolic") return AGARCL_OBS_SYMBOLIC;
  throw std::invalid_argument("obs mode must be 'pixel' or 'symbolic', got '" + s + "'");
}

CEnv open_env(const EnvSpec& spec) {
  CEnv::Source src;
  src.scenario = spec.scenario;
  if (!spec.scenario_file.empty()) src.scenario_yaml = read_file(spec.scenario_file);
  return CEnv(src, spec.seed, make_options(spec.frame_skip, spec.noise_std, obs_mode_from_string(spec.obs)));
}

RunSummary cmd_run(const RunOptions& options) {
  if (options.hash_every == 0) throw std::invalid_argument("hash_every must be >= 1");
  CEnv env = open_env(options.env);
  const int obs_mode = obs_mode_from_string(options.env.obs);
  auto policy = make_policy(options.policy, options.env.seed);
  const agarcl_env_info info = env.info();

  std::optional<TrajectoryWriter> writer;
  if (!options.out.empty()) {
    TrajectoryHeader h;
    h.scenario = env.scenario_name();
    h.scenario_yaml = env.scenario_yaml();
    h.config_digest = env.config_digest();
    h.seed = options.env.seed;
    h.frame_skip = info.frame_skip;
    h.obs_mode = options.env.obs;
    h.noise_std = info.noise_std;
    h.hash_every = options.hash_every;
    h.initial_hash = env.state_hash();
    h.policy = options.policy;
    writer.emplace(options.out, h);
  }

  RunSummary s;
  double episode_return = 0.0;
  bool needs_reset = false;
  if (options.fetch_observations) observe(env, obs_mode);
  const auto t0 = Clock::now();
  for (std::uint64_t i = 0; i < options.steps; ++i) {
    std::uint8_t flags = 0;
    if (needs_reset) {
      env.reset();
      if (options.fetch_observations) observe(env, obs_mode);
      flags |= kResetBefore;
      needs_reset = false;
    }
    const Action a = policy->act(env);
    const agarcl_step_result r = env.step(a);
    if (options.fetch_observations) observe(env, obs_mode);
    s.total_reward += r.reward;
    s.deaths += r.deaths;
    episode_return += r.reward;
    ++s.steps;
    if (r.terminated) flags |= kTerminated;
    if (r.truncated) flags |= kTruncated;
    if (info.episodic && (r.terminated || r.truncated)) {
      s.episode_returns.push_back(episode_return);
      episode_return = 0.0;
      needs_reset = true;
    }
    if (writer) {
      StepRecord rec{r.tick, a.x, a.y, a.discrete, flags, r.deaths, r.reward, r.mass, 0};
      if ((i + 1) % options.hash_every == 0 || i + 1 == options.steps) {
        rec.flags |= kHasHash;
        rec.state_hash = env.state_hash();
      }
      writer->append(rec);
    }
  }
  s.seconds = std::chrono::duration<double>(Clock::now() - t0).count();
  s.steps_per_second = s.seconds > 0.0 ? static_cast<double>(s.steps) / s.seconds : 0.0;
  s.final_mass = env.info().mass;
  s.final_hash = env.state_hash();
  if (writer) writer->close();
  return s;
}

ReplayReport cmd_replay(const std::string& path) {
  const Trajectory t = read_trajectory(path);
  const TrajectoryHeader& h = t.header;
  CEnv::Source src{h.scenario, h.scenario_yaml};
  CEnv env(src, h.seed, make_options(h.frame_skip, h.noise_std, obs_mode_from_string(h.obs_mode)));

  ReplayReport rep;
  auto diverge = [&](std::uint64_t step, std::uint64_t tick, std::string why) {
    rep.ok = false;
    rep.divergence_step = step;
    rep.divergence_tick = tick;
    rep.reason = std::move(why);
    return rep;
  };
  if (env.config_digest() != h.config_digest) return diverge(0, 0, "config digest differs from the header");
  if (env.state_hash() != h.initial_hash) return diverge(0, 0, "initial state hash differs");

  for (std::size_t i = 0; i < t.steps.size(); ++i) {
    const StepRecord& rec = t.steps[i];
    if (rec.flags & kResetBefore) env.reset();
    const agarcl_step_result r = env.step({rec.cursor_x, rec.cursor_y, rec.discrete});
    const std::uint64_t step = i + 1;
    ++rep.steps_checked;
    if (r.tick != rec.tick) return diverge(step, r.tick, "tick differs");
    if (!same_bits(r.reward, rec.reward)) return diverge(step, r.tick, "reward differs");
    if (!same_bits(r.mass, rec.mass)) return diverge(step, r.tick, "mass differs");
    if (r.deaths != rec.deaths) return diverge(step, r.tick, "deaths differ");
    if (bool(r.terminated) != bool(rec.flags & kTerminated) || bool(r.truncated) != bool(rec.flags & kTruncated))
      return diverge(step, r.tick, "episode end flags differ");
    if (rec.flags & kHasHash) {
      ++rep.hashes_checked;
      if (env.state_hash() != rec.state_hash) return diverge(step, r.tick, "state hash differs");
    }
  }
  return rep;
}

double interquartile_mean(std::vector<double> values) {
  if (values.empty()) throw std::invalid_argument("interquartile_mean of no values");
  std::sort(values.begin(), values.end());
  const std::size_t cut = values.size() / 4;
  const auto first = values.begin() + static_cast<std::ptrdiff_t>(cut);
  const auto last = values.end() - static_cast<std::ptrdiff_t>(cut);
  return std::accumulate(first, last, 0.0) / static_cast<double>(last - first);
}

std::vector<BenchmarkRow> cmd_benchmark(const BenchmarkOptions& options) {
  if (options.trials == 0) throw std::invalid_argument("benchmark needs at least one trial");
  std::vector<BenchmarkRow> rows;
  for (const std::uint32_t fs : options.frame_skips) {
    BenchmarkRow row;
    row.frame_skip = fs;
    for (std::uint32_t trial = 0; trial < options.trials; ++trial) {
      EnvSpec spec = options.env;
      spec.frame_skip = fs;
      spec.seed = options.env.seed + trial;
      CEnv env = open_env(spec);
      const int obs_mode = obs_mode_from_string(spec.obs);
      const bool episodic = env.info().episodic != 0;
      RandomPolicy policy(spec.seed);
      observe(env, obs_mode);
      std::uint64_t steps = 0;
      const auto t0 = Clock::now();
      double elapsed = 0.0;
      do {
        // Check the clock every 16 steps to keep its cost out of the measurement.
        for (int k = 0; k < 16; ++k) {
          const agarcl_step_result r = env.step(policy.act(env));
          observe(env, obs_mode);
          ++steps;
          if (episodic && (r.terminated || r.truncated)) {
            env.reset();
            observe(env, obs_mode);
          }
        }
        elapsed = std::chrono::duration<double>(Clock::now() - t0).count();
      } while (elapsed < options.seconds);
      row.steps_per_second.push_back(static_cast<double>(steps) / elapsed);
    }
    row.iqm_steps_per_second = interquartile_mean(row.steps_per_second);
    row.iqm_game_frames_per_second = row.iqm_steps_per_second * fs;
    rows.push_back(std::move(row));
  }
  return rows;
}

void print_summary(std::ostream& os, const RunSummary& s) {
  os << std::fixed << std::setprecision(6);
  os << "steps: " << s.steps << "\n";
  os << "total_reward: " << s.total_reward << "\n";
  os << "deaths: " << s.deaths << "\n";
  os << "episodes: " << s.episode_returns.size() << "\n";
  if (!s.episode_returns.empty()) {
    const double mean = std::accumulate(s.episode_returns.begin(), s.episode_returns.end(), 0.0) /
                        static_cast<double>(s.episode_returns.size());
    os << "mean_episode_return: " << mean << "\n";
  }
  os << "final_mass: " << s.final_mass << "\n";
  os << "final_hash: " << std::hex << std::setw(16) << std::setfill('0') << s.final_hash << std::dec
     << std::setfill(' ') << "\n";
  os << std::setprecision(1) << "steps_per_second: " << s.steps_per_second << "\n";
}

void print_report(std::ostream& os, const ReplayReport& r) {
  if (r.ok) {
    os << "replay OK: " << r.steps_checked << " steps, " << r.hashes_checked << " state hashes verified\n";
  } else {
    os << "replay DIVERGED at step " << *r.divergence_step << " (tick " << *r.divergence_tick << "): " << r.reason
       << "\n";
  }
}

void print_benchmark(std::ostream& os, const std::vector<BenchmarkRow>& rows) {
  os << std::fixed << std::setprecision(1);
  for (const auto& row : rows) {
    os << "frame_skip " << row.frame_skip << ": IQM " << row.iqm_steps_per_second << " steps/s, "
       << row.iqm_game_frames_per_second << " game frames/s over " << row.steps_per_second.size() << " trials\n";
  }
}

}  // namespace agarcl::harness

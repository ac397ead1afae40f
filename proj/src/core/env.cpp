#include "agarcl/env.hpp"

#include <algorithm>
#include <cmath>

#include "agarcl/bots.hpp"

namespace agarcl {

void validate_action(const ActionCommand& action) {
  const auto in_range = [](double v) { return std::isfinite(v) && v >= -1.0 && v <= 1.0; };
  if (!in_range(action.cursor.x) || !in_range(action.cursor.y))
    throw ProtocolError("action cursor must lie in [-1, 1]^2");
  const auto d = static_cast<std::uint8_t>(action.discrete);
  if (d > static_cast<std::uint8_t>(Discrete::Eject)) throw ProtocolError("action discrete must be 0, 1 or 2");
}

Env::Env(ScenarioSpec spec, std::uint64_t seed, EnvOptions options)
    : spec_(std::move(spec)),
      seed_(seed),
      frame_skip_(options.frame_skip.value_or(spec_.frame_skip)),
      noise_std_(options.noise_std.value_or(spec_.world.noise_std)),
      obs_mode_(options.obs_mode) {
  if (frame_skip_ == 0) throw ConfigError("frame_skip must be >= 1");
  spec_.world.noise_std = noise_std_;
  spec_.frame_skip = frame_skip_;
  spec_.validate();
  build();
}

void Env::build() {
  spec_.world.seed = episode_seed(seed_, episode_);
  world_ = create_world(spec_.world, spec_.layout());
  noise_rng_ = Philox(mix64(spec_.world.seed)).split(static_cast<std::uint64_t>(RngStream::Noise));
  steps_ = 0;
  over_ = false;
  block_events_.clear();
  pixel_fresh_ = symbolic_fresh_ = false;
}

void Env::reset() {
  if (spec_.mode != EpisodeMode::Episodic)
    throw ProtocolError("reset: scenario '" + spec_.name + "' is continual; it is never reset");
  ++episode_;
  build();
}

StepResult Env::step(const ActionCommand& action) {
  if (over_) throw ProtocolError("step: episode is over; call reset()");
  validate_action(action);

  // Noise is drawn for every step so the stream position depends only on the step count.
  const double nx = noise_rng_.normal();
  const double ny = noise_rng_.normal();
  const Vec2 cursor{std::clamp(action.cursor.x + noise_std_ * nx, -1.0, 1.0),
                    std::clamp(action.cursor.y + noise_std_ * ny, -1.0, 1.0)};
  const Vec2 target = viewport().cursor_to_world(cursor);

  const double mass_before = agent_mass();
  block_events_.clear();
  double respawn_adjust = 0.0;
  std::uint32_t deaths = 0;
  bool terminated = false;

  for (std::uint32_t t = 0; t < frame_skip_; ++t) {
    controls_.clear();
    for (const PlayerState& p : world_.players) {
      if (p.index == kAgent) {
        controls_.push_back({kAgent, target, t == 0 ? action.discrete : Discrete::None});
      } else if (p.bot) {
        controls_.push_back(bot_decide(*p.bot, world_, p));
      } else {
        controls_.push_back({p.index, player_centroid(p), Discrete::None});
      }
    }
    const TickEvents events = step_tick(world_, controls_);
    block_events_.append(events);

    bool any_death = false;
    for (const DeathEvent& d : events.deaths) {
      any_death = true;
      if (d.player != kAgent) continue;
      ++deaths;
      if (spec_.respawn_reward == RespawnReward::DeathMassLessInitial)
        respawn_adjust += 2.0 * (d.death_mass - agent().spawn_mass);
    }
    if (spec_.mode == EpisodeMode::Episodic) {
      if (spec_.termination == Termination::AgentEaten && deaths > 0) terminated = true;
      if (spec_.termination == Termination::AnyEaten && any_death) terminated = true;
    }
    if (terminated) break;
  }
  ++steps_;
  pixel_fresh_ = symbolic_fresh_ = false;

  StepResult r;
  r.info.mass = agent_mass();
  r.info.deaths = deaths;
  r.info.tick = world_.tick;
  r.info.events_digest = block_events_.digest();
  r.reward = r.info.mass - mass_before + respawn_adjust;
  r.terminated = terminated;
  if (spec_.mode == EpisodeMode::Episodic && !terminated && steps_ >= spec_.max_steps) r.truncated = true;
  if (spec_.truncate_at_mass && r.info.mass >= *spec_.truncate_at_mass) r.truncated = true;
  if (spec_.mode == EpisodeMode::Episodic && (r.terminated || r.truncated)) over_ = true;
  return r;
}

const PixelObservation& Env::pixel_observation() {
  if (!pixel_fresh_) {
    render_pixel_obs(world_, agent(), spec_.world.obs_resolution, spec_.observation, pixel_);
    pixel_fresh_ = true;
  }
  return pixel_;
}

const SymbolicObservation& Env::symbolic_observation() {
  if (!symbolic_fresh_) {
    symbolic_ = encode_symbolic(world_, agent(), spec_.observation);
    symbolic_fresh_ = true;
  }
  return symbolic_;
}

ActionCommand Env::bot_action(const BotParams& params) const {
  const ControlInput c = bot_decide(params, world_, agent());
  const Viewport vp = viewport();
  const double half = vp.side * 0.5;
  return {{std::clamp((c.cursor_world.x - vp.center.x) / half, -1.0, 1.0),
           std::clamp((c.cursor_world.y - vp.center.y) / half, -1.0, 1.0)},
          c.discrete};
}

std::uint64_t Env::state_hash() const { return agarcl::state_hash(world_); }

}  // namespace agarcl

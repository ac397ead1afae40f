#pragma once

#include <cstdint>
#include <memory>
#include <random>
#include <string>

#include "capi_env.hpp"

namespace agarcl::harness {

class Policy {
 public:
  virtual ~Policy() = default;
  virtual Action act(const CEnv& env) = 0;
};

/// Uniform cursor in [-1,1]^2 and a uniform choice among none/split/eject.
class RandomPolicy final : public Policy {
 public:
  explicit RandomPolicy(std::uint64_t seed) : gen_(seed) {}
  Action act(const CEnv&) override;

 private:
  double unit();  // [0, 1), identical on every standard library
  std::mt19937_64 gen_;
};

/// Cursor at the centre of the view, never a discrete action.
class StationaryPolicy final : public Policy {
 public:
  Action act(const CEnv&) override { return {}; }
};

/// Plays the agent with one of the heuristic bots.
class BotPolicy final : public Policy {
 public:
  explicit BotPolicy(std::string kind) : kind_(std::move(kind)) {}
  Action act(const CEnv& env) override { return env.bot_action(kind_); }

 private:
  std::string kind_;
};

/// "random", "stationary" or "bot:<kind>". Throws std::invalid_argument.
std::unique_ptr<Policy> make_policy(const std::string& spec, std::uint64_t seed);

}  // namespace agarcl::harness

#include "policy.hpp"

#include <stdexcept>

namespace agarcl::harness {

double RandomPolicy::unit() { return static_cast<double>(gen_() >> 11) * 0x1.0p-53; }

Action RandomPolicy::act(const CEnv&) {
  Action a;
  a.x = 2.0 * unit() - 1.0;
  a.y = 2.0 * unit() - 1.0;
  a.discrete = static_cast<std::uint8_t>(gen_() % 3);
  return a;
}

std::unique_ptr<Policy> make_policy(const std::string& spec, std::uint64_t seed) {
  if (spec == "random") return std::make_unique<RandomPolicy>(seed);
  if (spec == "stationary") return std::make_unique<StationaryPolicy>();
  if (spec.rfind("bot:", 0) == 0 && spec.size() > 4) return std::make_unique<BotPolicy>(spec.substr(4));
  throw std::invalid_argument("unknown policy '" + spec + "' (random, stationary, bot:<kind>)");
}

}  // namespace agarcl::harness

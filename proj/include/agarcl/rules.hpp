#pragma once

#include <cmath>

#include "agarcl/types.hpp"

// Game constants that the rules leave unquantified. Every value here is a
// tuning choice; tests pin them so changes are deliberate.
namespace agarcl::rules {

constexpr double kPelletMass = 1.0;
constexpr double kVirusMass = 100.0;

/// A cell may eat another body only when it is at least this much heavier.
constexpr double kEatRatio = 1.25;

constexpr double kSplitMinMass = 50.0;
constexpr double kSplitBoostFactor = 2.5;
constexpr double kImpulseHalfLifeTicks = 15.0;  // 0.25 s
constexpr double kImpulseCutoff = 1e-4;         // world-units/tick

constexpr double kEjectCost = 18.0;
constexpr double kBlobMass = 14.0;
constexpr double kEjectBoostFactor = 3.0;  // × speed_of(25)
constexpr double kVirusBoostFactor = 4.0;  // × speed_of(25)

constexpr double kMergeBaseTicks = 1800.0;
constexpr double kMergeTicksPerMass = 1.2;

constexpr double kVirusPenaltyStep = 0.5;
constexpr unsigned kVirusPenaltyFreeStreak = 2;
constexpr Tick kVirusStreakResetTicks = 1800;

constexpr int kSpawnRetries = 64;

/// Per-tick friction applied to split impulses, blobs and propelled viruses.
inline double impulse_decay() { return std::exp2(-1.0 / kImpulseHalfLifeTicks); }

/// Ticks until freshly split cells of `mass` may merge again.
inline Tick merge_cooldown(double mass) {
  return static_cast<Tick>(kMergeBaseTicks + std::round(kMergeTicksPerMass * mass));
}

inline double decay_multiplier_for_streak(unsigned streak) {
  return 1.0 + kVirusPenaltyStep * (streak > kVirusPenaltyFreeStreak ? streak - kVirusPenaltyFreeStreak : 0);
}

}  // namespace agarcl::rules

#pragma once

#include "agarcl/dynamics.hpp"
#include "agarcl/world.hpp"

namespace agarcl {

/// Mass-weighted centre of the player's cells (origin if it has none).
Vec2 player_centroid(const PlayerState& player);

/// Fixed heuristic policy, evaluated against a world snapshot.
///
/// Priority: shy variants flee the nearest threat inside shy_radius;
/// aggressive variants chase the nearest edible opponent inside hunt_radius;
/// otherwise head for the nearest pellet, or hold position when there is
/// none. Bots never split or eject.
ControlInput bot_decide(const BotParams& params, const WorldState& world, const PlayerState& self);

}  // namespace agarcl

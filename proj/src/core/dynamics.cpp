#include "agarcl/dynamics.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <limits>
#include <numbers>

#include "agarcl/rules.hpp"

namespace agarcl {
namespace {

constexpr double kGoldenAngle = 2.399963229728653;

struct CellRef {
  std::size_t player;
  std::size_t cell;
};

/// Cells ordered by descending mass, ties by ascending serial.
std::vector<CellRef> cells_by_mass(const WorldState& world) {
  std::vector<CellRef> refs;
  for (std::size_t p = 0; p < world.players.size(); ++p)
    for (std::size_t c = 0; c < world.players[p].cells.size(); ++c) refs.push_back({p, c});
  std::sort(refs.begin(), refs.end(), [&](CellRef a, CellRef b) {
    const Cell& ca = world.players[a.player].cells[a.cell];
    const Cell& cb = world.players[b.player].cells[b.cell];
    if (ca.mass != cb.mass) return ca.mass > cb.mass;
    return ca.id.serial < cb.id.serial;
  });
  return refs;
}

/// Deterministic direction used when two bodies coincide exactly.
Vec2 tie_break_direction(std::uint64_t serial) {
  const double angle = static_cast<double>(serial % 4096) * kGoldenAngle;
  return {std::cos(angle), std::sin(angle)};
}

/// Clamps a moving body into the arena and zeroes velocity along blocked axes.
void clamp_body(const WorldState& world, Vec2& position, Vec2& velocity) {
  const Vec2 clamped = world.clamp_to_arena(position);
  if (clamped.x != position.x) velocity.x = 0.0;
  if (clamped.y != position.y) velocity.y = 0.0;
  position = clamped;
}

void decay_velocity(Vec2& v) {
  v = v * rules::impulse_decay();
  if (v.norm_sq() < rules::kImpulseCutoff * rules::kImpulseCutoff) v = {};
}

std::vector<std::size_t> indices_by_serial(const std::vector<Cell>& cells) {
  std::vector<std::size_t> order(cells.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
  std::sort(order.begin(), order.end(), [&](auto a, auto b) { return cells[a].id.serial < cells[b].id.serial; });
  return order;
}

Vec2 radial_impulse(double mass, Vec2 direction) {
  return direction * (rules::kSplitBoostFactor * speed_of(mass) / kTickRate);
}

}  // namespace

void TickEvents::append(const TickEvents& o) {
  eats.insert(eats.end(), o.eats.begin(), o.eats.end());
  deaths.insert(deaths.end(), o.deaths.begin(), o.deaths.end());
  respawns.insert(respawns.end(), o.respawns.begin(), o.respawns.end());
  splits.insert(splits.end(), o.splits.begin(), o.splits.end());
  ejects.insert(ejects.end(), o.ejects.begin(), o.ejects.end());
  merges.insert(merges.end(), o.merges.begin(), o.merges.end());
  virus_pops.insert(virus_pops.end(), o.virus_pops.begin(), o.virus_pops.end());
  virus_feeds.insert(virus_feeds.end(), o.virus_feeds.begin(), o.virus_feeds.end());
  virus_spawns.insert(virus_spawns.end(), o.virus_spawns.begin(), o.virus_spawns.end());
  decays.insert(decays.end(), o.decays.begin(), o.decays.end());
}

void TickEvents::clear() { *this = TickEvents{}; }

double TickEvents::mass_delta(PlayerIndex player) const {
  double delta = 0.0;
  for (const auto& e : eats) {
    if (e.eater_owner == player) delta += e.mass;
    if (e.eaten_owner == player) delta -= e.mass;
  }
  for (const auto& e : ejects)
    if (e.player == player) delta -= e.cost;
  for (const auto& e : decays)
    if (e.player == player) delta -= e.loss;
  for (const auto& e : respawns)
    if (e.player == player) delta += e.mass;
  return delta;
}

std::uint64_t TickEvents::digest() const {
  std::uint64_t h = 0x51ED270B27A2C3F1ULL;
  auto feed = [&](std::uint64_t w) { h = mix64(h ^ w) + 0x9E3779B97F4A7C15ULL; };
  for (const auto& e : eats) {
    feed(e.eater.serial);
    feed(e.eaten.serial);
    feed(std::bit_cast<std::uint64_t>(e.mass));
  }
  for (const auto& e : deaths) {
    feed(e.player);
    feed(std::bit_cast<std::uint64_t>(e.death_mass));
  }
  for (const auto& e : respawns) feed(e.cell.serial);
  for (const auto& e : splits) feed(e.child.serial);
  for (const auto& e : ejects) feed(e.blob.serial);
  for (const auto& e : merges) feed(e.absorbed.serial);
  for (const auto& e : virus_pops) feed(e.virus.serial);
  for (const auto& e : virus_feeds) feed(e.blob.serial);
  for (const auto& e : virus_spawns) feed(e.spawned.serial);
  for (const auto& e : decays) feed(std::bit_cast<std::uint64_t>(e.loss));
  return h;
}

void crush_pellets_under(WorldState& world, const Virus& virus) {
  const double reach = radius_of(rules::kVirusMass) + radius_of(rules::kPelletMass);
  // Inclusive boundary: touching counts as overlap.
  for (std::uint64_t serial : world.pellets.serials_within(virus.position, std::nextafter(reach, 1e300)))
    world.pellets.erase(serial);
}

void do_split(WorldState& world, PlayerState& player, Vec2 cursor_world, TickEvents& events) {
  const std::size_t cap = world.config.cell_cap;
  std::vector<std::size_t> order(player.cells.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
  std::sort(order.begin(), order.end(), [&](auto a, auto b) {
    const Cell& ca = player.cells[a];
    const Cell& cb = player.cells[b];
    if (ca.mass != cb.mass) return ca.mass > cb.mass;
    return ca.id.serial < cb.id.serial;
  });
  std::vector<Cell> children;
  for (std::size_t idx : order) {
    if (player.cells.size() + children.size() >= cap) break;
    Cell& parent = player.cells[idx];
    if (parent.mass < rules::kSplitMinMass) continue;
    const double half = parent.mass * 0.5;
    parent.mass = half;
    Cell child = parent;
    child.id = world.next_id(EntityKind::Cell);
    child.created_tick = world.tick;
    child.merge_ready_tick = world.tick + rules::merge_cooldown(half);
    const Vec2 dir = normalized_or(cursor_world - parent.position, tie_break_direction(child.id.serial));
    child.split_impulse = radial_impulse(half, dir);
    children.push_back(child);
    events.splits.push_back({world.tick, player.index, parent.id, child.id, half});
  }
  player.cells.insert(player.cells.end(), children.begin(), children.end());
}

void do_eject(WorldState& world, PlayerState& player, Vec2 cursor_world, TickEvents& events) {
  const double threshold = world.config.mass_floor + rules::kEjectCost;
  const double boost = rules::kEjectBoostFactor * speed_of(25.0) / kTickRate;
  for (std::size_t idx : indices_by_serial(player.cells)) {
    Cell& cell = player.cells[idx];
    if (cell.mass < threshold) continue;
    cell.mass -= rules::kEjectCost;
    const Vec2 dir = normalized_or(cursor_world - cell.position, Vec2{1.0, 0.0});
    EjectedBlob blob;
    blob.id = world.next_id(EntityKind::Blob);
    blob.position = world.clamp_to_arena(cell.position + dir * radius_of(cell.mass));
    blob.velocity = dir * boost;
    blob.mass = rules::kBlobMass;
    blob.source_owner = player.index;
    world.blobs.push_back(blob);
    events.ejects.push_back({world.tick, player.index, cell.id, blob.id, rules::kEjectCost});
  }
}

void apply_movement(WorldState& world, std::span<const ControlInput> controls) {
  for (const ControlInput& control : controls) {
    PlayerState& player = world.players[control.player];
    for (Cell& cell : player.cells) {
      const Vec2 to_cursor = control.cursor_world - cell.position;
      const double dist = to_cursor.norm();
      Vec2 move;
      if (dist > 1e-9) {
        const double step = std::min(speed_of(cell.mass) / kTickRate, dist);
        move = to_cursor * (step / dist);
      }
      const Vec2 impulse = cell.split_impulse;
      cell.velocity = move + impulse;
      cell.position += cell.velocity;
      decay_velocity(cell.split_impulse);
      clamp_body(world, cell.position, cell.split_impulse);
    }
  }
  for (EjectedBlob& blob : world.blobs) {
    if (blob.velocity.norm_sq() == 0.0) continue;
    blob.position += blob.velocity;
    decay_velocity(blob.velocity);
    clamp_body(world, blob.position, blob.velocity);
  }
  for (Virus& virus : world.viruses) {
    if (virus.velocity.norm_sq() == 0.0) continue;
    virus.position += virus.velocity;
    decay_velocity(virus.velocity);
    clamp_body(world, virus.position, virus.velocity);
    crush_pellets_under(world, virus);
  }
}

void feed_viruses(WorldState& world, TickEvents& events) {
  if (world.blobs.empty() || world.viruses.empty()) return;
  const double vr = radius_of(rules::kVirusMass);
  const double boost = rules::kVirusBoostFactor * speed_of(25.0) / kTickRate;
  std::sort(world.blobs.begin(), world.blobs.end(), [](auto& a, auto& b) { return a.id.serial < b.id.serial; });
  std::vector<Virus> spawned;
  std::vector<EjectedBlob> kept;
  kept.reserve(world.blobs.size());
  for (const EjectedBlob& blob : world.blobs) {
    Virus* target = nullptr;
    for (Virus& v : world.viruses) {
      if (distance_sq(v.position, blob.position) < vr * vr) {
        target = &v;
        break;
      }
    }
    if (!target) {
      kept.push_back(blob);
      continue;
    }
    target->feed_count += 1;
    target->last_feed_direction = normalized_or(blob.velocity, target->last_feed_direction);
    events.virus_feeds.push_back({world.tick, target->id, blob.id, target->feed_count});
    if (target->feed_count >= world.config.virus_split_feeds) {
      Virus child{world.next_id(EntityKind::Virus), target->position, {}, 0, {1.0, 0.0}};
      target->feed_count = 0;
      target->velocity = target->last_feed_direction * boost;
      spawned.push_back(child);
      events.virus_spawns.push_back({world.tick, target->id, child.id});
    }
  }
  world.blobs = std::move(kept);
  for (const Virus& v : spawned) {
    world.viruses.push_back(v);
    crush_pellets_under(world, v);
  }
}

void resolve_consumption(WorldState& world, TickEvents& events) {
  const auto order = cells_by_mass(world);
  std::vector<std::vector<bool>> eaten(world.players.size());
  for (std::size_t p = 0; p < world.players.size(); ++p) eaten[p].assign(world.players[p].cells.size(), false);
  std::vector<bool> blob_eaten(world.blobs.size(), false);
  std::vector<std::size_t> blob_order(world.blobs.size());
  for (std::size_t i = 0; i < blob_order.size(); ++i) blob_order[i] = i;
  std::sort(blob_order.begin(), blob_order.end(),
            [&](auto a, auto b) { return world.blobs[a].id.serial < world.blobs[b].id.serial; });
  // Prey candidates visited in serial order.
  std::vector<CellRef> by_serial = order;
  std::sort(by_serial.begin(), by_serial.end(), [&](CellRef a, CellRef b) {
    return world.players[a.player].cells[a.cell].id.serial < world.players[b.player].cells[b.cell].id.serial;
  });

  for (const CellRef ref : order) {
    if (eaten[ref.player][ref.cell]) continue;
    Cell& eater = world.players[ref.player].cells[ref.cell];
    double r = radius_of(eater.mass);

    for (std::uint64_t serial : world.pellets.serials_within(eater.position, r)) {
      world.pellets.erase(serial);
      eater.mass += rules::kPelletMass;
      events.eats.push_back({world.tick, eater.id, eater.owner, {EntityKind::Pellet, serial}, kNoOwner,
                             rules::kPelletMass});
    }
    r = radius_of(eater.mass);

    for (std::size_t bi : blob_order) {
      if (blob_eaten[bi]) continue;
      const EjectedBlob& blob = world.blobs[bi];
      if (distance_sq(blob.position, eater.position) < r * r) {
        blob_eaten[bi] = true;
        eater.mass += blob.mass;
        events.eats.push_back({world.tick, eater.id, eater.owner, blob.id, kNoOwner, blob.mass});
        r = radius_of(eater.mass);
      }
    }

    for (const CellRef prey_ref : by_serial) {
      if (prey_ref.player == ref.player || eaten[prey_ref.player][prey_ref.cell]) continue;
      Cell& prey = world.players[prey_ref.player].cells[prey_ref.cell];
      if (eater.mass < rules::kEatRatio * prey.mass) continue;
      if (distance_sq(prey.position, eater.position) >= r * r) continue;
      eaten[prey_ref.player][prey_ref.cell] = true;
      eater.mass += prey.mass;
      events.eats.push_back({world.tick, eater.id, eater.owner, prey.id, prey.owner, prey.mass});
      r = radius_of(eater.mass);
    }
  }

  for (std::size_t p = 0; p < world.players.size(); ++p) {
    auto& cells = world.players[p].cells;
    std::vector<Cell> kept;
    kept.reserve(cells.size());
    for (std::size_t c = 0; c < cells.size(); ++c)
      if (!eaten[p][c]) kept.push_back(cells[c]);
    cells = std::move(kept);
  }
  if (std::find(blob_eaten.begin(), blob_eaten.end(), true) != blob_eaten.end()) {
    std::vector<EjectedBlob> kept;
    for (std::size_t i = 0; i < world.blobs.size(); ++i)
      if (!blob_eaten[i]) kept.push_back(world.blobs[i]);
    world.blobs = std::move(kept);
  }
}

void virus_interaction(WorldState& world, TickEvents& events) {
  for (PlayerState& player : world.players) {
    if (player.virus_eat_streak > 0 && world.tick - player.last_virus_eat_tick >= rules::kVirusStreakResetTicks) {
      player.virus_eat_streak = 0;
      player.decay_multiplier = 1.0;
    }
  }
  if (world.viruses.empty()) return;
  const double threshold = rules::kEatRatio * rules::kVirusMass;

  // Only cells present at the start of the stage may pop a virus.
  std::vector<std::uint64_t> candidates;
  for (const CellRef ref : cells_by_mass(world)) {
    const Cell& c = world.players[ref.player].cells[ref.cell];
    if (c.mass >= threshold) candidates.push_back(c.id.serial);
  }
  for (std::uint64_t serial : candidates) {
    PlayerState* owner = nullptr;
    Cell* cell = nullptr;
    for (PlayerState& p : world.players) {
      for (Cell& c : p.cells) {
        if (c.id.serial == serial) {
          owner = &p;
          cell = &c;
        }
      }
    }
    if (!cell) continue;
    const double r = radius_of(cell->mass);
    auto hit = std::find_if(world.viruses.begin(), world.viruses.end(),
                            [&](const Virus& v) { return distance_sq(v.position, cell->position) < r * r; });
    if (hit == world.viruses.end()) continue;

    const EntityId virus_id = hit->id;
    world.viruses.erase(hit);
    cell->mass += rules::kVirusMass;
    events.eats.push_back({world.tick, cell->id, owner->index, virus_id, kNoOwner, rules::kVirusMass});
    owner->virus_eat_streak += 1;
    owner->last_virus_eat_tick = world.tick;
    owner->decay_multiplier = rules::decay_multiplier_for_streak(owner->virus_eat_streak);

    const std::size_t others = owner->cells.size() - 1;
    const std::size_t free_slots = world.config.cell_cap > others ? world.config.cell_cap - others : 0;
    const auto by_mass = static_cast<std::size_t>(std::floor(cell->mass / rules::kSplitMinMass));
    const std::size_t pieces = std::min(free_slots, std::max<std::size_t>(2, by_mass));
    if (pieces < 2) {
      events.virus_pops.push_back({world.tick, owner->index, cell->id, virus_id, 1});
      continue;
    }
    const double total = cell->mass;
    const double piece = total / static_cast<double>(pieces);
    const Vec2 origin = cell->position;
    const Tick ready = world.tick + rules::merge_cooldown(piece);
    cell->mass = total - piece * static_cast<double>(pieces - 1);
    cell->merge_ready_tick = ready;
    cell->split_impulse = radial_impulse(piece, Vec2{1.0, 0.0});
    const EntityId cell_id = cell->id;
    const PlayerIndex owner_index = owner->index;
    const Cell base = *cell;
    for (std::size_t j = 1; j < pieces; ++j) {
      const double angle = 2.0 * std::numbers::pi * static_cast<double>(j) / static_cast<double>(pieces);
      Cell fragment = base;
      fragment.id = world.next_id(EntityKind::Cell);
      fragment.mass = piece;
      fragment.position = origin;
      fragment.created_tick = world.tick;
      fragment.split_impulse = radial_impulse(piece, Vec2{std::cos(angle), std::sin(angle)});
      owner->cells.push_back(fragment);
    }
    events.virus_pops.push_back({world.tick, owner_index, cell_id, virus_id, static_cast<std::uint32_t>(pieces)});
  }
}

void merge_pass(WorldState& world, TickEvents& events) {
  for (PlayerState& player : world.players) {
    auto& cells = player.cells;
    if (cells.size() < 2) continue;
    std::sort(cells.begin(), cells.end(), [](const Cell& a, const Cell& b) { return a.id.serial < b.id.serial; });

    bool merged = true;
    while (merged) {
      merged = false;
      for (std::size_t i = 0; i < cells.size() && !merged; ++i) {
        for (std::size_t j = i + 1; j < cells.size() && !merged; ++j) {
          Cell& a = cells[i];
          Cell& b = cells[j];
          if (world.tick < a.merge_ready_tick || world.tick < b.merge_ready_tick) continue;
          const double reach = std::max(radius_of(a.mass), radius_of(b.mass));
          if (distance_sq(a.position, b.position) >= reach * reach) continue;
          const bool keep_a = a.mass >= b.mass;
          Cell& keep = keep_a ? a : b;
          const Cell gone = keep_a ? b : a;
          const double total = keep.mass + gone.mass;
          keep.position = (keep.position * keep.mass + gone.position * gone.mass) * (1.0 / total);
          keep.mass = total;
          events.merges.push_back({world.tick, player.index, keep.id, gone.id, gone.mass});
          cells.erase(cells.begin() + static_cast<std::ptrdiff_t>(keep_a ? j : i));
          merged = true;
        }
      }
    }

    for (std::size_t i = 0; i < cells.size(); ++i) {
      for (std::size_t j = i + 1; j < cells.size(); ++j) {
        Cell& a = cells[i];
        Cell& b = cells[j];
        if (world.tick >= a.merge_ready_tick && world.tick >= b.merge_ready_tick) continue;
        const double ra = radius_of(a.mass), rb = radius_of(b.mass);
        const Vec2 delta = b.position - a.position;
        const double dist = delta.norm();
        const double overlap = ra + rb - dist;
        if (overlap <= 0.0) continue;
        const Vec2 dir = dist > 1e-12 ? delta * (1.0 / dist) : tie_break_direction(b.id.serial);
        const double total = a.mass + b.mass;
        a.position = world.clamp_to_arena(a.position - dir * (overlap * b.mass / total));
        b.position = world.clamp_to_arena(b.position + dir * (overlap * a.mass / total));
      }
    }
  }
}

void apply_decay(WorldState& world, TickEvents& events) {
  const auto& cfg = world.config;
  if (!cfg.mass_decay_enabled || world.tick % cfg.decay_interval != 0) return;
  const double per_interval = cfg.decay_rate * (static_cast<double>(cfg.decay_interval) / kTickRate);
  for (PlayerState& player : world.players) {
    const double factor = std::max(0.0, 1.0 - per_interval * player.decay_multiplier);
    double loss = 0.0;
    for (Cell& cell : player.cells) {
      const double next = std::max(cfg.mass_floor, cell.mass * factor);
      if (next < cell.mass) {
        loss += cell.mass - next;
        cell.mass = next;
      }
    }
    if (loss > 0.0) events.decays.push_back({world.tick, player.index, loss});
  }
}

void regeneration_pass(WorldState& world, TickEvents& events) {
  const auto& cfg = world.config;
  // Viruses first: a new virus crushes pellets under it, and the top-up below
  // must leave exactly max_pellets.
  if (cfg.virus_regen_enabled) {
    const double vr = radius_of(rules::kVirusMass);
    while (world.viruses.size() < cfg.min_viruses) {
      Vec2 best;
      double best_clearance = -std::numeric_limits<double>::infinity();
      for (int attempt = 0; attempt < rules::kSpawnRetries; ++attempt) {
        const Vec2 p{world.placement_rng.uniform(vr, cfg.arena_width - vr),
                     world.placement_rng.uniform(vr, cfg.arena_height - vr)};
        double clearance = std::numeric_limits<double>::infinity();
        for (const PlayerState& player : world.players)
          for (const Cell& c : player.cells)
            clearance = std::min(clearance, distance(c.position, p) - vr - radius_of(c.mass));
        if (clearance > best_clearance) {
          best_clearance = clearance;
          best = p;
        }
        if (clearance >= 0.0) break;
      }
      Virus v{world.next_id(EntityKind::Virus), best, {}, 0, {1.0, 0.0}};
      world.viruses.push_back(v);
      events.virus_spawns.push_back({world.tick, EntityId{EntityKind::Virus, 0}, v.id});
      crush_pellets_under(world, v);
    }
  }
  if (world.tick % cfg.pellet_regen_interval == 0) {
    while (world.pellets.size() < cfg.max_pellets) {
      const Vec2 p = pellet_position(world);
      world.pellets.insert(Pellet{world.next_id(EntityKind::Pellet), p});
    }
  }
}

void death_respawn_pass(WorldState& world, TickEvents& events) {
  for (PlayerState& player : world.players) {
    if (player.alive()) continue;
    double death_mass = 0.0;
    for (const EatEvent& e : events.eats)
      if (e.tick == world.tick && e.eaten_owner == player.index) death_mass += e.mass;
    player.lifetime_deaths += 1;
    events.deaths.push_back({world.tick, player.index, death_mass});
    const Vec2 p = respawn_position(world, player.spawn_mass);
    const Cell& c = spawn_cell(world, player, p, player.spawn_mass);
    events.respawns.push_back({world.tick, player.index, c.id, c.mass});
  }
}

TickEvents step_tick(WorldState& world, std::span<const ControlInput> controls) {
  if (controls.size() != world.players.size())
    throw ProtocolError("step_tick: expected one control per player (" + std::to_string(world.players.size()) +
                        "), got " + std::to_string(controls.size()));
  std::vector<ControlInput> ordered(controls.size());
  std::vector<bool> seen(controls.size(), false);
  for (const ControlInput& c : controls) {
    if (c.player >= world.players.size() || seen[c.player])
      throw ProtocolError("step_tick: control references unknown or duplicate player " + std::to_string(c.player));
    if (!std::isfinite(c.cursor_world.x) || !std::isfinite(c.cursor_world.y))
      throw ProtocolError("step_tick: non-finite cursor for player " + std::to_string(c.player));
    if (!world.players[c.player].alive())
      throw ProtocolError("step_tick: control references dead player " + std::to_string(c.player));
    seen[c.player] = true;
    ordered[c.player] = c;
  }

  TickEvents events;
  world.tick += 1;
  for (const ControlInput& c : ordered) {
    if (c.discrete == Discrete::Split) do_split(world, world.players[c.player], c.cursor_world, events);
    if (c.discrete == Discrete::Eject) do_eject(world, world.players[c.player], c.cursor_world, events);
  }
  apply_movement(world, ordered);
  feed_viruses(world, events);
  resolve_consumption(world, events);
  virus_interaction(world, events);
  merge_pass(world, events);
  apply_decay(world, events);
  regeneration_pass(world, events);
  death_respawn_pass(world, events);
  return events;
}

}  // namespace agarcl

#include "agarcl/world.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <limits>
#include <sstream>

#include "agarcl/rules.hpp"

namespace agarcl {
namespace {

class Digest {
 public:
  void word(std::uint64_t w) {
    state_ = std::rotl(state_ ^ mix64(w + count_ * 0xD6E8FEB86659FD93ULL), 29) * 0x9E3779B97F4A7C15ULL;
    ++count_;
  }
  void real(double v) { word(std::bit_cast<std::uint64_t>(v)); }
  void vec(Vec2 v) {
    real(v.x);
    real(v.y);
  }
  void flag(bool b) { word(b ? 1 : 0); }
  std::uint64_t finish() const { return mix64(state_ ^ (count_ * 0xA0761D6478BD642FULL)); }

 private:
  std::uint64_t state_ = 0x243F6A8885A308D3ULL;
  std::uint64_t count_ = 0;
};

void digest_config(Digest& d, const WorldConfig& c) {
  d.real(c.arena_width);
  d.real(c.arena_height);
  d.word(c.max_pellets);
  d.word(c.pellet_regen_interval);
  d.word(c.min_viruses);
  d.real(c.decay_rate);
  d.word(c.decay_interval);
  d.real(c.initial_mass);
  d.real(c.mass_floor);
  d.word(c.cell_cap);
  d.word(c.virus_split_feeds);
  d.word(static_cast<std::uint64_t>(c.pellet_placement));
  d.real(c.square_path.half_side);
  d.real(c.square_path.band_width);
  d.flag(c.mass_decay_enabled);
  d.flag(c.virus_regen_enabled);
  d.real(c.noise_std);
  d.word(c.obs_resolution);
  d.word(c.seed);
}

void digest_rng(Digest& d, const Philox& rng) {
  d.word(rng.key());
  d.word(rng.counter());
}

double uniform_coord(Philox& rng, double extent, double margin) {
  if (extent <= 2.0 * margin) return extent * 0.5;
  return rng.uniform(margin, extent - margin);
}

bool clear_of_viruses(const WorldState& world, Vec2 p, double radius) {
  const double vr = radius_of(rules::kVirusMass);
  for (const auto& v : world.viruses) {
    const double reach = vr + radius;
    if (distance_sq(v.position, p) <= reach * reach) return false;
  }
  return true;
}

}  // namespace

std::string to_string(BotKind kind) {
  switch (kind) {
    case BotKind::Hungry: return "hungry";
    case BotKind::HungryShy: return "hungry_shy";
    case BotKind::Aggressive: return "aggressive";
    case BotKind::AggressiveShy: return "aggressive_shy";
    case BotKind::Stationary: return "stationary";
  }
  return "unknown";
}

std::optional<BotKind> bot_kind_from_string(const std::string& name) {
  for (BotKind k : {BotKind::Hungry, BotKind::HungryShy, BotKind::Aggressive, BotKind::AggressiveShy,
                    BotKind::Stationary}) {
    if (to_string(k) == name) return k;
  }
  return std::nullopt;
}

void WorldConfig::validate() const {
  std::ostringstream err;
  if (!(arena_width > 0.0) || !(arena_height > 0.0)) err << "arena dimensions must be positive; ";
  if (pellet_regen_interval == 0) err << "pellet_regen_interval must be >= 1; ";
  if (decay_interval == 0) err << "decay_interval must be >= 1; ";
  if (decay_interval != 0 && pellet_regen_interval % decay_interval != 0)
    err << "decay_interval must divide pellet_regen_interval; ";
  if (!(decay_rate >= 0.0) || decay_rate >= 1.0) err << "decay_rate must be in [0, 1); ";
  if (!(mass_floor > 0.0)) err << "mass_floor must be positive; ";
  if (!(initial_mass >= mass_floor)) err << "initial_mass must be >= mass_floor; ";
  if (cell_cap != 14) err << "cell_cap must be 14; ";
  if (virus_split_feeds == 0) err << "virus_split_feeds must be >= 1; ";
  if (!(noise_std >= 0.0)) err << "noise_std must be >= 0; ";
  if (obs_resolution < 16) err << "obs_resolution must be >= 16; ";
  if (pellet_placement == PelletPlacement::SquarePath) {
    const double outer = square_path.half_side + square_path.band_width * 0.5;
    if (!(square_path.band_width > 0.0) || !(square_path.half_side > square_path.band_width * 0.5) ||
        2.0 * outer > std::min(arena_width, arena_height))
      err << "square_path must fit inside the arena; ";
  }
  const std::string msg = err.str();
  if (!msg.empty()) throw ConfigError("invalid world config: " + msg.substr(0, msg.size() - 2));
}

Vec2 WorldState::clamp_to_arena(Vec2 p) const {
  return {std::clamp(p.x, 0.0, config.arena_width), std::clamp(p.y, 0.0, config.arena_height)};
}

double radius_of(double mass) {
  if (!(mass > 0.0)) throw DomainError("radius_of: mass must be positive");
  return std::sqrt(mass);
}

double speed_of(double mass) {
  if (!(mass > 0.0)) throw DomainError("speed_of: mass must be positive");
  return 100.0 / std::pow(mass, 0.439);
}

Cell& spawn_cell(WorldState& world, PlayerState& player, Vec2 position, double mass) {
  Cell cell;
  cell.id = world.next_id(EntityKind::Cell);
  cell.owner = player.index;
  cell.mass = mass;
  cell.position = world.clamp_to_arena(position);
  cell.created_tick = world.tick;
  cell.merge_ready_tick = world.tick;
  player.cells.push_back(cell);
  return player.cells.back();
}

Vec2 pellet_position(WorldState& world) {
  const auto& cfg = world.config;
  const double pr = radius_of(rules::kPelletMass);
  Vec2 candidate;
  for (int attempt = 0; attempt < rules::kSpawnRetries; ++attempt) {
    if (cfg.pellet_placement == PelletPlacement::SquarePath) {
      const Vec2 center{cfg.arena_width * 0.5, cfg.arena_height * 0.5};
      const double outer = cfg.square_path.half_side + cfg.square_path.band_width * 0.5;
      const double inner = cfg.square_path.half_side - cfg.square_path.band_width * 0.5;
      // Rejection-sample the band between two concentric squares.
      do {
        candidate = {world.placement_rng.uniform(center.x - outer, center.x + outer),
                     world.placement_rng.uniform(center.y - outer, center.y + outer)};
      } while (std::abs(candidate.x - center.x) < inner && std::abs(candidate.y - center.y) < inner);
    } else {
      candidate = {uniform_coord(world.placement_rng, cfg.arena_width, pr),
                   uniform_coord(world.placement_rng, cfg.arena_height, pr)};
    }
    if (clear_of_viruses(world, candidate, pr)) break;
  }
  return candidate;
}

Vec2 respawn_position(WorldState& world, double mass) {
  const double r = radius_of(mass);
  const auto& cfg = world.config;
  const double vr = radius_of(rules::kVirusMass);
  Vec2 best;
  double best_clearance = -std::numeric_limits<double>::infinity();
  for (int attempt = 0; attempt < rules::kSpawnRetries; ++attempt) {
    const Vec2 p{uniform_coord(world.respawn_rng, cfg.arena_width, r),
                 uniform_coord(world.respawn_rng, cfg.arena_height, r)};
    double clearance = std::numeric_limits<double>::infinity();
    for (const auto& player : world.players) {
      for (const auto& c : player.cells) {
        if (c.mass <= cfg.mass_floor) continue;
        clearance = std::min(clearance, distance(c.position, p) - r - radius_of(c.mass));
      }
    }
    for (const auto& v : world.viruses) clearance = std::min(clearance, distance(v.position, p) - r - vr);
    if (clearance >= 0.0) return p;
    if (clearance > best_clearance) {
      best_clearance = clearance;
      best = p;
    }
  }
  return best;
}

WorldState create_world(const WorldConfig& config, const WorldLayout& layout) {
  config.validate();
  WorldState world;
  world.config = config;
  world.pellets = PelletStore(config.arena_width, config.arena_height);
  const Philox root(mix64(config.seed));
  world.placement_rng = root.split(static_cast<std::uint64_t>(RngStream::Placement));
  world.respawn_rng = root.split(static_cast<std::uint64_t>(RngStream::Respawn));

  const double vr = radius_of(rules::kVirusMass);
  for (Vec2 p : layout.fixed_viruses) {
    if (!world.in_arena(p)) throw ConstructionError("fixed virus outside the arena");
    world.viruses.push_back(Virus{world.next_id(EntityKind::Virus), p, {}, 0, {1.0, 0.0}});
  }
  while (world.viruses.size() < config.min_viruses) {
    bool placed = false;
    for (int attempt = 0; attempt < rules::kSpawnRetries && !placed; ++attempt) {
      const Vec2 p{uniform_coord(world.placement_rng, config.arena_width, vr),
                   uniform_coord(world.placement_rng, config.arena_height, vr)};
      const bool clear = std::none_of(world.viruses.begin(), world.viruses.end(), [&](const Virus& v) {
        return distance_sq(v.position, p) < 4.0 * vr * vr;
      });
      if (clear) {
        world.viruses.push_back(Virus{world.next_id(EntityKind::Virus), p, {}, 0, {1.0, 0.0}});
        placed = true;
      }
    }
    if (!placed) throw ConstructionError("arena too small to place " + std::to_string(config.min_viruses) + " viruses");
  }

  for (std::uint32_t i = 0; i < config.max_pellets; ++i) {
    const Vec2 p = pellet_position(world);
    world.pellets.insert(Pellet{world.next_id(EntityKind::Pellet), p});
  }

  PlayerIndex index = 0;
  for (const auto& setup : layout.players) {
    PlayerState player;
    player.index = index++;
    player.is_learning_agent = setup.is_learning_agent;
    player.bot = setup.bot;
    player.spawn_mass = setup.spawn_mass;
    if (!(setup.spawn_mass >= config.mass_floor)) throw ConstructionError("player spawn mass below the mass floor");
    const double r = radius_of(setup.spawn_mass);
    Vec2 position;
    if (setup.fixed_position) {
      position = *setup.fixed_position;
    } else {
      bool placed = false;
      for (int attempt = 0; attempt < rules::kSpawnRetries && !placed; ++attempt) {
        position = {uniform_coord(world.placement_rng, config.arena_width, r),
                    uniform_coord(world.placement_rng, config.arena_height, r)};
        placed = true;
        for (const auto& other : world.players) {
          for (const auto& c : other.cells) {
            if (c.mass <= setup.spawn_mass) continue;
            const double reach = r + radius_of(c.mass);
            if (distance_sq(c.position, position) < reach * reach) placed = false;
          }
        }
      }
      if (!placed) throw ConstructionError("arena too small to place player " + std::to_string(player.index));
    }
    world.players.push_back(std::move(player));
    spawn_cell(world, world.players.back(), position, setup.spawn_mass);
  }
  return world;
}

std::uint64_t config_hash(const WorldConfig& config) {
  Digest d;
  digest_config(d, config);
  return d.finish();
}

std::uint64_t state_hash(const WorldState& world) {
  Digest d;
  digest_config(d, world.config);
  d.word(world.tick);
  d.word(world.id_counter);
  digest_rng(d, world.placement_rng);
  digest_rng(d, world.respawn_rng);
  for (const auto& p : world.players) {
    d.word(p.index);
    d.word(p.cells.size());
    d.word(p.virus_eat_streak);
    d.word(p.last_virus_eat_tick);
    d.real(p.decay_multiplier);
    d.word(p.lifetime_deaths);
  }

  // Merge the per-kind lists into one serial-ordered stream.
  const auto& pellets = world.pellets.items();
  std::vector<const Cell*> cells;
  for (const auto& p : world.players)
    for (const auto& c : p.cells) cells.push_back(&c);
  std::sort(cells.begin(), cells.end(), [](const Cell* a, const Cell* b) { return a->id.serial < b->id.serial; });
  std::vector<const Virus*> viruses;
  for (const auto& v : world.viruses) viruses.push_back(&v);
  std::sort(viruses.begin(), viruses.end(), [](auto a, auto b) { return a->id.serial < b->id.serial; });
  std::vector<const EjectedBlob*> blobs;
  for (const auto& b : world.blobs) blobs.push_back(&b);
  std::sort(blobs.begin(), blobs.end(), [](auto a, auto b) { return a->id.serial < b->id.serial; });

  std::size_t ip = 0, ic = 0, iv = 0, ib = 0;
  constexpr std::uint64_t kNone = std::numeric_limits<std::uint64_t>::max();
  for (;;) {
    const std::uint64_t sp = ip < pellets.size() ? pellets[ip].id.serial : kNone;
    const std::uint64_t sc = ic < cells.size() ? cells[ic]->id.serial : kNone;
    const std::uint64_t sv = iv < viruses.size() ? viruses[iv]->id.serial : kNone;
    const std::uint64_t sb = ib < blobs.size() ? blobs[ib]->id.serial : kNone;
    const std::uint64_t next = std::min({sp, sc, sv, sb});
    if (next == kNone) break;
    d.word(next);
    if (next == sp) {
      d.word(static_cast<std::uint64_t>(EntityKind::Pellet));
      d.vec(pellets[ip++].position);
    } else if (next == sc) {
      const Cell& c = *cells[ic++];
      d.word(static_cast<std::uint64_t>(EntityKind::Cell));
      d.word(c.owner);
      d.real(c.mass);
      d.vec(c.position);
      d.vec(c.velocity);
      d.vec(c.split_impulse);
      d.word(c.merge_ready_tick);
      d.word(c.created_tick);
    } else if (next == sv) {
      const Virus& v = *viruses[iv++];
      d.word(static_cast<std::uint64_t>(EntityKind::Virus));
      d.vec(v.position);
      d.vec(v.velocity);
      d.word(v.feed_count);
      d.vec(v.last_feed_direction);
    } else {
      const EjectedBlob& b = *blobs[ib++];
      d.word(static_cast<std::uint64_t>(EntityKind::Blob));
      d.vec(b.position);
      d.vec(b.velocity);
      d.real(b.mass);
      d.word(b.source_owner);
    }
  }
  return d.finish();
}

}  // namespace agarcl

#include "agarcl/observation.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstring>

#include <json.hpp>

#include "agarcl/dynamics.hpp"
#include "agarcl/rules.hpp"

namespace agarcl {
namespace {

static_assert(std::endian::native == std::endian::little, "pixel buffers are serialized as host little-endian floats");

struct Raster {
  std::uint32_t n;
  Vec2 lower;
  double scale;
  std::vector<double> xs;  // pixel-centre world x per column
  std::vector<double> ys;  // pixel-centre world y per row
  float* data;

  float* plane(Channel ch) const { return data + static_cast<std::size_t>(ch) * n * n; }

  void disc(Channel ch, Vec2 c, double r, float value) const {
    const double fx0 = (c.x - r - lower.x) / scale - 0.5;
    const double fx1 = (c.x + r - lower.x) / scale - 0.5;
    const double fy0 = (c.y - r - lower.y) / scale - 0.5;
    const double fy1 = (c.y + r - lower.y) / scale - 0.5;
    if (fx1 < -1.0 || fy1 < -1.0 || fx0 > n || fy0 > n) return;
    // One pixel of slack on each side; the exact test below decides.
    const int col0 = std::max(0, static_cast<int>(std::floor(fx0)) - 1);
    const int col1 = std::min(static_cast<int>(n) - 1, static_cast<int>(std::ceil(fx1)) + 1);
    const int row0 = std::max(0, static_cast<int>(std::floor(fy0)) - 1);
    const int row1 = std::min(static_cast<int>(n) - 1, static_cast<int>(std::ceil(fy1)) + 1);
    const double r2 = r * r;
    float* p = plane(ch);
    for (int row = row0; row <= row1; ++row) {
      const double dy = ys[row] - c.y;
      const double dy2 = dy * dy;
      if (dy2 > r2) continue;
      float* line = p + static_cast<std::size_t>(row) * n;
      for (int col = col0; col <= col1; ++col) {
        const double dx = xs[col] - c.x;
        if (dx * dx + dy2 <= r2) line[col] = std::max(line[col], value);
      }
    }
  }
};

/// True when some grid line k * pitch (0 <= k * pitch <= extent) falls in [lo, hi).
bool crosses_gridline(double lo, double hi, double pitch, double extent) {
  // Smallest line >= lo; the -1 guards against rounding in the division. Pixels
  // may be wider than the pitch, so clamp to line 0 rather than stepping near lo.
  const double first = std::max(0.0, std::ceil(lo / pitch) - 1.0);
  for (double cand = first; cand <= first + 2.0; cand += 1.0) {
    const double line = cand * pitch;
    if (line <= extent && lo <= line && line < hi) return true;
  }
  return false;
}

}  // namespace

bool Viewport::contains_circle(Vec2 c, double r) const {
  const Vec2 lo = lower(), hi = upper();
  return c.x - r >= lo.x && c.x + r <= hi.x && c.y - r >= lo.y && c.y + r <= hi.y;
}

bool Viewport::intersects_circle(Vec2 c, double r) const {
  const double half = side * 0.5;
  const double dx = std::max(std::abs(c.x - center.x) - half, 0.0);
  const double dy = std::max(std::abs(c.y - center.y) - half, 0.0);
  return dx * dx + dy * dy < r * r;
}

Viewport compute_viewport(const WorldState& world, const PlayerState& player, const ObservationParams& params) {
  Viewport vp;
  if (params.fully_observable || player.cells.empty()) {
    vp.center = {world.config.arena_width * 0.5, world.config.arena_height * 0.5};
    vp.side = std::max(world.config.arena_width, world.config.arena_height);
    return vp;
  }
  Vec2 weighted;
  double total = 0.0;
  for (const Cell& c : player.cells) {
    weighted += c.position * c.mass;
    total += c.mass;
  }
  vp.center = weighted * (1.0 / total);
  double reach = 0.0;
  for (const Cell& c : player.cells) reach = std::max(reach, distance(c.position, vp.center) + radius_of(c.mass));
  vp.side = std::max(params.base_view, params.fov_margin * 2.0 * reach);
  return vp;
}

void render_pixel_obs(const WorldState& world, const PlayerState& player, std::uint32_t resolution,
                      const ObservationParams& params, PixelObservation& out) {
  if (resolution < 16) throw DomainError("render_pixel_obs: resolution must be >= 16");
  const std::uint32_t n = resolution;
  out.resolution = n;
  out.tick = world.tick;
  out.data.assign(static_cast<std::size_t>(kChannels) * n * n, 0.0f);

  const Viewport vp = compute_viewport(world, player, params);
  Raster raster{n, vp.lower(), vp.side / n, {}, {}, out.data.data()};
  raster.xs.resize(n);
  raster.ys.resize(n);
  for (std::uint32_t i = 0; i < n; ++i) {
    raster.xs[i] = pixel_center(raster.lower.x, raster.scale, i);
    raster.ys[i] = pixel_center(raster.lower.y, raster.scale, i);
  }

  // Gridlines: columns/rows whose pixel span contains a line, limited to the arena.
  const double pitch = params.grid_pitch;
  if (pitch > 0.0) {
    const double w = world.config.arena_width, h = world.config.arena_height;
    float* self = raster.plane(Channel::Self);
    std::vector<bool> grid_col(n), grid_row(n), in_x(n), in_y(n);
    for (std::uint32_t i = 0; i < n; ++i) {
      const double x0 = raster.lower.x + i * raster.scale;
      const double y0 = raster.lower.y + i * raster.scale;
      grid_col[i] = crosses_gridline(x0, x0 + raster.scale, pitch, w);
      grid_row[i] = crosses_gridline(y0, y0 + raster.scale, pitch, h);
      in_x[i] = raster.xs[i] >= 0.0 && raster.xs[i] <= w;
      in_y[i] = raster.ys[i] >= 0.0 && raster.ys[i] <= h;
    }
    for (std::uint32_t row = 0; row < n; ++row) {
      for (std::uint32_t col = 0; col < n; ++col) {
        if ((grid_col[col] && in_y[row]) || (grid_row[row] && in_x[col]))
          self[static_cast<std::size_t>(row) * n + col] = params.gridline_intensity;
      }
    }
  }

  const Vec2 lo = vp.lower(), hi = vp.upper();
  const double pr = radius_of(rules::kPelletMass);
  world.pellets.for_each_candidate_in_rect({lo.x - pr, lo.y - pr}, {hi.x + pr, hi.y + pr}, [&](const Pellet& p) {
    raster.disc(Channel::Pellets, p.position, pr, 1.0f);
  });
  const double vr = radius_of(rules::kVirusMass);
  for (const Virus& v : world.viruses)
    if (vp.intersects_circle(v.position, vr)) raster.disc(Channel::Viruses, v.position, vr, 1.0f);
  for (const PlayerState& other : world.players) {
    const Channel ch = other.index == player.index ? Channel::Self : Channel::Enemies;
    for (const Cell& c : other.cells) {
      const double r = radius_of(c.mass);
      if (vp.intersects_circle(c.position, r)) raster.disc(ch, c.position, r, 1.0f);
    }
  }
}

PixelObservation render_pixel_obs(const WorldState& world, const PlayerState& player, std::uint32_t resolution,
                                  const ObservationParams& params) {
  PixelObservation out;
  render_pixel_obs(world, player, resolution, params, out);
  return out;
}

SymbolicObservation encode_symbolic(const WorldState& world, const PlayerState& player,
                                    const ObservationParams& params) {
  SymbolicObservation obs;
  obs.arena_width = world.config.arena_width;
  obs.arena_height = world.config.arena_height;
  obs.elapsed_ticks = world.tick;
  obs.viewport = compute_viewport(world, player, params);
  obs.score = player.total_mass();
  for (const Cell& c : player.cells) {
    if (c.mass >= rules::kSplitMinMass && player.cells.size() < world.config.cell_cap) obs.can_split = true;
    if (c.mass >= world.config.mass_floor + rules::kEjectCost) obs.can_eject = true;
  }
  const Viewport& vp = obs.viewport;
  const double pr = radius_of(rules::kPelletMass);
  const Vec2 lo = vp.lower(), hi = vp.upper();
  world.pellets.for_each_candidate_in_rect({lo.x - pr, lo.y - pr}, {hi.x + pr, hi.y + pr}, [&](const Pellet& p) {
    if (vp.intersects_circle(p.position, pr))
      obs.overlap.push_back({EntityKind::Pellet, p.id.serial, p.position, pr, rules::kPelletMass, {}, false, kNoOwner});
  });
  const double vr = radius_of(rules::kVirusMass);
  for (const Virus& v : world.viruses)
    if (vp.intersects_circle(v.position, vr))
      obs.overlap.push_back({EntityKind::Virus, v.id.serial, v.position, vr, rules::kVirusMass, v.velocity, false,
                             kNoOwner});
  for (const EjectedBlob& b : world.blobs) {
    const double r = radius_of(b.mass);
    if (vp.intersects_circle(b.position, r))
      obs.overlap.push_back({EntityKind::Blob, b.id.serial, b.position, r, b.mass, b.velocity, false, kNoOwner});
  }
  for (const PlayerState& other : world.players) {
    for (const Cell& c : other.cells) {
      const double r = radius_of(c.mass);
      if (vp.intersects_circle(c.position, r))
        obs.overlap.push_back(
            {EntityKind::Cell, c.id.serial, c.position, r, c.mass, c.velocity, other.index == player.index, c.owner});
    }
  }
  std::sort(obs.overlap.begin(), obs.overlap.end(), [](const auto& a, const auto& b) { return a.serial < b.serial; });
  return obs;
}

std::string symbolic_to_json(const SymbolicObservation& obs) {
  using nlohmann::json;
  static constexpr const char* kKind[] = {"cell", "pellet", "virus", "blob"};
  json overlap = json::array();
  for (const auto& e : obs.overlap) {
    json rec = {{"kind", kKind[static_cast<int>(e.kind)]},
                {"id", e.serial},
                {"x", e.position.x},
                {"y", e.position.y},
                {"radius", e.radius},
                {"mass", e.mass},
                {"vx", e.velocity.x},
                {"vy", e.velocity.y},
                {"own", e.own}};
    if (e.kind == EntityKind::Cell) rec["owner"] = e.owner;
    overlap.push_back(std::move(rec));
  }
  const Vec2 lo = obs.viewport.lower(), hi = obs.viewport.upper();
  json doc = {
      {"schema", "agarcl.symbolic/1"},
      {"global", {{"map_size", {obs.arena_width, obs.arena_height}}, {"elapsed_ticks", obs.elapsed_ticks}}},
      {"player",
       {{"viewport", {{"x0", lo.x}, {"y0", lo.y}, {"x1", hi.x}, {"y1", hi.y}}},
        {"score", obs.score},
        {"can_split", obs.can_split},
        {"can_eject", obs.can_eject},
        {"overlap", std::move(overlap)}}}};
  return doc.dump();
}

std::vector<std::uint8_t> pixel_to_bytes(const PixelObservation& obs) {
  std::vector<std::uint8_t> bytes(obs.data.size() * sizeof(float));
  std::memcpy(bytes.data(), obs.data.data(), bytes.size());
  return bytes;
}

}  // namespace agarcl

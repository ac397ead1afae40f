#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "agarcl/world.hpp"

namespace agarcl {

struct ObservationParams {
  double base_view = 60.0;
  double fov_margin = 1.5;
  double grid_pitch = 10.0;
  float gridline_intensity = 0.2f;
  /// Render the whole arena regardless of the player's size.
  bool fully_observable = false;

  bool operator==(const ObservationParams&) const = default;
};

/// Square region of the world rendered into an observation.
struct Viewport {
  Vec2 center;
  double side = 0.0;

  Vec2 lower() const { return {center.x - side * 0.5, center.y - side * 0.5}; }
  Vec2 upper() const { return {center.x + side * 0.5, center.y + side * 0.5}; }
  bool contains_circle(Vec2 c, double r) const;
  bool intersects_circle(Vec2 c, double r) const;
  /// Maps a cursor in [-1,1]^2 affinely onto the viewport (+y up in both).
  Vec2 cursor_to_world(Vec2 cursor) const { return center + cursor * (side * 0.5); }
};

enum class Channel : std::uint8_t { Pellets = 0, Viruses = 1, Enemies = 2, Self = 3 };
constexpr int kChannels = 4;

/// Plane-major float tensor: data[(channel * N + row) * N + col]. Row 0 is the
/// viewport's lowest y; column 0 its lowest x.
struct PixelObservation {
  std::uint32_t resolution = 0;
  Tick tick = 0;
  std::vector<float> data;

  float at(Channel ch, std::uint32_t row, std::uint32_t col) const {
    return data[(static_cast<std::size_t>(ch) * resolution + row) * resolution + col];
  }
  std::span<const float> plane(Channel ch) const {
    const std::size_t n = static_cast<std::size_t>(resolution) * resolution;
    return std::span<const float>(data).subspan(static_cast<std::size_t>(ch) * n, n);
  }
};

struct EntityRecord {
  EntityKind kind;
  std::uint64_t serial;
  Vec2 position;
  double radius;
  double mass;
  Vec2 velocity;
  bool own;
  PlayerIndex owner;  // kNoOwner-equivalent 0xFFFFFFFF for non-cells
};

struct SymbolicObservation {
  double arena_width = 0.0;
  double arena_height = 0.0;
  Tick elapsed_ticks = 0;
  Viewport viewport;
  double score = 0.0;
  bool can_split = false;
  bool can_eject = false;
  std::vector<EntityRecord> overlap;  // ascending serial
};

/// Mass-weighted centroid of the player's cells; side grows with the spread.
Viewport compute_viewport(const WorldState& world, const PlayerState& player, const ObservationParams& params = {});

/// Renders into `out`, reusing its buffer. Binary disc coverage: a pixel is
/// lit when its centre, mapped to world coordinates, lies inside the circle.
void render_pixel_obs(const WorldState& world, const PlayerState& player, std::uint32_t resolution,
                      const ObservationParams& params, PixelObservation& out);
PixelObservation render_pixel_obs(const WorldState& world, const PlayerState& player, std::uint32_t resolution,
                                  const ObservationParams& params = {});

SymbolicObservation encode_symbolic(const WorldState& world, const PlayerState& player,
                                    const ObservationParams& params = {});

/// JSON encoding documented in docs/observations.md.
std::string symbolic_to_json(const SymbolicObservation& obs);
/// Raw little-endian float32 bytes, plane-major (channel, row, column).
std::vector<std::uint8_t> pixel_to_bytes(const PixelObservation& obs);

/// World-x of the centre of pixel column `col` (identical expression is used
/// for rows). Exposed so external checkers can reproduce coverage exactly.
inline double pixel_center(double lower, double scale, std::uint32_t index) {
  return lower + (static_cast<double>(index) + 0.5) * scale;
}

}  // namespace agarcl

#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "agarcl/types.hpp"

namespace agarcl {

/// Pellets kept sorted by serial, with a uniform bucket grid for radius and
/// nearest-neighbour queries. Serials must be inserted in increasing order.
class PelletStore {
 public:
  PelletStore() = default;
  PelletStore(double width, double height, double bucket_size = 10.0);

  void insert(const Pellet& pellet);
  bool erase(std::uint64_t serial);
  void clear();

  const std::vector<Pellet>& items() const { return items_; }
  std::size_t size() const { return items_.size(); }
  bool empty() const { return items_.empty(); }

  /// Calls fn(const Pellet&) for every pellet whose centre lies within
  /// `radius` of `center` (strictly inside).
  template <typename Fn>
  void for_each_within(Vec2 center, double radius, Fn&& fn) const;

  /// Calls fn(const Pellet&) for pellets whose bucket overlaps the rectangle;
  /// callers do their own exact test.
  template <typename Fn>
  void for_each_candidate_in_rect(Vec2 lo, Vec2 hi, Fn&& fn) const;

  /// Serials of pellets strictly inside the circle, ascending.
  std::vector<std::uint64_t> serials_within(Vec2 center, double radius) const;

  /// Closest pellet by Euclidean distance; ties go to the lowest serial.
  std::optional<Pellet> nearest(Vec2 point) const;

 private:
  struct Entry {
    std::uint64_t serial;
    Vec2 position;
  };

  std::size_t bucket_of(Vec2 p) const;
  int col_of(double x) const;
  int row_of(double y) const;

  double bucket_size_ = 10.0;
  int cols_ = 1;
  int rows_ = 1;
  std::vector<Pellet> items_;
  std::vector<std::vector<Entry>> buckets_;
};

template <typename Fn>
void PelletStore::for_each_within(Vec2 center, double radius, Fn&& fn) const {
  if (items_.empty() || !(radius > 0.0)) return;
  const int c0 = col_of(center.x - radius), c1 = col_of(center.x + radius);
  const int r0 = row_of(center.y - radius), r1 = row_of(center.y + radius);
  const double r2 = radius * radius;
  for (int row = r0; row <= r1; ++row) {
    for (int col = c0; col <= c1; ++col) {
      for (const Entry& e : buckets_[static_cast<std::size_t>(row) * cols_ + col]) {
        if (distance_sq(e.position, center) < r2) fn(Pellet{{EntityKind::Pellet, e.serial}, e.position});
      }
    }
  }
}

template <typename Fn>
void PelletStore::for_each_candidate_in_rect(Vec2 lo, Vec2 hi, Fn&& fn) const {
  if (items_.empty() || hi.x < lo.x || hi.y < lo.y) return;
  const int c0 = col_of(lo.x), c1 = col_of(hi.x);
  const int r0 = row_of(lo.y), r1 = row_of(hi.y);
  for (int row = r0; row <= r1; ++row)
    for (int col = c0; col <= c1; ++col)
      for (const Entry& e : buckets_[static_cast<std::size_t>(row) * cols_ + col])
        fn(Pellet{{EntityKind::Pellet, e.serial}, e.position});
}

}  // namespace agarcl

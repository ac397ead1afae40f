#include "agarcl/pellet_store.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace agarcl {

PelletStore::PelletStore(double width, double height, double bucket_size) : bucket_size_(bucket_size) {
  cols_ = std::max(1, static_cast<int>(std::ceil(width / bucket_size_)));
  rows_ = std::max(1, static_cast<int>(std::ceil(height / bucket_size_)));
  buckets_.resize(static_cast<std::size_t>(cols_) * rows_);
}

int PelletStore::col_of(double x) const {
  return std::clamp(static_cast<int>(std::floor(x / bucket_size_)), 0, cols_ - 1);
}

int PelletStore::row_of(double y) const {
  return std::clamp(static_cast<int>(std::floor(y / bucket_size_)), 0, rows_ - 1);
}

std::size_t PelletStore::bucket_of(Vec2 p) const {
  return static_cast<std::size_t>(row_of(p.y)) * cols_ + col_of(p.x);
}

void PelletStore::insert(const Pellet& pellet) {
  if (!items_.empty() && pellet.id.serial <= items_.back().id.serial) {
    throw AgarError("PelletStore: serials must be inserted in increasing order");
  }
  items_.push_back(pellet);
  buckets_[bucket_of(pellet.position)].push_back({pellet.id.serial, pellet.position});
}

bool PelletStore::erase(std::uint64_t serial) {
  auto it = std::lower_bound(items_.begin(), items_.end(), serial,
                             [](const Pellet& p, std::uint64_t s) { return p.id.serial < s; });
  if (it == items_.end() || it->id.serial != serial) return false;
  auto& bucket = buckets_[bucket_of(it->position)];
  auto e = std::find_if(bucket.begin(), bucket.end(), [&](const Entry& x) { return x.serial == serial; });
  if (e != bucket.end()) {
    *e = bucket.back();
    bucket.pop_back();
  }
  items_.erase(it);
  return true;
}

void PelletStore::clear() {
  items_.clear();
  for (auto& b : buckets_) b.clear();
}

std::vector<std::uint64_t> PelletStore::serials_within(Vec2 center, double radius) const {
  std::vector<std::uint64_t> out;
  for_each_within(center, radius, [&](const Pellet& p) { out.push_back(p.id.serial); });
  std::sort(out.begin(), out.end());
  return out;
}

std::optional<Pellet> PelletStore::nearest(Vec2 point) const {
  if (items_.empty()) return std::nullopt;
  const int pc = col_of(point.x), pr = row_of(point.y);
  double best_d2 = std::numeric_limits<double>::infinity();
  const Entry* best = nullptr;
  const int max_ring = std::max(cols_, rows_);
  auto visit = [&](int col, int row) {
    if (col < 0 || row < 0 || col >= cols_ || row >= rows_) return;
    for (const Entry& e : buckets_[static_cast<std::size_t>(row) * cols_ + col]) {
      const double d2 = distance_sq(e.position, point);
      if (d2 < best_d2 || (d2 == best_d2 && e.serial < best->serial)) {
        best_d2 = d2;
        best = &e;
      }
    }
  };
  for (int ring = 0; ring <= max_ring; ++ring) {
    if (ring == 0) {
      visit(pc, pr);
    } else {
      for (int d = -ring; d <= ring; ++d) {
        visit(pc + d, pr - ring);
        visit(pc + d, pr + ring);
      }
      for (int d = -ring + 1; d <= ring - 1; ++d) {
        visit(pc - ring, pr + d);
        visit(pc + ring, pr + d);
      }
    }
    // Points beyond ring k are at least k bucket widths away (the query point
    // may sit outside the grid, hence the clamp-aware slack of one bucket).
    if (best) {
      const double reach = (ring - 1) * bucket_size_;
      if (reach > 0.0 && reach * reach > best_d2) break;
    }
  }
  return Pellet{{EntityKind::Pellet, best->serial}, best->position};
}

}  // namespace agarcl

#pragma once

// Fixed-radius neighbor search on a uniform grid over the unit square.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <span>
#include <stdexcept>
#include <vector>

#include "mvote/boundary.hpp"
#include "mvote/sampling.hpp"

namespace mvote {

/// Neighbor lists of every sensor in compressed row form.
struct Adjacency {
  std::vector<std::size_t> offsets{0};
  std::vector<std::uint32_t> targets;

  std::size_t size() const { return offsets.size() - 1; }
  std::span<const std::uint32_t> of(std::size_t i) const {
    return {targets.data() + offsets[i], offsets[i + 1] - offsets[i]};
  }
  std::size_t degree(std::size_t i) const { return offsets[i + 1] - offsets[i]; }
};

class NeighborIndex {
 public:
  NeighborIndex(std::span<const Point> positions, double r) : r_(r), r2_(r * r), n_(positions.size()) {
    if (!(r > 0.0)) throw std::invalid_argument("NeighborIndex: r must be positive");
    cells_ = std::max(1, static_cast<int>(std::floor(1.0 / r)));
    cell_of_.resize(n_);
    std::vector<std::size_t> counts(static_cast<std::size_t>(cells_) * cells_ + 1, 0);
    for (std::size_t i = 0; i < n_; ++i) {
      cell_of_[i] = cell_index(positions[i]);
      ++counts[cell_of_[i] + 1];
    }
    for (std::size_t c = 1; c < counts.size(); ++c) counts[c] += counts[c - 1];
    start_ = counts;
    ids_.resize(n_);
    pos_.resize(n_);
    for (std::size_t i = 0; i < n_; ++i) {
      const std::size_t slot = counts[cell_of_[i]]++;
      ids_[slot] = static_cast<std::uint32_t>(i);
      pos_[slot] = positions[i];
    }
    point_.assign(positions.begin(), positions.end());
  }

  double radius() const { return r_; }
  std::size_t size() const { return n_; }
  int cells_per_axis() const { return cells_; }

  /// Calls fn(j) for every j != i with |pos(j) - pos(i)| <= r, in grid order.
  template <typename Fn>
  void for_each_neighbor(std::size_t i, Fn&& fn) const {
    const Point c = point_[i];
    const int cx = static_cast<int>(cell_of_[i] % cells_);
    const int cy = static_cast<int>(cell_of_[i] / cells_);
    for (int y = std::max(cy - 1, 0); y <= std::min(cy + 1, cells_ - 1); ++y) {
      const std::size_t row = static_cast<std::size_t>(y) * cells_;
      const std::size_t lo = start_[row + std::max(cx - 1, 0)];
      const std::size_t hi = start_[row + std::min(cx + 1, cells_ - 1) + 1];
      for (std::size_t k = lo; k < hi; ++k) {
        if (ids_[k] == i) continue;
        if (dist2(pos_[k], c) <= r2_) fn(static_cast<std::size_t>(ids_[k]));
      }
    }
  }

  /// Exact closed-ball neighbor set of sensor i, excluding i, in ascending id order.
  std::vector<std::size_t> neighbors_within(std::size_t i) const {
    if (i >= n_) throw std::out_of_range("neighbors_within: unknown sensor id");
    std::vector<std::size_t> out;
    for_each_neighbor(i, [&](std::size_t j) { out.push_back(j); });
    std::sort(out.begin(), out.end());
    return out;
  }

  std::vector<std::size_t> neighbors_within(const Sensor& s) const { return neighbors_within(s.id); }

  Adjacency adjacency() const {
    Adjacency adj;
    adj.offsets.reserve(n_ + 1);
    for (std::size_t i = 0; i < n_; ++i) {
      for_each_neighbor(i, [&](std::size_t j) { adj.targets.push_back(static_cast<std::uint32_t>(j)); });
      adj.offsets.push_back(adj.targets.size());
    }
    return adj;
  }

 private:
  std::size_t cell_index(Point p) const {
    const int cx = std::clamp(static_cast<int>(p.x * cells_), 0, cells_ - 1);
    const int cy = std::clamp(static_cast<int>(p.y * cells_), 0, cells_ - 1);
    return static_cast<std::size_t>(cy) * cells_ + cx;
  }

  double r_;
  double r2_;
  std::size_t n_;
  int cells_ = 1;
  std::vector<std::size_t> cell_of_;
  std::vector<std::size_t> start_;
  std::vector<std::uint32_t> ids_;
  std::vector<Point> pos_;
  std::vector<Point> point_;
};

inline NeighborIndex build_index(const SensorField& field, double r) {
  const auto pts = field.positions();
  return NeighborIndex(pts, r);
}

}  // namespace mvote

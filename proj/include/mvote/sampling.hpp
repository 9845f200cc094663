#pragma once

// Poisson sensor fields on the unit square and noisy 0-1 measurements.

#include <cstddef>
#include <cstdint>
#include <cstdio>
#include <ostream>
#include <stdexcept>
#include <vector>

#include "mvote/geometry.hpp"
#include "mvote/rng.hpp"

namespace mvote {

struct Sensor {
  std::size_t id = 0;
  Point pos;
  bool truth = false;     // ground truth: pos lies in the event region
  bool measured = false;  // initial noisy reading
  bool decided = false;   // decision after voting
  double score = 0.0;     // multi-round state
};

struct SensorField {
  std::vector<Sensor> sensors;
  double lambda = 0.0;
  double p = 0.0;
  std::uint64_t seed = 0;

  std::size_t size() const { return sensors.size(); }
  bool empty() const { return sensors.empty(); }

  std::vector<Point> positions() const {
    std::vector<Point> out;
    out.reserve(sensors.size());
    for (const auto& s : sensors) out.push_back(s.pos);
    return out;
  }
  std::vector<std::uint8_t> measurements() const {
    std::vector<std::uint8_t> out;
    out.reserve(sensors.size());
    for (const auto& s : sensors) out.push_back(s.measured ? 1 : 0);
    return out;
  }
};

/// Homogeneous Poisson process of intensity `lambda` on the unit square.
/// The count and the positions come from separate sub-streams of `seed`.
inline SensorField sample_field(double lambda, std::uint64_t seed) {
  if (!(lambda > 0.0)) throw std::invalid_argument("sample_field: lambda must be positive");
  rng::Engine count_rng(rng::derive(seed, std::string_view("count")));
  rng::Engine pos_rng(rng::derive(seed, std::string_view("positions")));
  const std::uint64_t n = rng::poisson(count_rng, lambda);
  SensorField field;
  field.lambda = lambda;
  field.seed = seed;
  field.sensors.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    auto& s = field.sensors[i];
    s.id = i;
    s.pos.x = rng::uniform01(pos_rng);
    s.pos.y = rng::uniform01(pos_rng);
  }
  return field;
}

/// Sets the ground truth from `region` and flips each reading independently
/// with probability p. Flips are drawn in id order from `seed` alone, so they
/// do not depend on the region.
inline SensorField assign_measurements(SensorField field, const EventRegion& region, double p,
                                       std::uint64_t seed) {
  if (!(p >= 0.0 && p <= 0.5)) throw std::invalid_argument("assign_measurements: p must lie in [0, 1/2]");
  rng::Engine flip_rng(rng::derive(seed, std::string_view("flips")));
  field.p = p;
  for (auto& s : field.sensors) {
    s.truth = region.contains(s.pos);
    const bool flip = rng::bernoulli(flip_rng, p);
    s.measured = s.truth != flip;
    s.decided = s.measured;
    s.score = s.measured ? 1.0 : -1.0;
  }
  return field;
}

/// CSV dump with columns id,x,y,truth,measured.
inline void write_field_csv(std::ostream& os, const SensorField& field) {
  os << "id,x,y,truth,measured\n";
  char buf[96];
  for (const auto& s : field.sensors) {
    std::snprintf(buf, sizeof buf, "%zu,%.17g,%.17g,%d,%d\n", s.id, s.pos.x, s.pos.y, s.truth ? 1 : 0,
                  s.measured ? 1 : 0);
    os << buf;
  }
}

}  // namespace mvote

#pragma once

// Closed-form probabilities and bounds on the expected number of sensors
// misclassified by the neighborhood majority vote.

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "mvote/geometry.hpp"

namespace mvote::bounds {

namespace detail {
inline void require_p(double p, double hi, const char* who) {
  if (!(p >= 0.0 && p <= hi)) throw std::invalid_argument(std::string(who) + ": p out of range");
}
inline double log_choose(int n, int k) {
  return std::lgamma(n + 1.0) - std::lgamma(k + 1.0) - std::lgamma(n - k + 1.0);
}
}  // namespace detail

/// P(at least ceil(n/2) successes in n Bernoulli(p) trials). B(0) = 1.
/// Terms are generated from the mode outward and summed smallest first.
inline double majority_tail_exact(int n, double p) {
  if (n < 0) throw std::invalid_argument("majority_tail_exact: n must be >= 0");
  detail::require_p(p, 1.0, "majority_tail_exact");
  const int m = (n + 1) / 2;
  if (m == 0) return 1.0;
  if (p == 0.0) return 0.0;
  if (p == 1.0) return 1.0;
  const double lp = std::log(p), lq = std::log1p(-p);
  const int mode = std::clamp(static_cast<int>(std::floor((n + 1) * p)), m, n);
  std::vector<double> terms;
  terms.reserve(n - m + 1);
  const double ratio = p / (1.0 - p);
  const double at_mode = std::exp(detail::log_choose(n, mode) + mode * lp + (n - mode) * lq);
  terms.push_back(at_mode);
  double t = at_mode;
  for (int j = mode; j < n; ++j) {  // upward
    t *= ratio * (n - j) / (j + 1.0);
    terms.push_back(t);
  }
  t = at_mode;
  for (int j = mode; j > m; --j) {  // downward
    t *= (j / (n - j + 1.0)) / ratio;
    terms.push_back(t);
  }
  std::sort(terms.begin(), terms.end());
  double sum = 0.0;
  for (double v : terms) sum += v;
  return std::min(sum, 1.0);
}

struct Bracket {
  double lower = 0.0;
  double upper = 0.0;
};

/// Chernoff-type upper bound (2 sqrt(p(1-p)))^n and the matching lower bound
/// sqrt(p(1-p)) / (2n) * (2 sqrt(p(1-p)))^n on the majority tail.
inline Bracket majority_tail_bounds(int n, double p) {
  if (n < 1) throw std::invalid_argument("majority_tail_bounds: n must be >= 1");
  detail::require_p(p, 0.5, "majority_tail_bounds");
  const double s = std::sqrt(p * (1.0 - p));
  const double upper = std::pow(2.0 * s, n);
  return {s / (2.0 * n) * upper, upper};
}

/// Expected misclassified sensors outside the dubious zone.
inline Bracket thm1_bounds(double lambda, double p, double r, double area_outside) {
  detail::require_p(p, 0.5, "thm1_bounds");
  if (!(lambda > 0.0) || !(r > 0.0) || area_outside < 0.0)
    throw std::invalid_argument("thm1_bounds: lambda, r must be positive and area non-negative");
  constexpr double pi = std::numbers::pi;
  const double s = std::sqrt(p * (1.0 - p));
  const double neighbors = lambda * pi * r * r;
  const double decay = std::exp(-(1.0 - 2.0 * s) * neighbors);
  const double upper = 2.0 * lambda * s * decay * area_outside;
  const double lower = s / (4.0 * pi * r * r) * (decay - std::exp(-neighbors)) * area_outside;
  return {lower, upper};
}

/// General upper bound on expected misclassified sensors inside the dubious zone.
inline double thm2_upper(double lambda, double r, double perimeter, int components) {
  if (lambda < 0.0 || r < 0.0 || perimeter < 0.0 || components < 0)
    throw std::invalid_argument("thm2_upper: arguments must be non-negative");
  return 2.0 * lambda * r * perimeter + lambda * std::numbers::pi * r * r * components;
}

/// Upper bound inside the dubious zone for convex regions whose boundary has
/// radius of curvature >= r everywhere.
inline double thm3_upper(double lambda, double p, double r, double perimeter) {
  detail::require_p(p, 0.5, "thm3_upper");
  if (p == 0.5) throw std::invalid_argument("thm3_upper: bound is vacuous at p = 1/2");
  if (!(r > 0.0) || !(perimeter > r)) throw std::invalid_argument("thm3_upper: requires perimeter > r > 0");
  if (lambda < 0.0) throw std::invalid_argument("thm3_upper: lambda must be non-negative");
  constexpr double pi = std::numbers::pi;
  return pi * std::sqrt(lambda) / (std::sqrt(2.0) * (1.0 - 2.0 * p)) * perimeter +
         3.0 * lambda * pi * r * r * std::log(perimeter / r);
}

struct RegionStats {
  double perimeter = 0.0;
  int components = 1;
  double dubious_area = 0.0;  // area of Z_r within the unit square
  bool round_convex = false;  // convex with curvature radius >= r
};

inline RegionStats region_stats(const EventRegion& region, double r) {
  return {region.perimeter(), region.components(), dubious_zone_area(region, r).area,
          region.convex() && region.min_curvature_radius() >= r};
}

struct BoundReport {
  double lambda = 0.0, p = 0.0, r = 0.0;
  RegionStats stats;
  double thm1_upper = 0.0;
  double thm1_lower = 0.0;
  double thm2_upper = 0.0;
  double thm3_upper = std::numeric_limits<double>::quiet_NaN();
  double combined_upper = std::numeric_limits<double>::quiet_NaN();
};

/// Every bound that applies to the configuration; the convex-only entries are
/// NaN when the region or p does not meet their preconditions.
inline BoundReport evaluate(double lambda, double p, double r, const RegionStats& stats) {
  BoundReport rep;
  rep.lambda = lambda, rep.p = p, rep.r = r, rep.stats = stats;
  const Bracket t1 = thm1_bounds(lambda, p, r, std::max(0.0, 1.0 - stats.dubious_area));
  rep.thm1_lower = t1.lower;
  rep.thm1_upper = t1.upper;
  rep.thm2_upper = thm2_upper(lambda, r, stats.perimeter, stats.components);
  if (stats.round_convex && p < 0.5 && stats.perimeter > r) {
    rep.thm3_upper = thm3_upper(lambda, p, r, stats.perimeter);
    rep.combined_upper = rep.thm1_upper + rep.thm3_upper;
  }
  return rep;
}

/// Outside-zone upper bound on Y \ Z_r plus the convex-region bound on Z_r.
inline BoundReport combined_upper(double lambda, double p, double r, const RegionStats& stats) {
  if (!stats.round_convex)
    throw std::invalid_argument("combined_upper: region must be convex with curvature radius >= r");
  BoundReport rep = evaluate(lambda, p, r, stats);
  if (std::isnan(rep.combined_upper)) {
    rep.thm3_upper = thm3_upper(lambda, p, r, stats.perimeter);  // throws with the reason
  }
  return rep;
}

/// Misclassification bound for a sensor whose radius-r disk (area `area_disk`)
/// has a fraction alpha >= 1/2 on its own side of the boundary.
inline double lemma_good0_prob(double lambda, double area_disk, double p, double alpha) {
  detail::require_p(p, 0.5, "lemma_good0_prob");
  if (alpha < 0.5 || alpha > 1.0) throw std::invalid_argument("lemma_good0_prob: alpha must lie in [1/2, 1]");
  const double a = 1.0 - 2.0 * p, b = 2.0 * alpha - 1.0;
  return std::exp(-0.5 * lambda * area_disk * a * a * b * b);
}

/// Misclassification bound for a good sensor at distance delta*r from the boundary.
inline double lemma_good1_prob(double lambda, double area_disk, double p, double delta) {
  detail::require_p(p, 0.5, "lemma_good1_prob");
  if (delta < 0.0 || delta > 1.0) throw std::invalid_argument("lemma_good1_prob: delta must lie in [0, 1]");
  constexpr double pi = std::numbers::pi;
  const double a = 1.0 - 2.0 * p;
  return std::exp(-(2.0 / (pi * pi)) * lambda * area_disk * a * a * delta * delta);
}

/// area(A ∩ B) / r^2 for two radius-r disks, where A's center lies at depth
/// delta*r inside B's tangent point.
inline double beta_fraction(double delta) {
  if (delta < 0.0 || delta > 1.0) throw std::invalid_argument("beta_fraction: delta must lie in [0, 1]");
  constexpr double pi = std::numbers::pi;
  const double a = 0.5 * (1.0 - delta);
  const double integral = 0.5 * (a * std::sqrt(1.0 - a * a) + std::asin(a));  // ∫_0^a sqrt(1-x^2) dx
  return pi / 2.0 + 2.0 * (pi / 4.0 - 2.0 * integral);
}

inline double beta_inverse(double target) {
  const double lo_v = beta_fraction(0.0), hi_v = beta_fraction(1.0);
  if (target < lo_v || target > hi_v) throw std::invalid_argument("beta_inverse: target out of range");
  double lo = 0.0, hi = 1.0;
  while (hi - lo > 1e-12) {
    const double mid = 0.5 * (lo + hi);
    if (beta_fraction(mid) < target) lo = mid;
    else hi = mid;
  }
  return 0.5 * (lo + hi);
}

/// Upper bound on the total length of bad points on the inner parallel curve at depth delta*r.
inline double bad_segment_length_upper(double r, double delta, double perimeter) {
  constexpr double pi = std::numbers::pi;
  if (!(delta > 0.0 && delta <= 1.0)) throw std::invalid_argument("bad_segment_length_upper: delta must lie in (0, 1]");
  if (!(r > 0.0) || !(perimeter > 2.0 * pi * delta * r))
    throw std::invalid_argument("bad_segment_length_upper: perimeter must exceed 2 pi delta r");
  return std::min(3.0 * pi * r / delta, perimeter - 2.0 * pi * delta * r);
}

}  // namespace mvote::bounds

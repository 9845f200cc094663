#pragma once

// Experiment orchestration: single trials, parameter sweeps with
// deterministic parallel execution, aggregation and CSV output.

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <exception>
#include <limits>
#include <mutex>
#include <ostream>
#include <span>
#include <string>
#include <thread>
#include <vector>

#include "mvote/bounds.hpp"
#include "mvote/config.hpp"
#include "mvote/geometry.hpp"
#include "mvote/neighborhood.hpp"
#include "mvote/sampling.hpp"
#include "mvote/vote.hpp"

namespace mvote {

// Sub-stream seeds. Positions depend only on (master, lambda, trial) and flips
// on (master, lambda, p, trial), so cells that differ only in r, p or region
// see the same sensor layout.
inline std::uint64_t field_seed(std::uint64_t master, double lambda, std::uint64_t trial) {
  return rng::derive(master, std::string_view("field"), lambda, trial);
}
inline std::uint64_t flip_seed(std::uint64_t master, double lambda, double p, std::uint64_t trial) {
  return rng::derive(master, std::string_view("flips"), lambda, p, trial);
}

struct TrialMetrics {
  std::size_t n_sensors = 0;
  std::size_t initial_errors = 0;
  std::size_t final_errors = 0;
  std::size_t corrected = 0;   // initially wrong, finally right
  std::size_t new_errors = 0;  // initially right, finally wrong
  std::size_t errors_in_zr = 0;
  std::size_t errors_in_zr_and_x = 0;
  std::size_t errors_outside_zr = 0;
  double correction_rate = 1.0;        // (initial - final) / initial
  double gross_correction_rate = 1.0;  // corrected / initial
  bool rate_defined = false;           // false when there were no initial errors
};

/// Scores the decisions against the ground truth, split by dubious-zone membership.
inline TrialMetrics tally(const SensorField& field, std::span<const std::uint8_t> decided,
                          std::span<const double> signed_dist, double r) {
  TrialMetrics m;
  m.n_sensors = field.size();
  for (std::size_t i = 0; i < field.size(); ++i) {
    const auto& s = field.sensors[i];
    const bool final_wrong = (decided[i] != 0) != s.truth;
    const bool initial_wrong = s.measured != s.truth;
    m.initial_errors += initial_wrong;
    m.corrected += initial_wrong && !final_wrong;
    m.new_errors += !initial_wrong && final_wrong;
    if (!final_wrong) continue;
    ++m.final_errors;
    if (in_dubious_zone(signed_dist[i], r)) {
      ++m.errors_in_zr;
      m.errors_in_zr_and_x += s.truth;
    } else {
      ++m.errors_outside_zr;
    }
  }
  if (m.initial_errors > 0) {
    const double init = static_cast<double>(m.initial_errors);
    m.correction_rate = (init - static_cast<double>(m.final_errors)) / init;
    m.gross_correction_rate = static_cast<double>(m.corrected) / init;
    m.rate_defined = true;
  }
  return m;
}

inline std::vector<double> signed_distances(const SensorField& field, const EventRegion& region) {
  std::vector<double> d(field.size());
  for (std::size_t i = 0; i < field.size(); ++i) d[i] = region.signed_distance(field.sensors[i].pos);
  return d;
}

/// Everything produced by one trial; `field` carries the final decisions.
struct TrialRun {
  EventRegion region;
  SensorField field;
  VoteOutcome outcome;
  TrialMetrics metrics;
};

inline TrialRun simulate_trial(const SimConfig& cfg, std::uint64_t trial_index) {
  cfg.validate();
  EventRegion region = make_region(cfg.region, cfg.r);
  SensorField field = sample_field(cfg.lambda, field_seed(cfg.seed, cfg.lambda, trial_index));
  field = assign_measurements(std::move(field), region, cfg.p, flip_seed(cfg.seed, cfg.lambda, cfg.p, trial_index));
  const auto pts = field.positions();
  const NeighborIndex index(pts, cfg.r);
  const auto measured = field.measurements();
  VoteOutcome outcome = run_vote(measured, index.adjacency(), cfg.mode, cfg.p, cfg.r);
  const auto dists = signed_distances(field, region);
  TrialMetrics metrics = tally(field, outcome.decided, dists, cfg.r);
  field = apply_outcome(std::move(field), outcome);
  return {std::move(region), std::move(field), std::move(outcome), metrics};
}

inline TrialMetrics run_trial(const SimConfig& cfg, std::uint64_t trial_index) {
  return simulate_trial(cfg, trial_index).metrics;
}

// ---------------------------------------------------------------------------
// Aggregation

struct Summary {
  double mean = 0.0;
  double se = 0.0;  // standard error of the mean
};

inline Summary summarize(std::span<const double> xs) {
  Summary s;
  if (xs.empty()) return s;
  double sum = 0.0;
  for (double x : xs) sum += x;
  s.mean = sum / static_cast<double>(xs.size());
  if (xs.size() > 1) {
    double ss = 0.0;
    for (double x : xs) ss += (x - s.mean) * (x - s.mean);
    s.se = std::sqrt(ss / static_cast<double>(xs.size() - 1) / static_cast<double>(xs.size()));
  }
  return s;
}

struct CellSummary {
  int trials = 0;
  Summary n_sensors, initial_errors, final_errors, corrected, new_errors;
  Summary errors_in_zr, errors_in_zr_and_x, errors_outside_zr;
  Summary correction_rate, gross_correction_rate;
};

inline CellSummary aggregate(std::span<const TrialMetrics> trials) {
  CellSummary c;
  c.trials = static_cast<int>(trials.size());
  std::vector<double> buf(trials.size());
  auto col = [&](auto getter) {
    for (std::size_t i = 0; i < trials.size(); ++i) buf[i] = static_cast<double>(getter(trials[i]));
    return summarize(buf);
  };
  c.n_sensors = col([](const TrialMetrics& m) { return m.n_sensors; });
  c.initial_errors = col([](const TrialMetrics& m) { return m.initial_errors; });
  c.final_errors = col([](const TrialMetrics& m) { return m.final_errors; });
  c.corrected = col([](const TrialMetrics& m) { return m.corrected; });
  c.new_errors = col([](const TrialMetrics& m) { return m.new_errors; });
  c.errors_in_zr = col([](const TrialMetrics& m) { return m.errors_in_zr; });
  c.errors_in_zr_and_x = col([](const TrialMetrics& m) { return m.errors_in_zr_and_x; });
  c.errors_outside_zr = col([](const TrialMetrics& m) { return m.errors_outside_zr; });
  c.correction_rate = col([](const TrialMetrics& m) { return m.correction_rate; });
  c.gross_correction_rate = col([](const TrialMetrics& m) { return m.gross_correction_rate; });
  return c;
}

// ---------------------------------------------------------------------------
// Sweeps

struct SweepAxes {
  std::vector<double> r_values;
  std::vector<double> p_values;
  std::vector<double> lambda_values;
  std::vector<RegionSpec> regions;

  std::size_t cell_count() const {
    return regions.size() * lambda_values.size() * p_values.size() * r_values.size();
  }

  /// 20 radii 0.005..0.1, 7 error rates 0.05..0.35, 4 intensities, regions xs and xl.
  static SweepAxes default_grid() {
    SweepAxes a;
    for (int i = 1; i <= 20; ++i) a.r_values.push_back(i / 200.0);
    for (int i = 1; i <= 7; ++i) a.p_values.push_back(i / 20.0);
    a.lambda_values = {2500.0, 5000.0, 10000.0, 20000.0};
    a.regions = {RegionSpec::xs(), RegionSpec::xl()};
    return a;
  }
};

struct SweepCell {
  std::string region;
  double lambda = 0.0, p = 0.0, r = 0.0;
  CellSummary summary;
  bounds::BoundReport bounds;
};

struct SweepResult {
  SweepAxes axes;
  VoteMode mode;
  int trials = 0;
  std::vector<SweepCell> cells;  // region-major, then lambda, p, r

  std::size_t index(std::size_t region, std::size_t lambda, std::size_t p, std::size_t r) const {
    return ((region * axes.lambda_values.size() + lambda) * axes.p_values.size() + p) * axes.r_values.size() + r;
  }
  const SweepCell& cell(std::size_t region, std::size_t lambda, std::size_t p, std::size_t r) const {
    return cells[index(region, lambda, p, r)];
  }
};

/// Runs `base.trials` trials for every cell of the grid. Work is split into
/// (lambda, trial) units that share one sensor field across all r, p and
/// regions; results are reduced in grid order, so the output does not depend
/// on `base.threads`.
inline SweepResult sweep(const SimConfig& base, const SweepAxes& axes) {
  if (axes.r_values.empty() || axes.p_values.empty() || axes.lambda_values.empty() || axes.regions.empty())
    throw ConfigError("sweep: every grid axis needs at least one value");
  for (double lam : axes.lambda_values) {
    for (double p : axes.p_values) {
      for (double r : axes.r_values) {
        SimConfig c = base;
        c.lambda = lam, c.p = p, c.r = r;
        for (const auto& reg : axes.regions) {
          c.region = reg;
          c.validate();
        }
      }
    }
  }

  const std::size_t nR = axes.regions.size(), nL = axes.lambda_values.size(), nP = axes.p_values.size(),
                    nr = axes.r_values.size();
  const std::size_t trials = static_cast<std::size_t>(base.trials);

  // regions are immutable and shared read-only by all workers
  std::vector<EventRegion> regions;
  regions.reserve(nR * nr);
  for (const auto& spec : axes.regions)
    for (double r : axes.r_values) regions.push_back(make_region(spec, r));

  SweepResult result;
  result.axes = axes;
  result.mode = base.mode;
  result.trials = base.trials;
  std::vector<TrialMetrics> metrics(axes.cell_count() * trials);

  auto run_unit = [&](std::size_t unit) {
    const std::size_t li = unit / trials, t = unit % trials;
    const double lambda = axes.lambda_values[li];
    const SensorField field0 = sample_field(lambda, field_seed(base.seed, lambda, t));
    const auto pts = field0.positions();
    std::vector<std::vector<double>> dists(nR * nr);
    for (std::size_t ri = 0; ri < nR; ++ri)
      for (std::size_t rr = 0; rr < nr; ++rr) {
        const auto& reg = regions[ri * nr + rr];
        // rounded rectangles do not depend on r; reuse the first evaluation
        if (rr > 0 && axes.regions[ri].type == RegionSpec::Type::RoundedRect) dists[ri * nr + rr] = dists[ri * nr];
        else dists[ri * nr + rr] = signed_distances(field0, reg);
      }
    for (std::size_t rr = 0; rr < nr; ++rr) {
      const double r = axes.r_values[rr];
      const NeighborIndex index(pts, r);
      const Adjacency adj = index.adjacency();
      for (std::size_t pi = 0; pi < nP; ++pi) {
        const double p = axes.p_values[pi];
        for (std::size_t ri = 0; ri < nR; ++ri) {
          const SensorField f =
              assign_measurements(field0, regions[ri * nr + rr], p, flip_seed(base.seed, lambda, p, t));
          const auto measured = f.measurements();
          const VoteOutcome out = run_vote(measured, adj, base.mode, p, r);
          metrics[result.index(ri, li, pi, rr) * trials + t] = tally(f, out.decided, dists[ri * nr + rr], r);
        }
      }
    }
  };

  const std::size_t units = nL * trials;
  std::atomic<std::size_t> next{0};
  std::exception_ptr failure;
  std::mutex failure_mu;
  auto worker = [&] {
    for (std::size_t u = next++; u < units; u = next++) {
      try {
        run_unit(u);
      } catch (...) {
        std::lock_guard lock(failure_mu);
        if (!failure) failure = std::current_exception();
      }
    }
  };
  const std::size_t n_threads = std::min<std::size_t>(static_cast<std::size_t>(base.threads), units);
  if (n_threads <= 1) {
    worker();
  } else {
    std::vector<std::jthread> pool;
    for (std::size_t i = 0; i < n_threads; ++i) pool.emplace_back(worker);
  }
  if (failure) std::rethrow_exception(failure);

  result.cells.resize(axes.cell_count());
  for (std::size_t ri = 0; ri < nR; ++ri) {
    for (std::size_t rr = 0; rr < nr; ++rr) {
      const bounds::RegionStats stats = bounds::region_stats(regions[ri * nr + rr], axes.r_values[rr]);
      for (std::size_t li = 0; li < nL; ++li) {
        for (std::size_t pi = 0; pi < nP; ++pi) {
          const std::size_t idx = result.index(ri, li, pi, rr);
          SweepCell& cell = result.cells[idx];
          cell.region = axes.regions[ri].name;
          cell.lambda = axes.lambda_values[li];
          cell.p = axes.p_values[pi];
          cell.r = axes.r_values[rr];
          cell.summary = aggregate(std::span(metrics).subspan(idx * trials, trials));
          cell.bounds = bounds::evaluate(cell.lambda, cell.p, cell.r, stats);
        }
      }
    }
  }
  return result;
}

struct RadiusInterval {
  double lo = 0.0;
  double hi = 0.0;
  double errors = 0.0;  // minimal mean final errors
};

/// The r-grid value(s) minimizing mean final errors for error rate `p`,
/// averaged over every lambda and region of the sweep.
inline RadiusInterval best_radius(const SweepResult& sw, double p) {
  const auto& ps = sw.axes.p_values;
  const auto it = std::find_if(ps.begin(), ps.end(), [p](double v) { return std::abs(v - p) <= 1e-12; });
  if (it == ps.end()) throw std::invalid_argument("best_radius: p not in sweep");
  const std::size_t pi = static_cast<std::size_t>(it - ps.begin());
  const std::size_t nr = sw.axes.r_values.size();
  std::vector<double> avg(nr, 0.0);
  for (std::size_t rr = 0; rr < nr; ++rr) {
    double sum = 0.0;
    std::size_t n = 0;
    for (std::size_t ri = 0; ri < sw.axes.regions.size(); ++ri)
      for (std::size_t li = 0; li < sw.axes.lambda_values.size(); ++li, ++n)
        sum += sw.cell(ri, li, pi, rr).summary.final_errors.mean;
    avg[rr] = sum / static_cast<double>(n);
  }
  const double best = *std::min_element(avg.begin(), avg.end());
  RadiusInterval out{std::numeric_limits<double>::infinity(), -std::numeric_limits<double>::infinity(), best};
  for (std::size_t rr = 0; rr < nr; ++rr) {
    if (avg[rr] != best) continue;
    out.lo = std::min(out.lo, sw.axes.r_values[rr]);
    out.hi = std::max(out.hi, sw.axes.r_values[rr]);
  }
  return out;
}

// ---------------------------------------------------------------------------
// CSV

inline std::string fmt_num(double v) {
  if (std::isnan(v)) return "nan";
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.10g", v);
  return buf;
}

inline constexpr const char* kSweepCsvHeader =
    "region,lambda,p,r,mode,trials,n_sensors_mean,initial_errors_mean,final_errors_mean,final_errors_se,"
    "corrected_mean,new_errors_mean,errors_in_zr_mean,errors_in_zr_and_x_mean,correction_rate_mean,"
    "thm1_upper,thm1_lower,thm2_upper,thm3_upper,combined_upper";

inline void write_sweep_csv(std::ostream& os, const SweepResult& sw) {
  os << kSweepCsvHeader << "\n";
  for (const auto& c : sw.cells) {
    const auto& s = c.summary;
    const auto& b = c.bounds;
    os << c.region << ',' << fmt_num(c.lambda) << ',' << fmt_num(c.p) << ',' << fmt_num(c.r) << ','
       << sw.mode.name() << ',' << s.trials << ',' << fmt_num(s.n_sensors.mean) << ','
       << fmt_num(s.initial_errors.mean) << ',' << fmt_num(s.final_errors.mean) << ','
       << fmt_num(s.final_errors.se) << ',' << fmt_num(s.corrected.mean) << ',' << fmt_num(s.new_errors.mean)
       << ',' << fmt_num(s.errors_in_zr.mean) << ',' << fmt_num(s.errors_in_zr_and_x.mean) << ','
       << fmt_num(s.correction_rate.mean) << ',' << fmt_num(b.thm1_upper) << ',' << fmt_num(b.thm1_lower)
       << ',' << fmt_num(b.thm2_upper) << ',' << fmt_num(b.thm3_upper) << ',' << fmt_num(b.combined_upper)
       << '\n';
  }
}

inline constexpr const char* kBoundsCsvHeader =
    "region,lambda,p,r,perimeter,components,dubious_area,thm1_lower,thm1_upper,thm2_upper,thm3_upper,"
    "combined_upper";

/// Bound table for every (region, lambda, p, r) of the grid, in sweep order.
inline void write_bounds_csv(std::ostream& os, const SweepAxes& axes) {
  os << kBoundsCsvHeader << "\n";
  for (const auto& spec : axes.regions) {
    std::vector<bounds::RegionStats> stats;
    for (double r : axes.r_values) stats.push_back(bounds::region_stats(make_region(spec, r), r));
    for (double lam : axes.lambda_values)
      for (double p : axes.p_values)
        for (std::size_t rr = 0; rr < axes.r_values.size(); ++rr) {
          const double r = axes.r_values[rr];
          const auto b = bounds::evaluate(lam, p, r, stats[rr]);
          os << spec.name << ',' << fmt_num(lam) << ',' << fmt_num(p) << ',' << fmt_num(r) << ','
             << fmt_num(b.stats.perimeter) << ',' << b.stats.components << ',' << fmt_num(b.stats.dubious_area)
             << ',' << fmt_num(b.thm1_lower) << ',' << fmt_num(b.thm1_upper) << ',' << fmt_num(b.thm2_upper)
             << ',' << fmt_num(b.thm3_upper) << ',' << fmt_num(b.combined_upper) << '\n';
        }
  }
}

}  // namespace mvote

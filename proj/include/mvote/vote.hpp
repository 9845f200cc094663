#pragma once

// Majority vote over fixed-radius neighborhoods, single round and the
// multi-round score-averaging refinement.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <span>
#include <stdexcept>
#include <vector>

#include "mvote/neighborhood.hpp"
#include "mvote/sampling.hpp"

namespace mvote {

struct VoteMode {
  enum class Kind { SingleRound, MultiRound };
  Kind kind = Kind::SingleRound;
  double c = 0.5;  // round constant for MultiRound

  static VoteMode single() { return {Kind::SingleRound, 0.5}; }
  static VoteMode multi(double c = 0.5) {
    if (!(c > 0.0)) throw std::invalid_argument("VoteMode: c must be positive");
    return {Kind::MultiRound, c};
  }
  bool is_multi() const { return kind == Kind::MultiRound; }
  const char* name() const { return is_multi() ? "multi" : "single"; }
};

struct VoteOutcome {
  std::vector<std::uint8_t> decided;
  int rounds_executed = 0;
  std::vector<double> scores;                   // final scores (multi-round only)
  std::vector<std::vector<double>> snapshots;   // per-round scores, when requested
};

/// Each sensor follows the strict majority of its neighbors' initial
/// measurements; a tie (including no neighbors) keeps its own measurement.
inline VoteOutcome majority_round(std::span<const std::uint8_t> measured, const Adjacency& adj) {
  if (adj.size() != measured.size()) throw std::invalid_argument("majority_round: size mismatch");
  VoteOutcome out;
  out.rounds_executed = 1;
  out.decided.resize(measured.size());
  for (std::size_t i = 0; i < measured.size(); ++i) {
    const auto nb = adj.of(i);
    std::size_t in = 0;
    for (std::uint32_t j : nb) in += measured[j];
    const std::size_t k = nb.size();
    if (2 * in > k) out.decided[i] = 1;
    else if (2 * in < k) out.decided[i] = 0;
    else out.decided[i] = measured[i];
  }
  return out;
}

inline VoteOutcome majority_round(const SensorField& field, const NeighborIndex& index) {
  const auto m = field.measurements();
  return majority_round(m, index.adjacency());
}

/// t = max(ceil(c p / r), 1). The quotient is nudged down by a relative 1e-9
/// so that exact products such as 0.5 * 0.1 / 0.05 are not pushed up a round
/// by representation error.
inline int round_count(double p, double r, double c) {
  if (!(p >= 0.0 && p <= 0.5)) throw std::invalid_argument("round_count: p must lie in [0, 1/2]");
  if (!(r > 0.0) || !(c > 0.0)) throw std::invalid_argument("round_count: r and c must be positive");
  const double x = c * p / r;
  const double t = std::ceil(x - 1e-9 * std::max(1.0, x));
  return std::max(1, static_cast<int>(t));
}

/// Synchronous score averaging. Scores start at +1 / -1 from the measurement
/// and each round becomes the mean of the neighbors' previous-round scores
/// (self excluded; isolated sensors keep their score). After each round a
/// sensor decides by the sign of its score, and keeps its previous decision
/// when the score is exactly zero.
inline VoteOutcome multi_round(std::span<const std::uint8_t> measured, const Adjacency& adj, int t,
                               bool keep_snapshots = false) {
  if (t < 1) throw std::invalid_argument("multi_round: t must be >= 1");
  if (adj.size() != measured.size()) throw std::invalid_argument("multi_round: size mismatch");
  const std::size_t n = measured.size();
  std::vector<double> score(n), next(n);
  VoteOutcome out;
  out.decided.assign(measured.begin(), measured.end());
  for (std::size_t i = 0; i < n; ++i) score[i] = measured[i] ? 1.0 : -1.0;
  for (int round = 0; round < t; ++round) {
    for (std::size_t i = 0; i < n; ++i) {
      const auto nb = adj.of(i);
      if (nb.empty()) {
        next[i] = score[i];
        continue;
      }
      double sum = 0.0;
      for (std::uint32_t j : nb) sum += score[j];
      next[i] = sum / static_cast<double>(nb.size());
    }
    score.swap(next);
    for (std::size_t i = 0; i < n; ++i) {
      if (score[i] > 0.0) out.decided[i] = 1;
      else if (score[i] < 0.0) out.decided[i] = 0;
    }
    if (keep_snapshots) out.snapshots.push_back(score);
  }
  out.rounds_executed = t;
  out.scores = std::move(score);
  return out;
}

inline VoteOutcome multi_round(const SensorField& field, const NeighborIndex& index, int t) {
  const auto m = field.measurements();
  return multi_round(m, index.adjacency(), t);
}

/// Runs the vote selected by `mode`; the round count comes from round_count(p, r, c).
inline VoteOutcome run_vote(std::span<const std::uint8_t> measured, const Adjacency& adj, VoteMode mode,
                            double p, double r) {
  if (!mode.is_multi()) return majority_round(measured, adj);
  return multi_round(measured, adj, round_count(p, r, mode.c));
}

/// Copy of `field` with decisions (and scores, when available) filled in.
inline SensorField apply_outcome(SensorField field, const VoteOutcome& outcome) {
  for (std::size_t i = 0; i < field.sensors.size(); ++i) {
    field.sensors[i].decided = outcome.decided[i] != 0;
    if (!outcome.scores.empty()) field.sensors[i].score = outcome.scores[i];
  }
  return field;
}

}  // namespace mvote

#ifndef SEGBOUND_CHANCE_HPP
#define SEGBOUND_CHANCE_HPP

#include <cstdint>
#include <span>

#include "segbound/types.hpp"

namespace segbound {

struct AnalyticChance {
  double precision_percent = 0.0;
  /// False when B/M exceeds 0.3 and the (2 tol + 1) B / M approximation
  /// is no longer trustworthy.
  bool approximation_valid = true;
};

/// Expected precision of uniformly random boundary placement:
/// 100 (2 tol + 1) B / M, with B reference boundaries over M candidate
/// gap positions.
AnalyticChance analytic_chance(long long boundaries, long long positions,
                               int tolerance_frames);

struct MonteCarloChance {
  double mean_precision = 0.0;
  double mean_recall = 0.0;
  bool precision_defined = false;
  bool recall_defined = false;
  long long detected = 0;  // per repetition (constant across them)
  long long reference = 0; // total reference boundaries
  int repetitions = 0;
};

/// Level-of-chance simulation: per repetition and utterance draws
/// round(ratio * B_u) distinct gap positions uniformly (sampling without
/// repetition), scores the draw against the reference corpus, and
/// averages precision and recall over repetitions. Repetition r uses the
/// engine seeded with seed + r so parallel schedules stay reproducible.
MonteCarloChance monte_carlo_chance(
    std::span<const BoundarySet* const> reference, double ratio,
    int repetitions, int tolerance_frames, std::uint64_t seed);

} // namespace segbound

#endif // SEGBOUND_CHANCE_HPP

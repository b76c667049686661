#ifndef SEGBOUND_EVAL_HPP
#define SEGBOUND_EVAL_HPP

#include <span>
#include <utility>
#include <vector>

#include "segbound/types.hpp"

namespace segbound {

/// Number of detected boundaries within tolerance_frames of some
/// reference boundary. Several detections near one reference all count,
/// so C can exceed the reference count.
long long count_correct(const BoundarySet& detected,
                        const BoundarySet& reference, int tolerance_frames);

struct PrecisionRecall {
  double precision = 0.0;
  double recall = 0.0;
  bool precision_defined = false;
  bool recall_defined = false;
};

/// P = 100 C / D, R = 100 C / T. A zero denominator leaves the ratio
/// undefined rather than forcing 0 or 100.
PrecisionRecall precision_recall(long long correct, long long detected,
                                 long long reference);

/// Euclidean distance of (P, R) from (100, 100); lower is better.
double criterion(double precision, double recall);

/// Same distance with per-axis weights; (1, 1) is the plain criterion.
double criterion_weighted(double precision, double recall,
                          double precision_weight, double recall_weight);

enum class MatchingMode {
  count, // every detection within tolerance counts (the default scoring)
  dp     // one-to-one matching, at most one detection per reference
};

EvalReport evaluate(const BoundarySet& detected, const BoundarySet& reference,
                    int tolerance_frames,
                    MatchingMode mode = MatchingMode::count);

/// Pools C, D and T over utterances before computing the ratios.
EvalReport evaluate_corpus(std::span<const BoundarySet* const> detected,
                           std::span<const BoundarySet* const> reference,
                           int tolerance_frames,
                           MatchingMode mode = MatchingMode::count);

/// Maximum-cardinality one-to-one pairing between detected and reference
/// boundaries with |b_d - b_r| <= tolerance, by dynamic programming over
/// the two sorted lists.
struct DpMatchResult {
  std::vector<std::pair<int, int>> pairs; // (detected index, reference index)
  long long matched = 0;
  long long insertions = 0; // detected - matched
  long long deletions = 0;  // reference - matched
};

DpMatchResult dp_match(const BoundarySet& detected,
                       const BoundarySet& reference, int tolerance_frames);

} // namespace segbound

#endif // SEGBOUND_EVAL_HPP

#include "segbound/eval.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>

namespace segbound {

namespace {

void check_geometry(const BoundarySet& detected, const BoundarySet& reference) {
  if (detected.num_frames != reference.num_frames ||
      std::abs(detected.frame_shift_ms - reference.frame_shift_ms) > 1e-9)
    throw Error("mismatched utterance geometry between detected and "
                "reference boundaries");
}

void check_tolerance(int tolerance_frames) {
  if (tolerance_frames < 0)
    throw Error("tolerance must be non-negative");
}

} // namespace

long long count_correct(const BoundarySet& detected,
                        const BoundarySet& reference, int tolerance_frames) {
  check_geometry(detected, reference);
  check_tolerance(tolerance_frames);
  const auto& ref = reference.indices;
  long long correct = 0;
  for (int b : detected.indices) {
    auto it = std::lower_bound(ref.begin(), ref.end(), b);
    bool hit = (it != ref.end() && *it - b <= tolerance_frames) ||
               (it != ref.begin() && b - *(it - 1) <= tolerance_frames);
    if (hit)
      ++correct;
  }
  return correct;
}

PrecisionRecall precision_recall(long long correct, long long detected,
                                 long long reference) {
  if (correct < 0 || detected < 0 || reference < 0)
    throw Error("negative counts");
  PrecisionRecall pr;
  if (detected > 0) {
    pr.precision = 100.0 * static_cast<double>(correct) /
                   static_cast<double>(detected);
    pr.precision_defined = true;
  }
  if (reference > 0) {
    pr.recall = 100.0 * static_cast<double>(correct) /
                static_cast<double>(reference);
    pr.recall_defined = true;
  }
  return pr;
}

double criterion(double precision, double recall) {
  return std::hypot(precision - 100.0, recall - 100.0);
}

double criterion_weighted(double precision, double recall,
                          double precision_weight, double recall_weight) {
  return std::hypot(precision_weight * (precision - 100.0),
                    recall_weight * (recall - 100.0));
}

namespace {

EvalReport report_from_counts(long long correct, long long detected,
                              long long reference, int tolerance_frames) {
  EvalReport r;
  r.correct = correct;
  r.detected = detected;
  r.reference = reference;
  r.tolerance_frames = tolerance_frames;
  PrecisionRecall pr = precision_recall(correct, detected, reference);
  r.precision = pr.precision_defined
                    ? pr.precision
                    : std::numeric_limits<double>::quiet_NaN();
  r.recall = pr.recall_defined ? pr.recall
                               : std::numeric_limits<double>::quiet_NaN();
  r.precision_defined = pr.precision_defined;
  r.recall_defined = pr.recall_defined;
  if (pr.precision_defined && pr.recall_defined) {
    r.criterion = criterion(pr.precision, pr.recall);
    r.criterion_defined = true;
  }
  return r;
}

long long correct_count(const BoundarySet& detected,
                        const BoundarySet& reference, int tolerance_frames,
                        MatchingMode mode) {
  if (mode == MatchingMode::count)
    return count_correct(detected, reference, tolerance_frames);
  return dp_match(detected, reference, tolerance_frames).matched;
}

} // namespace

EvalReport evaluate(const BoundarySet& detected, const BoundarySet& reference,
                    int tolerance_frames, MatchingMode mode) {
  long long c = correct_count(detected, reference, tolerance_frames, mode);
  return report_from_counts(c, static_cast<long long>(detected.size()),
                            static_cast<long long>(reference.size()),
                            tolerance_frames);
}

EvalReport evaluate_corpus(std::span<const BoundarySet* const> detected,
                           std::span<const BoundarySet* const> reference,
                           int tolerance_frames, MatchingMode mode) {
  if (detected.size() != reference.size())
    throw Error("detected/reference utterance count mismatch");
  long long c = 0, d = 0, t = 0;
  for (std::size_t u = 0; u < detected.size(); ++u) {
    c += correct_count(*detected[u], *reference[u], tolerance_frames, mode);
    d += static_cast<long long>(detected[u]->size());
    t += static_cast<long long>(reference[u]->size());
  }
  return report_from_counts(c, d, t, tolerance_frames);
}

DpMatchResult dp_match(const BoundarySet& detected,
                       const BoundarySet& reference, int tolerance_frames) {
  check_geometry(detected, reference);
  check_tolerance(tolerance_frames);
  const auto& det = detected.indices;
  const auto& ref = reference.indices;
  const std::size_t nd = det.size();
  const std::size_t nr = ref.size();

  // Both lists are sorted, so a maximum matching exists without crossing
  // pairs and the LCS-style recurrence is exact.
  std::vector<int> dp((nd + 1) * (nr + 1), 0);
  auto cell = [&](std::size_t i, std::size_t j) -> int& {
    return dp[i * (nr + 1) + j];
  };
  for (std::size_t i = 1; i <= nd; ++i) {
    for (std::size_t j = 1; j <= nr; ++j) {
      int best = std::max(cell(i - 1, j), cell(i, j - 1));
      if (std::abs(det[i - 1] - ref[j - 1]) <= tolerance_frames)
        best = std::max(best, cell(i - 1, j - 1) + 1);
      cell(i, j) = best;
    }
  }

  DpMatchResult result;
  std::size_t i = nd, j = nr;
  while (i > 0 && j > 0) {
    if (std::abs(det[i - 1] - ref[j - 1]) <= tolerance_frames &&
        cell(i, j) == cell(i - 1, j - 1) + 1) {
      result.pairs.emplace_back(det[i - 1], ref[j - 1]);
      --i;
      --j;
    } else if (cell(i - 1, j) >= cell(i, j - 1)) {
      --i;
    } else {
      --j;
    }
  }
  std::reverse(result.pairs.begin(), result.pairs.end());
  result.matched = cell(nd, nr);
  result.insertions = static_cast<long long>(nd) - result.matched;
  result.deletions = static_cast<long long>(nr) - result.matched;
  return result;
}

} // namespace segbound

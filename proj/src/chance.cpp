#include "segbound/chance.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "segbound/eval.hpp"
#include "segbound/rng.hpp"

namespace segbound {

AnalyticChance analytic_chance(long long boundaries, long long positions,
                               int tolerance_frames) {
  if (positions <= 0)
    throw Error("analytic chance needs at least one candidate position");
  if (boundaries < 0)
    throw Error("negative boundary count");
  if (tolerance_frames < 0)
    throw Error("tolerance must be non-negative");
  AnalyticChance c;
  const double rate = static_cast<double>(boundaries) /
                      static_cast<double>(positions);
  c.precision_percent = 100.0 * (2.0 * tolerance_frames + 1.0) * rate;
  c.approximation_valid = rate <= 0.3;
  return c;
}

MonteCarloChance monte_carlo_chance(
    std::span<const BoundarySet* const> reference, double ratio,
    int repetitions, int tolerance_frames, std::uint64_t seed) {
  if (reference.empty())
    throw Error("empty reference corpus");
  if (ratio < 0.0)
    throw Error("ratio must be non-negative");
  if (repetitions < 1)
    throw Error("need at least one repetition");
  for (const BoundarySet* ref : reference)
    if (ref->num_frames < 2)
      throw Error("utterance with no candidate gap positions");

  MonteCarloChance result;
  result.repetitions = repetitions;

  double precision_sum = 0.0;
  double recall_sum = 0.0;
  int precision_defined_reps = 0;
  std::vector<int> positions;

  for (int rep = 0; rep < repetitions; ++rep) {
    Rng rng(seed + static_cast<std::uint64_t>(rep));
    std::vector<BoundarySet> sampled;
    sampled.reserve(reference.size());
    for (const BoundarySet* ref : reference) {
      const long long m = ref->num_frames - 1;
      long long f = std::llround(ratio * static_cast<double>(ref->size()));
      f = std::clamp<long long>(f, 0, m);
      // Partial Fisher-Yates: the first f entries are a uniform sample
      // without repetition of the m gap positions.
      positions.resize(static_cast<std::size_t>(m));
      std::iota(positions.begin(), positions.end(), 0);
      std::vector<int> draw(static_cast<std::size_t>(f));
      for (long long i = 0; i < f; ++i) {
        const std::uint64_t j =
            static_cast<std::uint64_t>(i) +
            rng.uniform_below(static_cast<std::uint64_t>(m - i));
        std::swap(positions[static_cast<std::size_t>(i)],
                  positions[static_cast<std::size_t>(j)]);
        draw[static_cast<std::size_t>(i)] =
            positions[static_cast<std::size_t>(i)];
      }
      sampled.push_back(make_boundary_set(std::move(draw), ref->num_frames,
                                          ref->frame_shift_ms));
    }

    std::vector<const BoundarySet*> sampled_ptrs;
    sampled_ptrs.reserve(sampled.size());
    for (const auto& s : sampled)
      sampled_ptrs.push_back(&s);
    EvalReport rep_report = evaluate_corpus(sampled_ptrs, reference,
                                            tolerance_frames);
    if (rep == 0) {
      result.detected = rep_report.detected;
      result.reference = rep_report.reference;
    }
    if (rep_report.precision_defined) {
      precision_sum += rep_report.precision;
      ++precision_defined_reps;
    }
    if (rep_report.recall_defined) {
      recall_sum += rep_report.recall;
      result.recall_defined = true;
    }
  }

  if (precision_defined_reps > 0) {
    result.mean_precision = precision_sum / precision_defined_reps;
    result.precision_defined = true;
  }
  if (result.recall_defined)
    result.mean_recall = recall_sum / repetitions;
  return result;
}

} // namespace segbound

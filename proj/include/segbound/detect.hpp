#ifndef SEGBOUND_DETECT_HPP
#define SEGBOUND_DETECT_HPP

#include <span>
#include <vector>

#include "segbound/measures.hpp"
#include "segbound/types.hpp"

namespace segbound {

/// A maximal run of contiguous frames on which a condition holds,
/// inclusive on both ends.
struct Region {
  int start = 0;
  int end = 0;
};

/// Maximal runs of frames in [valid_from, valid_to] with values[n]
/// strictly above th.
std::vector<Region> regions_above(std::span<const double> values,
                                  int valid_from, int valid_to, double th);

/// One candidate frame per region: the in-region argmax, ties broken
/// toward the earliest frame.
std::vector<int> pick_peak_per_region(std::span<const double> values,
                                      std::span<const Region> regions);

/// Maps a candidate frame to the gap index it names. The moving average
/// is already gap-aligned (boundary = n); frame-centred measures pick the
/// steeper side: gap n if the decision value right of the peak is >= the
/// one left of it, else gap n-1. Neighbours outside [valid_from,
/// valid_to] count as -inf. Returns -1 when no gap exists (T < 2).
int frame_to_boundary(int frame, std::span<const double> decision_values,
                      int valid_from, int valid_to, MeasureKind kind,
                      int num_frames);

/// The one-candidate-per-region decision on a single measure track:
/// regions above mu + th_rel * sigma of the decision-signed values, one
/// peak per region, mapped to gap indices. The first derivative has no
/// decision rule and is rejected.
BoundarySet detect_single(const MeasureTrack& track, const GlobalStats& stats,
                          double th_rel, double frame_shift_ms);

/// Combined decision: frames where the entropy exceeds th1 are found
/// first; within them the one-candidate-per-region rule runs on the
/// second measure (d2 or ma) against th2. Sub-regions are maximal runs
/// where both conditions hold.
BoundarySet detect_combined(const MeasureTrack& entropy,
                            const MeasureTrack& second,
                            const GlobalStats& entropy_stats,
                            const GlobalStats& second_stats, double th1_rel,
                            double th2_rel, double frame_shift_ms);

/// Baseline: a boundary wherever the frame-wise argmax class changes.
/// Argmax ties go to the lowest class column.
BoundarySet detect_baseline(const Posteriorgram& p);

} // namespace segbound

#endif // SEGBOUND_DETECT_HPP

#ifndef SEGBOUND_MEASURES_HPP
#define SEGBOUND_MEASURES_HPP

#include <array>
#include <optional>
#include <span>

#include "segbound/types.hpp"

namespace segbound {

/// Class entropy per frame, in bits: e[n] = -sum a_i[n] log2 a_i[n],
/// with 0 log2 0 = 0. Values are clamped into [0, log2 N] against
/// floating point drift. Valid on every frame.
MeasureTrack entropy_track(const Posteriorgram& p);

/// e'[n] = e[n] - e[n-1], valid from frame 1; frame 0 is zero padding.
MeasureTrack first_derivative(const MeasureTrack& entropy);

/// e''[n] = e[n-1] - 2 e[n] + e[n+1], valid on 1..T-2. Needs T >= 3.
MeasureTrack second_derivative(const MeasureTrack& entropy);

/// ma[n] = e''[n] + e''[n+1] = e[n-1] - e[n] - e[n+1] + e[n+2], valid on
/// 1..T-3 and aligned with the gap between frames n and n+1. Needs T >= 4.
MeasureTrack moving_average(const MeasureTrack& entropy);

/// The four measure tracks of one utterance.
struct MeasureSet {
  MeasureTrack e;
  MeasureTrack d1;
  MeasureTrack d2;
  MeasureTrack ma;
};

MeasureSet compute_measures(const Posteriorgram& p);

/// Streaming corpus statistics, one slot per measure kind. Tracks are
/// accumulated in decision polarity over their valid frames only, in a
/// fixed sequential order so results do not depend on worker count.
class StatsAccumulator {
public:
  void add(const MeasureTrack& track);
  bool has(MeasureKind kind) const;
  /// Mean and population standard deviation; throws if no valid frame of
  /// this kind was accumulated.
  GlobalStats get(MeasureKind kind) const;

private:
  struct Welford {
    long long count = 0;
    double mean = 0.0;
    double m2 = 0.0;
  };
  std::array<Welford, 5> slots_;
};

/// Pooled statistics of same-kind tracks across a corpus.
GlobalStats global_stats(std::span<const MeasureTrack* const> tracks,
                         MeasureKind kind);

/// Absolute threshold mu + r * sigma; r is not clamped.
double relative_threshold(const GlobalStats& stats, double r);

} // namespace segbound

#endif // SEGBOUND_MEASURES_HPP

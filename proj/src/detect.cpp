#include "segbound/detect.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace segbound {

std::vector<Region> regions_above(std::span<const double> values,
                                  int valid_from, int valid_to, double th) {
  std::vector<Region> regions;
  const int lo = std::max(valid_from, 0);
  const int hi = std::min(valid_to, static_cast<int>(values.size()) - 1);
  int start = -1;
  for (int n = lo; n <= hi; ++n) {
    if (values[n] > th) {
      if (start < 0)
        start = n;
    } else if (start >= 0) {
      regions.push_back({start, n - 1});
      start = -1;
    }
  }
  if (start >= 0)
    regions.push_back({start, hi});
  return regions;
}

std::vector<int> pick_peak_per_region(std::span<const double> values,
                                      std::span<const Region> regions) {
  std::vector<int> peaks;
  peaks.reserve(regions.size());
  for (const Region& r : regions) {
    int best = r.start;
    for (int n = r.start + 1; n <= r.end; ++n)
      if (values[n] > values[best])
        best = n;
    peaks.push_back(best);
  }
  return peaks;
}

int frame_to_boundary(int frame, std::span<const double> decision_values,
                      int valid_from, int valid_to, MeasureKind kind,
                      int num_frames) {
  if (num_frames < 2)
    return -1;
  int b;
  if (kind == MeasureKind::ma) {
    b = frame;
  } else {
    const double neg_inf = -std::numeric_limits<double>::infinity();
    auto at = [&](int n) {
      return (n >= valid_from && n <= valid_to &&
              n < static_cast<int>(decision_values.size()) && n >= 0)
                 ? decision_values[n]
                 : neg_inf;
    };
    b = at(frame + 1) >= at(frame - 1) ? frame : frame - 1;
  }
  return std::clamp(b, 0, num_frames - 2);
}

namespace {

std::vector<double> decision_values(const MeasureTrack& track) {
  std::vector<double> d(track.values.begin(), track.values.end());
  if (decision_sign(track.kind) < 0.0)
    for (double& v : d)
      v = -v;
  return d;
}

BoundarySet boundaries_from_peaks(std::span<const int> peaks,
                                  std::span<const double> decision,
                                  int valid_from, int valid_to,
                                  MeasureKind kind, int num_frames,
                                  double frame_shift_ms) {
  std::vector<int> indices;
  indices.reserve(peaks.size());
  for (int frame : peaks) {
    int b = frame_to_boundary(frame, decision, valid_from, valid_to, kind,
                              num_frames);
    if (b >= 0)
      indices.push_back(b);
  }
  return make_boundary_set(std::move(indices), num_frames, frame_shift_ms);
}

} // namespace

BoundarySet detect_single(const MeasureTrack& track, const GlobalStats& stats,
                          double th_rel, double frame_shift_ms) {
  if (track.kind == MeasureKind::d1)
    throw Error("no decision rule for e'");
  const std::vector<double> d = decision_values(track);
  const double th = relative_threshold(stats, th_rel);
  const auto regions = regions_above(d, track.valid_from, track.valid_to, th);
  const auto peaks = pick_peak_per_region(d, regions);
  return boundaries_from_peaks(peaks, d, track.valid_from, track.valid_to,
                               track.kind, track.num_frames(), frame_shift_ms);
}

BoundarySet detect_combined(const MeasureTrack& entropy,
                            const MeasureTrack& second,
                            const GlobalStats& entropy_stats,
                            const GlobalStats& second_stats, double th1_rel,
                            double th2_rel, double frame_shift_ms) {
  if (entropy.kind != MeasureKind::entropy)
    throw Error("detect_combined: first track must be the entropy");
  if (second.kind != MeasureKind::d2 && second.kind != MeasureKind::ma)
    throw Error("detect_combined: second measure must be d2 or ma");
  if (entropy.num_frames() != second.num_frames())
    throw Error("detect_combined: track length mismatch");

  const std::vector<double> d = decision_values(second);
  const double th1 = relative_threshold(entropy_stats, th1_rel);
  const double th2 = relative_threshold(second_stats, th2_rel);

  // Maximal runs where both the entropy condition (plain >) and the
  // second measure's condition hold; one candidate per run.
  const int lo = std::max(entropy.valid_from, second.valid_from);
  const int hi = std::min(entropy.valid_to, second.valid_to);
  std::vector<Region> regions;
  int start = -1;
  for (int n = lo; n <= hi; ++n) {
    if (entropy.values[n] > th1 && d[n] > th2) {
      if (start < 0)
        start = n;
    } else if (start >= 0) {
      regions.push_back({start, n - 1});
      start = -1;
    }
  }
  if (start >= 0)
    regions.push_back({start, hi});

  const auto peaks = pick_peak_per_region(d, regions);
  return boundaries_from_peaks(peaks, d, second.valid_from, second.valid_to,
                               second.kind, second.num_frames(),
                               frame_shift_ms);
}

BoundarySet detect_baseline(const Posteriorgram& p) {
  validate(p);
  std::vector<int> argmax(p.num_frames);
  for (std::size_t t = 0; t < p.num_frames; ++t) {
    auto row = p.row(t);
    argmax[t] = static_cast<int>(
        std::max_element(row.begin(), row.end()) - row.begin());
  }
  std::vector<int> indices;
  for (std::size_t t = 0; t + 1 < p.num_frames; ++t)
    if (argmax[t] != argmax[t + 1])
      indices.push_back(static_cast<int>(t));
  return make_boundary_set(std::move(indices),
                           static_cast<int>(p.num_frames), p.frame_shift_ms);
}

} // namespace segbound

#include "segbound/measures.hpp"

#include <algorithm>
#include <cmath>

namespace segbound {

MeasureTrack entropy_track(const Posteriorgram& p) {
  validate(p);
  MeasureTrack t;
  t.kind = MeasureKind::entropy;
  t.values.resize(p.num_frames);
  const double ceiling = std::log2(static_cast<double>(p.num_classes));
  for (std::size_t n = 0; n < p.num_frames; ++n) {
    double e = 0.0;
    for (double a : p.row(n))
      if (a > 0.0)
        e -= a * std::log2(a);
    t.values[n] = std::clamp(e, 0.0, ceiling);
  }
  t.valid_from = 0;
  t.valid_to = static_cast<int>(p.num_frames) - 1;
  return t;
}

namespace {

void require_entropy(const MeasureTrack& t, const char* op) {
  if (t.kind != MeasureKind::entropy)
    throw Error(std::string(op) + " expects an entropy track");
}

} // namespace

MeasureTrack first_derivative(const MeasureTrack& entropy) {
  require_entropy(entropy, "first_derivative");
  const int T = entropy.num_frames();
  MeasureTrack t;
  t.kind = MeasureKind::d1;
  t.values.assign(T, 0.0);
  for (int n = 1; n < T; ++n)
    t.values[n] = entropy.values[n] - entropy.values[n - 1];
  t.valid_from = 1;
  t.valid_to = T - 1;
  return t;
}

MeasureTrack second_derivative(const MeasureTrack& entropy) {
  require_entropy(entropy, "second_derivative");
  const int T = entropy.num_frames();
  if (T < 3)
    throw Error("track too short for second derivative (need 3 frames)");
  MeasureTrack t;
  t.kind = MeasureKind::d2;
  t.values.assign(T, 0.0);
  const auto& e = entropy.values;
  for (int n = 1; n <= T - 2; ++n)
    t.values[n] = e[n - 1] - 2.0 * e[n] + e[n + 1];
  t.valid_from = 1;
  t.valid_to = T - 2;
  return t;
}

MeasureTrack moving_average(const MeasureTrack& entropy) {
  require_entropy(entropy, "moving_average");
  const int T = entropy.num_frames();
  if (T < 4)
    throw Error("track too short for moving average (need 4 frames)");
  MeasureTrack t;
  t.kind = MeasureKind::ma;
  t.values.assign(T, 0.0);
  const auto& e = entropy.values;
  for (int n = 1; n <= T - 3; ++n)
    t.values[n] = e[n - 1] - e[n] - e[n + 1] + e[n + 2];
  t.valid_from = 1;
  t.valid_to = T - 3;
  return t;
}

MeasureSet compute_measures(const Posteriorgram& p) {
  MeasureSet m;
  m.e = entropy_track(p);
  m.d1 = first_derivative(m.e);
  m.d2 = second_derivative(m.e);
  m.ma = moving_average(m.e);
  return m;
}

void StatsAccumulator::add(const MeasureTrack& track) {
  Welford& w = slots_[static_cast<std::size_t>(track.kind)];
  const double sign = decision_sign(track.kind);
  const int lo = std::max(track.valid_from, 0);
  const int hi = std::min(track.valid_to, track.num_frames() - 1);
  for (int n = lo; n <= hi; ++n) {
    const double x = sign * track.values[n];
    ++w.count;
    const double delta = x - w.mean;
    w.mean += delta / static_cast<double>(w.count);
    w.m2 += delta * (x - w.mean);
  }
}

bool StatsAccumulator::has(MeasureKind kind) const {
  return slots_[static_cast<std::size_t>(kind)].count > 0;
}

GlobalStats StatsAccumulator::get(MeasureKind kind) const {
  const Welford& w = slots_[static_cast<std::size_t>(kind)];
  if (w.count == 0)
    throw Error("no valid frames accumulated for measure " +
                std::string(to_string(kind)));
  GlobalStats g;
  g.mean = w.mean;
  g.stddev = std::sqrt(std::max(0.0, w.m2 / static_cast<double>(w.count)));
  return g;
}

GlobalStats global_stats(std::span<const MeasureTrack* const> tracks,
                         MeasureKind kind) {
  StatsAccumulator acc;
  for (const MeasureTrack* t : tracks) {
    if (t->kind != kind)
      throw Error("global_stats: track kind mismatch");
    acc.add(*t);
  }
  return acc.get(kind);
}

double relative_threshold(const GlobalStats& stats, double r) {
  return stats.mean + r * stats.stddev;
}

} // namespace segbound

#include "segbound/types.hpp"

#include <algorithm>
#include <cmath>

namespace segbound {

void validate(const Posteriorgram& p) {
  if (p.num_classes < 2)
    throw Error("posteriorgram needs at least 2 classes");
  if (p.num_frames < 1)
    throw Error("posteriorgram needs at least 1 frame");
  if (p.frame_shift_ms <= 0.0)
    throw Error("frame shift must be positive");
  if (p.values.size() != p.num_frames * p.num_classes)
    throw Error("posteriorgram value buffer does not match its shape");
  if (!p.class_labels.empty() && p.class_labels.size() != p.num_classes)
    throw Error("class label count does not match the number of classes");
  for (std::size_t t = 0; t < p.num_frames; ++t) {
    double sum = 0.0;
    for (double v : p.row(t)) {
      if (!(v >= 0.0 && v <= 1.0))
        throw Error("posterior out of [0,1] at frame " + std::to_string(t));
      sum += v;
    }
    if (std::abs(sum - 1.0) > 1e-6)
      throw Error("row not on simplex at frame " + std::to_string(t));
  }
}

BoundarySet make_boundary_set(std::vector<int> indices, int num_frames,
                              double frame_shift_ms) {
  std::sort(indices.begin(), indices.end());
  indices.erase(std::unique(indices.begin(), indices.end()), indices.end());
  BoundarySet b;
  b.indices = std::move(indices);
  b.num_frames = num_frames;
  b.frame_shift_ms = frame_shift_ms;
  validate(b);
  return b;
}

void validate(const BoundarySet& b) {
  if (b.num_frames < 1)
    throw Error("boundary set needs at least 1 frame");
  if (b.frame_shift_ms <= 0.0)
    throw Error("frame shift must be positive");
  int prev = -1;
  for (int idx : b.indices) {
    if (idx < 0 || idx > b.num_frames - 2)
      throw Error("boundary index " + std::to_string(idx) +
                  " outside 0.." + std::to_string(b.num_frames - 2));
    if (idx <= prev)
      throw Error("boundary indices must be strictly increasing");
    prev = idx;
  }
}

std::string_view to_string(MeasureKind k) {
  switch (k) {
    case MeasureKind::entropy: return "entropy";
    case MeasureKind::d1: return "d1";
    case MeasureKind::d2: return "d2";
    case MeasureKind::ma: return "ma";
    case MeasureKind::nn: return "nn";
  }
  return "?";
}

MeasureKind measure_kind_from_string(std::string_view s) {
  if (s == "entropy" || s == "e") return MeasureKind::entropy;
  if (s == "d1") return MeasureKind::d1;
  if (s == "d2") return MeasureKind::d2;
  if (s == "ma") return MeasureKind::ma;
  if (s == "nn") return MeasureKind::nn;
  throw Error("unknown measure kind: " + std::string(s));
}

double decision_sign(MeasureKind k) {
  return (k == MeasureKind::d2 || k == MeasureKind::ma) ? -1.0 : 1.0;
}

} // namespace segbound

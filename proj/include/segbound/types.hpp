#ifndef SEGBOUND_TYPES_HPP
#define SEGBOUND_TYPES_HPP

#include <cstddef>
#include <limits>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace segbound {

class Error : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

/// Per-frame class posterior probabilities, one row per 10 ms frame
/// (row-major, num_frames x num_classes). Every row lies on the
/// probability simplex.
struct Posteriorgram {
  std::size_t num_frames = 0;
  std::size_t num_classes = 0;
  std::vector<std::string> class_labels;
  double frame_shift_ms = 10.0;
  std::vector<double> values; // num_frames * num_classes

  std::span<const double> row(std::size_t t) const {
    return {values.data() + t * num_classes, num_classes};
  }
  double at(std::size_t t, std::size_t i) const {
    return values[t * num_classes + i];
  }
  double& at(std::size_t t, std::size_t i) {
    return values[t * num_classes + i];
  }
};

/// Throws Error if the matrix shape is inconsistent, a row leaves the
/// simplex by more than 1e-6, or fewer than 2 classes / 1 frame.
void validate(const Posteriorgram& p);

/// Sorted, distinct inter-frame boundary indices. Index b names the gap
/// between frame b and frame b+1, so valid indices are 0..num_frames-2.
struct BoundarySet {
  std::vector<int> indices;
  int num_frames = 0;
  double frame_shift_ms = 10.0;

  double boundary_time_ms(int b) const { return (b + 1) * frame_shift_ms; }
  std::size_t size() const { return indices.size(); }
  bool empty() const { return indices.empty(); }
};

/// Sorts, deduplicates and range-checks the given gap indices.
BoundarySet make_boundary_set(std::vector<int> indices, int num_frames,
                              double frame_shift_ms);
void validate(const BoundarySet& b);

enum class MeasureKind { entropy, d1, d2, ma, nn };

std::string_view to_string(MeasureKind k);
MeasureKind measure_kind_from_string(std::string_view s);

/// Sign with which a measure enters its decision rule: -1 for the second
/// derivative and the moving average (their minima mark boundaries),
/// +1 otherwise.
double decision_sign(MeasureKind k);

/// A per-frame scalar series derived from a posteriorgram. Frames outside
/// [valid_from, valid_to] are padding (zero) and never produce boundary
/// candidates nor enter global statistics.
struct MeasureTrack {
  MeasureKind kind = MeasureKind::entropy;
  std::vector<double> values;
  int valid_from = 0;
  int valid_to = -1; // inclusive; valid_to < valid_from means no valid frame

  int num_frames() const { return static_cast<int>(values.size()); }
  bool is_valid_frame(int n) const { return n >= valid_from && n <= valid_to; }
};

/// Corpus mean and population standard deviation of one measure, taken in
/// decision polarity (see decision_sign).
struct GlobalStats {
  double mean = 0.0;
  double stddev = 0.0;
};

/// Boundary detection scores for one utterance or a pooled corpus.
/// precision/recall are percentages; they are undefined (and flagged)
/// when the respective denominator is zero.
struct EvalReport {
  long long correct = 0;   // C
  long long detected = 0;  // D
  long long reference = 0; // T
  double precision = std::numeric_limits<double>::quiet_NaN();
  double recall = std::numeric_limits<double>::quiet_NaN();
  double criterion = std::numeric_limits<double>::quiet_NaN();
  bool precision_defined = false;
  bool recall_defined = false;
  bool criterion_defined = false;
  int tolerance_frames = 1;
};

} // namespace segbound

#endif // SEGBOUND_TYPES_HPP

#ifndef SEGBOUND_SYNTH_HPP
#define SEGBOUND_SYNTH_HPP

#include <cstdint>
#include <string>
#include <vector>

#include "segbound/io.hpp"
#include "segbound/types.hpp"

namespace segbound {

/// Parameters of the synthetic posteriorgram generator. Utterances are
/// piecewise-stationary in logit space: each segment puts a unit logit on
/// its class, adjacent segments cross-fade linearly over transition_width
/// frames around the true gap (the gap's left frame carries the exact
/// 50/50 blend), optional Gaussian noise perturbs the logits, and a
/// per-class tempered softmax maps logits to the simplex. The per-class
/// temperature jitter (drawn once from `seed`) gives every class its own
/// baseline entropy.
struct SynthSpec {
  int num_classes = 50;
  int min_segments = 5;
  int max_segments = 15;
  int min_duration = 4;  // frames
  int max_duration = 12; // frames
  int transition_width = 2;
  double confusion_temperature = 0.2;
  double noise_level = 0.0;
  double frame_shift_ms = 10.0;
  std::uint64_t seed = 0;
  /// When positive, segment durations are rescaled so the corpus
  /// boundary-per-gap rate B/M lands within target_rate_band of this.
  double target_boundary_rate = 0.0;
  double target_rate_band = 0.002;
};

void validate(const SynthSpec& spec);

struct SynthUtterance {
  Posteriorgram posteriorgram;
  BoundarySet boundaries;
  std::vector<int> class_sequence;
};

/// Deterministic per (spec, seed); adjacent segments always differ in
/// class, so every junction is a real boundary.
SynthUtterance generate_utterance(const SynthSpec& spec, std::uint64_t seed);

struct SynthCorpus {
  CorpusList manifest;
  std::string manifest_path;
  long long total_boundaries = 0;
  long long total_positions = 0;
  double boundary_rate = 0.0;
};

/// Writes posteriorgram and label files plus a manifest under out_dir.
SynthCorpus generate_corpus(const SynthSpec& spec, int num_utterances,
                            const std::string& out_dir);

/// In-memory variant used by tests and the corpus writer.
std::vector<SynthUtterance> generate_utterances(const SynthSpec& spec,
                                                int num_utterances);

} // namespace segbound

#endif // SEGBOUND_SYNTH_HPP

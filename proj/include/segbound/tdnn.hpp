#ifndef SEGBOUND_TDNN_HPP
#define SEGBOUND_TDNN_HPP

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "segbound/measures.hpp"
#include "segbound/types.hpp"

namespace segbound {

/// Exponentially decaying closeness-to-boundary target: p = exp(-d) with
/// d the frame distance to the nearest boundary (the two frames adjacent
/// to a gap have d = 0).
struct ProximityTrack {
  std::vector<double> values;
};

ProximityTrack proximity_target(const BoundarySet& boundaries,
                                int num_frames);

struct TdnnConfig {
  int num_inputs = 4;
  int num_hidden = 11;
  std::vector<int> input_delays = {-2, -1, 0, 1, 2};
};

/// Feed-forward regression network over time-delayed copies of its input
/// tracks: tanh hidden layer, logistic output bounded in (0,1), single
/// output unit. Inputs are z-normalized with the stored constants;
/// delayed taps outside the utterance replicate the edge frames.
struct TdnnModel {
  TdnnConfig config;
  // w1[(d * num_hidden + j) * num_inputs + i]: delay tap d, hidden j, input i
  std::vector<double> w1;
  std::vector<double> b1; // num_hidden
  std::vector<double> w2; // num_hidden (single output unit)
  double b2 = 0.0;
  std::vector<double> input_mean; // num_inputs, identity until trained
  std::vector<double> input_sd;

  std::size_t weight_count() const {
    return w1.size() + b1.size() + w2.size() + 1;
  }
};

/// Fan-in scaled symmetric uniform initialization, deterministic per seed.
TdnnModel tdnn_init(const TdnnConfig& config, std::uint64_t seed);

/// One training utterance: num_inputs tracks of equal length plus the
/// per-frame regression target.
struct TdnnSample {
  std::vector<std::vector<double>> inputs;
  std::vector<double> target;
};

TdnnSample make_sample(const MeasureSet& measures, const BoundarySet& reference);

/// Raw forward pass over generic input tracks.
std::vector<double> tdnn_forward(const TdnnModel& model,
                                 std::span<const std::vector<double>> inputs);

/// Forward pass over the four measure tracks; the result is a nn-kind
/// track valid on every frame.
MeasureTrack tdnn_forward(const TdnnModel& model, const MeasureSet& measures);

/// Mean squared error over all frames of all samples.
double tdnn_mse(const TdnnModel& model, std::span<const TdnnSample> samples);

/// Mean-MSE gradients, laid out like the model weights.
struct TdnnGradients {
  std::vector<double> w1;
  std::vector<double> b1;
  std::vector<double> w2;
  double b2 = 0.0;
};

TdnnGradients tdnn_gradients(const TdnnModel& model,
                             std::span<const TdnnSample> samples);

struct TdnnTrainOptions {
  int epochs = 50;
  double learning_rate = 0.5;
  /// true: one gradient step per utterance; false: one per epoch.
  bool update_per_utterance = true;
};

struct TdnnTrainResult {
  /// Whole-dataset MSE evaluated after each epoch's updates.
  std::vector<double> epoch_loss;
};

/// Plain gradient descent on the MSE. Fixed presentation order, so the
/// result is deterministic given the initial model. Sets the model's
/// input normalization from the training data if still at identity.
/// Throws on an empty dataset or when the loss turns non-finite.
TdnnTrainResult tdnn_train(TdnnModel& model, std::span<const TdnnSample> samples,
                           const TdnnTrainOptions& options);

void save_tdnn(const TdnnModel& model, const std::string& path);
TdnnModel load_tdnn(const std::string& path);

} // namespace segbound

#endif // SEGBOUND_TDNN_HPP

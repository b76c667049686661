#include "segbound/tdnn.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>

#include "segbound/io.hpp"
#include "segbound/rng.hpp"

namespace segbound {

ProximityTrack proximity_target(const BoundarySet& boundaries,
                                int num_frames) {
  if (num_frames < 1)
    throw Error("proximity target needs at least one frame");
  if (boundaries.num_frames != num_frames)
    throw Error("boundary set frame count mismatch");
  ProximityTrack p;
  if (boundaries.empty()) {
    p.values.assign(num_frames, 0.0);
    return p;
  }
  // Distance to the nearest gap-adjacent frame pair: frames b and b+1
  // have d = 0 for boundary b. Two chamfer passes.
  std::vector<int> dist(num_frames, num_frames);
  for (int b : boundaries.indices) {
    dist[b] = 0;
    if (b + 1 < num_frames)
      dist[b + 1] = 0;
  }
  for (int f = 1; f < num_frames; ++f)
    dist[f] = std::min(dist[f], dist[f - 1] + 1);
  for (int f = num_frames - 2; f >= 0; --f)
    dist[f] = std::min(dist[f], dist[f + 1] + 1);
  p.values.resize(num_frames);
  for (int f = 0; f < num_frames; ++f)
    p.values[f] = std::exp(-static_cast<double>(dist[f]));
  return p;
}

namespace {

void validate_config(const TdnnConfig& c) {
  if (c.num_inputs < 1)
    throw Error("tdnn config: need at least one input unit");
  if (c.num_hidden < 1)
    throw Error("tdnn config: need at least one hidden unit");
  if (c.input_delays.empty())
    throw Error("tdnn config: empty delay set");
}

double logistic(double z) { return 1.0 / (1.0 + std::exp(-z)); }

void check_inputs(const TdnnModel& model,
                  std::span<const std::vector<double>> inputs) {
  if (static_cast<int>(inputs.size()) != model.config.num_inputs)
    throw Error("tdnn: expected " + std::to_string(model.config.num_inputs) +
                " input tracks, got " + std::to_string(inputs.size()));
  for (const auto& track : inputs)
    if (track.size() != inputs[0].size())
      throw Error("tdnn: input track length mismatch");
  if (inputs[0].empty())
    throw Error("tdnn: empty input tracks");
}

// Z-normalized inputs, frame-major: x[n * I + i].
std::vector<double> normalized_inputs(
    const TdnnModel& model, std::span<const std::vector<double>> inputs) {
  const int I = model.config.num_inputs;
  const int T = static_cast<int>(inputs[0].size());
  std::vector<double> x(static_cast<std::size_t>(T) * I);
  for (int i = 0; i < I; ++i) {
    const double mean = model.input_mean[i];
    const double sd = model.input_sd[i] > 0.0 ? model.input_sd[i] : 1.0;
    for (int n = 0; n < T; ++n)
      x[static_cast<std::size_t>(n) * I + i] = (inputs[i][n] - mean) / sd;
  }
  return x;
}

struct ForwardScratch {
  std::vector<double> hidden; // tanh activations of the current frame
};

double forward_frame(const TdnnModel& model, const std::vector<double>& x,
                     int T, int n, ForwardScratch& scratch) {
  const int I = model.config.num_inputs;
  const int H = model.config.num_hidden;
  const auto& delays = model.config.input_delays;
  scratch.hidden.resize(H);
  for (int j = 0; j < H; ++j) {
    double a = model.b1[j];
    for (std::size_t d = 0; d < delays.size(); ++d) {
      const int t = std::clamp(n + delays[d], 0, T - 1);
      const double* w = model.w1.data() + (d * H + j) * I;
      const double* xt = x.data() + static_cast<std::size_t>(t) * I;
      for (int i = 0; i < I; ++i)
        a += w[i] * xt[i];
    }
    scratch.hidden[j] = std::tanh(a);
  }
  double z = model.b2;
  for (int j = 0; j < H; ++j)
    z += model.w2[j] * scratch.hidden[j];
  return logistic(z);
}

struct GradAccum {
  std::vector<double> w1, b1, w2;
  double b2 = 0.0;
  long long frames = 0;
  double loss_sum = 0.0;

  explicit GradAccum(const TdnnModel& m)
      : w1(m.w1.size(), 0.0), b1(m.b1.size(), 0.0), w2(m.w2.size(), 0.0) {}

  void reset() {
    std::fill(w1.begin(), w1.end(), 0.0);
    std::fill(b1.begin(), b1.end(), 0.0);
    std::fill(w2.begin(), w2.end(), 0.0);
    b2 = 0.0;
    frames = 0;
    loss_sum = 0.0;
  }
};

// Accumulates d(sum of squared errors)/dw over one utterance.
void backprop_sample(const TdnnModel& model, const TdnnSample& sample,
                     GradAccum& acc) {
  const int I = model.config.num_inputs;
  const int H = model.config.num_hidden;
  const auto& delays = model.config.input_delays;
  const int T = static_cast<int>(sample.inputs[0].size());
  const std::vector<double> x = normalized_inputs(model, sample.inputs);
  ForwardScratch scratch;
  for (int n = 0; n < T; ++n) {
    const double y = forward_frame(model, x, T, n, scratch);
    const double err = y - sample.target[n];
    acc.loss_sum += err * err;
    const double gz = 2.0 * err * y * (1.0 - y);
    acc.b2 += gz;
    for (int j = 0; j < H; ++j) {
      const double h = scratch.hidden[j];
      acc.w2[j] += gz * h;
      const double ga = gz * model.w2[j] * (1.0 - h * h);
      acc.b1[j] += ga;
      for (std::size_t d = 0; d < delays.size(); ++d) {
        const int t = std::clamp(n + delays[d], 0, T - 1);
        double* gw = acc.w1.data() + (d * H + j) * I;
        const double* xt = x.data() + static_cast<std::size_t>(t) * I;
        for (int i = 0; i < I; ++i)
          gw[i] += ga * xt[i];
      }
    }
    ++acc.frames;
  }
}

void apply_update(TdnnModel& model, const GradAccum& acc, double rate) {
  if (acc.frames == 0)
    return;
  const double scale = rate / static_cast<double>(acc.frames);
  for (std::size_t k = 0; k < model.w1.size(); ++k)
    model.w1[k] -= scale * acc.w1[k];
  for (std::size_t k = 0; k < model.b1.size(); ++k)
    model.b1[k] -= scale * acc.b1[k];
  for (std::size_t k = 0; k < model.w2.size(); ++k)
    model.w2[k] -= scale * acc.w2[k];
  model.b2 -= scale * acc.b2;
}

void validate_sample(const TdnnModel& model, const TdnnSample& sample) {
  check_inputs(model, sample.inputs);
  if (sample.target.size() != sample.inputs[0].size())
    throw Error("tdnn: target length mismatch");
}

bool identity_normalization(const TdnnModel& model) {
  for (double m : model.input_mean)
    if (m != 0.0)
      return false;
  for (double s : model.input_sd)
    if (s != 1.0)
      return false;
  return true;
}

void fit_normalization(TdnnModel& model, std::span<const TdnnSample> samples) {
  const int I = model.config.num_inputs;
  for (int i = 0; i < I; ++i) {
    long long count = 0;
    double mean = 0.0, m2 = 0.0;
    for (const auto& s : samples) {
      for (double v : s.inputs[i]) {
        ++count;
        const double delta = v - mean;
        mean += delta / static_cast<double>(count);
        m2 += delta * (v - mean);
      }
    }
    model.input_mean[i] = mean;
    const double sd = std::sqrt(std::max(0.0, m2 / static_cast<double>(count)));
    model.input_sd[i] = sd > 1e-12 ? sd : 1.0;
  }
}

} // namespace

TdnnModel tdnn_init(const TdnnConfig& config, std::uint64_t seed) {
  validate_config(config);
  TdnnModel m;
  m.config = config;
  const std::size_t taps = config.input_delays.size();
  m.w1.resize(taps * config.num_hidden * config.num_inputs);
  m.b1.assign(config.num_hidden, 0.0);
  m.w2.resize(config.num_hidden);
  m.input_mean.assign(config.num_inputs, 0.0);
  m.input_sd.assign(config.num_inputs, 1.0);

  Rng rng(mix_seed(seed));
  const double in_scale =
      1.0 / std::sqrt(static_cast<double>(taps * config.num_inputs));
  for (double& w : m.w1)
    w = rng.uniform(-in_scale, in_scale);
  const double hid_scale =
      1.0 / std::sqrt(static_cast<double>(config.num_hidden));
  for (double& w : m.w2)
    w = rng.uniform(-hid_scale, hid_scale);
  return m;
}

TdnnSample make_sample(const MeasureSet& measures,
                       const BoundarySet& reference) {
  TdnnSample s;
  s.inputs = {measures.e.values, measures.d1.values, measures.d2.values,
              measures.ma.values};
  s.target = proximity_target(reference, measures.e.num_frames()).values;
  return s;
}

std::vector<double> tdnn_forward(const TdnnModel& model,
                                 std::span<const std::vector<double>> inputs) {
  check_inputs(model, inputs);
  const int T = static_cast<int>(inputs[0].size());
  const std::vector<double> x = normalized_inputs(model, inputs);
  std::vector<double> y(T);
  ForwardScratch scratch;
  for (int n = 0; n < T; ++n)
    y[n] = forward_frame(model, x, T, n, scratch);
  return y;
}

MeasureTrack tdnn_forward(const TdnnModel& model, const MeasureSet& measures) {
  std::vector<std::vector<double>> inputs = {
      measures.e.values, measures.d1.values, measures.d2.values,
      measures.ma.values};
  MeasureTrack t;
  t.kind = MeasureKind::nn;
  t.values = tdnn_forward(model, inputs);
  t.valid_from = 0;
  t.valid_to = t.num_frames() - 1;
  return t;
}

double tdnn_mse(const TdnnModel& model, std::span<const TdnnSample> samples) {
  if (samples.empty())
    throw Error("tdnn: empty dataset");
  double loss_sum = 0.0;
  long long frames = 0;
  ForwardScratch scratch;
  for (const auto& s : samples) {
    validate_sample(model, s);
    const int T = static_cast<int>(s.inputs[0].size());
    const std::vector<double> x = normalized_inputs(model, s.inputs);
    for (int n = 0; n < T; ++n) {
      const double err = forward_frame(model, x, T, n, scratch) - s.target[n];
      loss_sum += err * err;
      frames += 1;
    }
  }
  return loss_sum / static_cast<double>(frames);
}

TdnnGradients tdnn_gradients(const TdnnModel& model,
                             std::span<const TdnnSample> samples) {
  if (samples.empty())
    throw Error("tdnn: empty dataset");
  GradAccum acc(model);
  for (const auto& s : samples) {
    validate_sample(model, s);
    backprop_sample(model, s, acc);
  }
  TdnnGradients g;
  const double scale = 1.0 / static_cast<double>(acc.frames);
  g.w1 = acc.w1;
  g.b1 = acc.b1;
  g.w2 = acc.w2;
  for (double& v : g.w1)
    v *= scale;
  for (double& v : g.b1)
    v *= scale;
  for (double& v : g.w2)
    v *= scale;
  g.b2 = acc.b2 * scale;
  return g;
}

TdnnTrainResult tdnn_train(TdnnModel& model,
                           std::span<const TdnnSample> samples,
                           const TdnnTrainOptions& options) {
  if (samples.empty())
    throw Error("tdnn: empty dataset");
  if (options.epochs < 1)
    throw Error("tdnn: need at least one epoch");
  if (!(options.learning_rate >= 0.0))
    throw Error("tdnn: learning rate must be non-negative");
  for (const auto& s : samples)
    validate_sample(model, s);
  if (identity_normalization(model))
    fit_normalization(model, samples);

  TdnnTrainResult result;
  result.epoch_loss.reserve(options.epochs);
  GradAccum acc(model);
  for (int epoch = 0; epoch < options.epochs; ++epoch) {
    if (options.update_per_utterance) {
      for (const auto& s : samples) {
        acc.reset();
        backprop_sample(model, s, acc);
        apply_update(model, acc, options.learning_rate);
      }
    } else {
      acc.reset();
      for (const auto& s : samples)
        backprop_sample(model, s, acc);
      apply_update(model, acc, options.learning_rate);
    }
    const double loss = tdnn_mse(model, samples);
    if (!std::isfinite(loss))
      throw Error("tdnn: non-finite loss at epoch " + std::to_string(epoch));
    result.epoch_loss.push_back(loss);
  }
  return result;
}

void save_tdnn(const TdnnModel& model, const std::string& path) {
  std::ofstream out(path);
  if (!out)
    throw Error("cannot open " + path + " for writing");
  auto line = [&](std::span<const double> vals) {
    for (std::size_t k = 0; k < vals.size(); ++k) {
      if (k)
        out << ' ';
      char buf[40];
      std::snprintf(buf, sizeof(buf), "%.17g", vals[k]);
      out << buf;
    }
    out << '\n';
  };
  out << model.config.num_inputs << ' ' << model.config.num_hidden << " 1\n";
  for (std::size_t d = 0; d < model.config.input_delays.size(); ++d) {
    if (d)
      out << ' ';
    out << model.config.input_delays[d];
  }
  out << '\n';
  std::vector<double> norm;
  for (int i = 0; i < model.config.num_inputs; ++i) {
    norm.push_back(model.input_mean[i]);
    norm.push_back(model.input_sd[i]);
  }
  line(norm);
  // W1 rows: one hidden unit per line, delay-major columns.
  const int I = model.config.num_inputs;
  const int H = model.config.num_hidden;
  const std::size_t taps = model.config.input_delays.size();
  for (int j = 0; j < H; ++j) {
    std::vector<double> row;
    row.reserve(taps * I);
    for (std::size_t d = 0; d < taps; ++d)
      for (int i = 0; i < I; ++i)
        row.push_back(model.w1[(d * H + j) * I + i]);
    line(row);
  }
  line(model.b1);
  line(model.w2);
  line({&model.b2, 1});
  if (!out)
    throw Error("write failed for " + path);
}

TdnnModel load_tdnn(const std::string& path) {
  std::ifstream in(path);
  if (!in)
    throw Error("cannot open " + path + " for reading");
  auto next_line = [&](const char* what) {
    std::string line;
    if (!std::getline(in, line))
      throw Error("model file truncated at " + std::string(what) + ": " +
                  path);
    return line;
  };
  auto parse_row = [&](const std::string& line, const char* what) {
    std::istringstream iss(line);
    std::vector<double> vals;
    double v;
    while (iss >> v)
      vals.push_back(v);
    if (vals.empty())
      throw Error("empty " + std::string(what) + " row in " + path);
    return vals;
  };

  TdnnConfig config;
  {
    std::istringstream iss(next_line("layer sizes"));
    int out_units = 0;
    if (!(iss >> config.num_inputs >> config.num_hidden >> out_units) ||
        out_units != 1)
      throw Error("bad layer size line in " + path);
  }
  {
    std::istringstream iss(next_line("delays"));
    config.input_delays.clear();
    int d;
    while (iss >> d)
      config.input_delays.push_back(d);
  }
  validate_config(config);

  TdnnModel m = tdnn_init(config, 0);
  const auto norm = parse_row(next_line("normalization"), "normalization");
  if (norm.size() != static_cast<std::size_t>(2 * config.num_inputs))
    throw Error("bad normalization line in " + path);
  for (int i = 0; i < config.num_inputs; ++i) {
    m.input_mean[i] = norm[2 * i];
    m.input_sd[i] = norm[2 * i + 1];
  }
  const int I = config.num_inputs;
  const int H = config.num_hidden;
  const std::size_t taps = config.input_delays.size();
  for (int j = 0; j < H; ++j) {
    const auto row = parse_row(next_line("hidden weights"), "hidden weight");
    if (row.size() != taps * static_cast<std::size_t>(I))
      throw Error("bad hidden weight row in " + path);
    for (std::size_t d = 0; d < taps; ++d)
      for (int i = 0; i < I; ++i)
        m.w1[(d * H + j) * I + i] = row[d * I + i];
  }
  const auto b1 = parse_row(next_line("hidden bias"), "hidden bias");
  if (b1.size() != static_cast<std::size_t>(H))
    throw Error("bad hidden bias row in " + path);
  m.b1 = b1;
  const auto w2 = parse_row(next_line("output weights"), "output weight");
  if (w2.size() != static_cast<std::size_t>(H))
    throw Error("bad output weight row in " + path);
  m.w2 = w2;
  const auto b2 = parse_row(next_line("output bias"), "output bias");
  if (b2.size() != 1)
    throw Error("bad output bias row in " + path);
  m.b2 = b2[0];
  return m;
}

} // namespace segbound

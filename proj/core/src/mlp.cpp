#include "lggrad/mlp.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include <fmt/format.h>

#include "lggrad/error.hpp"
#include "lggrad/random.hpp"

namespace lggrad {

namespace {

struct Cache {
  std::vector<Eigen::MatrixXd> inputs;  ///< input to each layer
  std::vector<Eigen::MatrixXd> pre;     ///< pre-activation of each layer
  Eigen::VectorXd raw_probability;      ///< unclamped sigmoid output
};

double sigmoid(double z) {
  if (z >= 0.0) return 1.0 / (1.0 + std::exp(-z));
  const double e = std::exp(z);
  return e / (1.0 + e);
}

double clamp_probability(double p) {
  return std::clamp(p, kProbabilityClamp, 1.0 - kProbabilityClamp);
}

void check_batch(const MlpModel& model, const Eigen::MatrixXd& batch) {
  if (model.layers.empty()) throw Error(Errc::InvalidArgument, "model has no layers");
  if (batch.cols() != model.layers.front().weights.cols()) {
    throw Error(Errc::ShapeMismatch, fmt::format("batch width {} but model expects {}",
                                                 batch.cols(), model.layers.front().weights.cols()));
  }
}

Cache run(const MlpModel& model, const Eigen::MatrixXd& batch) {
  check_batch(model, batch);
  Cache cache;
  Eigen::MatrixXd current = batch;  // rows x features
  for (const auto& layer : model.layers) {
    cache.inputs.push_back(current);
    Eigen::MatrixXd z = (current * layer.weights.transpose()).rowwise() + layer.bias.transpose();
    cache.pre.push_back(z);
    if (layer.activation == Activation::Relu) {
      current = z.cwiseMax(0.0);
    } else {
      current = z.unaryExpr(&sigmoid);
    }
  }
  cache.raw_probability = current.col(0);
  return cache;
}

void check_labels(const Eigen::MatrixXd& batch, std::span<const int> labels) {
  if (static_cast<std::size_t>(batch.rows()) != labels.size()) {
    throw Error(Errc::ShapeMismatch, "batch rows and labels differ in length");
  }
}

std::uint64_t mix(std::uint64_t x) {
  x += 0x9E3779B97F4A7C15ULL;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
  return x ^ (x >> 31);
}

}  // namespace

std::vector<int> MlpModel::layer_sizes() const {
  std::vector<int> sizes;
  if (layers.empty()) return sizes;
  sizes.push_back(static_cast<int>(layers.front().weights.cols()));
  for (const auto& layer : layers) sizes.push_back(static_cast<int>(layer.weights.rows()));
  return sizes;
}

std::size_t MlpModel::parameter_count() const {
  std::size_t count = 0;
  for (const auto& layer : layers) {
    count += static_cast<std::size_t>(layer.weights.size() + layer.bias.size());
  }
  return count;
}

int MlpModel::input_width() const {
  return layers.empty() ? 0 : static_cast<int>(layers.front().weights.cols());
}

void MlpModel::validate() const {
  if (layers.empty()) throw Error(Errc::InvalidArgument, "model has no layers");
  for (std::size_t l = 0; l < layers.size(); ++l) {
    const auto& layer = layers[l];
    if (layer.bias.size() != layer.weights.rows()) {
      throw Error(Errc::ShapeMismatch, fmt::format("layer {} bias/weights disagree", l));
    }
    if (l > 0 && layer.weights.cols() != layers[l - 1].weights.rows()) {
      throw Error(Errc::ShapeMismatch, fmt::format("layer {} input width mismatch", l));
    }
    const bool last = l + 1 == layers.size();
    if (layer.activation != (last ? Activation::Sigmoid : Activation::Relu)) {
      throw Error(Errc::InvalidArgument, "hidden layers must be ReLU and the output sigmoid");
    }
    if (!layer.weights.allFinite() || !layer.bias.allFinite()) {
      throw Error(Errc::InvalidArgument, fmt::format("layer {} has non-finite parameters", l));
    }
  }
  if (layers.back().weights.rows() != 1) {
    throw Error(Errc::ShapeMismatch, "output layer must have one unit");
  }
}

std::vector<int> default_layer_sizes(int inputs) {
  const int hidden = inputs / 2 + 1;
  return {inputs, hidden, hidden, 1};
}

MlpModel make_mlp(std::span<const int> sizes) {
  if (sizes.size() < 2 || sizes.back() != 1 ||
      std::any_of(sizes.begin(), sizes.end(), [](int s) { return s < 1; })) {
    throw Error(Errc::InvalidArgument, "layer sizes must be positive and end in 1");
  }
  MlpModel model;
  for (std::size_t l = 1; l < sizes.size(); ++l) {
    DenseLayer layer;
    layer.weights = Eigen::MatrixXd::Zero(sizes[l], sizes[l - 1]);
    layer.bias = Eigen::VectorXd::Zero(sizes[l]);
    layer.activation = l + 1 == sizes.size() ? Activation::Sigmoid : Activation::Relu;
    model.layers.push_back(std::move(layer));
  }
  return model;
}

MlpModel init_mlp(std::uint64_t seed, std::span<const int> sizes) {
  MlpModel model = make_mlp(sizes);
  Rng rng(seed);
  for (auto& layer : model.layers) {
    for (Eigen::Index r = 0; r < layer.weights.rows(); ++r) {
      for (Eigen::Index c = 0; c < layer.weights.cols(); ++c) {
        layer.weights(r, c) = rng.uniform(-0.05, 0.05);
      }
    }
  }
  return model;
}

MlpModel init_mlp(std::uint64_t seed) {
  const auto sizes = default_layer_sizes(8);
  return init_mlp(seed, sizes);
}

Eigen::VectorXd forward(const MlpModel& model, const Eigen::MatrixXd& batch) {
  return run(model, batch).raw_probability.unaryExpr(&clamp_probability);
}

double bce_loss(const Eigen::VectorXd& probabilities, std::span<const int> labels) {
  if (static_cast<std::size_t>(probabilities.size()) != labels.size()) {
    throw Error(Errc::ShapeMismatch, "probabilities and labels differ in length");
  }
  if (labels.empty()) return 0.0;
  double total = 0.0;
  for (std::size_t r = 0; r < labels.size(); ++r) {
    const double p = clamp_probability(probabilities[static_cast<Eigen::Index>(r)]);
    total -= labels[r] == 1 ? std::log(p) : std::log(1.0 - p);
  }
  return total / static_cast<double>(labels.size());
}

Gradients Gradients::zeros_like(const MlpModel& model) {
  Gradients g;
  for (const auto& layer : model.layers) {
    g.weights.push_back(Eigen::MatrixXd::Zero(layer.weights.rows(), layer.weights.cols()));
    g.bias.push_back(Eigen::VectorXd::Zero(layer.bias.size()));
  }
  return g;
}

Gradients backward(const MlpModel& model, const Eigen::MatrixXd& batch,
                   std::span<const int> labels) {
  check_labels(batch, labels);
  const Cache cache = run(model, batch);
  const auto rows = batch.rows();
  Gradients g = Gradients::zeros_like(model);

  // dL/dz for the sigmoid unit: (p - y) / n inside the clamp window, else 0
  Eigen::MatrixXd delta(rows, 1);
  for (Eigen::Index r = 0; r < rows; ++r) {
    const double p = cache.raw_probability[r];
    const bool clamped = p <= kProbabilityClamp || p >= 1.0 - kProbabilityClamp;
    delta(r, 0) = clamped ? 0.0 : (p - labels[static_cast<std::size_t>(r)]) / static_cast<double>(rows);
  }

  for (std::size_t l = model.layers.size(); l-- > 0;) {
    g.weights[l] = delta.transpose() * cache.inputs[l];
    g.bias[l] = delta.colwise().sum().transpose();
    if (l == 0) break;
    Eigen::MatrixXd upstream = delta * model.layers[l].weights;
    const auto& z = cache.pre[l - 1];
    delta = upstream.cwiseProduct((z.array() > 0.0).cast<double>().matrix());
  }
  return g;
}

void TrainConfig::validate() const {
  if (epochs < 1) throw Error(Errc::InvalidArgument, "epochs must be >= 1");
  if (batch_size < 1) throw Error(Errc::InvalidArgument, "batch_size must be >= 1");
  for (double rate : {learning_rate, beta1, beta2, epsilon}) {
    if (!(rate > 0.0 && rate < 1.0)) {
      throw Error(Errc::InvalidArgument, "learning rate, betas and epsilon must lie in (0, 1)");
    }
  }
}

AdamState AdamState::for_model(const MlpModel& model) {
  return {Gradients::zeros_like(model), Gradients::zeros_like(model), 0};
}

void adam_step(AdamState& state, MlpModel& model, const Gradients& grads,
               const TrainConfig& cfg) {
  if (grads.weights.size() != model.layers.size() || state.m.weights.size() != model.layers.size()) {
    throw Error(Errc::ShapeMismatch, "gradient/state layer count differs from model");
  }
  ++state.t;
  const double t = static_cast<double>(state.t);
  const double correction1 = 1.0 - std::pow(cfg.beta1, t);
  const double correction2 = 1.0 - std::pow(cfg.beta2, t);

  auto update = [&](auto& param, auto& m, auto& v, const auto& g) {
    m = cfg.beta1 * m + (1.0 - cfg.beta1) * g;
    v = cfg.beta2 * v + (1.0 - cfg.beta2) * g.cwiseProduct(g);
    param.array() -= cfg.learning_rate * (m.array() / correction1) /
                     ((v.array() / correction2).sqrt() + cfg.epsilon);
  };
  for (std::size_t l = 0; l < model.layers.size(); ++l) {
    update(model.layers[l].weights, state.m.weights[l], state.v.weights[l], grads.weights[l]);
    update(model.layers[l].bias, state.m.bias[l], state.v.bias[l], grads.bias[l]);
  }
}

EpochSchedule shuffled_schedule(std::size_t rows, std::uint64_t seed) {
  return [rows, seed](int epoch) {
    std::vector<std::size_t> order(rows);
    std::iota(order.begin(), order.end(), 0);
    Rng rng(mix(seed ^ mix(static_cast<std::uint64_t>(epoch))));
    rng.shuffle(std::span(order));
    return order;
  };
}

TrainResult train_with_schedule(MlpModel model, const Eigen::MatrixXd& data,
                                std::span<const int> labels, const TrainConfig& cfg,
                                const EpochSchedule& schedule) {
  cfg.validate();
  model.validate();
  check_labels(data, labels);
  if (data.rows() == 0) throw Error(Errc::EmptyTrainingSet, "no training rows");
  check_batch(model, data);

  const auto rows = static_cast<std::size_t>(data.rows());
  const auto batch_size = static_cast<std::size_t>(cfg.batch_size);
  AdamState state = AdamState::for_model(model);
  TrainResult result;

  for (int epoch = 0; epoch < cfg.epochs; ++epoch) {
    const auto order = schedule(epoch);
    if (order.size() != rows) throw Error(Errc::InvalidArgument, "schedule is not a permutation");
    double loss_sum = 0.0;
    std::size_t correct = 0;
    for (std::size_t start = 0; start < rows; start += batch_size) {
      const auto count = std::min(batch_size, rows - start);
      Eigen::MatrixXd batch(static_cast<Eigen::Index>(count), data.cols());
      std::vector<int> batch_labels(count);
      for (std::size_t b = 0; b < count; ++b) {
        batch.row(static_cast<Eigen::Index>(b)) = data.row(static_cast<Eigen::Index>(order[start + b]));
        batch_labels[b] = labels[order[start + b]];
      }
      const Eigen::VectorXd p = forward(model, batch);
      loss_sum += bce_loss(p, batch_labels) * static_cast<double>(count);
      for (std::size_t b = 0; b < count; ++b) {
        const int predicted = p[static_cast<Eigen::Index>(b)] >= 0.5 ? 1 : 0;
        if (predicted == batch_labels[b]) ++correct;
      }
      adam_step(state, model, backward(model, batch, batch_labels), cfg);
    }
    result.history.loss.push_back(loss_sum / static_cast<double>(rows));
    result.history.accuracy.push_back(static_cast<double>(correct) / static_cast<double>(rows));
  }
  result.model = std::move(model);
  return result;
}

TrainResult train(MlpModel model, const Eigen::MatrixXd& data, std::span<const int> labels,
                  const TrainConfig& cfg) {
  const auto rows = static_cast<std::size_t>(data.rows());
  if (cfg.shuffle) {
    return train_with_schedule(std::move(model), data, labels, cfg,
                               shuffled_schedule(rows, cfg.seed));
  }
  return train_with_schedule(std::move(model), data, labels, cfg, [rows](int) {
    std::vector<std::size_t> order(rows);
    std::iota(order.begin(), order.end(), 0);
    return order;
  });
}

std::vector<int> predict(const MlpModel& model, const Eigen::MatrixXd& data, double threshold) {
  const Eigen::VectorXd p = forward(model, data);
  std::vector<int> labels(static_cast<std::size_t>(p.size()));
  for (Eigen::Index r = 0; r < p.size(); ++r) {
    labels[static_cast<std::size_t>(r)] = p[r] >= threshold ? 1 : 0;
  }
  return labels;
}

}  // namespace lggrad

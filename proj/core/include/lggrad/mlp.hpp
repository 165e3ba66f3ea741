#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <span>
#include <vector>

#include <Eigen/Core>

namespace lggrad {

enum class Activation { Relu, Sigmoid };

struct DenseLayer {
  Eigen::MatrixXd weights;  ///< outputs x inputs
  Eigen::VectorXd bias;
  Activation activation = Activation::Relu;
};

/// Fully connected feed-forward network: ReLU hidden layers and a single
/// sigmoid output unit.
struct MlpModel {
  std::vector<DenseLayer> layers;

  [[nodiscard]] std::vector<int> layer_sizes() const;
  [[nodiscard]] std::size_t parameter_count() const;
  [[nodiscard]] int input_width() const;
  /// Throws ShapeMismatch/InvalidArgument if shapes or activations are off
  /// or a parameter is not finite.
  void validate() const;
};

/// [k, k/2 + 1, k/2 + 1, 1]: two hidden layers of half the input width plus one.
std::vector<int> default_layer_sizes(int inputs = 8);

/// All-zero parameters for the given layer sizes.
MlpModel make_mlp(std::span<const int> layer_sizes);

/// Weights i.i.d. uniform on [-0.05, 0.05], biases zero.
MlpModel init_mlp(std::uint64_t seed, std::span<const int> layer_sizes);
MlpModel init_mlp(std::uint64_t seed);

inline constexpr double kProbabilityClamp = 1e-7;

/// Output probabilities, clamped to [1e-7, 1 - 1e-7]. Throws ShapeMismatch
/// when the batch width differs from the input layer.
Eigen::VectorXd forward(const MlpModel& model, const Eigen::MatrixXd& batch);

/// Mean binary cross-entropy with the same probability clamp.
double bce_loss(const Eigen::VectorXd& probabilities, std::span<const int> labels);

struct Gradients {
  std::vector<Eigen::MatrixXd> weights;
  std::vector<Eigen::VectorXd> bias;

  static Gradients zeros_like(const MlpModel& model);
};

/// Exact gradient of the mean clamped BCE. ReLU'(0) = 0, and a clamped
/// output contributes no gradient.
Gradients backward(const MlpModel& model, const Eigen::MatrixXd& batch,
                   std::span<const int> labels);

struct TrainConfig {
  int epochs = 100;
  int batch_size = 10;
  double learning_rate = 0.001;
  double beta1 = 0.9;
  double beta2 = 0.999;
  double epsilon = 1e-7;
  std::uint64_t seed = 0;
  bool shuffle = true;

  void validate() const;
};

struct AdamState {
  Gradients m;
  Gradients v;
  std::int64_t t = 0;

  static AdamState for_model(const MlpModel& model);
};

/// One bias-corrected Adam update; increments t.
void adam_step(AdamState& state, MlpModel& model, const Gradients& grads,
               const TrainConfig& cfg);

struct TrainHistory {
  std::vector<double> loss;      ///< per epoch, averaged over mini-batch outputs
  std::vector<double> accuracy;  ///< per epoch, threshold 0.5 on mini-batch outputs
};

struct TrainResult {
  MlpModel model;
  TrainHistory history;
};

/// Row order for a given epoch; must be a permutation of [0, rows).
using EpochSchedule = std::function<std::vector<std::size_t>(int epoch)>;

/// Mini-batch Adam training. Each epoch visits rows in a seeded shuffle
/// (or in row order with shuffle off); the last batch may be short.
TrainResult train(MlpModel model, const Eigen::MatrixXd& data, std::span<const int> labels,
                  const TrainConfig& cfg);

/// Same loop with an explicit visiting order.
TrainResult train_with_schedule(MlpModel model, const Eigen::MatrixXd& data,
                                std::span<const int> labels, const TrainConfig& cfg,
                                const EpochSchedule& schedule);

/// Seeded per-epoch shuffles used by train().
EpochSchedule shuffled_schedule(std::size_t rows, std::uint64_t seed);

/// Label 1 iff the clamped probability is >= threshold.
std::vector<int> predict(const MlpModel& model, const Eigen::MatrixXd& data,
                         double threshold = 0.5);

}  // namespace lggrad

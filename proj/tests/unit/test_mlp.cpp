#include <gtest/gtest.h>

#include <cmath>
#include <numeric>
#include <random>

#include "datasets.hpp"
#include "lggrad/error.hpp"
#include "lggrad/mlp.hpp"

using namespace lggrad;

namespace {

MlpModel random_model(std::uint64_t seed, std::vector<int> sizes, double scale) {
  std::mt19937_64 gen(seed);
  std::uniform_real_distribution<double> u(-scale, scale);
  auto model = make_mlp(sizes);
  for (auto& layer : model.layers) {
    layer.weights = layer.weights.unaryExpr([&](double) { return u(gen); });
    layer.bias = layer.bias.unaryExpr([&](double) { return u(gen); });
  }
  return model;
}

Eigen::MatrixXd random_batch(std::uint64_t seed, int rows, int cols) {
  std::mt19937_64 gen(seed);
  std::normal_distribution<double> normal;
  return Eigen::MatrixXd::NullaryExpr(rows, cols, [&] { return normal(gen); });
}

std::vector<int> random_labels(std::uint64_t seed, int rows) {
  std::mt19937_64 gen(seed);
  std::vector<int> y(static_cast<std::size_t>(rows));
  for (auto& v : y) v = static_cast<int>(gen() % 2);
  return y;
}

/// Visits every parameter as a mutable reference, in layer order.
template <typename F>
void for_each_parameter(MlpModel& model, F&& f) {
  for (std::size_t l = 0; l < model.layers.size(); ++l) {
    auto& layer = model.layers[l];
    for (Eigen::Index r = 0; r < layer.weights.rows(); ++r)
      for (Eigen::Index c = 0; c < layer.weights.cols(); ++c) f(layer.weights(r, c), l, r, c, false);
    for (Eigen::Index r = 0; r < layer.bias.size(); ++r) f(layer.bias(r), l, r, 0, true);
  }
}

double gradient_entry(const Gradients& g, std::size_t l, Eigen::Index r, Eigen::Index c, bool bias) {
  return bias ? g.bias[l](r) : g.weights[l](r, c);
}

}  // namespace

TEST(Mlp, ParameterCountAndShapes) {
  const auto model = init_mlp(1);
  EXPECT_EQ(model.layer_sizes(), (std::vector<int>{8, 5, 5, 1}));
  EXPECT_EQ(model.parameter_count(), 81u);
  EXPECT_EQ(model.layers[0].activation, Activation::Relu);
  EXPECT_EQ(model.layers[2].activation, Activation::Sigmoid);
  const auto g = backward(model, random_batch(1, 3, 8), random_labels(1, 3));
  for (std::size_t l = 0; l < model.layers.size(); ++l) {
    EXPECT_EQ(g.weights[l].rows(), model.layers[l].weights.rows());
    EXPECT_EQ(g.weights[l].cols(), model.layers[l].weights.cols());
    EXPECT_EQ(g.bias[l].size(), model.layers[l].bias.size());
  }
}

TEST(Mlp, InitRangeAndDeterminism) {
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    auto model = init_mlp(seed);
    for_each_parameter(model, [](double& p, std::size_t, Eigen::Index, Eigen::Index, bool bias) {
      if (bias) {
        EXPECT_EQ(p, 0.0);
      } else {
        EXPECT_GE(p, -0.05);
        EXPECT_LE(p, 0.05);
      }
    });
    const auto again = init_mlp(seed);
    for (std::size_t l = 0; l < model.layers.size(); ++l) {
      ASSERT_EQ(model.layers[l].weights, again.layers[l].weights);
    }
  }
  EXPECT_NE(init_mlp(1).layers[0].weights, init_mlp(2).layers[0].weights);
}

TEST(Mlp, ZeroModelGivesHalf) {
  const auto model = make_mlp(default_layer_sizes());
  const auto p = forward(model, random_batch(3, 4, 8));
  for (Eigen::Index r = 0; r < p.size(); ++r) EXPECT_EQ(p(r), 0.5);
  EXPECT_EQ(predict(model, random_batch(3, 4, 8)), (std::vector<int>(4, 1)));
}

TEST(Mlp, ReluGate) {
  auto model = make_mlp(std::vector<int>{2, 2, 1});
  model.layers[0].weights << 1, 0, -1, 0;
  model.layers[1].weights << 1, 1;
  Eigen::MatrixXd x(1, 2);
  x << 3, 7;
  // hidden = relu([3, -3]) = [3, 0]; output sigmoid(3)
  EXPECT_DOUBLE_EQ(forward(model, x)(0), 1.0 / (1.0 + std::exp(-3.0)));
}

TEST(Mlp, HandComputedMiniature) {
  auto model = make_mlp(std::vector<int>{1, 1, 1, 1});
  model.layers[0].weights << 2.0;
  model.layers[0].bias << -1.0;
  model.layers[1].weights << 0.5;
  model.layers[1].bias << 0.25;
  model.layers[2].weights << -3.0;
  model.layers[2].bias << 1.0;
  Eigen::MatrixXd x(2, 1);
  x << 1.5, 0.25;
  // x=1.5: h1 = 2, h2 = 1.25, z = -2.75.  x=0.25: h1 = 0, h2 = 0.25, z = 0.25.
  const auto p = forward(model, x);
  EXPECT_DOUBLE_EQ(p(0), 1.0 / (1.0 + std::exp(2.75)));
  EXPECT_DOUBLE_EQ(p(1), 1.0 / (1.0 + std::exp(-0.25)));
}

TEST(Mlp, ShapeMismatch) {
  const auto model = init_mlp(1);
  try {
    forward(model, Eigen::MatrixXd::Zero(2, 7));
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), Errc::ShapeMismatch);
  }
  EXPECT_THROW(backward(model, Eigen::MatrixXd::Zero(2, 9), std::vector<int>{0, 1}), Error);
  EXPECT_THROW(predict(model, Eigen::MatrixXd::Zero(2, 3)), Error);
}

TEST(Bce, Values) {
  EXPECT_NEAR(bce_loss(Eigen::VectorXd::Constant(1, 1.0), std::vector<int>{1}), 0.0, 1e-6);
  EXPECT_NEAR(bce_loss(Eigen::VectorXd::Constant(1, 0.5), std::vector<int>{1}), 0.693147, 1e-6);
  EXPECT_NEAR(bce_loss(Eigen::VectorXd::Constant(1, 1.0), std::vector<int>{0}), 16.118, 5e-4);
  // 1 - (1 - 1e-7) is not exactly 1e-7 in doubles
  EXPECT_NEAR(bce_loss(Eigen::VectorXd::Constant(1, 1.0), std::vector<int>{0}), -std::log(1e-7), 1e-8);
}

TEST(Predict, Thresholds) {
  auto model = make_mlp(default_layer_sizes());
  const auto x = random_batch(4, 5, 8);
  EXPECT_EQ(predict(model, x, 0.5), std::vector<int>(5, 1));
  EXPECT_EQ(predict(model, x, 1.0), std::vector<int>(5, 0));
  model.layers.back().bias << 100.0;  // p clamps to 1 - 1e-7, still below 1.0
  EXPECT_EQ(predict(model, x, 1.0), std::vector<int>(5, 0));
  EXPECT_EQ(predict(model, x, 0.999), std::vector<int>(5, 1));
}

// Central differences over 50 random models and batches.
TEST(Backward, MatchesFiniteDifferences) {
  const double h = 1e-5;
  for (std::uint64_t seed = 0; seed < 50; ++seed) {
    auto model = random_model(seed, {8, 5, 5, 1}, 0.8);
    const auto x = random_batch(seed + 500, 6, 8);
    const auto y = random_labels(seed + 900, 6);
    const auto grads = backward(model, x, y);
    for_each_parameter(model, [&](double& p, std::size_t l, Eigen::Index r, Eigen::Index c, bool bias) {
      const double saved = p;
      p = saved + h;
      const double up = bce_loss(forward(model, x), y);
      p = saved - h;
      const double down = bce_loss(forward(model, x), y);
      p = saved;
      const double numeric = (up - down) / (2 * h);
      const double analytic = gradient_entry(grads, l, r, c, bias);
      const double err = std::abs(numeric - analytic);
      ASSERT_TRUE(err <= 1e-8 || err <= 1e-5 * std::max(std::abs(numeric), std::abs(analytic)))
          << "seed " << seed << " layer " << l << " (" << r << "," << c << ") bias " << bias
          << ": analytic " << analytic << " numeric " << numeric;
    });
  }
}

TEST(Backward, SaturatedFitHasZeroGradient) {
  auto model = init_mlp(3);
  model.layers.back().bias << 60.0;  // p clamps at 1 - 1e-7
  const auto x = random_batch(5, 4, 8);
  const auto g = backward(model, x, std::vector<int>(4, 1));
  for (std::size_t l = 0; l < g.weights.size(); ++l) {
    EXPECT_EQ(g.weights[l].cwiseAbs().maxCoeff(), 0.0);
    EXPECT_EQ(g.bias[l].cwiseAbs().maxCoeff(), 0.0);
  }
}

TEST(Adam, FirstStepMovesByLearningRate) {
  auto model = init_mlp(9);
  const auto before = model;
  auto state = AdamState::for_model(model);
  auto g = Gradients::zeros_like(model);
  for (auto& w : g.weights) w.setOnes();
  for (auto& b : g.bias) b.setOnes();
  TrainConfig cfg;
  adam_step(state, model, g, cfg);
  EXPECT_EQ(state.t, 1);
  for (std::size_t l = 0; l < model.layers.size(); ++l) {
    const Eigen::MatrixXd delta = before.layers[l].weights - model.layers[l].weights;
    EXPECT_LT((delta.array() - cfg.learning_rate).abs().maxCoeff(), 1e-9);
    const Eigen::VectorXd db = before.layers[l].bias - model.layers[l].bias;
    EXPECT_LT((db.array() - cfg.learning_rate).abs().maxCoeff(), 1e-9);
  }

  // Same gradient again: the step does not grow.
  const auto mid = model;
  adam_step(state, model, g, cfg);
  const double second = (mid.layers[0].weights - model.layers[0].weights).cwiseAbs().maxCoeff();
  const double first = (before.layers[0].weights - mid.layers[0].weights).cwiseAbs().maxCoeff();
  EXPECT_LE(second, first + 1e-15);
}

TEST(Adam, ZeroGradientLeavesParameters) {
  auto model = init_mlp(10);
  const auto before = model;
  auto state = AdamState::for_model(model);
  adam_step(state, model, Gradients::zeros_like(model), TrainConfig{});
  for (std::size_t l = 0; l < model.layers.size(); ++l) {
    EXPECT_EQ(model.layers[l].weights, before.layers[l].weights);
    EXPECT_EQ(model.layers[l].bias, before.layers[l].bias);
  }
}

// A lone sigmoid layer is logistic regression, a convex problem. Full-batch
// gradient descent with a step below 2/L decreases the loss at every step.
TEST(Train, LogisticSubcaseLossIsMonotone) {
  const auto data = lggrad::testing::separable_set(12, 60, 8, 0.2);
  auto model = init_mlp(12, std::vector<int>{8, 1});
  double last = bce_loss(forward(model, data.x), data.y);
  for (int step = 0; step < 300; ++step) {
    const auto g = backward(model, data.x, data.y);
    model.layers[0].weights -= 0.5 * g.weights[0];
    model.layers[0].bias -= 0.5 * g.bias[0];
    const double loss = bce_loss(forward(model, data.x), data.y);
    ASSERT_LT(loss, last) << "step " << step;
    last = loss;
  }

  // Same sub-case through train(): full batch, fixed order.
  TrainConfig cfg;
  cfg.batch_size = 60;
  cfg.epochs = 200;
  cfg.shuffle = false;
  cfg.learning_rate = 0.01;
  const auto result = train(init_mlp(12, std::vector<int>{8, 1}), data.x, data.y, cfg);
  for (std::size_t e = 1; e < result.history.loss.size(); ++e) {
    ASSERT_LT(result.history.loss[e], result.history.loss[e - 1]) << "epoch " << e;
  }
}

TEST(Train, RejectsBadInput) {
  TrainConfig cfg;
  cfg.epochs = 0;
  EXPECT_THROW(cfg.validate(), Error);
  TrainConfig ok;
  try {
    train(init_mlp(1), Eigen::MatrixXd(0, 8), std::vector<int>{}, ok);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), Errc::EmptyTrainingSet);
  }
}

TEST(Train, DeterministicPerSeed) {
  const auto data = lggrad::testing::separable_set(3);
  TrainConfig cfg;
  cfg.seed = 5;
  cfg.epochs = 20;
  const auto a = train(init_mlp(5), data.x, data.y, cfg);
  const auto b = train(init_mlp(5), data.x, data.y, cfg);
  EXPECT_EQ(a.history.loss, b.history.loss);
  EXPECT_EQ(a.history.accuracy, b.history.accuracy);
  for (std::size_t l = 0; l < a.model.layers.size(); ++l) {
    EXPECT_EQ(a.model.layers[l].weights, b.model.layers[l].weights);
  }
  EXPECT_EQ(a.history.loss.size(), 20u);
  cfg.seed = 6;
  EXPECT_NE(train(init_mlp(5), data.x, data.y, cfg).history.loss, a.history.loss);
}

// Reordering the rows while visiting the same samples in the same sequence
// gives bit-identical results.
TEST(Train, RowPermutationWithMatchingScheduleIsInvariant) {
  for (std::uint64_t seed = 0; seed < 5; ++seed) {
    const auto data = lggrad::testing::separable_set(seed + 40, 50, 8);
    const std::size_t rows = data.y.size();
    std::vector<std::size_t> perm(rows);
    std::iota(perm.begin(), perm.end(), 0);
    std::shuffle(perm.begin(), perm.end(), std::mt19937_64(seed));
    std::vector<std::size_t> inverse(rows);
    Eigen::MatrixXd px(data.x.rows(), data.x.cols());
    std::vector<int> py(rows);
    for (std::size_t r = 0; r < rows; ++r) {
      px.row(static_cast<Eigen::Index>(r)) = data.x.row(static_cast<Eigen::Index>(perm[r]));
      py[r] = data.y[perm[r]];
      inverse[perm[r]] = r;
    }
    TrainConfig cfg;
    cfg.seed = seed;
    cfg.epochs = 15;
    const auto base_schedule = shuffled_schedule(rows, cfg.seed);
    const auto permuted_schedule = [&](int epoch) {
      auto order = base_schedule(epoch);
      for (auto& r : order) r = inverse[r];
      return order;
    };
    const auto a = train(init_mlp(seed), data.x, data.y, cfg);
    const auto b = train_with_schedule(init_mlp(seed), px, py, cfg, permuted_schedule);
    ASSERT_EQ(a.history.loss, b.history.loss);
    for (std::size_t l = 0; l < a.model.layers.size(); ++l) {
      ASSERT_EQ(a.model.layers[l].weights, b.model.layers[l].weights);
      ASSERT_EQ(a.model.layers[l].bias, b.model.layers[l].bias);
    }
  }
}

TEST(Train, SeparableSetReachesFullAccuracy) {
  const auto data = lggrad::testing::separable_set(1);
  TrainConfig cfg;
  cfg.seed = 1;
  const auto result = train(init_mlp(1), data.x, data.y, cfg);
  const auto pred = predict(result.model, data.x);
  EXPECT_EQ(pred, data.y);
  EXPECT_EQ(result.history.accuracy.back(), 1.0);
}

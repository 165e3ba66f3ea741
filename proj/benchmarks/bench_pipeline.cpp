#include <benchmark/benchmark.h>

#include <random>

#include "lggrad/features.hpp"
#include "lggrad/mlp.hpp"
#include "lggrad/tabular.hpp"
#include "lggrad/texture.hpp"
#include "lggrad_cli/phantom.hpp"

using namespace lggrad;

static void BM_ExtractAll(benchmark::State& state) {
  const auto size = static_cast<std::size_t>(state.range(0));
  const auto [image, mask] = cli::make_phantom(1, 1, {size, size, 6});
  for (auto _ : state) {
    benchmark::DoNotOptimize(extract_all(image, mask, 1, BinSpec{}));
  }
}
BENCHMARK(BM_ExtractAll)->Arg(20)->Arg(40)->Unit(benchmark::kMillisecond);

static void BM_BuildGlcm(benchmark::State& state) {
  const auto [image, mask] = cli::make_phantom(2, 1, {40, 40, 6});
  const auto droi = discretize(extract_roi(image, mask, 1), BinSpec::fixed_count(32));
  for (auto _ : state) {
    benchmark::DoNotOptimize(build_glcm(droi));
  }
}
BENCHMARK(BM_BuildGlcm)->Unit(benchmark::kMicrosecond);

static void BM_TrainEpoch(benchmark::State& state) {
  std::mt19937_64 gen(3);
  std::normal_distribution<double> normal;
  const Eigen::MatrixXd x = Eigen::MatrixXd::NullaryExpr(152, 8, [&] { return normal(gen); });
  std::vector<int> y(152);
  for (std::size_t r = 0; r < y.size(); ++r) y[r] = x(static_cast<Eigen::Index>(r), 0) > 0 ? 1 : 0;
  TrainConfig cfg;
  cfg.epochs = 1;
  for (auto _ : state) {
    benchmark::DoNotOptimize(train(init_mlp(1), x, y, cfg));
  }
}
BENCHMARK(BM_TrainEpoch)->Unit(benchmark::kMicrosecond);

static void BM_SmoteCohortScale(benchmark::State& state) {
  std::mt19937_64 gen(4);
  std::normal_distribution<double> normal;
  const Eigen::MatrixXd x = Eigen::MatrixXd::NullaryExpr(119, 8, [&] { return normal(gen); });
  std::vector<int> y(119, 0);
  std::fill(y.begin(), y.begin() + 76, 1);
  for (auto _ : state) {
    benchmark::DoNotOptimize(smote(x, y, {5, 1}));
  }
}
BENCHMARK(BM_SmoteCohortScale)->Unit(benchmark::kMicrosecond);

BENCHMARK_MAIN();

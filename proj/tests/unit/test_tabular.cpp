#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <random>
#include <optional>
#include <set>

#include <Eigen/Dense>

#include "datasets.hpp"
#include "lggrad/error.hpp"
#include "lggrad/tabular.hpp"

using namespace lggrad;

namespace {

Eigen::MatrixXd random_matrix(std::uint64_t seed, int rows, int cols) {
  std::mt19937_64 gen(seed);
  std::normal_distribution<double> normal;
  Eigen::MatrixXd m(rows, cols);
  for (int c = 0; c < cols; ++c) {
    const double scale = 0.5 + c;
    for (int r = 0; r < rows; ++r) m(r, c) = scale * normal(gen) + c;
  }
  // correlated columns give PCA something to find
  if (cols > 2) m.col(2) += 0.8 * m.col(0);
  return m;
}

std::vector<int> labels_of(int positives, int negatives) {
  std::vector<int> y(static_cast<std::size_t>(positives), 1);
  y.resize(static_cast<std::size_t>(positives + negatives), 0);
  return y;
}

template <typename F>
Errc code_of(F&& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.code();
  }
  return Errc::InvalidArgument;
}

/// Affine coefficient u with s = a + u (b - a), if s lies on that line.
std::optional<double> segment_coefficient(const Eigen::VectorXd& s, const Eigen::VectorXd& a,
                                          const Eigen::VectorXd& b) {
  const Eigen::VectorXd d = b - a;
  const double len2 = d.squaredNorm();
  if (len2 == 0.0) {
    if ((s - a).norm() <= 1e-9) return 0.0;
    return std::nullopt;
  }
  const double u = (s - a).dot(d) / len2;
  if ((a + u * d - s).norm() > 1e-9 * std::max(1.0, s.norm())) return std::nullopt;
  return u;
}

}  // namespace

TEST(Scaler, HandExample) {
  Eigen::MatrixXd m(3, 1);
  m << 1, 2, 3;
  const auto model = fit_scaler(m);
  EXPECT_DOUBLE_EQ(model.mean(0), 2.0);
  EXPECT_NEAR(model.std(0), 0.81650, 5e-6);
  const auto z = apply_scaler(model, m);
  EXPECT_NEAR(z(0, 0), -1.22474, 5e-6);
  EXPECT_EQ(z(1, 0), 0.0);
  EXPECT_NEAR(z(2, 0), 1.22474, 5e-6);
}

TEST(Scaler, ConstantColumnBecomesZero) {
  Eigen::MatrixXd m(4, 2);
  m << 5, 1, 5, 2, 5, 3, 5, 4;
  const auto model = fit_scaler(m);
  EXPECT_TRUE(model.constant[0]);
  const auto z = apply_scaler(model, m);
  EXPECT_EQ(z.col(0), Eigen::VectorXd::Zero(4));
  EXPECT_TRUE(z.allFinite());
}

TEST(Scaler, EmptyTable) {
  EXPECT_EQ(code_of([] { fit_scaler(Eigen::MatrixXd(0, 3)); }), Errc::EmptyTable);
}

TEST(Scaler, PostConditionsAndIdempotence) {
  for (std::uint64_t seed = 0; seed < 50; ++seed) {
    const auto m = random_matrix(seed, 5 + static_cast<int>(seed % 40), 1 + static_cast<int>(seed % 12));
    const auto z = apply_scaler(fit_scaler(m), m);
    for (Eigen::Index c = 0; c < z.cols(); ++c) {
      const double mean = z.col(c).mean();
      const double sd = std::sqrt((z.col(c).array() - mean).square().mean());
      ASSERT_LT(std::abs(mean), 1e-9);
      ASSERT_LT(std::abs(sd - 1.0), 1e-9);
    }
    const auto again = apply_scaler(fit_scaler(z), z);
    ASSERT_LT((again - z).cwiseAbs().maxCoeff(), 1e-9);
  }
}

TEST(Pca, CollinearPoints) {
  Eigen::MatrixXd m(5, 2);
  for (int r = 0; r < 5; ++r) m.row(r) << r * 1.5 - 2, r * 1.5 - 2;
  const auto model = fit_pca(m, 1);
  EXPECT_NEAR(model.explained_variance_ratio(0), 1.0, 1e-12);
  EXPECT_NEAR(model.components(0, 0), 1.0 / std::sqrt(2.0), 1e-12);
  EXPECT_NEAR(model.components(0, 1), 1.0 / std::sqrt(2.0), 1e-12);
}

TEST(Pca, RankTooLow) {
  const auto m = random_matrix(1, 4, 10);
  EXPECT_EQ(code_of([&] { fit_pca(m, 4); }), Errc::RankTooLow);
  EXPECT_NO_THROW(fit_pca(m, 3));
  EXPECT_EQ(code_of([&] { fit_pca(random_matrix(1, 20, 3), 4); }), Errc::RankTooLow);
}

TEST(Pca, TrailingRatiosOfRankDeficientDataAreZero) {
  Eigen::MatrixXd m = random_matrix(2, 30, 2);
  Eigen::MatrixXd wide(30, 4);
  wide << m, m;  // rank 2
  const auto model = fit_pca(wide, 4);
  EXPECT_NEAR(model.explained_variance_ratio(2), 0.0, 1e-12);
  EXPECT_NEAR(model.explained_variance_ratio(3), 0.0, 1e-12);
}

TEST(Pca, Properties) {
  for (std::uint64_t seed = 0; seed < 40; ++seed) {
    const int cols = 2 + static_cast<int>(seed % 15);
    const int rows = cols + 5 + static_cast<int>(seed % 20);
    const auto m = random_matrix(seed + 1000, rows, cols);

    const auto full = fit_pca(m, cols);
    const Eigen::MatrixXd gram = full.components * full.components.transpose();
    ASSERT_LT((gram - Eigen::MatrixXd::Identity(cols, cols)).cwiseAbs().maxCoeff(), 1e-8);
    ASSERT_NEAR(full.explained_variance_ratio.sum(), 1.0, 1e-8);
    for (int i = 0; i + 1 < cols; ++i) {
      ASSERT_GE(full.explained_variance_ratio(i), full.explained_variance_ratio(i + 1));
    }
    for (int i = 0; i < cols; ++i) {
      ASSERT_GE(full.explained_variance_ratio(i), 0.0);
      ASSERT_LE(full.explained_variance_ratio(i), 1.0);
      Eigen::Index at;
      full.components.row(i).cwiseAbs().maxCoeff(&at);
      ASSERT_GT(full.components(i, at), 0.0);
    }

    const auto projected = apply_pca(full, m);
    ASSERT_LT((reconstruct_pca(full, projected) - m).cwiseAbs().maxCoeff(), 1e-6);

    const Eigen::MatrixXd centered = projected.rowwise() - projected.colwise().mean();
    const Eigen::MatrixXd cov = centered.transpose() * centered / rows;
    const Eigen::MatrixXd off = cov - Eigen::MatrixXd(cov.diagonal().asDiagonal());
    ASSERT_LT(off.cwiseAbs().maxCoeff(), 1e-8 * std::max(1.0, cov.diagonal().maxCoeff()));

    const int k = 1 + static_cast<int>(seed % cols);
    const auto part = fit_pca(m, k);
    ASSERT_EQ(apply_pca(part, m).cols(), k);
    ASSERT_EQ(part.components.rows(), k);
  }
}

TEST(Split, CohortScaleCounts) {
  const auto labels = labels_of(102, 57);
  const auto split = stratified_split(labels, 0.25, 42);
  EXPECT_EQ(split.train.size(), 119u);
  EXPECT_EQ(split.test.size(), 40u);
  int positives = 0;
  for (auto r : split.train) positives += labels[r];
  EXPECT_EQ(positives, 76);
  EXPECT_EQ(static_cast<int>(split.train.size()) - positives, 43);
}

TEST(Split, ZeroFractionRejected) {
  const auto labels = labels_of(10, 10);
  EXPECT_EQ(code_of([&] { stratified_split(labels, 0.0, 1); }), Errc::ClassTooSmall);
  const auto tiny = labels_of(10, 1);
  EXPECT_EQ(code_of([&] { stratified_split(tiny, 0.25, 1); }), Errc::ClassTooSmall);
}

TEST(Split, Properties) {
  std::mt19937_64 gen(8);
  for (int trial = 0; trial < 100; ++trial) {
    const int pos = 4 + static_cast<int>(gen() % 60);
    const int neg = 4 + static_cast<int>(gen() % 60);
    auto labels = labels_of(pos, neg);
    std::shuffle(labels.begin(), labels.end(), gen);
    const double fraction = 0.15 + 0.05 * static_cast<double>(gen() % 8);
    const auto seed = gen();
    const auto a = stratified_split(labels, fraction, seed);
    const auto b = stratified_split(labels, fraction, seed);
    ASSERT_EQ(a.train, b.train);
    ASSERT_EQ(a.test, b.test);

    std::set<std::size_t> all(a.train.begin(), a.train.end());
    for (auto r : a.test) ASSERT_TRUE(all.insert(r).second);
    ASSERT_EQ(all.size(), labels.size());

    int test_pos = 0;
    for (auto r : a.test) test_pos += labels[r];
    const int test_neg = static_cast<int>(a.test.size()) - test_pos;
    ASSERT_EQ(test_pos, static_cast<int>(std::floor(pos * fraction + 0.5)));
    ASSERT_EQ(test_neg, static_cast<int>(std::floor(neg * fraction + 0.5)));
  }
}

TEST(Smote, CohortScaleCounts) {
  const auto data = random_matrix(5, 119, 8);
  const auto labels = labels_of(76, 43);
  const auto result = smote(data, labels, {5, 99});
  EXPECT_EQ(result.synthetic.size(), 33u);
  EXPECT_EQ(result.data.rows(), 152);
  EXPECT_EQ(result.data.cols(), 8);
  EXPECT_EQ(std::count(result.labels.begin(), result.labels.end(), 1), 76);
  EXPECT_EQ(std::count(result.labels.begin(), result.labels.end(), 0), 76);
  EXPECT_EQ(result.minority_label, 0);
  EXPECT_EQ(result.data.topRows(119), data);
}

TEST(Smote, AlreadyBalanced) {
  const auto data = random_matrix(6, 20, 3);
  const auto result = smote(data, labels_of(10, 10), {5, 1});
  EXPECT_TRUE(result.synthetic.empty());
  EXPECT_EQ(result.data, data);
}

TEST(Smote, MinorityTooSmall) {
  const auto data = random_matrix(7, 20, 3);
  EXPECT_EQ(code_of([&] { smote(data, labels_of(15, 5), {5, 1}); }), Errc::MinorityTooSmall);
  EXPECT_NO_THROW(smote(data, labels_of(14, 6), {5, 1}));
}

TEST(Smote, Deterministic) {
  const auto data = random_matrix(8, 40, 4);
  const auto labels = labels_of(28, 12);
  EXPECT_EQ(smote(data, labels, {3, 77}).data, smote(data, labels, {3, 77}).data);
  EXPECT_NE(smote(data, labels, {3, 77}).data, smote(data, labels, {3, 78}).data);
}

TEST(Smote, NearestNeighboursBreakTiesByRow) {
  Eigen::MatrixXd m(5, 1);
  m << 0, 1, -1, 1, 5;
  const std::vector<std::size_t> minority{0, 1, 2, 3, 4};
  EXPECT_EQ(nearest_minority(m, minority, 0, 3), (std::vector<std::size_t>{1, 2, 3}));
}

// Every synthetic row must sit on a segment between two minority rows, found
// by exhaustive search rather than from the recorded provenance.
TEST(Smote, SyntheticRowsLieOnSegments) {
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    const auto data = random_matrix(seed + 50, 60, 5);
    auto labels = labels_of(40, 20);
    const auto result = smote(data, labels, {5, seed});
    std::vector<std::size_t> minority;
    for (std::size_t r = 0; r < labels.size(); ++r)
      if (labels[r] == result.minority_label) minority.push_back(r);

    for (std::size_t s = 0; s < result.synthetic.size(); ++s) {
      const Eigen::VectorXd row = result.data.row(static_cast<Eigen::Index>(labels.size() + s));
      bool found = false;
      for (std::size_t a : minority) {
        for (std::size_t b : minority) {
          if (a == b) continue;
          const auto u = segment_coefficient(row, data.row(static_cast<Eigen::Index>(a)),
                                             data.row(static_cast<Eigen::Index>(b)));
          if (u && *u >= -1e-9 && *u <= 1 + 1e-9) found = true;
        }
      }
      ASSERT_TRUE(found) << "seed " << seed << " synthetic " << s;

      const auto& rec = result.synthetic[s];
      const auto nbrs = nearest_minority(data, minority, rec.parent, 5);
      ASSERT_NE(std::find(nbrs.begin(), nbrs.end(), rec.neighbor), nbrs.end());
      const auto u = segment_coefficient(row, data.row(static_cast<Eigen::Index>(rec.parent)),
                                         data.row(static_cast<Eigen::Index>(rec.neighbor)));
      ASSERT_TRUE(u.has_value());
      ASSERT_NEAR(*u, rec.gap, 1e-9);
    }
  }
}

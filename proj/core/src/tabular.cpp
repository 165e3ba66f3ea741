#include <algorithm>
#include <cmath>
#include <numeric>

#include <Eigen/Eigenvalues>
#include <fmt/format.h>

#include "lggrad/error.hpp"
#include "lggrad/random.hpp"
#include "lggrad/tabular.hpp"

namespace lggrad {

ScalerModel fit_scaler(const Eigen::MatrixXd& data) {
  if (data.rows() == 0 || data.cols() == 0) throw Error(Errc::EmptyTable, "cannot fit scaler");
  const auto n = static_cast<double>(data.rows());
  ScalerModel model;
  model.mean = data.colwise().mean().transpose();
  model.std.resize(data.cols());
  model.constant.resize(static_cast<std::size_t>(data.cols()));
  for (Eigen::Index c = 0; c < data.cols(); ++c) {
    const auto col = data.col(c);
    model.constant[static_cast<std::size_t>(c)] = col.maxCoeff() == col.minCoeff();
    model.std[c] = std::sqrt((col.array() - model.mean[c]).square().sum() / n);
  }
  return model;
}

Eigen::MatrixXd apply_scaler(const ScalerModel& model, const Eigen::MatrixXd& data) {
  if (data.cols() != model.mean.size()) {
    throw Error(Errc::ShapeMismatch,
                fmt::format("scaler fitted on {} columns, got {}", model.mean.size(), data.cols()));
  }
  Eigen::MatrixXd out(data.rows(), data.cols());
  for (Eigen::Index c = 0; c < data.cols(); ++c) {
    if (model.constant[static_cast<std::size_t>(c)] || model.std[c] == 0.0) {
      out.col(c).setZero();
    } else {
      out.col(c) = (data.col(c).array() - model.mean[c]) / model.std[c];
    }
  }
  return out;
}

PcaModel fit_pca(const Eigen::MatrixXd& data, int k) {
  if (data.rows() < 2) throw Error(Errc::EmptyTable, "PCA needs at least two rows");
  if (k < 1) throw Error(Errc::InvalidArgument, "PCA needs k >= 1");
  const auto max_k = std::min<Eigen::Index>(data.rows() - 1, data.cols());
  if (k > max_k) {
    throw Error(Errc::RankTooLow,
                fmt::format("k = {} exceeds min(rows - 1, cols) = {}", k, max_k));
  }

  PcaModel model;
  model.k = k;
  model.mean = data.colwise().mean().transpose();
  const Eigen::MatrixXd centered = data.rowwise() - model.mean.transpose();
  const Eigen::MatrixXd cov = centered.transpose() * centered / static_cast<double>(data.rows());

  const Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(cov);
  if (solver.info() != Eigen::Success) {
    throw Error(Errc::RankTooLow, "covariance eigendecomposition failed");
  }
  const Eigen::VectorXd ascending = solver.eigenvalues().cwiseMax(0.0);
  const double total = ascending.sum();
  const Eigen::Index d = cov.rows();

  model.components.resize(k, d);
  model.explained_variance.resize(k);
  model.explained_variance_ratio.resize(k);
  for (int c = 0; c < k; ++c) {
    const Eigen::Index src = d - 1 - c;
    Eigen::VectorXd v = solver.eigenvectors().col(src);
    Eigen::Index arg = 0;
    v.cwiseAbs().maxCoeff(&arg);
    if (v[arg] < 0.0) v = -v;
    model.components.row(c) = v.transpose();
    model.explained_variance[c] = ascending[src];
    model.explained_variance_ratio[c] = total > 0.0 ? ascending[src] / total : 0.0;
  }
  return model;
}

Eigen::MatrixXd apply_pca(const PcaModel& model, const Eigen::MatrixXd& data) {
  if (data.cols() != model.mean.size()) {
    throw Error(Errc::ShapeMismatch,
                fmt::format("PCA fitted on {} columns, got {}", model.mean.size(), data.cols()));
  }
  return (data.rowwise() - model.mean.transpose()) * model.components.transpose();
}

Eigen::MatrixXd reconstruct_pca(const PcaModel& model, const Eigen::MatrixXd& projected) {
  if (projected.cols() != model.components.rows()) {
    throw Error(Errc::ShapeMismatch, "projected width differs from k");
  }
  return (projected * model.components).rowwise() + model.mean.transpose();
}

SplitIndices stratified_split(std::span<const int> labels, double test_fraction,
                              std::uint64_t seed) {
  if (!(test_fraction >= 0.0 && test_fraction <= 1.0)) {
    throw Error(Errc::InvalidArgument, "test fraction must lie in [0, 1]");
  }
  for (int y : labels) {
    if (y != 0 && y != 1) throw Error(Errc::InvalidArgument, "labels must be 0 or 1");
  }
  Rng rng(seed);
  SplitIndices out;
  for (int cls : {0, 1}) {
    std::vector<std::size_t> members;
    for (std::size_t r = 0; r < labels.size(); ++r) {
      if (labels[r] == cls) members.push_back(r);
    }
    const auto n_test =
        static_cast<std::size_t>(std::floor(static_cast<double>(members.size()) * test_fraction + 0.5));
    if (n_test < 1 || n_test + 1 > members.size()) {
      throw Error(Errc::ClassTooSmall,
                  fmt::format("class {} has {} cases; a {:.2f} test fraction leaves a partition "
                              "without it",
                              cls, members.size(), test_fraction));
    }
    rng.shuffle(std::span(members));
    out.test.insert(out.test.end(), members.begin(), members.begin() + static_cast<std::ptrdiff_t>(n_test));
    out.train.insert(out.train.end(), members.begin() + static_cast<std::ptrdiff_t>(n_test), members.end());
  }
  std::sort(out.train.begin(), out.train.end());
  std::sort(out.test.begin(), out.test.end());
  return out;
}

}  // namespace lggrad

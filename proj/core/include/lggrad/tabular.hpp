#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include <Eigen/Core>

#include "lggrad/table.hpp"

namespace lggrad {

// --- standardization -------------------------------------------------------

struct ScalerModel {
  Eigen::VectorXd mean;
  Eigen::VectorXd std;  ///< population convention
  std::vector<bool> constant;
};

ScalerModel fit_scaler(const Eigen::MatrixXd& data);
/// (x - mean) / std per column; constant columns become 0.
Eigen::MatrixXd apply_scaler(const ScalerModel& model, const Eigen::MatrixXd& data);

// --- principal components --------------------------------------------------

struct PcaModel {
  int k = 8;
  Eigen::VectorXd mean;              ///< centering vector
  Eigen::MatrixXd components;        ///< k x cols, orthonormal rows
  Eigen::VectorXd explained_variance;
  Eigen::VectorXd explained_variance_ratio;
};

/// Top-k eigenvectors of the population covariance of the centered data.
/// Each component's largest-magnitude entry is made positive. Throws
/// RankTooLow when k exceeds min(rows - 1, cols); directions beyond the
/// numerical rank are allowed and get a ratio of 0.
PcaModel fit_pca(const Eigen::MatrixXd& data, int k);
Eigen::MatrixXd apply_pca(const PcaModel& model, const Eigen::MatrixXd& data);
Eigen::MatrixXd reconstruct_pca(const PcaModel& model, const Eigen::MatrixXd& projected);

// --- stratified split ------------------------------------------------------

struct SplitIndices {
  std::vector<std::size_t> train;  ///< ascending
  std::vector<std::size_t> test;   ///< ascending
};

/// Per class, round(n_c * test_fraction) cases (halves rounded up) go to
/// test, picked by a seeded shuffle. Throws ClassTooSmall when a class would
/// leave either partition empty.
SplitIndices stratified_split(std::span<const int> labels, double test_fraction,
                              std::uint64_t seed);

// --- SMOTE -----------------------------------------------------------------

struct SmoteConfig {
  int k_neighbors = 5;
  std::uint64_t seed = 0;
};

struct SyntheticSample {
  std::size_t parent;    ///< row index of the minority sample
  std::size_t neighbor;  ///< row index of the chosen neighbor
  double gap;            ///< interpolation coefficient in [0, 1]
};

struct SmoteResult {
  Eigen::MatrixXd data;             ///< originals followed by synthetic rows
  std::vector<int> labels;
  std::vector<SyntheticSample> synthetic;
  int minority_label = 1;
  std::size_t majority_count = 0;
  std::size_t minority_count = 0;   ///< before oversampling
};

/// Appends synthetic minority rows s = x + u (nbr - x) until both classes
/// have the majority count. Neighbors are the k nearest minority rows by
/// Euclidean distance, ties broken by row index.
SmoteResult smote(const Eigen::MatrixXd& data, std::span<const int> labels,
                  const SmoteConfig& cfg);

/// The k nearest minority rows to minority row `row` (excluding itself).
std::vector<std::size_t> nearest_minority(const Eigen::MatrixXd& data,
                                          std::span<const std::size_t> minority,
                                          std::size_t row, int k);

}  // namespace lggrad

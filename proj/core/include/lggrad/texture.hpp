#pragma once

#include <array>
#include <cstddef>
#include <span>
#include <vector>

#include <Eigen/Core>

#include "lggrad/features.hpp"
#include "lggrad/roi.hpp"

namespace lggrad {

enum class TextureFamily { Glcm, Glrlm, Glszm, Gldm, Ngtdm };

/// The 13 unique offsets of the 26-neighborhood (first non-zero component
/// positive), in a fixed order.
const std::array<Index3, 13>& texture_directions() noexcept;

/// A texture matrix indexed [level - 1][column]. Column meaning depends on
/// the family: co-occurring level (GLCM), run length - 1 (GLRLM), zone size
/// - 1 (GLSZM), dependence - 1 (GLDM).
struct TextureMatrix {
  TextureFamily family = TextureFamily::Glcm;
  int gray_levels = 1;
  Index3 direction{0, 0, 0};  ///< zero for direction-free families
  Eigen::MatrixXd matrix;
  /// GLCM: number of symmetrized pair entries before normalization.
  /// Other families: sum of the matrix (runs, zones, voxels).
  double total = 0.0;

  /// False for a GLCM direction that has no voxel pair inside the ROI.
  [[nodiscard]] bool valid() const noexcept { return total > 0.0; }
};

/// Raw symmetrized co-occurrence counts (M + M^T) for one offset.
TextureMatrix glcm_counts(const DiscretizedRoi& droi, const Index3& offset);

/// One normalized, symmetrized GLCM per direction (all 13 entries are
/// returned; directions with no pair have total 0 and an all-zero matrix).
std::vector<TextureMatrix> build_glcm(const DiscretizedRoi& droi, int distance = 1);

/// Run-length counts for each of the 13 directions.
std::vector<TextureMatrix> build_glrlm(const DiscretizedRoi& droi);

/// Zone counts over 26-connected equal-level components.
TextureMatrix build_glszm(const DiscretizedRoi& droi);

/// Dependence counts: d = 1 + #26-neighbors in the ROI with |level diff| <= alpha.
TextureMatrix build_gldm(const DiscretizedRoi& droi, int alpha = 0);

struct NgtdmColumns {
  int gray_levels = 1;
  std::vector<double> n;  ///< voxel count per level (index level - 1)
  std::vector<double> p;  ///< n / N
  std::vector<double> s;  ///< sum of |level - neighborhood mean|
  double voxel_count = 0.0;
};

NgtdmColumns build_ngtdm(const DiscretizedRoi& droi);

/// 24 GLCM features, each computed per valid matrix then averaged. When no
/// matrix is valid every feature is 0.
FeatureBlock glcm_features(std::span<const TextureMatrix> matrices);

/// 16 run-length features averaged over the given directions.
FeatureBlock glrlm_features(std::span<const TextureMatrix> matrices, double voxel_count);
FeatureBlock glrlm_features(const DiscretizedRoi& droi);

FeatureBlock glszm_features(const TextureMatrix& zones, double voxel_count);
FeatureBlock glszm_features(const DiscretizedRoi& droi);

FeatureBlock gldm_features(const TextureMatrix& dependence);
FeatureBlock gldm_features(const DiscretizedRoi& droi, int alpha = 0);

/// Coarseness is capped at 1e6 when the s column is all zero.
FeatureBlock ngtdm_features(const NgtdmColumns& columns);
FeatureBlock ngtdm_features(const DiscretizedRoi& droi);

}  // namespace lggrad

#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <vector>

#include "lggrad/features.hpp"
#include "lggrad/roi.hpp"

namespace lggrad {

using Point3 = std::array<double, 3>;

/// Intensity-free geometry of a ROI. Surface quantities use the exposed
/// voxel-face convention: a face counts when its 6-neighbor is outside the ROI.
struct ShapeGeometry {
  Spacing spacing{1.0, 1.0, 1.0};
  std::vector<Index3> voxels;
  std::vector<Point3> centers;          ///< index * spacing
  std::array<std::size_t, 3> exposed_faces{0, 0, 0};  ///< by face-normal axis
  std::vector<std::size_t> boundary;    ///< voxels with at least one exposed face

  /// Axial slice (constant k) holding the most ROI pixels, lowest k on ties.
  std::int64_t axial_slice = 0;
  std::vector<std::size_t> slice_pixels;     ///< indices into voxels
  std::array<std::size_t, 2> exposed_edges{0, 0};  ///< in-plane, by normal axis (x, y)
  std::vector<std::size_t> slice_boundary;   ///< indices into voxels

  [[nodiscard]] double voxel_volume() const noexcept {
    return spacing[0] * spacing[1] * spacing[2];
  }
};

ShapeGeometry make_shape_geometry(const Roi& roi);

/// Population covariance eigenvalues in descending order, clamped at zero.
std::array<double, 3> principal_moments(const std::vector<Point3>& points);

/// The 16 three-dimensional descriptors.
FeatureBlock shape3d_features(const ShapeGeometry& geom);

/// The 10 two-dimensional descriptors of the largest axial slice.
FeatureBlock shape2d_features(const ShapeGeometry& geom);

}  // namespace lggrad

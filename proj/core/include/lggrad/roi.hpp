#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <vector>

#include "lggrad/volume.hpp"

namespace lggrad {

using Index3 = std::array<std::int64_t, 3>;

/// Inclusive index bounds.
struct BoundingBox {
  Index3 lo{0, 0, 0};
  Index3 hi{0, 0, 0};

  [[nodiscard]] Index3 extent() const noexcept {
    return {hi[0] - lo[0] + 1, hi[1] - lo[1] + 1, hi[2] - lo[2] + 1};
  }
  friend bool operator==(const BoundingBox&, const BoundingBox&) = default;
};

/// The labeled voxels of a case, in x-fastest scan order.
struct Roi {
  std::vector<Index3> coords;
  std::vector<double> intensities;
  Spacing spacing{1.0, 1.0, 1.0};
  BoundingBox bbox;

  [[nodiscard]] std::size_t size() const noexcept { return coords.size(); }
  [[nodiscard]] double voxel_volume() const noexcept {
    return spacing[0] * spacing[1] * spacing[2];
  }
};

struct BinSpec {
  enum class Mode { FixedWidth, FixedCount };

  Mode mode = Mode::FixedWidth;
  double width = 25.0;
  int count = 32;

  static BinSpec fixed_width(double w) { return {Mode::FixedWidth, w, 32}; }
  static BinSpec fixed_count(int n) { return {Mode::FixedCount, 25.0, n}; }

  /// Throws InvalidArgument unless width > 0 (fixed width) or count >= 2.
  void validate() const;
};

struct DiscretizedRoi {
  Roi roi;
  std::vector<int> levels;  ///< aligned with roi.coords, each in [1, gray_levels]
  int gray_levels = 1;      ///< Ng, the highest assigned level
  BinSpec bin_spec;
};

/// Collects voxels whose mask value equals `label`. Throws EmptyRoi when the
/// label is absent and InvalidArgument when label < 1.
Roi extract_roi(const Volume& image, const MaskVolume& mask, std::int64_t label);

/// Maps intensities to levels 1..Ng with bin edges anchored at the ROI
/// minimum. Fixed width: floor((x - min) / w) + 1. Fixed count: the range
/// [min, max] split into `count` equal bins with the maximum clamped into
/// the top bin.
DiscretizedRoi discretize(const Roi& roi, const BinSpec& spec);

}  // namespace lggrad

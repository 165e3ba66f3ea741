#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <span>
#include <vector>

namespace lggrad {

using Dims = std::array<std::size_t, 3>;
using Spacing = std::array<double, 3>;

/// Grid shape plus physical voxel size in millimeters. 2D data has nz = 1.
struct Geometry {
  Dims dims{1, 1, 1};
  Spacing spacing{1.0, 1.0, 1.0};

  [[nodiscard]] std::size_t voxel_count() const noexcept {
    return dims[0] * dims[1] * dims[2];
  }
  [[nodiscard]] double voxel_volume() const noexcept {
    return spacing[0] * spacing[1] * spacing[2];
  }
  [[nodiscard]] std::size_t linear_index(std::size_t i, std::size_t j,
                                         std::size_t k) const noexcept {
    return i + dims[0] * (j + dims[1] * k);
  }

  friend bool operator==(const Geometry&, const Geometry&) = default;
};

/// Scalar image volume, x-fastest storage, intensities promoted to double.
class Volume {
 public:
  Volume(Geometry geometry, std::vector<double> data);

  [[nodiscard]] const Geometry& geometry() const noexcept { return geometry_; }
  [[nodiscard]] const Dims& dims() const noexcept { return geometry_.dims; }
  [[nodiscard]] const Spacing& spacing() const noexcept { return geometry_.spacing; }
  [[nodiscard]] std::span<const double> data() const noexcept { return data_; }
  [[nodiscard]] double at(std::size_t i, std::size_t j, std::size_t k) const {
    return data_[geometry_.linear_index(i, j, k)];
  }

 private:
  Geometry geometry_;
  std::vector<double> data_;
};

/// Integer label grid sharing the image geometry.
class MaskVolume {
 public:
  MaskVolume(Geometry geometry, std::vector<std::int64_t> labels);

  [[nodiscard]] const Geometry& geometry() const noexcept { return geometry_; }
  [[nodiscard]] const Dims& dims() const noexcept { return geometry_.dims; }
  [[nodiscard]] const Spacing& spacing() const noexcept { return geometry_.spacing; }
  [[nodiscard]] std::span<const std::int64_t> labels() const noexcept { return labels_; }
  [[nodiscard]] std::int64_t at(std::size_t i, std::size_t j, std::size_t k) const {
    return labels_[geometry_.linear_index(i, j, k)];
  }

 private:
  Geometry geometry_;
  std::vector<std::int64_t> labels_;
};

/// Voxel storage types understood by the NRRD reader and writer.
enum class VoxelType { UChar, Short, UShort, Int, Float, Double };

/// Reads the raw little-endian, attached-data NRRD subset. Unknown header
/// keys and comment lines are ignored; missing spacings default to 1 mm.
Volume read_volume(const std::filesystem::path& path);
MaskVolume read_mask(const std::filesystem::path& path);

/// Companion writers producing files that read_volume/read_mask accept.
/// Values are cast to `type`; nz == 1 with sz == 1 is written as a 2D
/// file unless `force_3d` is set.
void write_volume(const std::filesystem::path& path, const Volume& volume,
                  VoxelType type = VoxelType::Double, bool force_3d = false);
void write_mask(const std::filesystem::path& path, const MaskVolume& mask,
                VoxelType type = VoxelType::UChar, bool force_3d = false);

/// Throws DimsMismatch or SpacingMismatch (relative tolerance 1e-4 per axis).
void validate_geometry(const Volume& image, const MaskVolume& mask);

}  // namespace lggrad

#include "lggrad_cli/phantom.hpp"

#include <cmath>
#include <vector>

#include <fmt/format.h>

#include "lggrad/error.hpp"
#include "lggrad/random.hpp"
#include "lggrad_cli/manifest.hpp"

namespace lggrad::cli {

std::pair<Volume, MaskVolume> make_phantom(std::uint64_t seed, int class_label, Dims dims,
                                           Spacing spacing) {
  Rng rng(seed);
  const Geometry geometry{dims, spacing};
  std::vector<double> image(geometry.voxel_count());
  std::vector<std::int64_t> mask(geometry.voxel_count(), 0);

  const double cx = (static_cast<double>(dims[0]) - 1.0) / 2.0 + rng.uniform(-1.5, 1.5);
  const double cy = (static_cast<double>(dims[1]) - 1.0) / 2.0 + rng.uniform(-1.5, 1.5);
  const double cz = (static_cast<double>(dims[2]) - 1.0) / 2.0;
  const double scale = class_label == 1 ? 1.25 : 1.0;
  const double rx = scale * rng.uniform(3.5, 5.5);
  const double ry = scale * rng.uniform(3.0, 5.0);
  const double rz = std::max(1.2, rng.uniform(1.5, 2.5));

  const double lesion_mean = class_label == 1 ? 420.0 : 300.0;
  const double lesion_noise = class_label == 1 ? 90.0 : 30.0;

  std::size_t n = 0;
  for (std::size_t k = 0; k < dims[2]; ++k) {
    for (std::size_t j = 0; j < dims[1]; ++j) {
      for (std::size_t i = 0; i < dims[0]; ++i, ++n) {
        const double dx = (static_cast<double>(i) - cx) / rx;
        const double dy = (static_cast<double>(j) - cy) / ry;
        const double dz = (static_cast<double>(k) - cz) / rz;
        const bool inside = dx * dx + dy * dy + dz * dz <= 1.0;
        // sum of uniforms: cheap, bounded, roughly Gaussian
        double noise = 0.0;
        for (int t = 0; t < 4; ++t) noise += rng.uniform(-1.0, 1.0);
        noise *= std::sqrt(3.0) / 2.0;
        if (inside) {
          mask[n] = 1;
          image[n] = std::round(lesion_mean + lesion_noise * noise);
        } else {
          image[n] = std::round(150.0 + 20.0 * noise);
        }
      }
    }
  }
  // keep the lesion non-empty whatever the draw
  mask[geometry.linear_index(dims[0] / 2, dims[1] / 2, dims[2] / 2)] = 1;
  return {Volume(geometry, std::move(image)), MaskVolume(geometry, std::move(mask))};
}

std::filesystem::path write_phantom_suite(const std::filesystem::path& dir, int cases,
                                          std::uint64_t seed) {
  if (cases < 1) throw Error(Errc::InvalidArgument, "phantom suite needs at least one case");
  std::filesystem::create_directories(dir);
  std::vector<ManifestRow> rows;
  for (int c = 0; c < cases; ++c) {
    const int label = c % 3 == 2 ? 0 : 1;
    const auto [image, mask] = make_phantom(seed * 1000003ULL + static_cast<std::uint64_t>(c), label);
    const auto id = fmt::format("case{:03d}", c);
    write_volume(dir / (id + "_image.nrrd"), image, VoxelType::Short);
    write_mask(dir / (id + "_mask.nrrd"), mask, VoxelType::UChar);
    rows.push_back({id, id + "_image.nrrd", id + "_mask.nrrd", 1, label});
  }
  const auto manifest = dir / "manifest.csv";
  write_manifest(manifest, rows);
  return manifest;
}

}  // namespace lggrad::cli

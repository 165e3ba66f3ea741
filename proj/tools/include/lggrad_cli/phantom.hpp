#pragma once

#include <cstdint>
#include <filesystem>
#include <utility>

#include "lggrad/volume.hpp"

namespace lggrad::cli {

/// Synthetic T2-like case: an ellipsoidal lesion (mask label 1) inside a
/// noisy background. Codeleted phantoms (class 1) are brighter and more
/// heterogeneous than non-codeleted ones, so the classes are learnable.
std::pair<Volume, MaskVolume> make_phantom(std::uint64_t seed, int class_label,
                                           Dims dims = {20, 20, 6},
                                           Spacing spacing = {0.9, 0.9, 3.0});

/// Writes `cases` phantoms (image + mask NRRD pairs) and a manifest.csv into
/// `dir`, roughly two codeleted cases for every non-codeleted one. Returns
/// the manifest path.
std::filesystem::path write_phantom_suite(const std::filesystem::path& dir, int cases,
                                          std::uint64_t seed);

}  // namespace lggrad::cli

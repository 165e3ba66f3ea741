#pragma once

#include <array>
#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "lggrad/roi.hpp"
#include "lggrad/volume.hpp"

namespace lggrad {

/// The eight feature classes, in the order they are concatenated.
enum class FeatureClass {
  FirstOrder,
  Shape3D,
  Shape2D,
  Glcm,
  Glrlm,
  Glszm,
  Gldm,
  Ngtdm,
};

inline constexpr std::array<FeatureClass, 8> kFeatureClasses = {
    FeatureClass::FirstOrder, FeatureClass::Shape3D, FeatureClass::Shape2D,
    FeatureClass::Glcm,       FeatureClass::Glrlm,   FeatureClass::Glszm,
    FeatureClass::Gldm,       FeatureClass::Ngtdm,
};

inline constexpr std::size_t kFeatureCount = 120;

/// CSV column prefix, e.g. "firstorder" or "glcm".
std::string_view class_prefix(FeatureClass cls) noexcept;

/// Canonical feature names of one class, in emission order.
std::span<const std::string_view> class_feature_names(FeatureClass cls) noexcept;

/// All 120 qualified column names (`<prefix>_<Name>`).
std::vector<std::string> feature_column_names();

struct FeatureBlock {
  FeatureClass cls;
  std::vector<std::string> names;
  std::vector<double> values;

  /// Value by unqualified name; throws InvalidArgument if absent.
  [[nodiscard]] double at(std::string_view name) const;
};

/// Builds a block, checking names/values against the class's canonical list
/// and rejecting non-finite values.
FeatureBlock make_block(FeatureClass cls, std::vector<double> values);

struct FeatureVector {
  std::vector<std::string> names;  ///< qualified column names
  std::vector<double> values;
  std::vector<FeatureBlock> blocks;

  [[nodiscard]] double at(std::string_view qualified_name) const;
};

/// Runs all eight feature classes on the ROI carrying `label`.
FeatureVector extract_all(const Volume& image, const MaskVolume& mask, std::int64_t label,
                          const BinSpec& spec);

}  // namespace lggrad

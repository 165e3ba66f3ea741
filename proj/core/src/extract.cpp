#include <algorithm>
#include <cmath>

#include <fmt/format.h>

#include "lggrad/error.hpp"
#include "lggrad/features.hpp"
#include "lggrad/first_order.hpp"
#include "lggrad/shape.hpp"
#include "lggrad/texture.hpp"

namespace lggrad {

namespace {

constexpr std::string_view kFirstOrder[] = {
    "Energy",       "TotalEnergy", "Entropy",  "Minimum",
    "Percentile10", "Percentile90", "Maximum", "Mean",
    "Median",       "InterquartileRange", "Range", "MeanAbsoluteDeviation",
    "RobustMeanAbsoluteDeviation", "RootMeanSquared", "StandardDeviation", "Skewness",
    "Kurtosis",     "Variance",    "Uniformity",
};

constexpr std::string_view kShape3D[] = {
    "VoxelVolume",         "SurfaceArea",          "SurfaceVolumeRatio",
    "Sphericity",          "Compactness1",         "Compactness2",
    "SphericalDisproportion", "Maximum3DDiameter", "Maximum2DDiameterSlice",
    "Maximum2DDiameterColumn", "Maximum2DDiameterRow", "MajorAxisLength",
    "MinorAxisLength",     "LeastAxisLength",      "Elongation",
    "Flatness",
};

constexpr std::string_view kShape2D[] = {
    "PixelSurface",    "Perimeter",       "PerimeterSurfaceRatio", "Sphericity2D",
    "SphericalDisproportion2D", "MaximumDiameter", "MajorAxisLength", "MinorAxisLength",
    "Elongation",      "EffectiveDiameter",
};

constexpr std::string_view kGlcm[] = {
    "Autocorrelation", "JointAverage",   "ClusterProminence",  "ClusterShade",
    "ClusterTendency", "Contrast",       "Correlation",        "DifferenceAverage",
    "DifferenceEntropy", "DifferenceVariance", "JointEnergy",  "JointEntropy",
    "Imc1",            "Imc2",           "Idm",                "Idmn",
    "Id",              "Idn",            "InverseVariance",    "MaximumProbability",
    "SumAverage",      "SumEntropy",     "SumSquares",         "MCC",
};

constexpr std::string_view kGlrlm[] = {
    "ShortRunEmphasis",
    "LongRunEmphasis",
    "GrayLevelNonUniformity",
    "GrayLevelNonUniformityNormalized",
    "RunLengthNonUniformity",
    "RunLengthNonUniformityNormalized",
    "RunPercentage",
    "GrayLevelVariance",
    "RunVariance",
    "RunEntropy",
    "LowGrayLevelRunEmphasis",
    "HighGrayLevelRunEmphasis",
    "ShortRunLowGrayLevelEmphasis",
    "ShortRunHighGrayLevelEmphasis",
    "LongRunLowGrayLevelEmphasis",
    "LongRunHighGrayLevelEmphasis",
};

constexpr std::string_view kGlszm[] = {
    "SmallAreaEmphasis",
    "LargeAreaEmphasis",
    "GrayLevelNonUniformity",
    "GrayLevelNonUniformityNormalized",
    "SizeZoneNonUniformity",
    "SizeZoneNonUniformityNormalized",
    "ZonePercentage",
    "GrayLevelVariance",
    "ZoneVariance",
    "ZoneEntropy",
    "LowGrayLevelZoneEmphasis",
    "HighGrayLevelZoneEmphasis",
    "SmallAreaLowGrayLevelEmphasis",
    "SmallAreaHighGrayLevelEmphasis",
    "LargeAreaLowGrayLevelEmphasis",
    "LargeAreaHighGrayLevelEmphasis",
};

constexpr std::string_view kGldm[] = {
    "SmallDependenceEmphasis",
    "LargeDependenceEmphasis",
    "GrayLevelNonUniformity",
    "DependenceNonUniformity",
    "DependenceNonUniformityNormalized",
    "GrayLevelVariance",
    "DependenceVariance",
    "DependenceEntropy",
    "LowGrayLevelEmphasis",
    "HighGrayLevelEmphasis",
    "SmallDependenceLowGrayLevelEmphasis",
    "SmallDependenceHighGrayLevelEmphasis",
    "LargeDependenceLowGrayLevelEmphasis",
    "LargeDependenceHighGrayLevelEmphasis",
};

constexpr std::string_view kNgtdm[] = {
    "Coarseness", "Contrast", "Busyness", "Complexity", "Strength",
};

std::string qualified(FeatureClass cls, std::string_view name) {
  return fmt::format("{}_{}", class_prefix(cls), name);
}

}  // namespace

std::string_view class_prefix(FeatureClass cls) noexcept {
  switch (cls) {
    case FeatureClass::FirstOrder: return "firstorder";
    case FeatureClass::Shape3D: return "shape3d";
    case FeatureClass::Shape2D: return "shape2d";
    case FeatureClass::Glcm: return "glcm";
    case FeatureClass::Glrlm: return "glrlm";
    case FeatureClass::Glszm: return "glszm";
    case FeatureClass::Gldm: return "gldm";
    case FeatureClass::Ngtdm: return "ngtdm";
  }
  return "unknown";
}

std::span<const std::string_view> class_feature_names(FeatureClass cls) noexcept {
  switch (cls) {
    case FeatureClass::FirstOrder: return kFirstOrder;
    case FeatureClass::Shape3D: return kShape3D;
    case FeatureClass::Shape2D: return kShape2D;
    case FeatureClass::Glcm: return kGlcm;
    case FeatureClass::Glrlm: return kGlrlm;
    case FeatureClass::Glszm: return kGlszm;
    case FeatureClass::Gldm: return kGldm;
    case FeatureClass::Ngtdm: return kNgtdm;
  }
  return {};
}

std::vector<std::string> feature_column_names() {
  std::vector<std::string> names;
  names.reserve(kFeatureCount);
  for (auto cls : kFeatureClasses) {
    for (auto name : class_feature_names(cls)) names.push_back(qualified(cls, name));
  }
  return names;
}

double FeatureBlock::at(std::string_view name) const {
  const auto it = std::find(names.begin(), names.end(), name);
  if (it == names.end()) {
    throw Error(Errc::InvalidArgument, fmt::format("no feature '{}' in {}", name,
                                                   class_prefix(cls)));
  }
  return values[static_cast<std::size_t>(it - names.begin())];
}

double FeatureVector::at(std::string_view qualified_name) const {
  const auto it = std::find(names.begin(), names.end(), qualified_name);
  if (it == names.end()) {
    throw Error(Errc::InvalidArgument, fmt::format("no feature '{}'", qualified_name));
  }
  return values[static_cast<std::size_t>(it - names.begin())];
}

FeatureBlock make_block(FeatureClass cls, std::vector<double> values) {
  const auto names = class_feature_names(cls);
  if (values.size() != names.size()) {
    throw Error(Errc::InvalidArgument,
                fmt::format("{} block needs {} values, got {}", class_prefix(cls), names.size(),
                            values.size()));
  }
  for (std::size_t f = 0; f < values.size(); ++f) {
    if (!std::isfinite(values[f])) {
      throw Error(Errc::InvalidArgument,
                  fmt::format("{} is not finite", qualified(cls, names[f])));
    }
  }
  FeatureBlock block{cls, {names.begin(), names.end()}, std::move(values)};
  return block;
}

FeatureVector extract_all(const Volume& image, const MaskVolume& mask, std::int64_t label,
                          const BinSpec& spec) {
  const Roi roi = extract_roi(image, mask, label);
  const DiscretizedRoi droi = discretize(roi, spec);
  const ShapeGeometry geom = make_shape_geometry(roi);
  const auto glcm = build_glcm(droi);

  FeatureVector out;
  out.blocks.push_back(first_order_features(roi, droi));
  out.blocks.push_back(shape3d_features(geom));
  out.blocks.push_back(shape2d_features(geom));
  out.blocks.push_back(glcm_features(glcm));
  out.blocks.push_back(glrlm_features(droi));
  out.blocks.push_back(glszm_features(droi));
  out.blocks.push_back(gldm_features(droi));
  out.blocks.push_back(ngtdm_features(droi));

  out.names.reserve(kFeatureCount);
  out.values.reserve(kFeatureCount);
  for (const auto& block : out.blocks) {
    for (std::size_t f = 0; f < block.names.size(); ++f) {
      out.names.push_back(qualified(block.cls, block.names[f]));
      out.values.push_back(block.values[f]);
    }
  }
  return out;
}

}  // namespace lggrad

#include "lggrad/roi.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include <fmt/format.h>

#include "lggrad/error.hpp"

namespace lggrad {

void BinSpec::validate() const {
  if (mode == Mode::FixedWidth && !(width > 0.0 && std::isfinite(width))) {
    throw Error(Errc::InvalidArgument, fmt::format("bin width must be positive, got {}", width));
  }
  if (mode == Mode::FixedCount && count < 2) {
    throw Error(Errc::InvalidArgument, fmt::format("bin count must be >= 2, got {}", count));
  }
}

Roi extract_roi(const Volume& image, const MaskVolume& mask, std::int64_t label) {
  if (label < 1) {
    throw Error(Errc::InvalidArgument, fmt::format("ROI label must be >= 1, got {}", label));
  }
  validate_geometry(image, mask);

  Roi roi;
  roi.spacing = image.spacing();
  constexpr auto kMax = std::numeric_limits<std::int64_t>::max();
  roi.bbox.lo = {kMax, kMax, kMax};
  roi.bbox.hi = {-1, -1, -1};

  const auto& d = image.dims();
  const auto labels = mask.labels();
  const auto data = image.data();
  std::size_t n = 0;
  for (std::size_t k = 0; k < d[2]; ++k) {
    for (std::size_t j = 0; j < d[1]; ++j) {
      for (std::size_t i = 0; i < d[0]; ++i, ++n) {
        if (labels[n] != label) continue;
        const Index3 c{static_cast<std::int64_t>(i), static_cast<std::int64_t>(j),
                       static_cast<std::int64_t>(k)};
        roi.coords.push_back(c);
        roi.intensities.push_back(data[n]);
        for (std::size_t a = 0; a < 3; ++a) {
          roi.bbox.lo[a] = std::min(roi.bbox.lo[a], c[a]);
          roi.bbox.hi[a] = std::max(roi.bbox.hi[a], c[a]);
        }
      }
    }
  }
  if (roi.coords.empty()) {
    throw Error(Errc::EmptyRoi, fmt::format("no voxel carries label {}", label));
  }
  return roi;
}

DiscretizedRoi discretize(const Roi& roi, const BinSpec& spec) {
  spec.validate();
  if (roi.coords.empty()) throw Error(Errc::EmptyRoi, "cannot discretize an empty ROI");

  const auto [min_it, max_it] =
      std::minmax_element(roi.intensities.begin(), roi.intensities.end());
  const double lo = *min_it;
  const double range = *max_it - lo;

  DiscretizedRoi out;
  out.roi = roi;
  out.bin_spec = spec;
  out.levels.resize(roi.size());

  if (spec.mode == BinSpec::Mode::FixedWidth) {
    for (std::size_t n = 0; n < roi.size(); ++n) {
      out.levels[n] = static_cast<int>(std::floor((roi.intensities[n] - lo) / spec.width)) + 1;
    }
  } else if (range > 0.0) {
    const double width = range / spec.count;
    for (std::size_t n = 0; n < roi.size(); ++n) {
      const int level = static_cast<int>(std::floor((roi.intensities[n] - lo) / width)) + 1;
      out.levels[n] = std::clamp(level, 1, spec.count);
    }
  } else {
    std::fill(out.levels.begin(), out.levels.end(), 1);
  }
  out.gray_levels = *std::max_element(out.levels.begin(), out.levels.end());
  return out;
}

}  // namespace lggrad

#pragma once

#include <span>

#include "lggrad/features.hpp"
#include "lggrad/roi.hpp"

namespace lggrad {

/// Percentile with linear interpolation between order statistics of an
/// ascending-sorted sample (position q * (n - 1)).
double percentile_sorted(std::span<const double> sorted, double q);

/// The 19 first-order statistics. Moments use the population convention and
/// Kurtosis is non-excess; Skewness and Kurtosis are 0 when the ROI is
/// constant. Entropy and Uniformity are taken over the discretized levels.
FeatureBlock first_order_features(const Roi& roi, const DiscretizedRoi& droi);

}  // namespace lggrad

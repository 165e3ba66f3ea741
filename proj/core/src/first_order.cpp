#include "lggrad/first_order.hpp"

#include <algorithm>
#include <cmath>
#include <vector>

#include "lggrad/error.hpp"

namespace lggrad {

double percentile_sorted(std::span<const double> sorted, double q) {
  if (sorted.empty()) throw Error(Errc::EmptyRoi, "percentile of empty sample");
  const double pos = q * static_cast<double>(sorted.size() - 1);
  const auto lo = static_cast<std::size_t>(std::floor(pos));
  const auto hi = std::min(lo + 1, sorted.size() - 1);
  const double frac = pos - static_cast<double>(lo);
  return sorted[lo] + frac * (sorted[hi] - sorted[lo]);
}

FeatureBlock first_order_features(const Roi& roi, const DiscretizedRoi& droi) {
  if (roi.coords.empty()) throw Error(Errc::EmptyRoi, "first-order features of empty ROI");
  if (droi.levels.size() != roi.size()) {
    throw Error(Errc::InvalidArgument, "discretized ROI does not match ROI");
  }

  const auto& x = roi.intensities;
  const auto n = static_cast<double>(x.size());

  std::vector<double> sorted(x.begin(), x.end());
  std::sort(sorted.begin(), sorted.end());

  double sum = 0.0;
  double sum_sq = 0.0;
  for (double v : x) {
    sum += v;
    sum_sq += v * v;
  }
  // clamped so a constant ROI has exactly zero central moments
  const double mean = std::clamp(sum / n, sorted.front(), sorted.back());

  double m2 = 0.0, m3 = 0.0, m4 = 0.0, mad = 0.0;
  for (double v : x) {
    const double d = v - mean;
    m2 += d * d;
    m3 += d * d * d;
    m4 += d * d * d * d;
    mad += std::abs(d);
  }
  m2 /= n;
  m3 /= n;
  m4 /= n;
  mad /= n;

  const double p10 = percentile_sorted(sorted, 0.10);
  const double p90 = percentile_sorted(sorted, 0.90);

  // robust MAD: deviation from the mean of the 10th-90th percentile subset
  double robust_sum = 0.0;
  std::size_t robust_n = 0;
  for (double v : x) {
    if (v >= p10 && v <= p90) {
      robust_sum += v;
      ++robust_n;
    }
  }
  double robust_mad = 0.0;
  if (robust_n > 0) {
    const double robust_mean = robust_sum / static_cast<double>(robust_n);
    for (double v : x) {
      if (v >= p10 && v <= p90) robust_mad += std::abs(v - robust_mean);
    }
    robust_mad /= static_cast<double>(robust_n);
  }

  std::vector<double> hist(static_cast<std::size_t>(droi.gray_levels) + 1, 0.0);
  for (int level : droi.levels) hist[static_cast<std::size_t>(level)] += 1.0;
  double entropy = 0.0, uniformity = 0.0;
  for (double count : hist) {
    if (count <= 0.0) continue;
    const double p = count / n;
    entropy -= p * std::log2(p);
    uniformity += p * p;
  }

  const double sigma = std::sqrt(m2);
  const double skewness = m2 > 0.0 ? m3 / std::pow(m2, 1.5) : 0.0;
  const double kurtosis = m2 > 0.0 ? m4 / (m2 * m2) : 0.0;

  return make_block(FeatureClass::FirstOrder,
                    {
                        sum_sq,                                    // Energy
                        roi.voxel_volume() * sum_sq,               // TotalEnergy
                        entropy,                                   // Entropy
                        sorted.front(),                            // Minimum
                        p10,                                       // Percentile10
                        p90,                                       // Percentile90
                        sorted.back(),                             // Maximum
                        mean,                                      // Mean
                        percentile_sorted(sorted, 0.50),           // Median
                        percentile_sorted(sorted, 0.75) - percentile_sorted(sorted, 0.25),
                        sorted.back() - sorted.front(),            // Range
                        mad,                                       // MeanAbsoluteDeviation
                        robust_mad,                                // RobustMeanAbsoluteDeviation
                        std::sqrt(sum_sq / n),                     // RootMeanSquared
                        sigma,                                     // StandardDeviation
                        skewness,                                  // Skewness
                        kurtosis,                                  // Kurtosis
                        m2,                                        // Variance
                        uniformity,                                // Uniformity
                    });
}

}  // namespace lggrad

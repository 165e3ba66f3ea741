#pragma once

#include <cstddef>
#include <optional>
#include <span>

namespace lggrad {

/// Counts with 1 (codeleted) as the positive class.
struct ConfusionMatrix {
  std::size_t tp = 0;
  std::size_t fp = 0;
  std::size_t fn = 0;
  std::size_t tn = 0;

  [[nodiscard]] std::size_t total() const noexcept { return tp + fp + fn + tn; }
  friend bool operator==(const ConfusionMatrix&, const ConfusionMatrix&) = default;
};

ConfusionMatrix confusion_matrix(std::span<const int> predicted, std::span<const int> actual);

/// A metric is empty when its denominator is zero.
struct MetricsReport {
  std::optional<double> sensitivity;  ///< tp / (tp + fn)
  std::optional<double> specificity;  ///< tn / (tn + fp)
  std::optional<double> accuracy;     ///< (tp + tn) / total
  std::optional<double> precision;    ///< tp / (tp + fp)
};

MetricsReport metrics(const ConfusionMatrix& cm);

}  // namespace lggrad

#include "lggrad/metrics.hpp"

#include <fmt/format.h>

#include "lggrad/error.hpp"

namespace lggrad {

namespace {

std::optional<double> ratio(std::size_t num, std::size_t den) {
  if (den == 0) return std::nullopt;
  return static_cast<double>(num) / static_cast<double>(den);
}

}  // namespace

ConfusionMatrix confusion_matrix(std::span<const int> predicted, std::span<const int> actual) {
  if (predicted.size() != actual.size()) {
    throw Error(Errc::LengthMismatch,
                fmt::format("{} predictions for {} labels", predicted.size(), actual.size()));
  }
  ConfusionMatrix cm;
  for (std::size_t n = 0; n < predicted.size(); ++n) {
    const int p = predicted[n], a = actual[n];
    if ((p != 0 && p != 1) || (a != 0 && a != 1)) {
      throw Error(Errc::InvalidArgument, "confusion matrix needs 0/1 labels");
    }
    if (p == 1 && a == 1) ++cm.tp;
    else if (p == 1) ++cm.fp;
    else if (a == 1) ++cm.fn;
    else ++cm.tn;
  }
  return cm;
}

MetricsReport metrics(const ConfusionMatrix& cm) {
  return {
      ratio(cm.tp, cm.tp + cm.fn),
      ratio(cm.tn, cm.tn + cm.fp),
      ratio(cm.tp + cm.tn, cm.total()),
      ratio(cm.tp, cm.tp + cm.fp),
  };
}

}  // namespace lggrad

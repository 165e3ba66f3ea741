#include <algorithm>
#include <numeric>

#include <fmt/format.h>

#include "lggrad/error.hpp"
#include "lggrad/random.hpp"
#include "lggrad/tabular.hpp"

namespace lggrad {

std::vector<std::size_t> nearest_minority(const Eigen::MatrixXd& data,
                                          std::span<const std::size_t> minority,
                                          std::size_t row, int k) {
  std::vector<std::pair<double, std::size_t>> dist;
  dist.reserve(minority.size());
  const auto x = data.row(static_cast<Eigen::Index>(row));
  for (auto other : minority) {
    if (other == row) continue;
    dist.emplace_back((data.row(static_cast<Eigen::Index>(other)) - x).squaredNorm(), other);
  }
  // pairs compare by distance, then row index
  std::sort(dist.begin(), dist.end());
  const auto keep = std::min(dist.size(), static_cast<std::size_t>(k));
  std::vector<std::size_t> out;
  out.reserve(keep);
  for (std::size_t n = 0; n < keep; ++n) out.push_back(dist[n].second);
  return out;
}

SmoteResult smote(const Eigen::MatrixXd& data, std::span<const int> labels,
                  const SmoteConfig& cfg) {
  if (static_cast<std::size_t>(data.rows()) != labels.size()) {
    throw Error(Errc::ShapeMismatch, "SMOTE rows and labels differ in length");
  }
  if (cfg.k_neighbors < 1) throw Error(Errc::InvalidArgument, "k_neighbors must be >= 1");

  std::vector<std::size_t> by_class[2];
  for (std::size_t r = 0; r < labels.size(); ++r) {
    if (labels[r] != 0 && labels[r] != 1) {
      throw Error(Errc::InvalidArgument, "labels must be 0 or 1");
    }
    by_class[labels[r]].push_back(r);
  }
  if (by_class[0].empty() || by_class[1].empty()) {
    throw Error(Errc::MinorityTooSmall, "SMOTE needs both classes present");
  }

  SmoteResult out;
  out.minority_label = by_class[1].size() < by_class[0].size() ? 1 : 0;
  const auto& minority = by_class[out.minority_label];
  out.minority_count = minority.size();
  out.majority_count = by_class[1 - out.minority_label].size();
  const std::size_t needed = out.majority_count - out.minority_count;

  out.data = data;
  out.labels.assign(labels.begin(), labels.end());
  if (needed == 0) return out;

  if (minority.size() <= static_cast<std::size_t>(cfg.k_neighbors)) {
    throw Error(Errc::MinorityTooSmall,
                fmt::format("minority class has {} rows, k_neighbors = {}", minority.size(),
                            cfg.k_neighbors));
  }

  std::vector<std::vector<std::size_t>> neighbors;
  neighbors.reserve(minority.size());
  for (auto row : minority) {
    neighbors.push_back(nearest_minority(data, minority, row, cfg.k_neighbors));
  }

  Rng rng(cfg.seed);
  out.data.conservativeResize(data.rows() + static_cast<Eigen::Index>(needed), Eigen::NoChange);
  for (std::size_t s = 0; s < needed; ++s) {
    const auto pick = rng.below(minority.size());
    const auto parent = minority[pick];
    const auto neighbor = neighbors[pick][rng.below(neighbors[pick].size())];
    const double gap = rng.uniform01();
    const auto x = data.row(static_cast<Eigen::Index>(parent));
    const auto nb = data.row(static_cast<Eigen::Index>(neighbor));
    out.data.row(data.rows() + static_cast<Eigen::Index>(s)) = x + gap * (nb - x);
    out.labels.push_back(out.minority_label);
    out.synthetic.push_back({parent, neighbor, gap});
  }
  return out;
}

}  // namespace lggrad

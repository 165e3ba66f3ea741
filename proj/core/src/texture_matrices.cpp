#include "lggrad/texture.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>

#include "lggrad/error.hpp"

namespace lggrad {

namespace {

/// Levels on a dense grid spanning the bounding box plus a margin wide enough
/// for offsets of length `margin`; 0 marks voxels outside the ROI.
class LevelGrid {
 public:
  LevelGrid(const DiscretizedRoi& droi, std::int64_t margin) {
    if (droi.roi.coords.empty()) throw Error(Errc::EmptyRoi, "texture of empty ROI");
    const auto& box = droi.roi.bbox;
    for (std::size_t a = 0; a < 3; ++a) {
      lo_[a] = box.lo[a] - margin;
      ext_[a] = box.hi[a] - box.lo[a] + 1 + 2 * margin;
    }
    cells_.assign(static_cast<std::size_t>(ext_[0] * ext_[1] * ext_[2]), 0);
    for (std::size_t n = 0; n < droi.levels.size(); ++n) {
      cells_[offset(droi.roi.coords[n])] = droi.levels[n];
    }
  }

  /// Level at v, or 0 when v is outside the ROI (including outside the grid).
  [[nodiscard]] int at(const Index3& v) const {
    for (std::size_t a = 0; a < 3; ++a) {
      if (v[a] < lo_[a] || v[a] >= lo_[a] + ext_[a]) return 0;
    }
    return cells_[offset(v)];
  }

 private:
  [[nodiscard]] std::size_t offset(const Index3& v) const {
    return static_cast<std::size_t>((v[0] - lo_[0]) +
                                    ext_[0] * ((v[1] - lo_[1]) + ext_[1] * (v[2] - lo_[2])));
  }

  Index3 lo_{};
  Index3 ext_{};
  std::vector<int> cells_;
};

Index3 add(const Index3& a, const Index3& b, std::int64_t scale = 1) {
  return {a[0] + scale * b[0], a[1] + scale * b[1], a[2] + scale * b[2]};
}

template <typename Visit>
void for_each_neighbor(const Index3& v, Visit&& visit) {
  for (std::int64_t dz = -1; dz <= 1; ++dz) {
    for (std::int64_t dy = -1; dy <= 1; ++dy) {
      for (std::int64_t dx = -1; dx <= 1; ++dx) {
        if (dx == 0 && dy == 0 && dz == 0) continue;
        visit(Index3{v[0] + dx, v[1] + dy, v[2] + dz});
      }
    }
  }
}

Eigen::Index level_row(int level) { return static_cast<Eigen::Index>(level - 1); }

}  // namespace

const std::array<Index3, 13>& texture_directions() noexcept {
  static const std::array<Index3, 13> kDirections = {{
      {1, 0, 0},  {0, 1, 0},  {0, 0, 1},  {1, 1, 0},  {1, -1, 0}, {1, 0, 1},  {1, 0, -1},
      {0, 1, 1},  {0, 1, -1}, {1, 1, 1},  {1, 1, -1}, {1, -1, 1}, {1, -1, -1},
  }};
  return kDirections;
}

TextureMatrix glcm_counts(const DiscretizedRoi& droi, const Index3& offset) {
  const std::int64_t reach =
      std::max({std::abs(offset[0]), std::abs(offset[1]), std::abs(offset[2])});
  const LevelGrid grid(droi, reach);
  const auto ng = static_cast<Eigen::Index>(droi.gray_levels);

  TextureMatrix out;
  out.family = TextureFamily::Glcm;
  out.gray_levels = droi.gray_levels;
  out.direction = offset;
  out.matrix = Eigen::MatrixXd::Zero(ng, ng);
  for (std::size_t n = 0; n < droi.levels.size(); ++n) {
    const int other = grid.at(add(droi.roi.coords[n], offset));
    if (other == 0) continue;
    out.matrix(level_row(droi.levels[n]), level_row(other)) += 1.0;
  }
  out.matrix += out.matrix.transpose().eval();
  out.total = out.matrix.sum();
  return out;
}

std::vector<TextureMatrix> build_glcm(const DiscretizedRoi& droi, int distance) {
  if (distance < 1) throw Error(Errc::InvalidArgument, "GLCM distance must be >= 1");
  std::vector<TextureMatrix> out;
  out.reserve(13);
  for (const auto& dir : texture_directions()) {
    auto m = glcm_counts(droi, add({0, 0, 0}, dir, distance));
    if (m.total > 0.0) m.matrix /= m.total;
    out.push_back(std::move(m));
  }
  return out;
}

std::vector<TextureMatrix> build_glrlm(const DiscretizedRoi& droi) {
  const LevelGrid grid(droi, 1);
  const auto& extent = droi.roi.bbox.extent();
  const auto longest = std::max({extent[0], extent[1], extent[2]});
  const auto ng = static_cast<Eigen::Index>(droi.gray_levels);

  std::vector<TextureMatrix> out;
  out.reserve(13);
  for (const auto& dir : texture_directions()) {
    TextureMatrix m;
    m.family = TextureFamily::Glrlm;
    m.gray_levels = droi.gray_levels;
    m.direction = dir;
    m.matrix = Eigen::MatrixXd::Zero(ng, static_cast<Eigen::Index>(longest));
    for (std::size_t n = 0; n < droi.levels.size(); ++n) {
      const int level = droi.levels[n];
      const auto& v = droi.roi.coords[n];
      if (grid.at(add(v, dir, -1)) == level) continue;  // not the start of a run
      std::int64_t length = 1;
      while (grid.at(add(v, dir, length)) == level) ++length;
      m.matrix(level_row(level), static_cast<Eigen::Index>(length - 1)) += 1.0;
    }
    m.total = m.matrix.sum();
    out.push_back(std::move(m));
  }
  return out;
}

TextureMatrix build_glszm(const DiscretizedRoi& droi) {
  const LevelGrid grid(droi, 1);
  const auto& box = droi.roi.bbox;
  const auto& ext = box.extent();
  auto local = [&](const Index3& v) {
    return static_cast<std::size_t>((v[0] - box.lo[0]) +
                                    ext[0] * ((v[1] - box.lo[1]) + ext[1] * (v[2] - box.lo[2])));
  };
  std::vector<char> visited(static_cast<std::size_t>(ext[0] * ext[1] * ext[2]), 0);

  std::vector<std::pair<int, std::size_t>> zones;  // (level, size)
  std::size_t largest = 1;
  std::vector<Index3> stack;
  for (std::size_t n = 0; n < droi.levels.size(); ++n) {
    const auto& seed = droi.roi.coords[n];
    if (visited[local(seed)]) continue;
    const int level = droi.levels[n];
    std::size_t size = 0;
    visited[local(seed)] = 1;
    stack.push_back(seed);
    while (!stack.empty()) {
      const Index3 v = stack.back();
      stack.pop_back();
      ++size;
      for_each_neighbor(v, [&](const Index3& w) {
        if (grid.at(w) != level) return;
        auto& seen = visited[local(w)];
        if (seen) return;
        seen = 1;
        stack.push_back(w);
      });
    }
    zones.emplace_back(level, size);
    largest = std::max(largest, size);
  }

  TextureMatrix m;
  m.family = TextureFamily::Glszm;
  m.gray_levels = droi.gray_levels;
  m.matrix = Eigen::MatrixXd::Zero(droi.gray_levels, static_cast<Eigen::Index>(largest));
  for (const auto& [level, size] : zones) {
    m.matrix(level_row(level), static_cast<Eigen::Index>(size - 1)) += 1.0;
  }
  m.total = static_cast<double>(zones.size());
  return m;
}

TextureMatrix build_gldm(const DiscretizedRoi& droi, int alpha) {
  if (alpha < 0) throw Error(Errc::InvalidArgument, "GLDM alpha must be >= 0");
  const LevelGrid grid(droi, 1);
  TextureMatrix m;
  m.family = TextureFamily::Gldm;
  m.gray_levels = droi.gray_levels;
  m.matrix = Eigen::MatrixXd::Zero(droi.gray_levels, 27);
  for (std::size_t n = 0; n < droi.levels.size(); ++n) {
    const int level = droi.levels[n];
    int dependence = 1;
    for_each_neighbor(droi.roi.coords[n], [&](const Index3& w) {
      const int other = grid.at(w);
      if (other != 0 && std::abs(other - level) <= alpha) ++dependence;
    });
    m.matrix(level_row(level), dependence - 1) += 1.0;
  }
  m.total = m.matrix.sum();
  return m;
}

NgtdmColumns build_ngtdm(const DiscretizedRoi& droi) {
  const LevelGrid grid(droi, 1);
  NgtdmColumns cols;
  cols.gray_levels = droi.gray_levels;
  const auto ng = static_cast<std::size_t>(droi.gray_levels);
  cols.n.assign(ng, 0.0);
  cols.p.assign(ng, 0.0);
  cols.s.assign(ng, 0.0);
  cols.voxel_count = static_cast<double>(droi.levels.size());

  for (std::size_t n = 0; n < droi.levels.size(); ++n) {
    const int level = droi.levels[n];
    const auto row = static_cast<std::size_t>(level - 1);
    cols.n[row] += 1.0;
    double sum = 0.0;
    int count = 0;
    for_each_neighbor(droi.roi.coords[n], [&](const Index3& w) {
      const int other = grid.at(w);
      if (other == 0) return;
      sum += other;
      ++count;
    });
    if (count > 0) cols.s[row] += std::abs(level - sum / count);
  }
  for (std::size_t i = 0; i < ng; ++i) cols.p[i] = cols.n[i] / cols.voxel_count;
  return cols;
}

}  // namespace lggrad

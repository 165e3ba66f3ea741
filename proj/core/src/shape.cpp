#include "lggrad/shape.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numbers>

#include <Eigen/Eigenvalues>

#include "lggrad/error.hpp"

namespace lggrad {

namespace {

/// Dense occupancy over the bounding box with a one-voxel empty margin.
class Occupancy {
 public:
  explicit Occupancy(const std::vector<Index3>& voxels) {
    lo_ = voxels.front();
    Index3 hi = voxels.front();
    for (const auto& v : voxels) {
      for (std::size_t a = 0; a < 3; ++a) {
        lo_[a] = std::min(lo_[a], v[a]);
        hi[a] = std::max(hi[a], v[a]);
      }
    }
    for (std::size_t a = 0; a < 3; ++a) {
      lo_[a] -= 1;
      ext_[a] = hi[a] - lo_[a] + 2;
    }
    cells_.assign(static_cast<std::size_t>(ext_[0] * ext_[1] * ext_[2]), 0);
    for (const auto& v : voxels) cells_[offset(v)] = 1;
  }

  [[nodiscard]] bool contains(const Index3& v) const { return cells_[offset(v)] != 0; }

 private:
  [[nodiscard]] std::size_t offset(const Index3& v) const {
    return static_cast<std::size_t>((v[0] - lo_[0]) +
                                    ext_[0] * ((v[1] - lo_[1]) + ext_[1] * (v[2] - lo_[2])));
  }

  Index3 lo_{};
  Index3 ext_{};
  std::vector<char> cells_;
};

double distance_sq(const Point3& a, const Point3& b) {
  const double dx = a[0] - b[0], dy = a[1] - b[1], dz = a[2] - b[2];
  return dx * dx + dy * dy + dz * dz;
}

/// Largest pairwise center distance among `members`, optionally only between
/// voxels that share the index on `plane_axis`.
double max_diameter(const ShapeGeometry& g, const std::vector<std::size_t>& members,
                    int plane_axis = -1) {
  double best = 0.0;
  if (plane_axis < 0) {
    for (std::size_t a = 0; a < members.size(); ++a) {
      for (std::size_t b = a + 1; b < members.size(); ++b) {
        best = std::max(best, distance_sq(g.centers[members[a]], g.centers[members[b]]));
      }
    }
    return std::sqrt(best);
  }
  std::map<std::int64_t, std::vector<std::size_t>> planes;
  for (auto m : members) planes[g.voxels[m][static_cast<std::size_t>(plane_axis)]].push_back(m);
  for (const auto& [index, plane] : planes) {
    best = std::max(best, max_diameter(g, plane));
  }
  return best;
}

double safe_ratio_sqrt(double num, double den) {
  return den > 0.0 ? std::sqrt(num / den) : 0.0;
}

}  // namespace

ShapeGeometry make_shape_geometry(const Roi& roi) {
  if (roi.coords.empty()) throw Error(Errc::EmptyRoi, "shape of empty ROI");

  ShapeGeometry g;
  g.spacing = roi.spacing;
  g.voxels = roi.coords;
  g.centers.reserve(g.voxels.size());
  for (const auto& v : g.voxels) {
    g.centers.push_back({static_cast<double>(v[0]) * g.spacing[0],
                         static_cast<double>(v[1]) * g.spacing[1],
                         static_cast<double>(v[2]) * g.spacing[2]});
  }

  const Occupancy occ(g.voxels);
  std::map<std::int64_t, std::size_t> slice_counts;
  for (std::size_t n = 0; n < g.voxels.size(); ++n) {
    const auto& v = g.voxels[n];
    bool exposed = false;
    for (std::size_t axis = 0; axis < 3; ++axis) {
      for (std::int64_t step : {-1, 1}) {
        Index3 nb = v;
        nb[axis] += step;
        if (!occ.contains(nb)) {
          ++g.exposed_faces[axis];
          exposed = true;
        }
      }
    }
    if (exposed) g.boundary.push_back(n);
    ++slice_counts[v[2]];
  }

  std::size_t best = 0;
  for (const auto& [k, count] : slice_counts) {
    if (count > best) {
      best = count;
      g.axial_slice = k;
    }
  }
  for (std::size_t n = 0; n < g.voxels.size(); ++n) {
    const auto& v = g.voxels[n];
    if (v[2] != g.axial_slice) continue;
    g.slice_pixels.push_back(n);
    bool exposed = false;
    for (std::size_t axis = 0; axis < 2; ++axis) {
      for (std::int64_t step : {-1, 1}) {
        Index3 nb = v;
        nb[axis] += step;
        if (!occ.contains(nb)) {
          ++g.exposed_edges[axis];
          exposed = true;
        }
      }
    }
    if (exposed) g.slice_boundary.push_back(n);
  }
  return g;
}

std::array<double, 3> principal_moments(const std::vector<Point3>& points) {
  Eigen::Vector3d mean = Eigen::Vector3d::Zero();
  for (const auto& p : points) mean += Eigen::Vector3d(p[0], p[1], p[2]);
  mean /= static_cast<double>(points.size());
  Eigen::Matrix3d cov = Eigen::Matrix3d::Zero();
  for (const auto& p : points) {
    const Eigen::Vector3d d = Eigen::Vector3d(p[0], p[1], p[2]) - mean;
    cov += d * d.transpose();
  }
  cov /= static_cast<double>(points.size());

  const Eigen::SelfAdjointEigenSolver<Eigen::Matrix3d> solver(cov, Eigen::EigenvaluesOnly);
  const auto& ev = solver.eigenvalues();  // ascending
  return {std::max(ev[2], 0.0), std::max(ev[1], 0.0), std::max(ev[0], 0.0)};
}

FeatureBlock shape3d_features(const ShapeGeometry& g) {
  if (g.voxels.empty()) throw Error(Errc::EmptyRoi, "shape of empty ROI");
  const auto& s = g.spacing;
  const double volume = static_cast<double>(g.voxels.size()) * g.voxel_volume();
  const double area = static_cast<double>(g.exposed_faces[0]) * s[1] * s[2] +
                      static_cast<double>(g.exposed_faces[1]) * s[0] * s[2] +
                      static_cast<double>(g.exposed_faces[2]) * s[0] * s[1];
  constexpr double pi = std::numbers::pi;
  const double sphericity = std::cbrt(pi) * std::pow(6.0 * volume, 2.0 / 3.0) / area;
  const auto [l1, l2, l3] = principal_moments(g.centers);

  return make_block(FeatureClass::Shape3D,
                    {
                        volume,                                          // VoxelVolume
                        area,                                            // SurfaceArea
                        area / volume,                                   // SurfaceVolumeRatio
                        sphericity,                                      // Sphericity
                        volume / (std::sqrt(pi) * std::pow(area, 1.5)),  // Compactness1
                        36.0 * pi * volume * volume / (area * area * area),  // Compactness2
                        1.0 / sphericity,                                // SphericalDisproportion
                        max_diameter(g, g.boundary),                     // Maximum3DDiameter
                        max_diameter(g, g.boundary, 2),                  // Maximum2DDiameterSlice
                        max_diameter(g, g.boundary, 1),                  // Maximum2DDiameterColumn
                        max_diameter(g, g.boundary, 0),                  // Maximum2DDiameterRow
                        4.0 * std::sqrt(l1),                             // MajorAxisLength
                        4.0 * std::sqrt(l2),                             // MinorAxisLength
                        4.0 * std::sqrt(l3),                             // LeastAxisLength
                        safe_ratio_sqrt(l2, l1),                         // Elongation
                        safe_ratio_sqrt(l3, l1),                         // Flatness
                    });
}

FeatureBlock shape2d_features(const ShapeGeometry& g) {
  if (g.slice_pixels.empty()) throw Error(Errc::EmptyRoi, "shape of empty ROI");
  const auto& s = g.spacing;
  const double area = static_cast<double>(g.slice_pixels.size()) * s[0] * s[1];
  const double perimeter = static_cast<double>(g.exposed_edges[0]) * s[1] +
                           static_cast<double>(g.exposed_edges[1]) * s[0];
  constexpr double pi = std::numbers::pi;
  const double sphericity = 2.0 * std::sqrt(pi * area) / perimeter;

  // in-plane covariance of pixel centers
  double mx = 0.0, my = 0.0;
  for (auto n : g.slice_pixels) {
    mx += g.centers[n][0];
    my += g.centers[n][1];
  }
  const auto count = static_cast<double>(g.slice_pixels.size());
  mx /= count;
  my /= count;
  double sxx = 0.0, syy = 0.0, sxy = 0.0;
  for (auto n : g.slice_pixels) {
    const double dx = g.centers[n][0] - mx, dy = g.centers[n][1] - my;
    sxx += dx * dx;
    syy += dy * dy;
    sxy += dx * dy;
  }
  sxx /= count;
  syy /= count;
  sxy /= count;
  const double half_trace = 0.5 * (sxx + syy);
  const double disc = std::sqrt(0.25 * (sxx - syy) * (sxx - syy) + sxy * sxy);
  const double major = std::max(half_trace + disc, 0.0);
  const double minor = std::max(half_trace - disc, 0.0);

  return make_block(FeatureClass::Shape2D,
                    {
                        area,                                // PixelSurface
                        perimeter,                           // Perimeter
                        perimeter / area,                    // PerimeterSurfaceRatio
                        sphericity,                          // Sphericity2D
                        1.0 / sphericity,                    // SphericalDisproportion2D
                        max_diameter(g, g.slice_boundary),   // MaximumDiameter
                        4.0 * std::sqrt(major),              // MajorAxisLength
                        4.0 * std::sqrt(minor),              // MinorAxisLength
                        safe_ratio_sqrt(minor, major),       // Elongation
                        2.0 * std::sqrt(area / pi),          // EffectiveDiameter
                    });
}

}  // namespace lggrad

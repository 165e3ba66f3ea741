#include <algorithm>
#include <cmath>
#include <vector>

#include <Eigen/Eigenvalues>

#include "lggrad/error.hpp"
#include "lggrad/texture.hpp"

namespace lggrad {

namespace {

double plog2p(double p) { return p > 0.0 ? p * std::log2(p) : 0.0; }

std::vector<double> glcm_single(const TextureMatrix& m) {
  const auto& p = m.matrix;
  const Eigen::Index ng = p.rows();
  const double ngd = static_cast<double>(m.gray_levels);
  const Eigen::VectorXd px = p.rowwise().sum();
  const Eigen::VectorXd py = p.colwise().sum().transpose();

  auto lvl = [](Eigen::Index i) { return static_cast<double>(i + 1); };
  double ux = 0.0, uy = 0.0;
  for (Eigen::Index i = 0; i < ng; ++i) {
    ux += lvl(i) * px[i];
    uy += lvl(i) * py[i];
  }
  double var_x = 0.0, var_y = 0.0;
  for (Eigen::Index i = 0; i < ng; ++i) {
    var_x += (lvl(i) - ux) * (lvl(i) - ux) * px[i];
    var_y += (lvl(i) - uy) * (lvl(i) - uy) * py[i];
  }

  std::vector<double> sum_dist(static_cast<std::size_t>(2 * ng + 1), 0.0);  // index a + b
  std::vector<double> diff_dist(static_cast<std::size_t>(ng), 0.0);         // index |a - b|
  double autocorr = 0.0, prominence = 0.0, shade = 0.0, tendency = 0.0, contrast = 0.0;
  double energy = 0.0, hxy = 0.0, hxy1 = 0.0, idm = 0.0, idmn = 0.0, id = 0.0, idn = 0.0;
  double inv_var = 0.0, max_prob = 0.0, sum_squares = 0.0;
  for (Eigen::Index i = 0; i < ng; ++i) {
    for (Eigen::Index j = 0; j < ng; ++j) {
      const double v = p(i, j);
      const double a = lvl(i), b = lvl(j);
      const double centered = a + b - ux - uy;
      const double diff = std::abs(a - b);
      sum_dist[static_cast<std::size_t>(i + j + 2)] += v;
      diff_dist[static_cast<std::size_t>(diff)] += v;
      autocorr += a * b * v;
      prominence += centered * centered * centered * centered * v;
      shade += centered * centered * centered * v;
      tendency += centered * centered * v;
      contrast += diff * diff * v;
      energy += v * v;
      hxy -= plog2p(v);
      if (v > 0.0) hxy1 -= v * std::log2(px[i] * py[j]);
      idm += v / (1.0 + diff * diff);
      idmn += v / (1.0 + diff * diff / (ngd * ngd));
      id += v / (1.0 + diff);
      idn += v / (1.0 + diff / ngd);
      if (i != j) inv_var += v / (diff * diff);
      max_prob = std::max(max_prob, v);
      sum_squares += (a - ux) * (a - ux) * v;
    }
  }

  double hx = 0.0, hy = 0.0, hxy2 = 0.0;
  for (Eigen::Index i = 0; i < ng; ++i) {
    hx -= plog2p(px[i]);
    hy -= plog2p(py[i]);
    for (Eigen::Index j = 0; j < ng; ++j) {
      const double q = px[i] * py[j];
      hxy2 -= plog2p(q);
    }
  }

  const double sigma_prod = std::sqrt(var_x) * std::sqrt(var_y);
  const double correlation = sigma_prod > 0.0 ? (autocorr - ux * uy) / sigma_prod : 1.0;

  double diff_avg = 0.0, diff_entropy = 0.0;
  for (std::size_t k = 0; k < diff_dist.size(); ++k) {
    diff_avg += static_cast<double>(k) * diff_dist[k];
    diff_entropy -= plog2p(diff_dist[k]);
  }
  double diff_var = 0.0;
  for (std::size_t k = 0; k < diff_dist.size(); ++k) {
    const double d = static_cast<double>(k) - diff_avg;
    diff_var += d * d * diff_dist[k];
  }
  double sum_avg = 0.0, sum_entropy = 0.0;
  for (std::size_t k = 0; k < sum_dist.size(); ++k) {
    sum_avg += static_cast<double>(k) * sum_dist[k];
    sum_entropy -= plog2p(sum_dist[k]);
  }

  const double hmax = std::max(hx, hy);
  const double imc1 = hmax > 0.0 ? (hxy - hxy1) / hmax : 0.0;
  const double imc2 = hxy > hxy2 ? 0.0 : std::sqrt(1.0 - std::exp(-2.0 * (hxy2 - hxy)));

  // MCC: second eigenvalue of Q(i,j) = sum_k p(i,k) p(j,k) / (px(i) py(k)),
  // taken through the similar symmetric form over populated levels.
  std::vector<Eigen::Index> rows, cols;
  for (Eigen::Index i = 0; i < ng; ++i) {
    if (px[i] > 0.0) rows.push_back(i);
    if (py[i] > 0.0) cols.push_back(i);
  }
  double mcc = 1.0;
  if (rows.size() >= 2) {
    const auto r = static_cast<Eigen::Index>(rows.size());
    Eigen::MatrixXd a(r, static_cast<Eigen::Index>(cols.size()));
    for (Eigen::Index i = 0; i < r; ++i) {
      for (std::size_t k = 0; k < cols.size(); ++k) {
        a(i, static_cast<Eigen::Index>(k)) =
            p(rows[static_cast<std::size_t>(i)], cols[k]) /
            std::sqrt(px[rows[static_cast<std::size_t>(i)]] * py[cols[k]]);
      }
    }
    const Eigen::MatrixXd s = a * a.transpose();
    const Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(s, Eigen::EigenvaluesOnly);
    const auto& ev = solver.eigenvalues();  // ascending
    mcc = std::sqrt(std::max(ev[r - 2], 0.0));
  }

  return {autocorr, ux,       prominence, shade,      tendency, contrast,    correlation,
          diff_avg, diff_entropy, diff_var, energy,   hxy,      imc1,        imc2,
          idm,      idmn,     id,         idn,        inv_var,  max_prob,    sum_avg,
          sum_entropy, sum_squares, mcc};
}

/// Shared statistics of the level x size family (GLRLM, GLSZM, GLDM).
struct SizeStats {
  double small = 0.0, large = 0.0, gln = 0.0, glnn = 0.0, sn = 0.0, snn = 0.0,
         percentage = 0.0, glv = 0.0, sv = 0.0, entropy = 0.0, low = 0.0, high = 0.0,
         small_low = 0.0, small_high = 0.0, large_low = 0.0, large_high = 0.0;
};

SizeStats size_stats(const Eigen::MatrixXd& m, double voxel_count) {
  SizeStats st;
  const double nz = m.sum();
  if (nz <= 0.0) return st;
  const Eigen::VectorXd per_level = m.rowwise().sum();
  const Eigen::VectorXd per_size = m.colwise().sum().transpose();

  double mu_i = 0.0, mu_j = 0.0;
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    for (Eigen::Index j = 0; j < m.cols(); ++j) {
      const double c = m(i, j);
      if (c == 0.0) continue;
      const double a = static_cast<double>(i + 1), b = static_cast<double>(j + 1);
      const double p = c / nz;
      mu_i += a * p;
      mu_j += b * p;
      st.small += c / (b * b);
      st.large += c * b * b;
      st.entropy -= plog2p(p);
      st.low += c / (a * a);
      st.high += c * a * a;
      st.small_low += c / (a * a * b * b);
      st.small_high += c * a * a / (b * b);
      st.large_low += c * b * b / (a * a);
      st.large_high += c * a * a * b * b;
    }
  }
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    for (Eigen::Index j = 0; j < m.cols(); ++j) {
      const double c = m(i, j);
      if (c == 0.0) continue;
      const double p = c / nz;
      const double di = static_cast<double>(i + 1) - mu_i;
      const double dj = static_cast<double>(j + 1) - mu_j;
      st.glv += p * di * di;
      st.sv += p * dj * dj;
    }
  }
  st.gln = per_level.squaredNorm() / nz;
  st.glnn = per_level.squaredNorm() / (nz * nz);
  st.sn = per_size.squaredNorm() / nz;
  st.snn = per_size.squaredNorm() / (nz * nz);
  st.percentage = voxel_count > 0.0 ? nz / voxel_count : 0.0;
  for (double* v : {&st.small, &st.large, &st.low, &st.high, &st.small_low, &st.small_high,
                    &st.large_low, &st.large_high}) {
    *v /= nz;
  }
  return st;
}

std::vector<double> run_like(const SizeStats& s) {
  return {s.small,      s.large, s.gln, s.glnn,    s.sn,  s.snn,        s.percentage, s.glv,
          s.sv,         s.entropy, s.low, s.high, s.small_low, s.small_high, s.large_low,
          s.large_high};
}

}  // namespace

FeatureBlock glcm_features(std::span<const TextureMatrix> matrices) {
  std::vector<double> mean(24, 0.0);
  std::size_t used = 0;
  for (const auto& m : matrices) {
    if (m.family != TextureFamily::Glcm) {
      throw Error(Errc::InvalidArgument, "glcm_features needs GLCM matrices");
    }
    if (!m.valid()) continue;
    const auto values = glcm_single(m);
    for (std::size_t f = 0; f < mean.size(); ++f) mean[f] += values[f];
    ++used;
  }
  if (used > 0) {
    for (auto& v : mean) v /= static_cast<double>(used);
  }
  return make_block(FeatureClass::Glcm, std::move(mean));
}

FeatureBlock glrlm_features(std::span<const TextureMatrix> matrices, double voxel_count) {
  std::vector<double> mean(16, 0.0);
  std::size_t used = 0;
  for (const auto& m : matrices) {
    if (m.family != TextureFamily::Glrlm) {
      throw Error(Errc::InvalidArgument, "glrlm_features needs GLRLM matrices");
    }
    if (!m.valid()) continue;
    const auto values = run_like(size_stats(m.matrix, voxel_count));
    for (std::size_t f = 0; f < mean.size(); ++f) mean[f] += values[f];
    ++used;
  }
  if (used > 0) {
    for (auto& v : mean) v /= static_cast<double>(used);
  }
  return make_block(FeatureClass::Glrlm, std::move(mean));
}

FeatureBlock glrlm_features(const DiscretizedRoi& droi) {
  const auto matrices = build_glrlm(droi);
  return glrlm_features(matrices, static_cast<double>(droi.levels.size()));
}

FeatureBlock glszm_features(const TextureMatrix& zones, double voxel_count) {
  return make_block(FeatureClass::Glszm, run_like(size_stats(zones.matrix, voxel_count)));
}

FeatureBlock glszm_features(const DiscretizedRoi& droi) {
  return glszm_features(build_glszm(droi), static_cast<double>(droi.levels.size()));
}

FeatureBlock gldm_features(const TextureMatrix& dependence) {
  const auto s = size_stats(dependence.matrix, dependence.total);
  return make_block(FeatureClass::Gldm,
                    {s.small, s.large, s.gln, s.sn, s.snn, s.glv, s.sv, s.entropy, s.low, s.high,
                     s.small_low, s.small_high, s.large_low, s.large_high});
}

FeatureBlock gldm_features(const DiscretizedRoi& droi, int alpha) {
  return gldm_features(build_gldm(droi, alpha));
}

FeatureBlock ngtdm_features(const NgtdmColumns& c) {
  const auto ng = c.n.size();
  double sum_s = 0.0, sum_ps = 0.0;
  std::size_t populated = 0;
  for (std::size_t i = 0; i < ng; ++i) {
    sum_s += c.s[i];
    sum_ps += c.p[i] * c.s[i];
    if (c.p[i] > 0.0) ++populated;
  }

  double pair_contrast = 0.0, busy_den = 0.0, complexity = 0.0, strength_num = 0.0;
  for (std::size_t i = 0; i < ng; ++i) {
    if (c.p[i] <= 0.0) continue;
    const double a = static_cast<double>(i + 1);
    for (std::size_t j = 0; j < ng; ++j) {
      if (c.p[j] <= 0.0) continue;
      const double b = static_cast<double>(j + 1);
      pair_contrast += c.p[i] * c.p[j] * (a - b) * (a - b);
      busy_den += std::abs(a * c.p[i] - b * c.p[j]);
      complexity += std::abs(a - b) * (c.p[i] * c.s[i] + c.p[j] * c.s[j]) / (c.p[i] + c.p[j]);
      strength_num += (c.p[i] + c.p[j]) * (a - b) * (a - b);
    }
  }

  const double n = c.voxel_count;
  const double coarseness = sum_ps > 0.0 ? std::min(1.0 / sum_ps, 1e6) : 1e6;
  const double contrast =
      populated > 1 && n > 0.0
          ? pair_contrast / static_cast<double>(populated * (populated - 1)) * (sum_s / n)
          : 0.0;
  const double busyness = busy_den > 0.0 ? sum_ps / busy_den : 0.0;
  const double strength = sum_s > 0.0 ? strength_num / sum_s : 0.0;
  return make_block(FeatureClass::Ngtdm,
                    {coarseness, contrast, busyness, n > 0.0 ? complexity / n : 0.0, strength});
}

FeatureBlock ngtdm_features(const DiscretizedRoi& droi) {
  return ngtdm_features(build_ngtdm(droi));
}

}  // namespace lggrad

#include "sparkle/motion/homography.hpp"

#include <Eigen/Geometry>
#include <Eigen/LU>
#include <Eigen/SVD>
#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <random>

#include "sparkle/error.hpp"

namespace sparkle::motion {

std::size_t HomographyFit::inlier_count() const {
  return static_cast<std::size_t>(std::count(inlier_mask.begin(), inlier_mask.end(), true));
}

std::vector<Correspondence> flow_correspondences(const FlowField& flow, int stride) {
  if (stride < 1) throw ValidationError("correspondence grid stride must be >= 1");
  std::vector<Correspondence> out;
  for (int y = 0; y < flow.height(); y += stride) {
    for (int x = 0; x < flow.width(); x += stride) {
      const FlowVector& f = flow.at(x, y);
      out.push_back({Eigen::Vector2d(x, y), Eigen::Vector2d(x + f.u, y + f.v)});
    }
  }
  return out;
}

Eigen::Matrix3d normalize_homography(const Eigen::Matrix3d& H) {
  if (std::fabs(H(2, 2)) > 1e-9) return H / H(2, 2);
  return H;
}

double reprojection_error(const Eigen::Matrix3d& H, const Correspondence& c) {
  Eigen::Vector3d p = H * c.src.homogeneous();
  if (std::fabs(p.z()) < 1e-12) return std::numeric_limits<double>::infinity();
  return (p.hnormalized() - c.dst).norm();
}

namespace {

// Similarity that moves the centroid to the origin with mean distance sqrt(2).
std::optional<Eigen::Matrix3d> conditioning(std::span<const Correspondence> points, bool use_dst) {
  Eigen::Vector2d centroid = Eigen::Vector2d::Zero();
  for (const auto& c : points) centroid += use_dst ? c.dst : c.src;
  centroid /= static_cast<double>(points.size());
  double mean_dist = 0.0;
  for (const auto& c : points) mean_dist += ((use_dst ? c.dst : c.src) - centroid).norm();
  mean_dist /= static_cast<double>(points.size());
  if (mean_dist < 1e-12) return std::nullopt;
  double s = std::sqrt(2.0) / mean_dist;
  Eigen::Matrix3d T;
  T << s, 0, -s * centroid.x(), 0, s, -s * centroid.y(), 0, 0, 1;
  return T;
}

bool collinear(const Eigen::Vector2d& a, const Eigen::Vector2d& b, const Eigen::Vector2d& c) {
  Eigen::Vector2d ab = b - a, ac = c - a;
  double cross = std::fabs(ab.x() * ac.y() - ab.y() * ac.x());
  double scale = ab.norm() * ac.norm();
  return scale < 1e-12 || cross <= 1e-6 * scale;
}

std::vector<double> residuals_for(const Eigen::Matrix3d& H, std::span<const Correspondence> points,
                                  const std::vector<std::size_t>& subset) {
  std::vector<double> out;
  out.reserve(subset.size());
  for (auto i : subset) out.push_back(reprojection_error(H, points[i]));
  return out;
}

double median_of(std::vector<double> values) {
  auto mid = values.begin() + static_cast<std::ptrdiff_t>(values.size() / 2);
  std::nth_element(values.begin(), mid, values.end());
  return *mid;
}

std::vector<bool> inlier_mask_for(const Eigen::Matrix3d& H, std::span<const Correspondence> points,
                                  double threshold) {
  std::vector<bool> mask(points.size());
  for (std::size_t i = 0; i < points.size(); ++i) mask[i] = reprojection_error(H, points[i]) < threshold;
  return mask;
}

std::size_t count_true(const std::vector<bool>& mask) {
  return static_cast<std::size_t>(std::count(mask.begin(), mask.end(), true));
}

std::optional<Eigen::Matrix3d> fit_subset(std::span<const Correspondence> points,
                                          const std::vector<std::size_t>& subset) {
  std::vector<Correspondence> chosen;
  chosen.reserve(subset.size());
  for (auto i : subset) chosen.push_back(points[i]);
  return fit_homography_dlt(chosen);
}


std::optional<Eigen::Matrix3d> refit_trimmed(std::span<const Correspondence> points,
                                             const std::vector<std::size_t>& consensus, double threshold) {
  auto refit = fit_subset(points, consensus);
  if (!refit) return std::nullopt;
  Eigen::Matrix3d current = *refit;
  std::vector<std::size_t> kept = consensus;
  const double floor = 1e-3 * threshold;
  for (int round = 0; round < 10; ++round) {
    auto res = residuals_for(current, points, kept);
    double med = median_of(res);
    std::vector<double> dev(res.size());
    for (std::size_t i = 0; i < res.size(); ++i) dev[i] = std::fabs(res[i] - med);
    double cutoff = std::max(med + 4.0 * 1.4826 * median_of(dev), floor);
    std::vector<std::size_t> trimmed;
    for (std::size_t i = 0; i < kept.size(); ++i) {
      if (res[i] <= cutoff) trimmed.push_back(kept[i]);
    }
    if (trimmed.size() == kept.size() || trimmed.size() < std::max<std::size_t>(4, consensus.size() / 2)) break;
    auto next = fit_subset(points, trimmed);
    if (!next) break;
    current = *next;
    kept = std::move(trimmed);
  }
  return current;
}

}  // namespace

bool is_degenerate_sample(std::span<const Correspondence, 4> sample) {
  static constexpr std::array<std::array<int, 3>, 4> kTriples{{{0, 1, 2}, {0, 1, 3}, {0, 2, 3}, {1, 2, 3}}};
  for (const auto& t : kTriples) {
    if (collinear(sample[t[0]].src, sample[t[1]].src, sample[t[2]].src)) return true;
    if (collinear(sample[t[0]].dst, sample[t[1]].dst, sample[t[2]].dst)) return true;
  }
  return false;
}

std::optional<Eigen::Matrix3d> fit_homography_dlt(std::span<const Correspondence> points) {
  if (points.size() < 4) return std::nullopt;
  auto Ts = conditioning(points, false);
  auto Td = conditioning(points, true);
  if (!Ts || !Td) return std::nullopt;

  Eigen::Matrix<double, Eigen::Dynamic, 9> A(2 * points.size(), 9);
  for (std::size_t i = 0; i < points.size(); ++i) {
    Eigen::Vector2d s = (*Ts * points[i].src.homogeneous()).hnormalized();
    Eigen::Vector2d d = (*Td * points[i].dst.homogeneous()).hnormalized();
    const double x = s.x(), y = s.y(), u = d.x(), v = d.y();
    A.row(2 * i) << 0, 0, 0, -x, -y, -1, v * x, v * y, v;
    A.row(2 * i + 1) << x, y, 1, 0, 0, 0, -u * x, -u * y, -u;
  }
  Eigen::Matrix<double, 9, 1> h;
  if (A.rows() == 8) {
    // Minimal case: the null vector of the 8x9 system.
    Eigen::FullPivLU<Eigen::Matrix<double, 8, 9>> lu(A.topRows<8>());
    if (lu.rank() < 8) return std::nullopt;
    h = lu.kernel().col(0);
  } else {
    Eigen::JacobiSVD<Eigen::MatrixXd> svd(A, Eigen::ComputeThinV);
    h = svd.matrixV().col(8);
  }
  Eigen::Matrix3d Hn;
  Hn << h(0), h(1), h(2), h(3), h(4), h(5), h(6), h(7), h(8);
  Eigen::Matrix3d H = Td->inverse() * Hn * *Ts;
  if (!H.allFinite() || std::fabs(H.determinant()) < 1e-15 * std::pow(H.norm(), 3)) return std::nullopt;
  return normalize_homography(H);
}

HomographyFit estimate_homography_ransac(std::span<const Correspondence> points, const RansacParams& params,
                                         std::uint64_t seed) {
  if (points.size() < 4) throw ValidationError("RANSAC needs at least 4 correspondences");
  if (params.iterations < 1 || !(params.threshold_px > 0.0)) throw ValidationError("invalid RANSAC parameters");

  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<std::size_t> pick(0, points.size() - 1);

  HomographyFit fit;
  std::optional<Eigen::Matrix3d> best;
  std::size_t best_count = 0;
  for (int iter = 0; iter < params.iterations; ++iter) {
    std::array<std::size_t, 4> idx{};
    for (int k = 0; k < 4; ++k) {
      std::size_t candidate;
      do {
        candidate = pick(rng);
      } while (std::find(idx.begin(), idx.begin() + k, candidate) != idx.begin() + k);
      idx[k] = candidate;
    }
    std::array<Correspondence, 4> sample{points[idx[0]], points[idx[1]], points[idx[2]], points[idx[3]]};
    if (is_degenerate_sample(sample)) {
      ++fit.degenerate_samples;
      continue;
    }
    auto H = fit_homography_dlt(sample);
    if (!H) {
      ++fit.degenerate_samples;
      continue;
    }
    std::size_t count = 0;
    for (const auto& c : points) count += reprojection_error(*H, c) < params.threshold_px ? 1 : 0;
    if (!best || count > best_count) {
      best = *H;
      best_count = count;
    }
  }
  if (!best) throw ValidationError("RANSAC: every minimal sample was degenerate");

  // Least-squares refit on the consensus set. Residual outliers of each refit
  // are trimmed; the consensus set is then rebuilt against the refined H.
  Eigen::Matrix3d current = *best;
  std::vector<bool> mask = inlier_mask_for(current, points, params.threshold_px);
  for (int outer = 0; outer < 5; ++outer) {
    std::vector<std::size_t> consensus;
    for (std::size_t i = 0; i < points.size(); ++i) {
      if (mask[i]) consensus.push_back(i);
    }
    auto refined = refit_trimmed(points, consensus, params.threshold_px);
    if (!refined) break;
    auto next_mask = inlier_mask_for(*refined, points, params.threshold_px);
    if (count_true(next_mask) < 4) break;
    current = *refined;
    bool stable = next_mask == mask;
    mask = std::move(next_mask);
    if (stable) break;
  }
  fit.H = normalize_homography(current);
  fit.inlier_mask = inlier_mask_for(fit.H, points, params.threshold_px);
  const std::size_t chosen_count = count_true(fit.inlier_mask);
  fit.inlier_ratio = static_cast<double>(chosen_count) / static_cast<double>(points.size());
  return fit;
}

HomographyFit estimate_homography_ransac(const FlowField& flow, const RansacParams& params, std::uint64_t seed) {
  auto points = flow_correspondences(flow, params.grid_stride);
  return estimate_homography_ransac(points, params, seed);
}

}  // namespace sparkle::motion

#pragma once

#include <Eigen/Core>
#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "sparkle/motion/flow.hpp"

namespace sparkle::motion {

/// A point in frame a and its flow-predicted position in frame b.
struct Correspondence {
  Eigen::Vector2d src;
  Eigen::Vector2d dst;
};

struct RansacParams {
  int iterations = 1000;
  double threshold_px = 3.0;
  int grid_stride = 4;
};

struct HomographyFit {
  Eigen::Matrix3d H = Eigen::Matrix3d::Identity();
  double inlier_ratio = 0.0;
  std::vector<bool> inlier_mask;
  /// Minimal samples rejected as degenerate (they still count as iterations).
  int degenerate_samples = 0;

  std::size_t inlier_count() const;
};

/// Grid points (x, y) for x, y = 0, stride, 2*stride, ... mapped to (x + u, y + v).
std::vector<Correspondence> flow_correspondences(const FlowField& flow, int stride);

/// Scales H so H(2,2) = 1 whenever |H(2,2)| > 1e-9.
Eigen::Matrix3d normalize_homography(const Eigen::Matrix3d& H);

/// Euclidean distance between H * src (dehomogenized) and dst; +inf when the
/// point maps to infinity.
double reprojection_error(const Eigen::Matrix3d& H, const Correspondence& c);

/// Normalized DLT (Hartley conditioning, SVD null vector). Least squares when
/// more than four points are given. Empty when the system is degenerate.
std::optional<Eigen::Matrix3d> fit_homography_dlt(std::span<const Correspondence> points);

/// True when three of the four source or destination points are (nearly) collinear.
bool is_degenerate_sample(std::span<const Correspondence, 4> sample);

/// RANSAC over 4-point normalized-DLT fits, then a least-squares refit on the
/// consensus set. Residual outliers of the refit are trimmed (scaled MAD) and
/// the fit repeated until the set is stable. The returned mask is always the
/// threshold test against the returned H. Deterministic for a fixed seed.
HomographyFit estimate_homography_ransac(std::span<const Correspondence> points, const RansacParams& params,
                                         std::uint64_t seed);
HomographyFit estimate_homography_ransac(const FlowField& flow, const RansacParams& params, std::uint64_t seed);

}  // namespace sparkle::motion

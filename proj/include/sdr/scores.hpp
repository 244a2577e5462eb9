#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <vector>

namespace sdr {

enum class Density { kNormal, kKernel, kElliptic };

/// Log-density gradient field evaluated at the sample points, plus the
/// density estimates and the low-density indicator used to trim pairs.
struct ScoreField {
  Density assumption = Density::kNormal;
  double h = 0.0;            // bandwidth, kernel/elliptic only
  Eigen::MatrixXd g;         // n x p score evaluations
  Eigen::VectorXd fhat;      // n density estimates
  std::vector<std::uint8_t> indicator;  // 1 iff fhat > threshold
  double threshold = 0.0;    // the b actually applied
  int underflow_count = 0;   // points whose density underflowed to zero
  int zero_radius_count = 0; // elliptic points at (numerically) zero radius

  int active_count() const {
    int c = 0;
    for (auto v : indicator) c += v;
    return c;
  }
};

/// Scores under the standard-normal assumption on whitened data: g = -Z.
/// No trimming (threshold 0).
ScoreField normal_score(const Eigen::MatrixXd& Z);

/// Gaussian-product-kernel density scores with bandwidth h, evaluated at the
/// sample points. Points whose density underflows keep a zero score and a
/// zero indicator instead of failing. Threshold defaults to the 1% empirical
/// quantile of fhat.
ScoreField kernel_score(const Eigen::MatrixXd& Z, double h);

/// Elliptic-contour scores: a univariate Gaussian kernel density over the
/// radii r_i = |z_i| drives g(z) = (z/r) f'(r)/f(r) - ((p-1)/r^2) z. Points
/// with r below 1e-8 get a zero score and are counted, not errored.
ScoreField elliptic_score(const Eigen::MatrixXd& Z, double h);

ScoreField make_scores(const Eigen::MatrixXd& Z, Density density, double h);

/// indicator[i] = 1 iff fhat[i] > b.
std::vector<std::uint8_t> apply_threshold(const Eigen::VectorXd& fhat, double b);

/// Pointwise kernel density and density gradient at an arbitrary point;
/// exposed so finite-difference checks can probe off-sample locations.
double kernel_density_at(const Eigen::MatrixXd& Z, double h,
                         const Eigen::VectorXd& z0);
Eigen::VectorXd kernel_density_grad_at(const Eigen::MatrixXd& Z, double h,
                                       const Eigen::VectorXd& z0);

}  // namespace sdr

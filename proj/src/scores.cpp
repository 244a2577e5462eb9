#include "sdr/scores.hpp"

#include <cmath>
#include <stdexcept>

#include "sdr/linalg.hpp"

namespace sdr {

namespace {

constexpr double kTwoPi = 6.283185307179586476925287;

double gaussian_product_kernel(const Eigen::VectorXd& u) {
  const int p = int(u.size());
  return std::pow(kTwoPi, -0.5 * p) * std::exp(-0.5 * u.squaredNorm());
}

// Default trimming threshold: none for the exact normal case, the 1%
// empirical fhat quantile for the nonparametric estimators.
double default_threshold(Density density, const Eigen::VectorXd& fhat) {
  if (density == Density::kNormal) return 0.0;
  std::vector<double> v(fhat.data(), fhat.data() + fhat.size());
  return quantile_type7(std::move(v), 0.01);
}

}  // namespace

std::vector<std::uint8_t> apply_threshold(const Eigen::VectorXd& fhat, double b) {
  std::vector<std::uint8_t> ind(std::size_t(fhat.size()));
  for (int i = 0; i < fhat.size(); ++i) ind[std::size_t(i)] = fhat[i] > b ? 1 : 0;
  return ind;
}

ScoreField normal_score(const Eigen::MatrixXd& Z) {
  const int p = int(Z.cols());
  ScoreField s;
  s.assumption = Density::kNormal;
  s.g = -Z;
  s.fhat.resize(Z.rows());
  const double norm_const = std::pow(kTwoPi, -0.5 * p);
  for (int i = 0; i < Z.rows(); ++i)
    s.fhat[i] = norm_const * std::exp(-0.5 * Z.row(i).squaredNorm());
  s.threshold = 0.0;
  s.indicator = apply_threshold(s.fhat, s.threshold);
  return s;
}

double kernel_density_at(const Eigen::MatrixXd& Z, double h,
                         const Eigen::VectorXd& z0) {
  const int n = int(Z.rows());
  const int p = int(Z.cols());
  double sum = 0.0;
  for (int l = 0; l < n; ++l)
    sum += gaussian_product_kernel((z0 - Z.row(l).transpose()) / h);
  return sum / (double(n) * std::pow(h, p));
}

Eigen::VectorXd kernel_density_grad_at(const Eigen::MatrixXd& Z, double h,
                                       const Eigen::VectorXd& z0) {
  const int n = int(Z.rows());
  const int p = int(Z.cols());
  Eigen::VectorXd sum = Eigen::VectorXd::Zero(p);
  for (int l = 0; l < n; ++l) {
    const Eigen::VectorXd u = (z0 - Z.row(l).transpose()) / h;
    // dK/du = -u K(u)
    sum += -u * gaussian_product_kernel(u);
  }
  return sum / (double(n) * std::pow(h, p + 1));
}

ScoreField kernel_score(const Eigen::MatrixXd& Z, double h) {
  if (!(h > 0.0)) throw std::invalid_argument("kernel bandwidth must be positive");
  if (Z.rows() < 2) throw std::invalid_argument("kernel score needs n >= 2");
  const int n = int(Z.rows());
  const int p = int(Z.cols());

  ScoreField s;
  s.assumption = Density::kKernel;
  s.h = h;
  s.g.setZero(n, p);
  s.fhat.resize(n);

  for (int i = 0; i < n; ++i) {
    const Eigen::VectorXd z0 = Z.row(i).transpose();
    const double f = kernel_density_at(Z, h, z0);
    s.fhat[i] = f;
    if (f > 0.0) {
      s.g.row(i) = kernel_density_grad_at(Z, h, z0).transpose() / f;
    } else {
      ++s.underflow_count;  // score stays zero, indicator forced off below
    }
  }

  s.threshold = default_threshold(Density::kKernel, s.fhat);
  s.indicator = apply_threshold(s.fhat, s.threshold);
  for (int i = 0; i < n; ++i)
    if (!(s.fhat[i] > 0.0)) s.indicator[std::size_t(i)] = 0;
  return s;
}

ScoreField elliptic_score(const Eigen::MatrixXd& Z, double h) {
  if (!(h > 0.0)) throw std::invalid_argument("kernel bandwidth must be positive");
  const int n = int(Z.rows());
  const int p = int(Z.cols());

  Eigen::VectorXd r(n);
  for (int i = 0; i < n; ++i) r[i] = Z.row(i).norm();

  // Univariate Gaussian KDE over the radii and its analytic derivative.
  auto radius_density = [&](double r0) {
    double sum = 0.0;
    for (int l = 0; l < n; ++l) {
      const double u = (r0 - r[l]) / h;
      sum += std::exp(-0.5 * u * u);
    }
    return sum / (double(n) * h * std::sqrt(kTwoPi));
  };
  auto radius_density_deriv = [&](double r0) {
    double sum = 0.0;
    for (int l = 0; l < n; ++l) {
      const double u = (r0 - r[l]) / h;
      sum += -u * std::exp(-0.5 * u * u);
    }
    return sum / (double(n) * h * h * std::sqrt(kTwoPi));
  };

  ScoreField s;
  s.assumption = Density::kElliptic;
  s.h = h;
  s.g.setZero(n, p);
  s.fhat.resize(n);
  for (int i = 0; i < n; ++i) {
    const double f = radius_density(r[i]);
    s.fhat[i] = f;
    if (r[i] < 1e-8) {
      ++s.zero_radius_count;  // leave the score at zero
      continue;
    }
    const double ratio = f > 0.0 ? radius_density_deriv(r[i]) / f : 0.0;
    if (!(f > 0.0)) ++s.underflow_count;
    s.g.row(i) = (ratio / r[i] - (p - 1) / (r[i] * r[i])) * Z.row(i);
  }

  s.threshold = default_threshold(Density::kElliptic, s.fhat);
  s.indicator = apply_threshold(s.fhat, s.threshold);
  for (int i = 0; i < n; ++i)
    if (!(s.fhat[i] > 0.0)) s.indicator[std::size_t(i)] = 0;
  return s;
}

ScoreField make_scores(const Eigen::MatrixXd& Z, Density density, double h) {
  switch (density) {
    case Density::kNormal:
      return normal_score(Z);
    case Density::kKernel:
      return kernel_score(Z, h);
    case Density::kElliptic:
      return elliptic_score(Z, h);
  }
  throw std::invalid_argument("unknown density assumption");
}

}  // namespace sdr

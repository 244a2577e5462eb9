#include "sdr/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "sdr/errors.hpp"

namespace sdr {

SymEig sym_eig_descending(const Eigen::MatrixXd& S) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(S);
  const int p = int(S.rows());
  SymEig out;
  out.values.resize(p);
  out.vectors.resize(p, p);
  // Eigen returns ascending order; reverse it.
  for (int k = 0; k < p; ++k) {
    out.values[k] = solver.eigenvalues()[p - 1 - k];
    out.vectors.col(k) = solver.eigenvectors().col(p - 1 - k);
  }
  // Sign convention: largest-magnitude component positive.
  for (int k = 0; k < p; ++k) {
    int imax = 0;
    double amax = -1.0;
    for (int i = 0; i < p; ++i) {
      const double a = std::abs(out.vectors(i, k));
      if (a > amax) {
        amax = a;
        imax = i;
      }
    }
    if (out.vectors(imax, k) < 0.0) out.vectors.col(k) = -out.vectors.col(k);
  }
  return out;
}

Eigen::MatrixXd sample_covariance(const Eigen::MatrixXd& X) {
  const auto n = X.rows();
  Eigen::RowVectorXd mean = X.colwise().mean();
  Eigen::MatrixXd centered = X.rowwise() - mean;
  return centered.transpose() * centered / double(n - 1);
}

Eigen::MatrixXd inverse_sqrt(const Eigen::MatrixXd& S) {
  const SymEig eig = sym_eig_descending(S);
  const double lmax = eig.values.size() > 0 ? eig.values[0] : 0.0;
  const double cutoff = kRankTol * std::max(lmax, 0.0);
  for (int k = 0; k < eig.values.size(); ++k) {
    if (!(eig.values[k] > cutoff)) throw SingularCovariance(eig.values[k]);
  }
  Eigen::VectorXd inv_sqrt = eig.values.array().rsqrt();
  return eig.vectors * inv_sqrt.asDiagonal() * eig.vectors.transpose();
}

double quantile_type7(std::vector<double> v, double prob) {
  if (v.empty()) return std::numeric_limits<double>::quiet_NaN();
  std::sort(v.begin(), v.end());
  const double n = double(v.size());
  if (prob <= 0.0) return v.front();
  if (prob >= 1.0) return v.back();
  const double pos = (n - 1.0) * prob;
  const auto lo = std::size_t(std::floor(pos));
  const double frac = pos - double(lo);
  if (lo + 1 >= v.size()) return v.back();
  return v[lo] + frac * (v[lo + 1] - v[lo]);
}

namespace {

// Regularized lower incomplete gamma by series expansion (x < a + 1).
double gamma_p_series(double a, double x) {
  double ap = a;
  double sum = 1.0 / a;
  double del = sum;
  for (int i = 0; i < 1000; ++i) {
    ap += 1.0;
    del *= x / ap;
    sum += del;
    if (std::abs(del) < std::abs(sum) * 1e-16) break;
  }
  return sum * std::exp(-x + a * std::log(x) - std::lgamma(a));
}

// Regularized upper incomplete gamma by Lentz continued fraction (x >= a + 1).
double gamma_q_cf(double a, double x) {
  const double tiny = 1e-300;
  double b = x + 1.0 - a;
  double c = 1.0 / tiny;
  double d = 1.0 / b;
  double h = d;
  for (int i = 1; i <= 1000; ++i) {
    const double an = -double(i) * (double(i) - a);
    b += 2.0;
    d = an * d + b;
    if (std::abs(d) < tiny) d = tiny;
    c = b + an / c;
    if (std::abs(c) < tiny) c = tiny;
    d = 1.0 / d;
    const double del = d * c;
    h *= del;
    if (std::abs(del - 1.0) < 1e-16) break;
  }
  return std::exp(-x + a * std::log(x) - std::lgamma(a)) * h;
}

}  // namespace

double gamma_q(double a, double x) {
  if (x < 0.0 || a <= 0.0) return std::numeric_limits<double>::quiet_NaN();
  if (x == 0.0) return 1.0;
  if (x < a + 1.0) return 1.0 - gamma_p_series(a, x);
  return gamma_q_cf(a, x);
}

double chi2_sf(double x, double dof) {
  if (dof <= 0.0) return std::numeric_limits<double>::quiet_NaN();
  if (x <= 0.0) return 1.0;
  return gamma_q(0.5 * dof, 0.5 * x);
}

namespace {

// Orthonormal column basis. Throws when rank < cols at relative tol 1e-10.
Eigen::MatrixXd orthonormal_basis(const Eigen::MatrixXd& A) {
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(A, Eigen::ComputeThinU);
  const auto& sv = svd.singularValues();
  if (sv.size() == 0) throw RankDeficientBasis();
  const double smax = sv[0];
  for (int i = 0; i < sv.size(); ++i) {
    if (!(sv[i] > 1e-10 * smax)) throw RankDeficientBasis();
  }
  return svd.matrixU();
}

}  // namespace

double trace_correlation(const Eigen::MatrixXd& A, const Eigen::MatrixXd& B,
                         int d) {
  const Eigen::MatrixXd Qa = orthonormal_basis(A);
  const Eigen::MatrixXd Qb = orthonormal_basis(B);
  if (d <= 0) d = int(std::max(A.cols(), B.cols()));
  // tr(P_A P_B) = ||Qa^T Qb||_F^2
  const double tr = (Qa.transpose() * Qb).squaredNorm();
  const double gamma = std::sqrt(std::max(tr, 0.0) / double(d));
  return std::min(gamma, 1.0);
}

double subspace_distance(const Eigen::MatrixXd& A, const Eigen::MatrixXd& B,
                         int d) {
  return 1.0 - trace_correlation(A, B, d);
}

}  // namespace sdr

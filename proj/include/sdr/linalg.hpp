#pragma once

#include <Eigen/Dense>
#include <vector>

namespace sdr {

/// Relative eigenvalue cutoff below which a symmetric matrix counts as
/// singular: lambda < kRankTol * lambda_max.
inline constexpr double kRankTol = 1e-10;

struct SymEig {
  Eigen::VectorXd values;   // descending
  Eigen::MatrixXd vectors;  // columns match values
};

/// Eigendecomposition of a symmetric matrix with eigenvalues sorted
/// descending and each eigenvector's largest-magnitude entry made positive,
/// so results are reproducible across runs and platforms.
SymEig sym_eig_descending(const Eigen::MatrixXd& S);

/// Sample covariance with divisor n-1.
Eigen::MatrixXd sample_covariance(const Eigen::MatrixXd& X);

/// Symmetric inverse square root via spectral decomposition. Throws
/// SingularCovariance when an eigenvalue falls below kRankTol * max.
Eigen::MatrixXd inverse_sqrt(const Eigen::MatrixXd& S);

/// Type-7 (linear interpolation) empirical quantile, prob in [0, 1].
double quantile_type7(std::vector<double> v, double prob);

/// Regularized upper incomplete gamma Q(a, x).
double gamma_q(double a, double x);

/// Chi-square survival function P(X > x) with (possibly fractional) dof.
double chi2_sf(double x, double dof);

/// sqrt(tr(P_A P_B) / d) for column-space projectors of A and B. Throws
/// RankDeficientBasis when either matrix is column-rank deficient at
/// relative tolerance 1e-10. When d == 0 uses max(cols(A), cols(B)).
double trace_correlation(const Eigen::MatrixXd& A, const Eigen::MatrixXd& B,
                         int d = 0);

/// 1 - trace_correlation.
double subspace_distance(const Eigen::MatrixXd& A, const Eigen::MatrixXd& B,
                         int d = 0);

}  // namespace sdr

#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <optional>
#include <vector>

#include "sdr/data.hpp"

namespace sdr {

/// Knobs of the iterated ADMM sparse estimator. The iteration caps mirror the
/// reference interface: noB inner ADMM steps per Gamma update, noC outer
/// C/Gamma sweeps, noW weight rounds (2 = one reweighting).
struct AdmmConfig {
  std::optional<double> lambda;  // absent = choose by cross-validation
  double rho = 1.0;
  double eps = 1e-6;
  int noB = 5;
  int noC = 20;
  int noW = 2;
  Eigen::VectorXd weights;  // initial row weights; empty = all ones
  bool sparse_cov = false;  // soft-threshold the off-diagonal covariance
  bool scale_x = false;     // standardize predictor columns first
  int cv_folds = 5;
  int cv_grid = 20;
  std::uint64_t seed = 2024;
};

/// Row-sparse solution. Gamma rows outside active_set are exactly zero.
struct SparseSolution {
  Eigen::MatrixXd Gamma;  // p x d, row-sparse
  Eigen::MatrixXd C;      // d x 2k, C C^T = I
  std::vector<int> active_set;
  std::vector<double> objective_trace;  // penalized objective per outer sweep
  double lambda = 0.0;                  // the value actually used
  double lambda_max = 0.0;              // smallest lambda zeroing all rows
  bool converged = true;
  double primal_residual = 0.0;  // |Gamma - A|_F at termination
  double dual_residual = 0.0;    // |rho (A_prev - A)|_F at termination
};

/// max(1 - t/|v|, 0) * v; exact zero when |v| <= t.
Eigen::VectorXd row_soft_threshold(const Eigen::VectorXd& v, double t);

/// One warm-started run of the scaled-ADMM Gamma subproblem
/// (0.5 |S^{1/2} xi - S^{1/2} Gamma C|_F^2 + sum_j lambda w_j |A_j.|) given C.
/// `solver` must hold the Cholesky factor of (Sigma + rho I). Returns whether
/// both residuals dropped below eps within max_steps.
struct AdmmState {
  Eigen::MatrixXd A;
  Eigen::MatrixXd U;
};
bool admm_gamma_update(const Eigen::LLT<Eigen::MatrixXd>& solver,
                       const Eigen::MatrixXd& XiC /* p x d */,
                       const Eigen::VectorXd& lambda_rows, double rho,
                       double eps, int max_steps, Eigen::MatrixXd& Gamma,
                       AdmmState& state, double* primal_out = nullptr,
                       double* dual_out = nullptr);

/// Polar C-update: C = W2 W1^T from the SVD of Xi^T Gamma. Always satisfies
/// C C^T = I; a collapsed spectrum is completed with an arbitrary orthonormal
/// extension.
Eigen::MatrixXd admm_c_update(const Eigen::MatrixXd& Xi_hat,
                              const Eigen::MatrixXd& Gamma);

/// Entrywise soft threshold of the off-diagonal covariance entries at
/// 2 sqrt(log p / n) * max diagonal.
Eigen::MatrixXd soft_threshold_covariance(const Eigen::MatrixXd& sigma, int n);

/// Iterated ADMM sparse inverse-regression estimator with m internally drawn
/// frequencies. When cfg.lambda is absent, lambda comes from cv_folds-fold
/// cross-validation over cv_grid log-spaced values in [1e-3, 1] * lambda_max.
SparseSolution admmft(const Dataset& data, int d, int m, AdmmConfig cfg = {});

}  // namespace sdr

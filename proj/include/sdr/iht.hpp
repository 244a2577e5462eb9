#pragma once

#include <Eigen/Dense>

#include "sdr/data.hpp"
#include "sdr/subspace.hpp"

namespace sdr {

/// Moment matrices and the iterated-moment (COZY) columns of the IHT method.
/// M holds the raw power sequence so the recursion M[:,j+1] = sigma_yzz M[:,j]
/// is exact; Psi is built from the same columns with a norm clamp that only
/// engages when a power would overflow.
struct IhtState {
  Eigen::VectorXd gamma_yz;  // p
  Eigen::MatrixXd sigma_yzz; // p x p
  Eigen::MatrixXd M;         // p x p raw COZY columns
  Eigen::MatrixXd Psi;       // p x p
};

/// First- and second-moment statistics: gamma = mean(y_i z_i),
/// sigma = mean(y_i z_i z_i^T). Univariate response.
IhtState iht_moments(const StandardizedSample& sample, const Eigen::VectorXd& y);

/// Raw COZY power columns (gamma, S gamma, ..., S^{p-1} gamma).
Eigen::MatrixXd cozy_matrix(const Eigen::VectorXd& gamma,
                            const Eigen::MatrixXd& sigma_yzz);

/// Full IHT estimate: spectral basis of Psi back-transformed to the original
/// predictor scale. Throws ZeroCozy when |gamma_yz| < 1e-12. Uses the raw
/// response by default; set standardize_y to feed the scaled one.
SubspaceBasis iht_estimate(const StandardizedSample& sample, int d,
                           bool standardize_y = false,
                           IhtState* state_out = nullptr);

}  // namespace sdr

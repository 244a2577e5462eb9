#pragma once

#include <Eigen/Dense>

#include "sdr/itm.hpp"

namespace sdr {

/// Estimated basis of an SDR subspace in the original predictor scale.
/// eigvals holds the d leading eigenvalues backing the basis; full_spectrum
/// the whole descending spectrum of the candidate matrix.
struct SubspaceBasis {
  Eigen::MatrixXd B;             // p x d
  Eigen::VectorXd eigvals;       // d, descending
  Eigen::VectorXd full_spectrum; // p, descending
};

/// Leading-d eigenvectors of M back-transformed by sigma_inv_sqrt
/// (Span{Sigma^{-1/2} e_1, ..., Sigma^{-1/2} e_d}).
SubspaceBasis extract_basis(const Eigen::MatrixXd& M, int d,
                            const Eigen::MatrixXd& sigma_inv_sqrt);

SubspaceBasis extract_basis(const CandidateMatrix& M, int d,
                            const Eigen::MatrixXd& sigma_inv_sqrt);

}  // namespace sdr

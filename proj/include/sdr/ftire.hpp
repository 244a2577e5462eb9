#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "sdr/data.hpp"
#include "sdr/invfm.hpp"

namespace sdr {

enum class FtKind { kIre, kDire, kSire, kRire, kDrire };

std::string to_string(FtKind k);

/// Sample inverse-regression coefficients xi_r = Sigma^{-1} cov(e^{i w y}, x)
/// split into real/imaginary column pairs, plus the per-sample residuals
/// feeding the covariance-based inner products.
struct XiEstimate {
  Eigen::MatrixXd xi_hat;     // p x 2k, (R_1, I_1, R_2, I_2, ...)
  Eigen::MatrixXd residuals;  // n x 2k, OLS residuals of e^{i w y} on z
  Eigen::MatrixXd residuals_centered_only;  // n x 2k, e^{i w y} - mean
  Eigen::MatrixXd sigma_hat;        // p x p
  Eigen::MatrixXd sigma_inv_sqrt;   // p x p
  Eigen::MatrixXd Z;                // n x p whitened predictors
  FourierDesign design;

  int p() const { return int(xi_hat.rows()); }
  int k() const { return design.k(); }
  int n() const { return int(Z.rows()); }
};

XiEstimate xi_hat(const Dataset& data, const FourierDesign& design);

/// Inner-product matrix of the quadratic discrepancy, stored in whichever
/// structure the estimator kind produces: one dense (2kp)^2 matrix, a
/// block-diagonal list over frequency groups, or I_{2k} (x) Sigma.
struct InnerProduct {
  FtKind kind = FtKind::kSire;
  // Dense representation (FT-IRE / FT-RIRE).
  std::optional<Eigen::MatrixXd> dense;
  // Block-diagonal representation (FT-DIRE / FT-DRIRE): blocks[l] is the
  // (2 k_l p)^2 inverse covariance of frequency group l.
  std::vector<Eigen::MatrixXd> blocks;
  std::vector<int> block_freqs;  // k_l per block, summing to k
  // Kronecker representation (FT-SIRE): V = I_{2k} (x) kron_sigma.
  std::optional<Eigen::MatrixXd> kron_sigma;
  bool ridge_used = false;
  int p = 0;
  int k = 0;
};

/// Builds V for the requested estimator. blocks (frequency-group sizes) only
/// matter for the degenerated kinds and default to singleton groups. A
/// singular covariance gets the documented ridge fallback, reported via
/// ridge_used.
InnerProduct build_inner_product(const XiEstimate& xi, FtKind kind,
                                 const std::vector<int>& blocks = {});

/// Alternating minimizer state of |vec(xi) - vec(Gamma C)|_V^2.
struct QdfSolution {
  Eigen::MatrixXd Gamma;  // p x d, orthonormal columns
  Eigen::MatrixXd C;      // d x 2k
  double objective = 0.0;
  std::vector<double> objective_trace;  // one entry per outer sweep
  int iterations = 0;
  bool converged = false;
  double max_orth_error = 0.0;  // worst |Gamma^T Gamma - I| over iterates
};

/// Alternating C / Gamma-column minimization with exact subproblem solves.
/// Stops when max(|dGamma|_F^2, |dC|_F^2) < 1e-6 or after max_sweeps.
QdfSolution minimize_qdf(const XiEstimate& xi, const InnerProduct& V, int d,
                         const std::optional<Eigen::MatrixXd>& init = {},
                         int max_sweeps = 500);

struct FtireResult {
  QdfSolution solution;
  SubspaceBasis basis;       // B = Gamma, eigvals = singular values backing it
  InvfmResult init;          // the Fourier-method start
  bool ridge_used = false;
};

/// Full minimum-discrepancy estimator: draw m frequencies, build xi and the
/// kind's inner product, start from the Fourier-method estimate, minimize.
FtireResult fm_xire(const Dataset& data, int d, int m, FtKind kind,
                    std::uint64_t seed = 2024,
                    const std::vector<int>& blocks = {});

/// fm_xire on a caller-supplied design (shared-frequency comparisons).
FtireResult fm_xire_with_design(const Dataset& data, int d,
                                const FourierDesign& design, FtKind kind,
                                const std::vector<int>& blocks = {});

}  // namespace sdr

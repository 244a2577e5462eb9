#pragma once

#include <Eigen/Dense>
#include <complex>
#include <cstdint>
#include <vector>

#include "sdr/data.hpp"
#include "sdr/subspace.hpp"

namespace sdr {

/// Frequency vectors for the Fourier inverse-regression transforms; one
/// column per frequency, q rows.
struct FourierDesign {
  Eigen::MatrixXd W;  // q x k
  std::uint64_t seed = 0;  // set when internally generated

  int k() const { return int(W.cols()); }
};

/// k iid N(0, sd^2)^q frequency columns drawn from the counter generator.
FourierDesign make_design(int q, int k, std::uint64_t seed, double sd = 1.0);

/// Kernel dimension-reduction matrix V = Omega Omega^T built from the real
/// and imaginary parts of psi(omega_r) = mean(exp(i w^T y) z). Z and CS keep
/// the per-sample factors (whitened predictors and cos/sin phases) that the
/// dimension tests need for their noise-scale estimate.
struct InvfmKernel {
  Eigen::MatrixXd Omega_hat;  // p x 2k, (a_1, b_1, a_2, b_2, ...)
  Eigen::MatrixXd V_hat;      // p x p
  Eigen::VectorXd spectrum;   // p, descending eigenvalues of V_hat
  Eigen::MatrixXd eigvecs;    // p x p, columns match spectrum
  Eigen::MatrixXd Z;          // n x p
  Eigen::MatrixXd CS;         // n x 2k, cos/sin phases per frequency
  double trace_v = 0.0;
  int n = 0;
  bool degenerate = false;    // every eigenvalue numerically zero
};

/// Sample characteristic-moment vector psi(w) = n^{-1} sum exp(i w^T y_j) z_j
/// with whitened z and the raw (unscaled) response.
Eigen::VectorXcd psi_hat(const Eigen::MatrixXd& Z, const Eigen::MatrixXd& Y,
                         const Eigen::VectorXd& w);

InvfmKernel build_invfm_kernel(const StandardizedSample& sample,
                               const FourierDesign& design);

struct InvfmResult {
  SubspaceBasis basis;
  InvfmKernel kernel;
};

/// Whiten, transform, eigendecompose, back-transform. When scale_x is false
/// the predictor columns keep their original scale (they are still centered
/// and whitened inside the algorithm).
InvfmResult invfm_estimate(const Dataset& data, int d,
                           const FourierDesign& design, bool scale_x = true);

/// Dimension-hypothesis test report at hypothesized dimension m.
struct DimensionTestReport {
  int m = 0;
  double lambda_stat = 0.0;    // n * sum of trailing eigenvalues
  double scaled_stat = 0.0;
  double adjusted_stat = 0.0;
  double weighted_pvalue = 0.0;  // Monte Carlo approximation
  double scaled_pvalue = 0.0;
  double adjusted_pvalue = 0.0;
  int p_star = 0;               // (p - m)(2k - m)
  double s_star = 0.0;          // tr(W)^2 / tr(W^2) of the noise covariance
  double trace_w = 0.0;         // trace of the projected noise covariance
};

/// Tests H0: d = m against d > m. The scaled and adjusted statistics divide
/// by the per-degree-of-freedom trace of the projected covariance of the
/// trailing kernel block, estimated from per-sample influence terms. The
/// weighted chi-square null has no closed form computable from the kernel
/// alone and is approximated by Monte Carlo with weights n * trailing
/// eigenvalues.
DimensionTestReport dimension_tests(const InvfmKernel& kernel, int n, int m,
                                    int mc_draws = 100000,
                                    std::uint64_t mc_seed = 2024);

enum class TestKind { kWeighted, kScaled, kAdjusted };

struct SequentialTestResult {
  int d_hat = 0;
  bool stopped = false;  // false when every m up to the cap rejected
  std::vector<DimensionTestReport> reports;
};

/// Runs m = 0, 1, ... until the chosen test stops rejecting at the given
/// level, mirroring the usual sequential dimension-selection loop.
SequentialTestResult sequential_dimension_test(
    const InvfmKernel& kernel, int n, double level = 0.05,
    TestKind kind = TestKind::kScaled, int mc_draws = 100000,
    std::uint64_t mc_seed = 2024);

}  // namespace sdr

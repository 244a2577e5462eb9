#pragma once

#include <Eigen/Dense>
#include <string>

#include "sdr/data.hpp"
#include "sdr/scores.hpp"

namespace sdr {

enum class Space { kMean, kPdf };    // target: CMS vs CS
enum class Method { kFM, kCM };      // Fourier vs convolution weight

enum class Recipe { kFMM, kFMC, kCMM, kCMC, kIhtPsi, kInvfmV };

/// Parameters of the integral-transform candidate matrices.
struct ItmConfig {
  Space space = Space::kMean;
  Method method = Method::kFM;
  double sw2 = 0.1;   // predictor tuning parameter (sigma_u^2)
  double st2 = 1.0;   // response tuning parameter (sigma_v^2), CS only
  Density density = Density::kNormal;
  double h = 1.0;     // kernel bandwidth, kernel/elliptic densities only
  bool standardize_response = true;  // use scaled responses in the kernels

  Recipe recipe() const {
    if (method == Method::kFM)
      return space == Space::kMean ? Recipe::kFMM : Recipe::kFMC;
    return space == Space::kMean ? Recipe::kCMM : Recipe::kCMC;
  }
};

std::string to_string(Recipe r);
std::string to_string(Space s);
std::string to_string(Method m);
std::string to_string(Density d);

/// Symmetric nonnegative-definite p x p candidate matrix tagged with the
/// recipe that built it.
struct CandidateMatrix {
  Eigen::MatrixXd M;
  Recipe recipe = Recipe::kFMM;
  Density density = Density::kNormal;
};

/// One Fourier-method pair term targeting the conditional mean:
/// y1 y2 exp(-sw2/2 |u|^2) [sw2 I + (g1 - sw2 u)(g2 + sw2 u)^T], u = z1 - z2.
Eigen::MatrixXd pair_kernel_fmm(const Eigen::VectorXd& z1,
                                const Eigen::VectorXd& z2, double y1, double y2,
                                const Eigen::VectorXd& g1,
                                const Eigen::VectorXd& g2, double sw2);

/// Pair term dispatch for all four recipes (v = y1 - y2 enters the CS ones).
Eigen::MatrixXd pair_kernel(const ItmConfig& cfg, const Eigen::VectorXd& z1,
                            const Eigen::VectorXd& z2, double y1, double y2,
                            const Eigen::VectorXd& g1, const Eigen::VectorXd& g2);

/// Accumulated double sum M = n^{-2} sum_ij U(z_i, z_j) I_i I_j without the
/// final symmetrization; blocked over rows with a fixed schedule so threaded
/// and serial runs match bit for bit. Throws AllPointsTrimmed when every
/// indicator is zero. Requires a univariate response.
Eigen::MatrixXd build_candidate_raw(const StandardizedSample& sample,
                                    const ScoreField& scores,
                                    const ItmConfig& cfg);

/// build_candidate_raw followed by the (M + M^T)/2 symmetrization.
CandidateMatrix build_candidate(const StandardizedSample& sample,
                                const ScoreField& scores, const ItmConfig& cfg);

}  // namespace sdr

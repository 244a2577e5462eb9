#include "sdr/synth.hpp"

#include <cmath>
#include <stdexcept>

#include "sdr/errors.hpp"
#include "sdr/rng.hpp"

namespace sdr {

namespace {

Eigen::MatrixXd default_basis(const SynthSpec& spec) {
  const int d = spec.model == SynthModel::kDoubleIndex ? 2 : 1;
  Eigen::MatrixXd B = Eigen::MatrixXd::Zero(spec.p, d);
  switch (spec.model) {
    case SynthModel::kLinear:
    case SynthModel::kCubicSingleIndex:
      B(0, 0) = 1.0;
      break;
    case SynthModel::kDoubleIndex:
      B(0, 0) = 1.0;
      B(1, 1) = 1.0;
      break;
    case SynthModel::kSparseSupport:
      B(0, 0) = 1.0 / std::sqrt(2.0);
      B(1, 0) = 1.0 / std::sqrt(2.0);
      break;
  }
  return B;
}

}  // namespace

SynthResult generate(const SynthSpec& spec) {
  if (spec.n < 2 || spec.p < 1) throw std::invalid_argument("bad synth sizes");
  if (spec.noise_sd < 0.0) throw std::invalid_argument("negative noise sd");

  Eigen::MatrixXd B = spec.true_basis.size() > 0 ? spec.true_basis
                                                 : default_basis(spec);
  if (B.rows() != spec.p) throw std::invalid_argument("true_basis row mismatch");

  CounterRng rng(spec.seed);
  Eigen::MatrixXd X(spec.n, spec.p);
  for (int i = 0; i < spec.n; ++i) {
    switch (spec.x_dist) {
      case XDist::kNormal:
        for (int j = 0; j < spec.p; ++j) X(i, j) = rng.normal();
        break;
      case XDist::kEllipticT: {
        // Multivariate t with 5 dof, rescaled to unit covariance.
        constexpr double nu = 5.0;
        const double w = rng.chi_square(5);
        const double scale = std::sqrt(nu / w) * std::sqrt((nu - 2.0) / nu);
        for (int j = 0; j < spec.p; ++j) X(i, j) = scale * rng.normal();
        break;
      }
      case XDist::kUniform: {
        const double half = std::sqrt(3.0);  // unit variance
        for (int j = 0; j < spec.p; ++j)
          X(i, j) = (2.0 * rng.uniform() - 1.0) * half;
        break;
      }
    }
  }

  const int q = std::max(spec.q, 1);
  Eigen::MatrixXd idx = X * B;  // n x d index variables
  Eigen::MatrixXd Y(spec.n, q);
  for (int i = 0; i < spec.n; ++i) {
    double m = 0.0;
    switch (spec.model) {
      case SynthModel::kLinear:
        m = idx(i, 0);
        break;
      case SynthModel::kCubicSingleIndex:
      case SynthModel::kSparseSupport:
        m = std::pow(idx(i, 0), 3);
        break;
      case SynthModel::kDoubleIndex:
        m = std::pow(idx(i, 0), 3) + std::abs(idx(i, 1));
        break;
    }
    Y(i, 0) = m + spec.noise_sd * rng.normal();
    for (int c = 1; c < q; ++c) Y(i, c) = rng.normal();  // nuisance responses
  }

  SynthResult out;
  out.data.X = std::move(X);
  out.data.Y = std::move(Y);
  out.true_basis = std::move(B);
  return out;
}

CandidateMatrix oracle_candidate(const StandardizedSample& sample,
                                 const ScoreField& scores, const ItmConfig& cfg) {
  const int n = sample.n();
  const int p = sample.p();
  if (sample.y_raw.cols() != 1)
    throw std::invalid_argument("candidate matrices need a univariate response");
  const Eigen::VectorXd y =
      cfg.standardize_response ? sample.y_std.col(0) : sample.y_raw.col(0);

  bool any_active = false;
  for (int i = 0; i < n; ++i) any_active |= scores.indicator[std::size_t(i)] != 0;
  if (!any_active) throw AllPointsTrimmed();

  Eigen::MatrixXd M = Eigen::MatrixXd::Zero(p, p);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      if (!scores.indicator[std::size_t(i)] || !scores.indicator[std::size_t(j)])
        continue;
      M += pair_kernel(cfg, sample.Z.row(i).transpose(),
                       sample.Z.row(j).transpose(), y[i], y[j],
                       scores.g.row(i).transpose(), scores.g.row(j).transpose());
    }
  }
  M /= double(n) * double(n);

  CandidateMatrix out;
  out.M = 0.5 * (M + M.transpose());
  out.recipe = cfg.recipe();
  out.density = cfg.density;
  return out;
}

}  // namespace sdr

#include "sdr/itm.hpp"

#include <cmath>
#include <stdexcept>
#include <vector>

#include "sdr/errors.hpp"
#include "sdr/parallel.hpp"

namespace sdr {

std::string to_string(Recipe r) {
  switch (r) {
    case Recipe::kFMM: return "FMM";
    case Recipe::kFMC: return "FMC";
    case Recipe::kCMM: return "CMM";
    case Recipe::kCMC: return "CMC";
    case Recipe::kIhtPsi: return "IHT_PSI";
    case Recipe::kInvfmV: return "INVFM_V";
  }
  return "?";
}

std::string to_string(Space s) { return s == Space::kMean ? "mean" : "pdf"; }
std::string to_string(Method m) { return m == Method::kFM ? "FM" : "CM"; }

std::string to_string(Density d) {
  switch (d) {
    case Density::kNormal: return "normal";
    case Density::kKernel: return "kernel";
    case Density::kElliptic: return "elliptic";
  }
  return "?";
}

Eigen::MatrixXd pair_kernel_fmm(const Eigen::VectorXd& z1,
                                const Eigen::VectorXd& z2, double y1, double y2,
                                const Eigen::VectorXd& g1,
                                const Eigen::VectorXd& g2, double sw2) {
  const Eigen::VectorXd u = z1 - z2;
  const double w = y1 * y2 * std::exp(-0.5 * sw2 * u.squaredNorm());
  Eigen::MatrixXd out = (g1 - sw2 * u) * (g2 + sw2 * u).transpose();
  out.diagonal().array() += sw2;
  out *= w;
  return out;
}

Eigen::MatrixXd pair_kernel(const ItmConfig& cfg, const Eigen::VectorXd& z1,
                            const Eigen::VectorXd& z2, double y1, double y2,
                            const Eigen::VectorXd& g1,
                            const Eigen::VectorXd& g2) {
  const Eigen::VectorXd u = z1 - z2;
  const double usq = u.squaredNorm();
  const double v = y1 - y2;

  double weight = 0.0;
  double coeff = 0.0;  // scale of both the identity term and the u terms
  if (cfg.method == Method::kFM) {
    coeff = cfg.sw2;
    weight = std::exp(-0.5 * cfg.sw2 * usq);
    if (cfg.space == Space::kMean)
      weight *= y1 * y2;
    else
      weight *= std::exp(-0.5 * cfg.st2 * v * v);
  } else {
    coeff = 1.0 / (2.0 * cfg.sw2);
    weight = std::exp(-usq / (4.0 * cfg.sw2));
    if (cfg.space == Space::kMean)
      weight *= y1 * y2;
    else
      weight *= std::exp(-v * v / (4.0 * cfg.st2));
  }

  Eigen::MatrixXd out = (g1 - coeff * u) * (g2 + coeff * u).transpose();
  out.diagonal().array() += coeff;
  out *= weight;
  return out;
}

namespace {
constexpr int kRowBlock = 128;
}

Eigen::MatrixXd build_candidate_raw(const StandardizedSample& sample,
                                    const ScoreField& scores,
                                    const ItmConfig& cfg) {
  const int n = sample.n();
  const int p = sample.p();
  if (sample.y_raw.cols() != 1)
    throw std::invalid_argument("candidate matrices need a univariate response");
  if (!(cfg.sw2 > 0.0)) throw std::invalid_argument("sw2 must be positive");
  if (cfg.space == Space::kPdf && !(cfg.st2 > 0.0))
    throw std::invalid_argument("st2 must be positive for the CS target");
  if (scores.g.rows() != n)
    throw std::invalid_argument("score field does not match the sample");

  const Eigen::VectorXd y =
      cfg.standardize_response ? sample.y_std.col(0) : sample.y_raw.col(0);

  bool any_active = false;
  for (int i = 0; i < n; ++i) any_active |= scores.indicator[std::size_t(i)] != 0;
  if (!any_active) throw AllPointsTrimmed();

  // Fixed row-block schedule; per-block partial sums merged in block order.
  const int n_blocks = (n + kRowBlock - 1) / kRowBlock;
  std::vector<Eigen::MatrixXd> partial(static_cast<std::size_t>(n_blocks));

  const double coeff =
      cfg.method == Method::kFM ? cfg.sw2 : 1.0 / (2.0 * cfg.sw2);
  const bool is_fm = cfg.method == Method::kFM;
  const bool is_mean = cfg.space == Space::kMean;

  parallel_blocks(n_blocks, [&](int b) {
    const int i0 = b * kRowBlock;
    const int i1 = std::min(n, i0 + kRowBlock);
    Eigen::MatrixXd acc = Eigen::MatrixXd::Zero(p, p);
    Eigen::VectorXd u(p), a(p), bb(p);
    for (int i = i0; i < i1; ++i) {
      if (!scores.indicator[std::size_t(i)]) continue;
      const auto zi = sample.Z.row(i).transpose();
      const auto gi = scores.g.row(i).transpose();
      for (int j = 0; j < n; ++j) {
        if (!scores.indicator[std::size_t(j)]) continue;
        u = zi - sample.Z.row(j).transpose();
        const double usq = u.squaredNorm();
        double w;
        if (is_fm)
          w = std::exp(-0.5 * cfg.sw2 * usq);
        else
          w = std::exp(-usq / (4.0 * cfg.sw2));
        if (is_mean) {
          w *= y[i] * y[j];
        } else {
          const double v = y[i] - y[j];
          w *= is_fm ? std::exp(-0.5 * cfg.st2 * v * v)
                     : std::exp(-v * v / (4.0 * cfg.st2));
        }
        if (w == 0.0) continue;
        a = gi - coeff * u;
        bb = scores.g.row(j).transpose() + coeff * u;
        acc.noalias() += (w * a) * bb.transpose();
        acc.diagonal().array() += w * coeff;
      }
    }
    partial[std::size_t(b)] = std::move(acc);
  });

  Eigen::MatrixXd M = Eigen::MatrixXd::Zero(p, p);
  for (auto& part : partial) M += part;
  M /= double(n) * double(n);
  return M;
}

CandidateMatrix build_candidate(const StandardizedSample& sample,
                                const ScoreField& scores, const ItmConfig& cfg) {
  Eigen::MatrixXd M = build_candidate_raw(sample, scores, cfg);
  CandidateMatrix out;
  out.M = 0.5 * (M + M.transpose());
  out.recipe = cfg.recipe();
  out.density = cfg.density;
  return out;
}

}  // namespace sdr

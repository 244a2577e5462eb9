#include "sdr/admm.hpp"

#include <cmath>
#include <stdexcept>

#include "sdr/errors.hpp"
#include "sdr/invfm.hpp"
#include "sdr/linalg.hpp"
#include "sdr/parallel.hpp"
#include "sdr/rng.hpp"

namespace sdr {

Eigen::VectorXd row_soft_threshold(const Eigen::VectorXd& v, double t) {
  if (t <= 0.0) return v;
  const double nrm = v.norm();
  if (nrm <= t) return Eigen::VectorXd::Zero(v.size());
  return (1.0 - t / nrm) * v;
}

bool admm_gamma_update(const Eigen::LLT<Eigen::MatrixXd>& solver,
                       const Eigen::MatrixXd& XiC,
                       const Eigen::VectorXd& lambda_rows, double rho,
                       double eps, int max_steps, Eigen::MatrixXd& Gamma,
                       AdmmState& state, double* primal_out, double* dual_out) {
  const int p = int(XiC.rows());
  double primal = 0.0, dual = 0.0;
  bool hit = false;
  for (int step = 0; step < max_steps; ++step) {
    Gamma = solver.solve(XiC + rho * (state.A - state.U));
    Eigen::MatrixXd A_next(state.A.rows(), state.A.cols());
    for (int j = 0; j < p; ++j)
      A_next.row(j) = row_soft_threshold(
          (Gamma.row(j) + state.U.row(j)).transpose(), lambda_rows[j] / rho);
    dual = rho * (state.A - A_next).norm();
    state.U += Gamma - A_next;
    state.A = std::move(A_next);
    primal = (Gamma - state.A).norm();
    if (primal < eps && dual < eps) {
      hit = true;
      break;
    }
  }
  if (primal_out) *primal_out = primal;
  if (dual_out) *dual_out = dual;
  return hit;
}

Eigen::MatrixXd admm_c_update(const Eigen::MatrixXd& Xi_hat,
                              const Eigen::MatrixXd& Gamma) {
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(Xi_hat.transpose() * Gamma,
                                        Eigen::ComputeThinU |
                                            Eigen::ComputeThinV);
  // W2 W1^T where W1 D W2^T = svd; zero singular values fall back to the
  // factorization's own orthonormal completion.
  return svd.matrixV() * svd.matrixU().transpose();
}

Eigen::MatrixXd soft_threshold_covariance(const Eigen::MatrixXd& sigma, int n) {
  const int p = int(sigma.rows());
  const double t =
      2.0 * std::sqrt(std::log(double(p)) / double(n)) * sigma.diagonal().maxCoeff();
  Eigen::MatrixXd out = sigma;
  for (int i = 0; i < p; ++i)
    for (int j = 0; j < p; ++j) {
      if (i == j) continue;
      const double v = std::abs(out(i, j)) - t;
      out(i, j) = v > 0.0 ? (out(i, j) > 0.0 ? v : -v) : 0.0;
    }
  return out;
}

namespace {

constexpr double kWeightCap = 1e8;
constexpr int kInnerHardCap = 500;

// n^{-1} sum_j e^{i w_r^T y_j} (x_j - xbar) as real/imaginary column pairs;
// equals Sigma xi without forming any inverse (usable when p > n).
Eigen::MatrixXd fourier_cov_sums(const Eigen::MatrixXd& X,
                                 const Eigen::MatrixXd& Y,
                                 const Eigen::MatrixXd& W) {
  const int n = int(X.rows());
  const int p = int(X.cols());
  const int k = int(W.cols());
  const Eigen::RowVectorXd x_mean = X.colwise().mean();
  Eigen::MatrixXd Xi(p, 2 * k);
  for (int r = 0; r < k; ++r) {
    Eigen::VectorXd acc_re = Eigen::VectorXd::Zero(p);
    Eigen::VectorXd acc_im = Eigen::VectorXd::Zero(p);
    for (int j = 0; j < n; ++j) {
      const double phase = Y.row(j).dot(W.col(r));
      const Eigen::VectorXd xc = (X.row(j) - x_mean).transpose();
      acc_re += std::cos(phase) * xc;
      acc_im += std::sin(phase) * xc;
    }
    Xi.col(2 * r) = acc_re / double(n);
    Xi.col(2 * r + 1) = acc_im / double(n);
  }
  return Xi;
}

double penalty(const Eigen::MatrixXd& A, const Eigen::VectorXd& weights,
               double lambda) {
  double s = 0.0;
  for (int j = 0; j < A.rows(); ++j) s += weights[j] * A.row(j).norm();
  return lambda * s;
}

// Shifted penalized objective 0.5 tr(A^T Sigma A) - <C, A^T Xi> + penalty;
// the data constant 0.5 xi^T Xi is dropped so the value exists when p > n.
double shifted_objective(const Eigen::MatrixXd& Sigma, const Eigen::MatrixXd& Xi,
                         const Eigen::MatrixXd& A, const Eigen::MatrixXd& C,
                         const Eigen::VectorXd& weights, double lambda) {
  const double quad = 0.5 * (A.transpose() * Sigma * A).trace();
  const double cross = (C.array() * (A.transpose() * Xi).array()).sum();
  return quad - cross + penalty(A, weights, lambda);
}

struct CoreResult {
  Eigen::MatrixXd A;
  Eigen::MatrixXd C;
  std::vector<double> trace;
  bool converged = true;
  double primal = 0.0;
  double dual = 0.0;
};

Eigen::MatrixXd initial_gamma(const Eigen::MatrixXd& Xi, int d) {
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(Xi, Eigen::ComputeThinU);
  return svd.matrixU().leftCols(d);
}

CoreResult admmft_core(const Eigen::MatrixXd& Sigma, const Eigen::MatrixXd& Xi,
                       int d, double lambda, const AdmmConfig& cfg) {
  const int p = int(Sigma.rows());
  Eigen::MatrixXd reg = Sigma;
  reg.diagonal().array() += cfg.rho;
  const Eigen::LLT<Eigen::MatrixXd> solver(reg);

  // The unpenalized problem reduces to the normal equations Sigma G = Xi C^T;
  // solve them directly when Sigma is positive definite.
  const Eigen::LLT<Eigen::MatrixXd> direct(Sigma);
  const bool direct_ok = lambda == 0.0 && direct.info() == Eigen::Success &&
                         Sigma.diagonal().minCoeff() > 0.0;

  CoreResult res;
  Eigen::MatrixXd Gamma = initial_gamma(Xi, d);
  AdmmState state{Gamma, Eigen::MatrixXd::Zero(p, d)};
  res.A = Gamma;
  Eigen::VectorXd weights = Eigen::VectorXd::Ones(p);
  if (cfg.weights.size() > 0) {
    if (cfg.weights.size() != p || cfg.weights.minCoeff() < 0.0)
      throw std::invalid_argument("weights must be p nonnegative values");
    weights = cfg.weights;
  }

  bool residuals_ok = false;
  bool objective_ok = false;
  std::vector<double> round_trace;
  for (int round = 0; round < std::max(cfg.noW, 1); ++round) {
    round_trace.clear();
    objective_ok = false;
    double prev_L = std::numeric_limits<double>::infinity();
    for (int sweep = 0; sweep < cfg.noC; ++sweep) {
      res.C = admm_c_update(Xi, res.A);
      const Eigen::MatrixXd XiC = Xi * res.C.transpose();

      double L;
      if (direct_ok) {
        Gamma = direct.solve(XiC);
        state.A = Gamma;
        state.U.setZero();
        res.primal = res.dual = 0.0;
        residuals_ok = true;
        L = shifted_objective(Sigma, Xi, state.A, res.C, weights, lambda);
      } else {
        const Eigen::VectorXd lambda_rows = lambda * weights;
        int steps_left = kInnerHardCap - cfg.noB;
        residuals_ok = admm_gamma_update(solver, XiC, lambda_rows, cfg.rho,
                                         cfg.eps, cfg.noB, Gamma, state,
                                         &res.primal, &res.dual);
        L = shifted_objective(Sigma, Xi, state.A, res.C, weights, lambda);
        // The few-step cap can leave the subproblem short of its optimum;
        // keep stepping while the recorded objective would move up.
        while (!round_trace.empty() && L > round_trace.back() + 1e-12 &&
               steps_left > 0 && !residuals_ok) {
          residuals_ok = admm_gamma_update(solver, XiC, lambda_rows, cfg.rho,
                                           cfg.eps, cfg.noB, Gamma, state,
                                           &res.primal, &res.dual);
          steps_left -= cfg.noB;
          L = shifted_objective(Sigma, Xi, state.A, res.C, weights, lambda);
        }
      }
      res.A = state.A;
      round_trace.push_back(L);
      if (std::abs(L - prev_L) < cfg.eps) {
        objective_ok = true;
        break;
      }
      prev_L = L;
    }
    if (round + 1 < std::max(cfg.noW, 1)) {
      // Zero rows keep an effectively infinite weight so they stay dead.
      for (int j = 0; j < p; ++j) {
        const double nrm = res.A.row(j).norm();
        weights[j] = nrm > 0.0 ? std::min(1.0 / std::sqrt(nrm), kWeightCap)
                               : kWeightCap;
      }
    }
  }
  res.trace = round_trace;  // final weight round
  res.C = admm_c_update(Xi, res.A);
  res.converged = objective_ok && residuals_ok;
  return res;
}

double lambda_max_for(const Eigen::MatrixXd& Xi, int d) {
  const Eigen::MatrixXd C0 = admm_c_update(Xi, initial_gamma(Xi, d));
  const Eigen::MatrixXd G = Xi * C0.transpose();  // p x d gradient at zero
  double lmax = 0.0;
  for (int j = 0; j < G.rows(); ++j) lmax = std::max(lmax, G.row(j).norm());
  return lmax;
}

std::vector<double> lambda_grid(double lmax, int count) {
  std::vector<double> grid(static_cast<std::size_t>(count));
  for (int i = 0; i < count; ++i) {
    const double t = count == 1 ? 1.0 : double(i) / double(count - 1);
    grid[std::size_t(i)] = lmax * std::pow(10.0, -3.0 * (1.0 - t));
  }
  return grid;
}

// Held-out shifted QDF with the diag{Sigma} inner product; C refit on the
// validation split by the polar step.
double cv_score(const Eigen::MatrixXd& Sigma_val, const Eigen::MatrixXd& Xi_val,
                const Eigen::MatrixXd& A) {
  const Eigen::MatrixXd C_val = admm_c_update(Xi_val, A);
  const double quad = 0.5 * (A.transpose() * Sigma_val * A).trace();
  const double cross = (C_val.array() * (A.transpose() * Xi_val).array()).sum();
  return quad - cross;
}

}  // namespace

SparseSolution admmft(const Dataset& data, int d, int m, AdmmConfig cfg) {
  data.validate();
  const int n = data.n();
  const int p = data.p();
  if (d < 1 || d > p) throw DimensionOutOfRange(d, p);

  Eigen::MatrixXd X = data.X;
  if (cfg.scale_x) {
    for (int j = 0; j < p; ++j) {
      const double mean = X.col(j).mean();
      const Eigen::VectorXd c = X.col(j).array() - mean;
      const double sd = std::sqrt(c.squaredNorm() / double(n - 1));
      X.col(j) = sd > 0.0 ? (c / sd).eval() : c;
    }
  }

  const FourierDesign design = make_design(data.q(), m, cfg.seed);
  Eigen::MatrixXd Sigma = sample_covariance(X);
  if (cfg.sparse_cov) Sigma = soft_threshold_covariance(Sigma, n);
  const Eigen::MatrixXd Xi = fourier_cov_sums(X, data.Y, design.W);

  SparseSolution sol;
  sol.lambda_max = lambda_max_for(Xi, d);

  double lambda;
  if (cfg.lambda) {
    lambda = *cfg.lambda;
  } else if (!(sol.lambda_max > 0.0)) {
    lambda = 0.0;
  } else {
    // Deterministic fold assignment: shuffled row order, folds round-robin.
    std::vector<int> order(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) order[std::size_t(i)] = i;
    CounterRng rng(cfg.seed, stream_key(0xcfu));
    for (int i = n - 1; i > 0; --i)
      std::swap(order[std::size_t(i)], order[std::size_t(rng.uniform_int(i + 1))]);

    const int folds = std::max(2, cfg.cv_folds);
    const std::vector<double> grid = lambda_grid(sol.lambda_max, cfg.cv_grid);
    std::vector<std::vector<double>> scores(
        std::size_t(folds), std::vector<double>(grid.size(), 0.0));

    parallel_blocks(folds, [&](int f) {
      std::vector<int> train, val;
      for (int i = 0; i < n; ++i)
        (i % folds == f ? val : train).push_back(order[std::size_t(i)]);
      Eigen::MatrixXd Xt(train.size(), p), Yt(train.size(), data.q());
      Eigen::MatrixXd Xv(val.size(), p), Yv(val.size(), data.q());
      for (std::size_t i = 0; i < train.size(); ++i) {
        Xt.row(Eigen::Index(i)) = X.row(train[i]);
        Yt.row(Eigen::Index(i)) = data.Y.row(train[i]);
      }
      for (std::size_t i = 0; i < val.size(); ++i) {
        Xv.row(Eigen::Index(i)) = X.row(val[i]);
        Yv.row(Eigen::Index(i)) = data.Y.row(val[i]);
      }
      Eigen::MatrixXd Sigma_t = sample_covariance(Xt);
      if (cfg.sparse_cov)
        Sigma_t = soft_threshold_covariance(Sigma_t, int(train.size()));
      const Eigen::MatrixXd Xi_t = fourier_cov_sums(Xt, Yt, design.W);
      const Eigen::MatrixXd Sigma_v = sample_covariance(Xv);
      const Eigen::MatrixXd Xi_v = fourier_cov_sums(Xv, Yv, design.W);
      for (std::size_t gi = 0; gi < grid.size(); ++gi) {
        const CoreResult fit = admmft_core(Sigma_t, Xi_t, d, grid[gi], cfg);
        scores[std::size_t(f)][gi] = cv_score(Sigma_v, Xi_v, fit.A);
      }
    });

    std::size_t best = 0;
    double best_score = std::numeric_limits<double>::infinity();
    for (std::size_t gi = 0; gi < grid.size(); ++gi) {
      double total = 0.0;
      for (int f = 0; f < folds; ++f) total += scores[std::size_t(f)][gi];
      if (total < best_score) {
        best_score = total;
        best = gi;
      }
    }
    lambda = grid[best];
  }

  const CoreResult fit = admmft_core(Sigma, Xi, d, lambda, cfg);
  sol.Gamma = fit.A;
  sol.C = fit.C;
  sol.objective_trace = fit.trace;
  sol.lambda = lambda;
  sol.converged = fit.converged;
  sol.primal_residual = fit.primal;
  sol.dual_residual = fit.dual;
  for (int j = 0; j < p; ++j)
    if (sol.Gamma.row(j).norm() > 0.0) sol.active_set.push_back(j);
  return sol;
}

}  // namespace sdr

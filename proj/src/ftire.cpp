#include "sdr/ftire.hpp"

#include <cmath>
#include <stdexcept>

#include "sdr/errors.hpp"
#include "sdr/linalg.hpp"

namespace sdr {

std::string to_string(FtKind k) {
  switch (k) {
    case FtKind::kIre: return "FT-IRE";
    case FtKind::kDire: return "FT-DIRE";
    case FtKind::kSire: return "FT-SIRE";
    case FtKind::kRire: return "FT-RIRE";
    case FtKind::kDrire: return "FT-DRIRE";
  }
  return "?";
}

XiEstimate xi_hat(const Dataset& data, const FourierDesign& design) {
  data.validate();
  if (design.W.rows() != data.q())
    throw std::invalid_argument("frequency dimension does not match response");
  const int n = data.n();
  const int p = data.p();
  const int k = design.k();

  XiEstimate xi;
  xi.design = design;
  xi.sigma_hat = sample_covariance(data.X);
  xi.sigma_inv_sqrt = inverse_sqrt(xi.sigma_hat);  // throws SingularCovariance
  const Eigen::RowVectorXd x_mean = data.X.colwise().mean();
  xi.Z = (data.X.rowwise() - x_mean) * xi.sigma_inv_sqrt;

  xi.xi_hat.resize(p, 2 * k);
  xi.residuals.resize(n, 2 * k);
  xi.residuals_centered_only.resize(n, 2 * k);

  for (int r = 0; r < k; ++r) {
    const Eigen::VectorXd w = design.W.col(r);
    const Eigen::VectorXcd psi = psi_hat(xi.Z, data.Y, w);  // whitened scale
    // xi_r = Sigma^{-1} n^{-1} sum e^{i w y}(x - xbar) = Sigma^{-1/2} psi
    const Eigen::VectorXcd xi_r = xi.sigma_inv_sqrt * psi;
    xi.xi_hat.col(2 * r) = xi_r.real();
    xi.xi_hat.col(2 * r + 1) = xi_r.imag();

    std::complex<double> mean_e(0.0, 0.0);
    Eigen::VectorXcd phases(n);
    for (int j = 0; j < n; ++j) {
      const double phase = data.Y.row(j).dot(w);
      phases[j] = std::complex<double>(std::cos(phase), std::sin(phase));
      mean_e += phases[j];
    }
    mean_e /= double(n);

    for (int j = 0; j < n; ++j) {
      const std::complex<double> centered = phases[j] - mean_e;
      const std::complex<double> fitted =
          std::complex<double>(xi.Z.row(j) * psi.real(),
                               xi.Z.row(j) * psi.imag());
      const std::complex<double> eps = centered - fitted;
      xi.residuals(j, 2 * r) = eps.real();
      xi.residuals(j, 2 * r + 1) = eps.imag();
      xi.residuals_centered_only(j, 2 * r) = centered.real();
      xi.residuals_centered_only(j, 2 * r + 1) = centered.imag();
    }
  }
  return xi;
}

namespace {

// Empirical covariance (divisor n) of the per-sample vectors
// kron(eps_j over the given columns, Sigma^{-1/2} z_j), inverted with the
// documented ridge fallback when numerically singular.
Eigen::MatrixXd inverse_residual_covariance(const XiEstimate& xi,
                                            const Eigen::MatrixXd& eps,
                                            int col0, int ncols,
                                            bool& ridge_used) {
  const int n = xi.n();
  const int p = xi.p();
  const int dim = ncols * p;

  Eigen::MatrixXd T = xi.Z * xi.sigma_inv_sqrt;  // rows t_j^T
  Eigen::MatrixXd W(n, dim);
  for (int j = 0; j < n; ++j)
    for (int c = 0; c < ncols; ++c)
      W.row(j).segment(c * p, p) = eps(j, col0 + c) * T.row(j);

  const Eigen::RowVectorXd mean = W.colwise().mean();
  W.rowwise() -= mean;
  Eigen::MatrixXd cov = W.transpose() * W / double(n);

  SymEig eig = sym_eig_descending(cov);
  const double lmax = std::max(eig.values[0], 0.0);
  const double lmin = eig.values[eig.values.size() - 1];
  if (!(lmin > 1e-12 * lmax)) {
    ridge_used = true;
    const double delta = 1e-6 * cov.trace() / double(dim);
    cov.diagonal().array() += delta;
    eig = sym_eig_descending(cov);
  }
  Eigen::VectorXd inv_vals = eig.values.array().inverse();
  return eig.vectors * inv_vals.asDiagonal() * eig.vectors.transpose();
}

std::vector<int> default_blocks(int k) { return std::vector<int>(std::size_t(k), 1); }

}  // namespace

InnerProduct build_inner_product(const XiEstimate& xi, FtKind kind,
                                 const std::vector<int>& blocks) {
  InnerProduct V;
  V.kind = kind;
  V.p = xi.p();
  V.k = xi.k();

  std::vector<int> groups = blocks.empty() ? default_blocks(V.k) : blocks;
  int total = 0;
  for (int g : groups) total += g;
  if ((kind == FtKind::kDire || kind == FtKind::kDrire) && total != V.k)
    throw std::invalid_argument("block sizes must sum to the frequency count");

  switch (kind) {
    case FtKind::kSire:
      V.kron_sigma = xi.sigma_hat;
      break;
    case FtKind::kIre:
      V.dense = inverse_residual_covariance(xi, xi.residuals, 0, 2 * V.k,
                                            V.ridge_used);
      break;
    case FtKind::kRire:
      V.dense = inverse_residual_covariance(xi, xi.residuals_centered_only, 0,
                                            2 * V.k, V.ridge_used);
      break;
    case FtKind::kDire:
    case FtKind::kDrire: {
      const Eigen::MatrixXd& eps = kind == FtKind::kDire
                                       ? xi.residuals
                                       : xi.residuals_centered_only;
      int f0 = 0;
      for (int g : groups) {
        V.blocks.push_back(inverse_residual_covariance(xi, eps, 2 * f0, 2 * g,
                                                       V.ridge_used));
        V.block_freqs.push_back(g);
        f0 += g;
      }
      break;
    }
  }
  return V;
}

namespace {

// The vec-space operand is carried as its p x 2k matrix reshape throughout.
Eigen::MatrixXd apply_inner_product(const InnerProduct& V,
                                    const Eigen::MatrixXd& A) {
  const int p = V.p;
  const int k2 = 2 * V.k;
  if (V.kron_sigma) return *V.kron_sigma * A;
  Eigen::MatrixXd out(p, k2);
  if (V.dense) {
    Eigen::Map<const Eigen::VectorXd> vec_a(A.data(), A.size());
    Eigen::Map<Eigen::VectorXd>(out.data(), out.size()) = *V.dense * vec_a;
    return out;
  }
  int f0 = 0;
  for (std::size_t l = 0; l < V.blocks.size(); ++l) {
    const int cols = 2 * V.block_freqs[l];
    const Eigen::MatrixXd slice = A.middleCols(2 * f0, cols);
    Eigen::Map<const Eigen::VectorXd> vec_a(slice.data(), slice.size());
    Eigen::VectorXd prod = V.blocks[l] * vec_a;
    out.middleCols(2 * f0, cols) =
        Eigen::Map<const Eigen::MatrixXd>(prod.data(), p, cols);
    f0 += V.block_freqs[l];
  }
  return out;
}

double qdf_value(const InnerProduct& V, const Eigen::MatrixXd& resid) {
  return (apply_inner_product(V, resid).array() * resid.array()).sum();
}

// vec(C) = [(I (x) Gamma)^T V (I (x) Gamma)]^- (I (x) Gamma)^T V vec(xi).
Eigen::MatrixXd update_C(const InnerProduct& V, const Eigen::MatrixXd& xi_mat,
                         const Eigen::MatrixXd& Gamma) {
  const int p = V.p;
  const int k2 = 2 * V.k;
  const int d = int(Gamma.cols());

  if (V.kron_sigma) {
    const Eigen::MatrixXd& S = *V.kron_sigma;
    const Eigen::MatrixXd N = Gamma.transpose() * S * Gamma;  // d x d
    const Eigen::MatrixXd R = Gamma.transpose() * S * xi_mat; // d x 2k
    return N.completeOrthogonalDecomposition().solve(R);
  }

  const Eigen::MatrixXd Vxi = apply_inner_product(V, xi_mat);
  Eigen::MatrixXd C(d, k2);
  if (V.dense) {
    const Eigen::MatrixXd& W = *V.dense;
    Eigen::MatrixXd N(k2 * d, k2 * d);
    for (int c = 0; c < k2; ++c)
      for (int cc = 0; cc < k2; ++cc)
        N.block(c * d, cc * d, d, d) =
            Gamma.transpose() * W.block(c * p, cc * p, p, p) * Gamma;
    Eigen::VectorXd r(k2 * d);
    for (int c = 0; c < k2; ++c)
      r.segment(c * d, d) = Gamma.transpose() * Vxi.col(c);
    const Eigen::VectorXd vc = N.completeOrthogonalDecomposition().solve(r);
    for (int c = 0; c < k2; ++c) C.col(c) = vc.segment(c * d, d);
    return C;
  }

  int f0 = 0;
  for (std::size_t l = 0; l < V.blocks.size(); ++l) {
    const int cols = 2 * V.block_freqs[l];
    const Eigen::MatrixXd& W = V.blocks[l];
    Eigen::MatrixXd N(cols * d, cols * d);
    for (int c = 0; c < cols; ++c)
      for (int cc = 0; cc < cols; ++cc)
        N.block(c * d, cc * d, d, d) =
            Gamma.transpose() * W.block(c * p, cc * p, p, p) * Gamma;
    Eigen::VectorXd r(cols * d);
    for (int c = 0; c < cols; ++c)
      r.segment(c * d, d) = Gamma.transpose() * Vxi.col(2 * f0 + c);
    const Eigen::VectorXd vc = N.completeOrthogonalDecomposition().solve(r);
    for (int c = 0; c < cols; ++c) C.col(2 * f0 + c) = vc.segment(c * d, d);
    f0 += V.block_freqs[l];
  }
  return C;
}

// H = (m (x) I)^T V (m (x) I) for the column quadratic subproblem.
Eigen::MatrixXd kron_row_quadratic(const InnerProduct& V,
                                   const Eigen::VectorXd& m) {
  const int p = V.p;
  const int k2 = 2 * V.k;
  if (V.kron_sigma) return m.squaredNorm() * (*V.kron_sigma);
  Eigen::MatrixXd H = Eigen::MatrixXd::Zero(p, p);
  if (V.dense) {
    const Eigen::MatrixXd& W = *V.dense;
    for (int c = 0; c < k2; ++c) {
      if (m[c] == 0.0) continue;
      for (int cc = 0; cc < k2; ++cc) {
        if (m[cc] == 0.0) continue;
        H.noalias() += m[c] * m[cc] * W.block(c * p, cc * p, p, p);
      }
    }
    return H;
  }
  int f0 = 0;
  for (std::size_t l = 0; l < V.blocks.size(); ++l) {
    const int cols = 2 * V.block_freqs[l];
    const Eigen::MatrixXd& W = V.blocks[l];
    for (int c = 0; c < cols; ++c)
      for (int cc = 0; cc < cols; ++cc) {
        const double mc = m[2 * f0 + c] * m[2 * f0 + cc];
        if (mc != 0.0) H.noalias() += mc * W.block(c * p, cc * p, p, p);
      }
    f0 += V.block_freqs[l];
  }
  return H;
}

}  // namespace

QdfSolution minimize_qdf(const XiEstimate& xi, const InnerProduct& V, int d,
                         const std::optional<Eigen::MatrixXd>& init,
                         int max_sweeps) {
  const int p = xi.p();
  if (d < 1 || d > p) throw DimensionOutOfRange(d, p);
  const Eigen::MatrixXd& xi_mat = xi.xi_hat;

  Eigen::MatrixXd Gamma;
  if (init && init->size() > 0) {
    if (init->rows() != p || init->cols() != d)
      throw std::invalid_argument("init must be p x d");
    // Orthonormalize the start, keeping its span.
    Eigen::HouseholderQR<Eigen::MatrixXd> qr(*init);
    Gamma = qr.householderQ() * Eigen::MatrixXd::Identity(p, d);
  } else {
    Gamma = Eigen::MatrixXd::Identity(p, d);
  }

  QdfSolution sol;
  Eigen::MatrixXd C = update_C(V, xi_mat, Gamma);
  sol.objective_trace.push_back(qdf_value(V, xi_mat - Gamma * C));
  sol.max_orth_error =
      (Gamma.transpose() * Gamma - Eigen::MatrixXd::Identity(d, d))
          .cwiseAbs()
          .maxCoeff();

  const Eigen::MatrixXd I_p = Eigen::MatrixXd::Identity(p, p);
  for (int sweep = 1; sweep <= max_sweeps; ++sweep) {
    const Eigen::MatrixXd Gamma_prev = Gamma;
    const Eigen::MatrixXd C_prev = C;

    for (int col = 0; col < d; ++col) {
      // Residual with column col removed: alpha = xi - Gamma_(-col) C_(-col).
      Eigen::MatrixXd alpha = xi_mat - Gamma * C;
      alpha.noalias() += Gamma.col(col) * C.row(col);

      Eigen::MatrixXd Q = I_p;
      if (d > 1) {
        for (int j = 0; j < d; ++j) {
          if (j == col) continue;
          Q.noalias() -= Gamma.col(j) * Gamma.col(j).transpose();
        }
      }

      const Eigen::VectorXd m = C.row(col).transpose();
      const Eigen::MatrixXd H = kron_row_quadratic(V, m);
      const Eigen::VectorXd rhs = apply_inner_product(V, alpha) * m;

      const Eigen::MatrixXd QHQ = Q * H * Q;
      const Eigen::VectorXd b =
          Q * QHQ.completeOrthogonalDecomposition().solve(Q * rhs);
      const double nrm = b.norm();
      if (nrm > 1e-14) Gamma.col(col) = b / nrm;

      C = update_C(V, xi_mat, Gamma);
    }

    sol.iterations = sweep;
    sol.objective_trace.push_back(qdf_value(V, xi_mat - Gamma * C));
    sol.max_orth_error = std::max(
        sol.max_orth_error,
        (Gamma.transpose() * Gamma - Eigen::MatrixXd::Identity(d, d))
            .cwiseAbs()
            .maxCoeff());

    const double delta = std::max((Gamma - Gamma_prev).squaredNorm(),
                                  (C - C_prev).squaredNorm());
    if (delta < 1e-6) {
      sol.converged = true;
      break;
    }
  }

  sol.Gamma = Gamma;
  sol.C = C;
  sol.objective = sol.objective_trace.back();
  return sol;
}

FtireResult fm_xire_with_design(const Dataset& data, int d,
                                const FourierDesign& design, FtKind kind,
                                const std::vector<int>& blocks) {
  FtireResult out;
  const XiEstimate xi = xi_hat(data, design);
  const InnerProduct V = build_inner_product(xi, kind, blocks);
  out.ridge_used = V.ridge_used;
  out.init = invfm_estimate(data, d, design, /*scale_x=*/false);
  out.solution = minimize_qdf(xi, V, d, out.init.basis.B);
  out.basis.B = out.solution.Gamma;
  out.basis.full_spectrum = out.init.kernel.spectrum;
  out.basis.eigvals = out.init.kernel.spectrum.head(d);
  return out;
}

FtireResult fm_xire(const Dataset& data, int d, int m, FtKind kind,
                    std::uint64_t seed, const std::vector<int>& blocks) {
  const FourierDesign design = make_design(data.q(), m, seed);
  return fm_xire_with_design(data, d, design, kind, blocks);
}

}  // namespace sdr

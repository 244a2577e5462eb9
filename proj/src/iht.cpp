#include "sdr/iht.hpp"

#include <stdexcept>

#include "sdr/errors.hpp"
#include "sdr/linalg.hpp"

namespace sdr {

IhtState iht_moments(const StandardizedSample& sample, const Eigen::VectorXd& y) {
  const int n = sample.n();
  const int p = sample.p();
  if (y.size() != n) throw std::invalid_argument("response length mismatch");

  IhtState st;
  st.gamma_yz = (sample.Z.transpose() * y) / double(n);
  st.sigma_yzz.setZero(p, p);
  for (int i = 0; i < n; ++i)
    st.sigma_yzz.noalias() +=
        y[i] * sample.Z.row(i).transpose() * sample.Z.row(i);
  st.sigma_yzz /= double(n);
  return st;
}

Eigen::MatrixXd cozy_matrix(const Eigen::VectorXd& gamma,
                            const Eigen::MatrixXd& sigma_yzz) {
  const int p = int(gamma.size());
  Eigen::MatrixXd M(p, p);
  M.col(0) = gamma;
  for (int j = 1; j < p; ++j) M.col(j) = sigma_yzz * M.col(j - 1);
  return M;
}

SubspaceBasis iht_estimate(const StandardizedSample& sample, int d,
                           bool standardize_y, IhtState* state_out) {
  const int p = sample.p();
  if (d < 1 || d > p) throw DimensionOutOfRange(d, p);
  if (sample.y_raw.cols() != 1)
    throw std::invalid_argument("IHT needs a univariate response");

  const Eigen::VectorXd y =
      standardize_y ? sample.y_std.col(0) : sample.y_raw.col(0);
  IhtState st = iht_moments(sample, y);
  if (st.gamma_yz.norm() < 1e-12) throw ZeroCozy();

  st.M = cozy_matrix(st.gamma_yz, st.sigma_yzz);

  // Raw power columns keep the natural signal-to-noise weighting in Psi.
  // A column is rescaled (direction preserved) only when its norm would
  // overflow the outer product; the dominant columns dwarf the rest long
  // before the clamp triggers.
  constexpr double kNormCap = 1e120;
  Eigen::MatrixXd Mp(p, p);
  Mp.col(0) = st.gamma_yz;
  for (int j = 0; j < p; ++j) {
    if (j > 0) Mp.col(j) = st.sigma_yzz * Mp.col(j - 1);
    const double nrm = Mp.col(j).norm();
    if (nrm > kNormCap) Mp.col(j) *= kNormCap / nrm;
  }
  st.Psi = Mp * Mp.transpose();

  SubspaceBasis basis = extract_basis(st.Psi, d, sample.sigma_inv_sqrt);
  if (state_out) *state_out = std::move(st);
  return basis;
}

}  // namespace sdr

#include "sdr/subspace.hpp"

#include "sdr/errors.hpp"
#include "sdr/linalg.hpp"

namespace sdr {

SubspaceBasis extract_basis(const Eigen::MatrixXd& M, int d,
                            const Eigen::MatrixXd& sigma_inv_sqrt) {
  const int p = int(M.rows());
  if (d < 1 || d > p) throw DimensionOutOfRange(d, p);
  const SymEig eig = sym_eig_descending(M);
  SubspaceBasis out;
  out.full_spectrum = eig.values;
  out.eigvals = eig.values.head(d);
  out.B = sigma_inv_sqrt * eig.vectors.leftCols(d);
  return out;
}

SubspaceBasis extract_basis(const CandidateMatrix& M, int d,
                            const Eigen::MatrixXd& sigma_inv_sqrt) {
  return extract_basis(M.M, d, sigma_inv_sqrt);
}

}  // namespace sdr

#include "sdr/data.hpp"

#include <cmath>
#include <stdexcept>

#include "sdr/errors.hpp"
#include "sdr/linalg.hpp"

namespace sdr {

void Dataset::validate() const {
  if (X.rows() < 2) throw std::invalid_argument("dataset needs at least 2 rows");
  if (Y.rows() != X.rows())
    throw std::invalid_argument("X and Y row counts differ");
  if (Y.cols() < 1) throw std::invalid_argument("dataset needs a response column");
  if (!X.allFinite() || !Y.allFinite())
    throw std::invalid_argument("dataset contains non-finite entries");
}

StandardizedSample standardize(const Dataset& data) {
  data.validate();
  const int n = data.n();
  const int q = data.q();

  StandardizedSample out;
  out.x_mean = data.X.colwise().mean();
  const Eigen::MatrixXd sigma = sample_covariance(data.X);
  out.sigma_inv_sqrt = inverse_sqrt(sigma);  // throws SingularCovariance
  out.Z = (data.X.rowwise() - out.x_mean.transpose()) * out.sigma_inv_sqrt;

  out.y_raw = data.Y;
  out.y_mean = data.Y.colwise().mean();
  out.y_scale.resize(q);
  out.y_std.resize(n, q);
  for (int j = 0; j < q; ++j) {
    const Eigen::VectorXd centered = data.Y.col(j).array() - out.y_mean[j];
    const double var = centered.squaredNorm() / double(n - 1);
    const double sd = std::sqrt(var);
    out.y_scale[j] = sd > 0.0 ? sd : 1.0;
    out.y_std.col(j) = centered / out.y_scale[j];
  }
  return out;
}

Dataset resample(const Dataset& data, const std::vector<int>& indices) {
  Dataset out;
  out.X.resize(Eigen::Index(indices.size()), data.X.cols());
  out.Y.resize(Eigen::Index(indices.size()), data.Y.cols());
  for (std::size_t i = 0; i < indices.size(); ++i) {
    out.X.row(Eigen::Index(i)) = data.X.row(indices[i]);
    out.Y.row(Eigen::Index(i)) = data.Y.row(indices[i]);
  }
  out.x_names = data.x_names;
  out.y_names = data.y_names;
  return out;
}

}  // namespace sdr

#pragma once

#include <Eigen/Dense>
#include <string>
#include <vector>

namespace sdr {

/// Immutable predictor/response sample. X is n x p, Y is n x q (q >= 1).
struct Dataset {
  Eigen::MatrixXd X;
  Eigen::MatrixXd Y;
  std::vector<std::string> x_names;  // optional, empty or size p
  std::vector<std::string> y_names;  // optional, empty or size q

  int n() const { return int(X.rows()); }
  int p() const { return int(X.cols()); }
  int q() const { return int(Y.cols()); }

  /// Enforces the structural invariants: n >= 2, matching row counts, all
  /// entries finite. Throws std::invalid_argument on violation.
  void validate() const;
};

/// Whitened sample. Z has identity sample covariance and zero column means;
/// sigma_inv_sqrt is the symmetric root used for back-transforms.
struct StandardizedSample {
  Eigen::MatrixXd Z;               // n x p
  Eigen::MatrixXd sigma_inv_sqrt;  // p x p, symmetric
  Eigen::VectorXd x_mean;          // p
  Eigen::MatrixXd y_raw;           // n x q, untouched responses
  Eigen::MatrixXd y_std;           // n x q, centered/scaled responses
  Eigen::VectorXd y_mean;          // q
  Eigen::VectorXd y_scale;         // q, sample standard deviations

  int n() const { return int(Z.rows()); }
  int p() const { return int(Z.cols()); }
};

/// Whitens the predictors (Z = Sigma^{-1/2} (x - mean) per row) and centers/
/// scales the responses. Throws SingularCovariance when the predictor
/// covariance is rank deficient. A response column with zero variance is
/// centered with scale 1 instead of dividing by zero.
StandardizedSample standardize(const Dataset& data);

/// Resamples rows with replacement using the given index vector.
Dataset resample(const Dataset& data, const std::vector<int>& indices);

}  // namespace sdr

#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace sdr {

/// Base class for all recoverable library errors.
struct SdrError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Covariance (or another symmetric operator) has an eigenvalue below the
/// relative rank tolerance. Carries the offending eigenvalue.
struct SingularCovariance : SdrError {
  double eigenvalue;
  explicit SingularCovariance(double ev)
      : SdrError("singular covariance: eigenvalue " + std::to_string(ev) +
                 " below rank tolerance"),
        eigenvalue(ev) {}
};

/// Every low-density indicator is zero; the candidate-matrix sum is empty.
struct AllPointsTrimmed : SdrError {
  AllPointsTrimmed() : SdrError("all points trimmed by density threshold") {}
};

struct DimensionOutOfRange : SdrError {
  DimensionOutOfRange(int d, int p)
      : SdrError("subspace dimension " + std::to_string(d) +
                 " outside [1, " + std::to_string(p) + "]") {}
};

struct RankDeficientBasis : SdrError {
  RankDeficientBasis() : SdrError("basis matrix is rank deficient") {}
};

/// A bootstrap replicate kept failing after the retry budget was exhausted.
struct ResampleFailure : SdrError {
  ResampleFailure(int replicate, const std::string& why)
      : SdrError("bootstrap replicate " + std::to_string(replicate) +
                 " failed after retries: " + why) {}
};

struct InvalidM : SdrError {
  InvalidM(int m, const std::string& why)
      : SdrError("invalid hypothesized dimension m=" + std::to_string(m) +
                 ": " + why) {}
};

/// The first moment vector of the response-weighted predictors vanished, so
/// the iterated-moment construction is degenerate.
struct ZeroCozy : SdrError {
  ZeroCozy() : SdrError("response-predictor moment vector is numerically zero") {}
};

struct ParseError : SdrError {
  std::size_t row;
  std::size_t col;
  ParseError(std::size_t r, std::size_t c, const std::string& what_)
      : SdrError("parse error at row " + std::to_string(r) + ", column " +
                 std::to_string(c) + ": " + what_),
        row(r),
        col(c) {}
};

struct EmptyAfterNaDrop : SdrError {
  EmptyAfterNaDrop() : SdrError("no rows left after dropping missing values") {}
};

}  // namespace sdr

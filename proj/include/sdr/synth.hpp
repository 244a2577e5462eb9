#pragma once

#include <cstdint>

#include "sdr/data.hpp"
#include "sdr/itm.hpp"
#include "sdr/scores.hpp"

namespace sdr {

enum class SynthModel { kLinear, kCubicSingleIndex, kDoubleIndex, kSparseSupport };
enum class XDist { kNormal, kEllipticT, kUniform };

/// Synthetic regression specification: Y = g(B^T X) + noise_sd * eps.
/// q > 1 appends pure-noise response columns, which leaves the central
/// subspace unchanged while exercising the multivariate-response paths.
struct SynthSpec {
  int n = 100;
  int p = 6;
  int q = 1;
  SynthModel model = SynthModel::kLinear;
  Eigen::MatrixXd true_basis;  // p x d; defaults per model when empty
  double noise_sd = 0.1;
  XDist x_dist = XDist::kNormal;
  std::uint64_t seed = 1;
};

struct SynthResult {
  Dataset data;
  Eigen::MatrixXd true_basis;  // p x d actually used
};

/// Deterministic per seed: identical spec gives a bitwise-identical dataset.
SynthResult generate(const SynthSpec& spec);

/// Naive O(n^2) reference for the candidate matrices, written with plain
/// per-pair loops; comparison target for the blocked accumulation.
CandidateMatrix oracle_candidate(const StandardizedSample& sample,
                                 const ScoreField& scores, const ItmConfig& cfg);

}  // namespace sdr

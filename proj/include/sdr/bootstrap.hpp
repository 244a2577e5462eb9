#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "sdr/data.hpp"
#include "sdr/itm.hpp"
#include "sdr/subspace.hpp"

namespace sdr {

/// Algorithm-1 pipeline in one call: whiten, score, accumulate the candidate
/// matrix, extract the d leading directions.
SubspaceBasis estimate_subspace(const Dataset& data, const ItmConfig& cfg, int d);

/// Per-candidate mean bootstrap distances used for dimension and tuning
/// selection, plus the selection itself.
struct SelectionTrace {
  std::vector<double> candidates;
  std::vector<double> mean_distance;  // same length, every value in [0, 1]
  int B = 0;
  double chosen = 0.0;
  std::uint64_t seed = 0;
  bool no_peak = false;  // dimension rule degenerated to a plain argmin

  std::string to_csv() const;
};

/// Valley point of a dimension-variability trace: the index (1-based
/// candidate value) minimizing the trace before its global peak. The trace is
/// smoothed with a centered moving average of the given window first;
/// window 1 disables smoothing. Returns {chosen, no_peak}.
std::pair<int, bool> valley_point(const std::vector<double>& trace,
                                  int smooth_window = 3);

enum class TuneTarget { kSw2, kSt2, kH };

/// Bootstrap selection of the subspace dimension (mean distance between each
/// resample's estimate and the full-sample estimate, for every d in 1..p).
/// Bit-reproducible for fixed (data, cfg, B, seed) at any thread count.
SelectionTrace select_dimension(const Dataset& data, const ItmConfig& cfg,
                                int B, std::uint64_t seed,
                                int smooth_window = 3);

/// Same bootstrap distance trace over a grid of one tuning parameter with d
/// fixed; chosen = argmin. A grid value whose full-sample estimate fails is
/// penalized with distance 1.
SelectionTrace select_tuning(const Dataset& data, const ItmConfig& cfg,
                             TuneTarget target,
                             const std::vector<double>& grid, int d, int B,
                             std::uint64_t seed);

struct TuningPipelineResult {
  int d0 = 0;
  double sw2 = 0.1;
  double st2 = 1.0;
  double h = 0.0;
  SelectionTrace d_trace;
  SelectionTrace sw2_trace;
  std::optional<SelectionTrace> st2_trace;  // CS target only
  std::optional<SelectionTrace> h_trace;    // kernel/elliptic densities only
};

/// The four-stage protocol: d with (sw2, st2) = (0.1, 1.0), then sw2, then
/// st2 (CS only), then h (nonparametric densities only).
TuningPipelineResult tune_pipeline(const Dataset& data, ItmConfig cfg,
                                   const std::vector<double>& sw2_grid,
                                   const std::vector<double>& st2_grid,
                                   const std::vector<double>& h_grid, int B,
                                   std::uint64_t seed);

}  // namespace sdr

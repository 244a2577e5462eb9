#include "sdr/bootstrap.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "sdr/errors.hpp"
#include "sdr/linalg.hpp"
#include "sdr/parallel.hpp"
#include "sdr/rng.hpp"

namespace sdr {

SubspaceBasis estimate_subspace(const Dataset& data, const ItmConfig& cfg,
                                int d) {
  const StandardizedSample sample = standardize(data);
  const ScoreField scores = make_scores(sample.Z, cfg.density, cfg.h);
  const CandidateMatrix M = build_candidate(sample, scores, cfg);
  return extract_basis(M, d, sample.sigma_inv_sqrt);
}

std::string SelectionTrace::to_csv() const {
  std::ostringstream os;
  os.precision(17);
  os << "candidate,mean_distance\n";
  for (std::size_t i = 0; i < candidates.size(); ++i)
    os << candidates[i] << "," << mean_distance[i] << "\n";
  return os.str();
}

std::pair<int, bool> valley_point(const std::vector<double>& trace,
                                  int smooth_window) {
  const int n = int(trace.size());
  if (n == 0) return {0, true};
  if (smooth_window < 1) smooth_window = 1;

  // Centered moving average; ends average whatever fits in the window.
  std::vector<double> smooth(trace.size());
  const int half = smooth_window / 2;
  for (int i = 0; i < n; ++i) {
    const int lo = std::max(0, i - half);
    const int hi = std::min(n - 1, i + half);
    double s = 0.0;
    for (int j = lo; j <= hi; ++j) s += trace[std::size_t(j)];
    smooth[std::size_t(i)] = s / double(hi - lo + 1);
  }

  int peak = 0;
  for (int i = 1; i < n; ++i)
    if (smooth[std::size_t(i)] > smooth[std::size_t(peak)]) peak = i;

  if (peak == 0) {
    // No rise before any peak; the trend rule has nothing to cut at. Fall
    // back to the plain argmin over every candidate.
    int arg = 0;
    for (int i = 1; i < n; ++i)
      if (smooth[std::size_t(i)] < smooth[std::size_t(arg)]) arg = i;
    return {arg + 1, true};
  }

  int arg = 0;
  for (int i = 1; i <= peak; ++i)
    if (smooth[std::size_t(i)] < smooth[std::size_t(arg)]) arg = i;
  return {arg + 1, false};
}

namespace {

constexpr int kMaxRetries = 10;

std::vector<int> draw_indices(CounterRng& rng, int n) {
  std::vector<int> idx(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) idx[std::size_t(i)] = rng.uniform_int(n);
  return idx;
}

// One bootstrap replicate distance: resample, re-run the pipeline, compare
// spans with the full-sample basis. Redraws (fresh substream per retry) when
// a degenerate resample makes the pipeline fail.
double replicate_distance(const Dataset& data, const ItmConfig& cfg, int d,
                          const SubspaceBasis& full_basis, std::uint64_t seed,
                          std::uint64_t stream, int replicate) {
  std::string last_error;
  for (int retry = 0; retry <= kMaxRetries; ++retry) {
    CounterRng rng(seed, stream_key(stream, std::uint64_t(replicate),
                                    std::uint64_t(retry)));
    const std::vector<int> idx = draw_indices(rng, data.n());
    try {
      const SubspaceBasis basis = estimate_subspace(resample(data, idx), cfg, d);
      return subspace_distance(basis.B, full_basis.B, d);
    } catch (const SdrError& e) {
      last_error = e.what();
    }
  }
  throw ResampleFailure(replicate, last_error);
}

std::vector<double> replicate_distances(const Dataset& data,
                                        const ItmConfig& cfg, int d,
                                        const SubspaceBasis& full_basis,
                                        std::uint64_t seed,
                                        std::uint64_t stream, int B) {
  std::vector<double> dist(static_cast<std::size_t>(B));
  parallel_blocks(B, [&](int b) {
    dist[std::size_t(b)] =
        replicate_distance(data, cfg, d, full_basis, seed, stream, b);
  });
  return dist;
}

double ordered_mean(const std::vector<double>& v) {
  double s = 0.0;
  for (double x : v) s += x;
  return s / double(v.size());
}

}  // namespace

SelectionTrace select_dimension(const Dataset& data, const ItmConfig& cfg,
                                int B, std::uint64_t seed, int smooth_window) {
  data.validate();
  if (B < 2) throw std::invalid_argument("need at least 2 bootstrap replicates");
  const int p = data.p();

  // The candidate matrix does not depend on d, so the full-sample spectrum is
  // shared across dimensions.
  const StandardizedSample sample = standardize(data);
  const ScoreField scores = make_scores(sample.Z, cfg.density, cfg.h);
  const CandidateMatrix M = build_candidate(sample, scores, cfg);

  SelectionTrace trace;
  trace.B = B;
  trace.seed = seed;
  for (int d = 1; d <= p; ++d) {
    const SubspaceBasis full_basis = extract_basis(M, d, sample.sigma_inv_sqrt);
    const std::vector<double> dist = replicate_distances(
        data, cfg, d, full_basis, seed, stream_key(0xd1u, std::uint64_t(d)), B);
    trace.candidates.push_back(double(d));
    trace.mean_distance.push_back(ordered_mean(dist));
  }

  const auto [chosen, no_peak] = valley_point(trace.mean_distance, smooth_window);
  trace.chosen = double(chosen);
  trace.no_peak = no_peak;
  return trace;
}

SelectionTrace select_tuning(const Dataset& data, const ItmConfig& cfg,
                             TuneTarget target, const std::vector<double>& grid,
                             int d, int B, std::uint64_t seed) {
  data.validate();
  if (grid.empty()) throw std::invalid_argument("tuning grid is empty");
  if (B < 2) throw std::invalid_argument("need at least 2 bootstrap replicates");

  SelectionTrace trace;
  trace.B = B;
  trace.seed = seed;

  for (std::size_t gi = 0; gi < grid.size(); ++gi) {
    ItmConfig c = cfg;
    switch (target) {
      case TuneTarget::kSw2: c.sw2 = grid[gi]; break;
      case TuneTarget::kSt2: c.st2 = grid[gi]; break;
      case TuneTarget::kH: c.h = grid[gi]; break;
    }

    double mean_dist = 1.0;  // a candidate value that fails is worst-cased
    try {
      const SubspaceBasis full_basis = estimate_subspace(data, c, d);
      const std::vector<double> dist = replicate_distances(
          data, c, d, full_basis, seed,
          stream_key(0x70u, std::uint64_t(target), std::uint64_t(gi)), B);
      mean_dist = ordered_mean(dist);
    } catch (const std::exception&) {
      mean_dist = 1.0;  // a candidate value that cannot be fit loses outright
    }
    trace.candidates.push_back(grid[gi]);
    trace.mean_distance.push_back(mean_dist);
  }

  std::size_t arg = 0;
  for (std::size_t i = 1; i < trace.mean_distance.size(); ++i)
    if (trace.mean_distance[i] < trace.mean_distance[arg]) arg = i;
  trace.chosen = trace.candidates[arg];
  return trace;
}

TuningPipelineResult tune_pipeline(const Dataset& data, ItmConfig cfg,
                                   const std::vector<double>& sw2_grid,
                                   const std::vector<double>& st2_grid,
                                   const std::vector<double>& h_grid, int B,
                                   std::uint64_t seed) {
  TuningPipelineResult out;

  cfg.sw2 = 0.1;
  cfg.st2 = 1.0;
  out.d_trace = select_dimension(data, cfg, B, stream_key(seed, 1));
  out.d0 = int(out.d_trace.chosen);

  out.sw2_trace = select_tuning(data, cfg, TuneTarget::kSw2, sw2_grid, out.d0,
                                B, stream_key(seed, 2));
  out.sw2 = out.sw2_trace.chosen;
  cfg.sw2 = out.sw2;

  if (cfg.space == Space::kPdf) {
    out.st2_trace = select_tuning(data, cfg, TuneTarget::kSt2, st2_grid, out.d0,
                                  B, stream_key(seed, 3));
    out.st2 = out.st2_trace->chosen;
    cfg.st2 = out.st2;
  }

  if (cfg.density != Density::kNormal) {
    out.h_trace = select_tuning(data, cfg, TuneTarget::kH, h_grid, out.d0, B,
                                stream_key(seed, 4));
    out.h = out.h_trace->chosen;
  }
  return out;
}

}  // namespace sdr

// Acceptance suite: one pass/fail line per criterion, nonzero exit when any
// criterion fails. Heavier Monte Carlo settings mirror the documented
// contracts; budgets are wall-clock seconds.

#include <chrono>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "sdr/admm.hpp"
#include "sdr/bootstrap.hpp"
#include "sdr/csv.hpp"
#include "sdr/ftire.hpp"
#include "sdr/iht.hpp"
#include "sdr/invfm.hpp"
#include "sdr/linalg.hpp"
#include "sdr/parallel.hpp"
#include "sdr/rng.hpp"
#include "sdr/scores.hpp"
#include "sdr/subspace.hpp"
#include "sdr/synth.hpp"

namespace fs = std::filesystem;
using Clock = std::chrono::steady_clock;
using Eigen::MatrixXd;
using Eigen::VectorXd;

namespace {

int g_failures = 0;

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

void report(const std::string& name, bool pass, const std::string& detail) {
  std::cout << (pass ? "[PASS] " : "[FAIL] ") << name << " — " << detail
            << std::endl;
  if (!pass) ++g_failures;
}

std::vector<sdr::QdfSolution> g_qdf_runs;

void register_qdf(const sdr::QdfSolution& sol) { g_qdf_runs.push_back(sol); }

// ---------------------------------------------------------------------------

void candidate_oracle_and_psd() {
  const auto t0 = Clock::now();
  double worst_diff = 0.0;
  double worst_asym = 0.0;
  double worst_rel_eig = 0.0;
  bool ok = true;

  for (int c = 0; c < 50; ++c) {
    sdr::SynthSpec spec;
    spec.n = 40 + (c * 13) % 161;  // 40..200
    spec.p = 2 + c % 7;            // 2..8
    spec.model = static_cast<sdr::SynthModel>(c % 4);
    spec.seed = 1000 + std::uint64_t(c);
    const auto gen = sdr::generate(spec);
    const auto sample = sdr::standardize(gen.data);

    sdr::ItmConfig cfg;
    cfg.method = (c % 2 == 0) ? sdr::Method::kFM : sdr::Method::kCM;
    cfg.space = ((c / 2) % 2 == 0) ? sdr::Space::kMean : sdr::Space::kPdf;
    cfg.density = static_cast<sdr::Density>((c / 4) % 3);
    cfg.sw2 = 0.05 + 0.05 * (c % 5);
    cfg.st2 = 0.5 + 0.25 * (c % 3);
    cfg.h = 0.6 + 0.1 * (c % 4);

    const auto scores = sdr::make_scores(sample.Z, cfg.density, cfg.h);
    const MatrixXd raw = sdr::build_candidate_raw(sample, scores, cfg);
    const auto fast = sdr::build_candidate(sample, scores, cfg);
    const auto oracle = sdr::oracle_candidate(sample, scores, cfg);

    worst_diff =
        std::max(worst_diff, (fast.M - oracle.M).cwiseAbs().maxCoeff());
    worst_asym =
        std::max(worst_asym, (raw - raw.transpose()).cwiseAbs().maxCoeff());
    const auto eig = sdr::sym_eig_descending(fast.M);
    const double lmax = std::max(eig.values.maxCoeff(), 0.0);
    if (lmax > 0.0)
      worst_rel_eig =
          std::max(worst_rel_eig, -eig.values.minCoeff() / lmax);
    ok = ok && worst_diff < 1e-10;
  }

  const double elapsed = seconds_since(t0);
  report("candidate-oracle-equivalence",
         worst_diff < 1e-10 && elapsed < 60.0,
         "50 configs, max |fast - oracle| = " + std::to_string(worst_diff) +
             ", " + std::to_string(elapsed) + " s (< 60 s)");
  report("candidate-psd-symmetry",
         worst_asym < 1e-10 && worst_rel_eig <= 1e-8,
         "max asymmetry " + std::to_string(worst_asym) +
             ", worst -min_eig/max_eig " + std::to_string(worst_rel_eig));
}

void recovery_fm_cms() {
  const auto t0 = Clock::now();
  double total = 0.0;
  const int seeds = 20;
  std::vector<double> gammas(seeds);
  sdr::parallel_blocks(seeds, [&](int s) {
    sdr::SynthSpec spec;
    spec.n = 1000;
    spec.p = 6;
    spec.model = sdr::SynthModel::kLinear;
    spec.noise_sd = 0.1;
    spec.seed = 100 + std::uint64_t(s);
    const auto gen = sdr::generate(spec);
    sdr::ItmConfig cfg;
    cfg.space = sdr::Space::kMean;
    cfg.method = sdr::Method::kFM;
    cfg.sw2 = 0.1;
    const auto basis = sdr::estimate_subspace(gen.data, cfg, 1);
    gammas[std::size_t(s)] =
        sdr::trace_correlation(basis.B, gen.true_basis);
  });
  for (double g : gammas) total += g;
  const double mean = total / seeds;
  const double elapsed = seconds_since(t0);
  report("subspace-recovery-fm-cms", mean > 0.95 && elapsed < 120.0,
         "mean trace correlation " + std::to_string(mean) + " over 20 seeds (" +
             std::to_string(elapsed) + " s < 120 s)");
}

void recovery_fm_cs() {
  double total = 0.0;
  const int seeds = 20;
  std::vector<double> gammas(seeds);
  sdr::parallel_blocks(seeds, [&](int s) {
    sdr::SynthSpec spec;
    spec.n = 2000;
    spec.p = 6;
    spec.model = sdr::SynthModel::kDoubleIndex;
    spec.noise_sd = 0.1;
    spec.seed = 300 + std::uint64_t(s);
    const auto gen = sdr::generate(spec);
    sdr::ItmConfig cfg;
    cfg.space = sdr::Space::kPdf;
    cfg.method = sdr::Method::kFM;
    cfg.sw2 = 0.1;
    cfg.st2 = 1.0;
    const auto basis = sdr::estimate_subspace(gen.data, cfg, 2);
    gammas[std::size_t(s)] =
        sdr::trace_correlation(basis.B, gen.true_basis, 2);
  });
  for (double g : gammas) total += g;
  const double mean = total / seeds;
  report("subspace-recovery-fm-cs", mean > 0.85,
         "mean trace correlation " + std::to_string(mean) + " over 20 seeds");
}

void iht_recovery() {
  sdr::SynthSpec spec;
  spec.n = 5000;
  spec.p = 5;
  spec.model = sdr::SynthModel::kLinear;  // monotone single index
  spec.noise_sd = 0.1;
  spec.seed = 777;
  const auto gen = sdr::generate(spec);
  const auto sample = sdr::standardize(gen.data);
  sdr::IhtState st;
  const auto basis = sdr::iht_estimate(sample, 1, false, &st);
  const double gamma = sdr::trace_correlation(basis.B, gen.true_basis);

  double recursion = 0.0;
  for (int j = 1; j < st.M.cols(); ++j)
    recursion = std::max(
        recursion, (st.M.col(j) - st.sigma_yzz * st.M.col(j - 1)).norm());

  report("iht-recovery", gamma > 0.99 && recursion <= 1e-12,
         "trace correlation " + std::to_string(gamma) +
             ", COZY recursion residual " + std::to_string(recursion));
}

void invfm_ftsire_equivalence() {
  sdr::SynthSpec spec;
  spec.n = 1000;
  spec.p = 6;
  spec.model = sdr::SynthModel::kCubicSingleIndex;
  spec.noise_sd = 0.1;
  spec.seed = 888;
  const auto gen = sdr::generate(spec);
  const auto design = sdr::make_design(1, 10, 999);
  const auto invfm = sdr::invfm_estimate(gen.data, 1, design, false);
  const auto sire =
      sdr::fm_xire_with_design(gen.data, 1, design, sdr::FtKind::kSire);
  register_qdf(sire.solution);
  const double gamma =
      sdr::trace_correlation(invfm.basis.B, sire.solution.Gamma);
  report("invfm-ftsire-equivalence", gamma > 1.0 - 1e-3,
         "trace correlation " + std::to_string(gamma) + " (need > 0.999)");
}

void dimension_test_calibration() {
  const int reps = 200;
  std::vector<int> rejects(reps, 0);
  sdr::parallel_blocks(reps, [&](int r) {
    sdr::SynthSpec spec;
    spec.n = 200;
    spec.p = 5;
    spec.model = sdr::SynthModel::kLinear;  // true d = 1
    spec.noise_sd = 0.5;
    spec.seed = 5000 + std::uint64_t(r);
    const auto gen = sdr::generate(spec);
    const auto sample = sdr::standardize(gen.data);
    const auto kernel =
        sdr::build_invfm_kernel(sample, sdr::make_design(1, 5, 31 + r));
    const auto rep = sdr::dimension_tests(kernel, spec.n, 1, 2000);
    rejects[std::size_t(r)] = rep.scaled_pvalue < 0.05 ? 1 : 0;
  });
  int total = 0;
  for (int v : rejects) total += v;
  const double rate = double(total) / reps;
  report("dimension-test-calibration", rate <= 0.10,
         "scaled test at m=1 rejected " + std::to_string(total) + "/200 (" +
             std::to_string(rate) + " <= 0.10)");
}

void qdf_monotone_descent() {
  // A few extra fits across every inner-product kind feed the shared check.
  for (auto kind : {sdr::FtKind::kIre, sdr::FtKind::kDire, sdr::FtKind::kSire,
                    sdr::FtKind::kRire, sdr::FtKind::kDrire}) {
    sdr::SynthSpec spec;
    spec.n = 400;
    spec.p = 5;
    spec.model = sdr::SynthModel::kDoubleIndex;
    spec.noise_sd = 0.1;
    spec.seed = 4242;
    const auto gen = sdr::generate(spec);
    const auto r = sdr::fm_xire(gen.data, 2, 6, kind, 17);
    register_qdf(r.solution);
  }

  bool monotone = true;
  double worst_orth = 0.0;
  double worst_jump = 0.0;
  for (const auto& sol : g_qdf_runs) {
    for (std::size_t i = 1; i < sol.objective_trace.size(); ++i) {
      const double jump = sol.objective_trace[i] - sol.objective_trace[i - 1];
      worst_jump = std::max(worst_jump, jump);
      if (jump > 1e-10) monotone = false;
    }
    worst_orth = std::max(worst_orth, sol.max_orth_error);
  }
  report("qdf-monotone-descent",
         monotone && worst_orth < 1e-8,
         std::to_string(g_qdf_runs.size()) + " solver runs, worst uphill step " +
             std::to_string(worst_jump) + ", worst orthonormality error " +
             std::to_string(worst_orth));
}

void admm_sparse_recovery() {
  const auto t0 = Clock::now();
  const int seeds = 20;
  std::vector<int> success(seeds, 0);
  sdr::parallel_blocks(seeds, [&](int s) {
    sdr::SynthSpec spec;
    spec.n = 200;
    spec.p = 100;
    spec.model = sdr::SynthModel::kSparseSupport;
    spec.noise_sd = 0.1;
    spec.seed = 7000 + std::uint64_t(s);
    const auto gen = sdr::generate(spec);
    sdr::AdmmConfig cfg;
    cfg.seed = 60 + std::uint64_t(s);
    const auto sol = sdr::admmft(gen.data, 1, 30, cfg);
    bool has1 = false, has2 = false;
    for (int j : sol.active_set) {
      has1 |= j == 0;
      has2 |= j == 1;
    }
    success[std::size_t(s)] =
        (has1 && has2 && int(sol.active_set.size()) <= 10) ? 1 : 0;
  });
  int wins = 0;
  for (int v : success) wins += v;

  // lambda = 0 equals the unpenalized FT-SIRE minimizer span.
  sdr::SynthSpec spec;
  spec.n = 200;
  spec.p = 100;
  spec.model = sdr::SynthModel::kSparseSupport;
  spec.noise_sd = 0.1;
  spec.seed = 7100;
  const auto gen = sdr::generate(spec);
  sdr::AdmmConfig cfg;
  cfg.lambda = 0.0;
  cfg.seed = 61;
  const auto sol = sdr::admmft(gen.data, 1, 30, cfg);
  const auto design = sdr::make_design(1, 30, 61);
  const auto sire =
      sdr::fm_xire_with_design(gen.data, 1, design, sdr::FtKind::kSire);
  register_qdf(sire.solution);
  const double gamma = sdr::trace_correlation(sol.Gamma, sire.solution.Gamma);

  const double elapsed = seconds_since(t0);
  const double rate = double(wins) / seeds;
  report("admm-sparse-recovery",
         rate >= 0.80 && gamma > 1.0 - 1e-3 && elapsed < 300.0,
         "support success " + std::to_string(wins) + "/20, lambda=0 vs FT-SIRE "
             "trace correlation " +
             std::to_string(gamma) + ", " + std::to_string(elapsed) +
             " s (< 300 s)");
}

void bootstrap_determinism() {
  sdr::SynthSpec spec;
  spec.n = 60;
  spec.p = 4;
  spec.model = sdr::SynthModel::kLinear;
  spec.seed = 12;
  const auto gen = sdr::generate(spec);
  sdr::ItmConfig cfg;
  cfg.space = sdr::Space::kPdf;

  sdr::set_thread_count(1);
  const auto d1 = sdr::select_dimension(gen.data, cfg, 8, 99);
  const auto t1 = sdr::select_tuning(gen.data, cfg, sdr::TuneTarget::kSw2,
                                     {0.05, 0.1, 0.2}, 1, 8, 99);
  sdr::set_thread_count(4);
  const auto d2 = sdr::select_dimension(gen.data, cfg, 8, 99);
  const auto t2 = sdr::select_tuning(gen.data, cfg, sdr::TuneTarget::kSw2,
                                     {0.05, 0.1, 0.2}, 1, 8, 99);
  sdr::set_thread_count(0);

  bool identical = d1.chosen == d2.chosen && t1.chosen == t2.chosen;
  for (std::size_t i = 0; i < d1.mean_distance.size(); ++i)
    identical = identical && d1.mean_distance[i] == d2.mean_distance[i];
  for (std::size_t i = 0; i < t1.mean_distance.size(); ++i)
    identical = identical && t1.mean_distance[i] == t2.mean_distance[i];
  report("bootstrap-determinism", identical,
         identical ? "serial and 4-thread traces are bit-identical"
                   : "traces diverged between thread counts");
}

void density_score_checks() {
  // Kernel score vs central finite differences of log fhat.
  sdr::SynthSpec spec;
  spec.n = 100;
  spec.p = 2;
  spec.seed = 31;
  const auto gen = sdr::generate(spec);
  const auto sample = sdr::standardize(gen.data);
  const double h = 0.8;
  const auto ks = sdr::kernel_score(sample.Z, h);
  double worst_fd = 0.0;
  const double delta = 1e-5;
  for (int i = 0; i < sample.n(); ++i) {
    for (int j = 0; j < 2; ++j) {
      VectorXd zp = sample.Z.row(i).transpose();
      VectorXd zm = zp;
      zp[j] += delta;
      zm[j] -= delta;
      const double fd = (std::log(sdr::kernel_density_at(sample.Z, h, zp)) -
                         std::log(sdr::kernel_density_at(sample.Z, h, zm))) /
                        (2 * delta);
      worst_fd = std::max(worst_fd, std::abs(fd - ks.g(i, j)));
    }
  }

  // Elliptic score vs -z on spherical normal data.
  sdr::CounterRng rng(63);
  const int n = 5000, p = 3;
  MatrixXd Z(n, p);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < p; ++j) Z(i, j) = rng.normal();
  const auto es = sdr::elliptic_score(Z, 0.15);
  double err = 0.0;
  for (int i = 0; i < n; ++i)
    err += (es.g.row(i) + Z.row(i)).cwiseAbs().sum() / p;
  err /= n;

  report("density-score-checks", worst_fd <= 1e-4 && err < 0.1,
         "kernel vs finite differences " + std::to_string(worst_fd) +
             " (<= 1e-4), elliptic vs -z mean error " + std::to_string(err) +
             " (< 0.1)");
}

void cli_round_trip() {
  const char* bin = std::getenv("SDRKIT_BIN");
  if (!bin) {
    report("cli-round-trip", false, "SDRKIT_BIN not set");
    return;
  }
  const fs::path tmp =
      fs::temp_directory_path() / ("sdr_acc_" + std::to_string(::getpid()));
  fs::create_directories(tmp);
  const std::string data = (tmp / "sim.csv").string();
  const std::string quiet = " > /dev/null 2>&1";

  auto run = [&](const std::string& cmd) {
    const int rc = std::system(cmd.c_str());
    return WIFEXITED(rc) && WEXITSTATUS(rc) == 0;
  };
  auto slurp = [](const fs::path& p) {
    std::ifstream in(p);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
  };

  bool ok = run(std::string(bin) +
                " simulate --n 150 --p 4 --model double --seed 21 --data-out " +
                data + quiet);

  const std::string out1 = (tmp / "e1.json").string();
  const std::string out2 = (tmp / "e2.json").string();
  const std::string est = std::string(bin) + " estimate --input " + data +
                          " --space pdf --method FM --d 2 --seed 5 --out ";
  ok = ok && run(est + out1 + quiet);
  ok = ok && run(est + out2 + quiet);
  ok = ok && slurp(out1) == slurp(out2) && !slurp(out1).empty();

  // Re-ingest the simulated file and confirm a clean parse.
  bool reingest_ok = false;
  try {
    const auto rep = sdr::ingest_file(data, "y1");
    reingest_ok = rep.data.n() == 150 && rep.data.p() == 4;
  } catch (const std::exception&) {
    reingest_ok = false;
  }

  std::error_code ec;
  fs::remove_all(tmp, ec);
  report("cli-round-trip", ok && reingest_ok,
         ok ? "simulate -> estimate -> re-ingest, reruns byte-identical"
            : "CLI invocation failed");
}

}  // namespace

int main() {
  std::cout << "acceptance suite (" << sdr::thread_count() << " threads)\n";
  const auto t0 = Clock::now();

  candidate_oracle_and_psd();
  recovery_fm_cms();
  recovery_fm_cs();
  iht_recovery();
  invfm_ftsire_equivalence();
  dimension_test_calibration();
  admm_sparse_recovery();
  qdf_monotone_descent();
  bootstrap_determinism();
  density_score_checks();
  cli_round_trip();

  std::cout << (g_failures == 0 ? "ALL CRITERIA PASSED" : "FAILURES PRESENT")
            << " (" << seconds_since(t0) << " s total)\n";
  return g_failures == 0 ? 0 : 1;
}

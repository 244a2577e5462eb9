// sdrkit: command-line front end for the integral-transform SDR estimators.
// Every subcommand emits a JSON document embedding the resolved configuration
// and seed, so any run can be reproduced from its own output.

#include <CLI11.hpp>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <json.hpp>
#include <optional>
#include <string>

#include "sdr/admm.hpp"
#include "sdr/bootstrap.hpp"
#include "sdr/csv.hpp"
#include "sdr/errors.hpp"
#include "sdr/ftire.hpp"
#include "sdr/iht.hpp"
#include "sdr/invfm.hpp"
#include "sdr/parallel.hpp"
#include "sdr/synth.hpp"

using json = nlohmann::ordered_json;

namespace {

constexpr const char* kSchema = "sdr-kit/1";
constexpr std::uint64_t kDefaultSeed = 2024;

json matrix_to_json(const Eigen::MatrixXd& m) {
  json rows = json::array();
  for (int r = 0; r < m.rows(); ++r) {
    json row = json::array();
    for (int c = 0; c < m.cols(); ++c) row.push_back(m(r, c));
    rows.push_back(std::move(row));
  }
  return rows;
}

json vector_to_json(const Eigen::VectorXd& v) {
  json out = json::array();
  for (int i = 0; i < v.size(); ++i) out.push_back(v[i]);
  return out;
}

std::string output_dir() {
  if (const char* env = std::getenv("SDRKIT_OUTDIR")) return env;
  return ".";
}

std::string resolve_out(const std::string& path) {
  if (path.empty() || path == "-") return path;
  std::filesystem::path p(path);
  if (p.is_absolute()) return path;
  return (std::filesystem::path(output_dir()) / p).string();
}

void emit(const json& doc, const std::string& out_path) {
  if (out_path.empty() || out_path == "-") {
    std::cout << doc.dump(2) << "\n";
    return;
  }
  std::ofstream out(resolve_out(out_path));
  if (!out) throw sdr::SdrError("cannot write output file: " + out_path);
  out << doc.dump(2) << "\n";
}

struct CommonOpts {
  std::string input;
  std::string response = "y1";
  std::string out;
  std::string format = "json";
  char delimiter = ',';
  std::uint64_t seed = kDefaultSeed;
  int threads = 0;
};

void add_common(CLI::App* cmd, CommonOpts& o, bool needs_input = true) {
  if (needs_input)
    cmd->add_option("--input,-i", o.input, "input CSV with header row")
        ->required();
  cmd->add_option("--response,-y", o.response,
                  "response columns (names or 0-based indices, comma separated)");
  cmd->add_option("--out,-o", o.out, "output path ('-' = stdout)");
  cmd->add_option("--format", o.format, "json or csv")
      ->check(CLI::IsMember({"json", "csv"}));
  cmd->add_option("--delimiter", o.delimiter, "CSV delimiter");
  cmd->add_option("--seed", o.seed, "RNG seed (fixed default for reproducibility)");
  cmd->add_option("--threads", o.threads, "worker thread cap (0 = hardware)");
}

sdr::Density parse_density(const std::string& s) {
  if (s == "normal") return sdr::Density::kNormal;
  if (s == "kernel") return sdr::Density::kKernel;
  if (s == "elliptic") return sdr::Density::kElliptic;
  throw sdr::SdrError("unknown density: " + s);
}

sdr::FtKind parse_ft_kind(const std::string& s) {
  if (s == "FT-IRE") return sdr::FtKind::kIre;
  if (s == "FT-DIRE") return sdr::FtKind::kDire;
  if (s == "FT-SIRE") return sdr::FtKind::kSire;
  if (s == "FT-RIRE") return sdr::FtKind::kRire;
  if (s == "FT-DRIRE") return sdr::FtKind::kDrire;
  throw sdr::SdrError("unknown estimator kind: " + s);
}

json config_block(const CommonOpts& o) {
  return json{{"input", o.input},
              {"response", o.response},
              {"format", o.format},
              {"seed", o.seed},
              {"threads", o.threads}};
}

json itm_config_block(const sdr::ItmConfig& cfg) {
  return json{{"space", sdr::to_string(cfg.space)},
              {"method", sdr::to_string(cfg.method)},
              {"density", sdr::to_string(cfg.density)},
              {"sw2", cfg.sw2},
              {"st2", cfg.st2},
              {"h", cfg.h},
              {"standardize_response", cfg.standardize_response}};
}

json trace_block(const sdr::SelectionTrace& t) {
  return json{{"candidates", t.candidates},
              {"mean_distance", t.mean_distance},
              {"B", t.B},
              {"seed", t.seed},
              {"chosen", t.chosen},
              {"no_peak", t.no_peak}};
}

void write_trace_csv(const sdr::SelectionTrace& t, const std::string& path) {
  std::ofstream out(resolve_out(path));
  if (!out) throw sdr::SdrError("cannot write trace file: " + path);
  out << t.to_csv();
}

json ingest_block(const sdr::IngestReport& rep) {
  return json{{"rows", rep.data.n()},
              {"predictors", rep.data.p()},
              {"responses", rep.data.q()},
              {"dropped_rows", rep.dropped_rows}};
}

int run_app(int argc, char** argv) {
  if (const char* env = std::getenv("SDRKIT_THREADS")) {
    const int n = std::atoi(env);
    if (n > 0) sdr::set_thread_count(n);  // --threads still wins
  }

  CLI::App app{"integral-transform sufficient dimension reduction toolkit"};
  app.require_subcommand(1);

  // --- simulate ---------------------------------------------------------
  auto* sim = app.add_subcommand("simulate", "generate a synthetic dataset CSV");
  CommonOpts sim_o;
  add_common(sim, sim_o, false);
  int sim_n = 500, sim_p = 6, sim_q = 1;
  std::string sim_model = "linear", sim_dist = "normal";
  double sim_noise = 0.1;
  sim->add_option("--n", sim_n, "sample size");
  sim->add_option("--p", sim_p, "predictor count");
  sim->add_option("--q", sim_q, "response count (extra columns are noise)");
  sim->add_option("--model", sim_model, "linear|cubic|double|sparse")
      ->check(CLI::IsMember({"linear", "cubic", "double", "sparse"}));
  sim->add_option("--x-dist", sim_dist, "normal|elliptic_t|uniform")
      ->check(CLI::IsMember({"normal", "elliptic_t", "uniform"}));
  sim->add_option("--noise-sd", sim_noise, "noise standard deviation");
  std::string sim_data_out = "simulated.csv";
  sim->add_option("--data-out", sim_data_out, "dataset CSV path");

  // --- select-dim -------------------------------------------------------
  auto* sd = app.add_subcommand("select-dim",
                                "bootstrap dimension-variability selection");
  CommonOpts sd_o;
  add_common(sd, sd_o);
  std::string sd_space = "mean", sd_method = "FM", sd_density = "normal";
  double sd_sw2 = 0.1, sd_st2 = 1.0, sd_h = 1.0;
  int sd_B = 50, sd_window = 3;
  std::string sd_trace_csv;
  sd->add_option("--space", sd_space)->check(CLI::IsMember({"mean", "pdf"}));
  sd->add_option("--method", sd_method)->check(CLI::IsMember({"FM", "CM"}));
  sd->add_option("--density", sd_density)
      ->check(CLI::IsMember({"normal", "kernel", "elliptic"}));
  sd->add_option("--sw2", sd_sw2);
  sd->add_option("--st2", sd_st2);
  sd->add_option("--bandwidth", sd_h, "kernel bandwidth h");
  sd->add_option("--B", sd_B, "bootstrap replicates");
  sd->add_option("--smooth-window", sd_window, "trend smoothing window");
  sd->add_option("--trace-csv", sd_trace_csv, "variability plot data path");

  // --- tune -------------------------------------------------------------
  auto* tn = app.add_subcommand("tune", "bootstrap tuning-parameter selection");
  CommonOpts tn_o;
  add_common(tn, tn_o);
  std::string tn_target = "sw2";
  std::string tn_space = "mean", tn_method = "FM", tn_density = "normal";
  double tn_sw2 = 0.1, tn_st2 = 1.0, tn_h = 1.0;
  int tn_d = 1, tn_B = 50;
  double tn_from = 0.05, tn_to = 1.0, tn_step = 0.01;
  std::string tn_trace_csv;
  tn->add_option("--target", tn_target)->check(CLI::IsMember({"sw2", "st2", "h"}));
  tn->add_option("--space", tn_space)->check(CLI::IsMember({"mean", "pdf"}));
  tn->add_option("--method", tn_method)->check(CLI::IsMember({"FM", "CM"}));
  tn->add_option("--density", tn_density)
      ->check(CLI::IsMember({"normal", "kernel", "elliptic"}));
  tn->add_option("--sw2", tn_sw2);
  tn->add_option("--st2", tn_st2);
  tn->add_option("--bandwidth", tn_h, "kernel bandwidth h");
  tn->add_option("--d", tn_d, "subspace dimension")->required();
  tn->add_option("--B", tn_B);
  tn->add_option("--grid-from", tn_from);
  tn->add_option("--grid-to", tn_to);
  tn->add_option("--grid-step", tn_step);
  tn->add_option("--trace-csv", tn_trace_csv);

  // --- estimate ---------------------------------------------------------
  auto* es = app.add_subcommand("estimate", "FM/CM/IHT subspace estimation");
  CommonOpts es_o;
  add_common(es, es_o);
  std::string es_space = "mean", es_method = "FM", es_density = "normal";
  double es_sw2 = 0.1, es_st2 = 1.0, es_h = 1.0;
  int es_d = 1;
  bool es_raw_y = false;
  es->add_option("--space", es_space)->check(CLI::IsMember({"mean", "pdf"}));
  es->add_option("--method", es_method)->check(CLI::IsMember({"FM", "CM", "iht"}));
  es->add_option("--density", es_density)
      ->check(CLI::IsMember({"normal", "kernel", "elliptic"}));
  es->add_option("--sw2", es_sw2);
  es->add_option("--st2", es_st2);
  es->add_option("--bandwidth", es_h, "kernel bandwidth h");
  es->add_option("--d", es_d)->required();
  es->add_flag("--raw-response", es_raw_y, "skip response standardization");

  // --- test-dim ---------------------------------------------------------
  auto* td = app.add_subcommand("test-dim", "invFM dimension hypothesis tests");
  CommonOpts td_o;
  add_common(td, td_o);
  int td_m = -1, td_k = 10, td_mc = 100000;
  double td_level = 0.05;
  bool td_no_scale_x = false;
  td->add_option("--m", td_m, "single hypothesized dimension (default: loop)");
  td->add_option("--k", td_k, "number of frequencies");
  td->add_option("--mc-draws", td_mc, "Monte Carlo draws for the weighted test");
  td->add_option("--level", td_level, "sequential test level");
  td->add_flag("--no-scale-x", td_no_scale_x);

  // --- invfm ------------------------------------------------------------
  auto* iv = app.add_subcommand("invfm", "Fourier inverse-regression estimate");
  CommonOpts iv_o;
  add_common(iv, iv_o);
  int iv_d = 1, iv_k = 10;
  bool iv_no_scale_x = false;
  iv->add_option("--d", iv_d)->required();
  iv->add_option("--k", iv_k, "number of frequencies");
  iv->add_flag("--no-scale-x", iv_no_scale_x);

  // --- xire -------------------------------------------------------------
  auto* xr = app.add_subcommand("xire", "minimum-discrepancy FT estimators");
  CommonOpts xr_o;
  add_common(xr, xr_o);
  int xr_d = 1, xr_m = 10;
  std::string xr_kind = "FT-IRE";
  xr->add_option("--d", xr_d)->required();
  xr->add_option("--m", xr_m, "number of frequencies");
  xr->add_option("--kind", xr_kind)
      ->check(CLI::IsMember(
          {"FT-IRE", "FT-DIRE", "FT-SIRE", "FT-RIRE", "FT-DRIRE"}));

  // --- sparse -----------------------------------------------------------
  auto* sp = app.add_subcommand("sparse", "iterated-ADMM sparse estimation");
  CommonOpts sp_o;
  add_common(sp, sp_o);
  int sp_d = 1, sp_m = 30, sp_noB = 5, sp_noC = 20, sp_noW = 2;
  double sp_rho = 1.0, sp_eps = 1e-6;
  std::optional<double> sp_lambda;
  double sp_lambda_in = -1.0;
  bool sp_sparse_cov = false, sp_scale_x = false;
  sp->add_option("--d", sp_d);
  sp->add_option("--m", sp_m, "number of frequencies");
  sp->add_option("--lambda", sp_lambda_in,
                 "penalty level (omit for cross-validation)");
  sp->add_option("--rho", sp_rho);
  sp->add_option("--eps", sp_eps);
  sp->add_option("--noB", sp_noB);
  sp->add_option("--noC", sp_noC);
  sp->add_option("--noW", sp_noW);
  sp->add_flag("--sparse-cov", sp_sparse_cov);
  sp->add_flag("--scale-x", sp_scale_x);

  CLI11_PARSE(app, argc, argv);

  json doc;
  doc["schema"] = kSchema;
  json warnings = json::array();

  if (*sim) {
    if (sim_o.threads > 0) sdr::set_thread_count(sim_o.threads);
    sdr::SynthSpec spec;
    spec.n = sim_n;
    spec.p = sim_p;
    spec.q = sim_q;
    spec.noise_sd = sim_noise;
    spec.seed = sim_o.seed;
    spec.model = sim_model == "linear" ? sdr::SynthModel::kLinear
                 : sim_model == "cubic"
                     ? sdr::SynthModel::kCubicSingleIndex
                     : sim_model == "double" ? sdr::SynthModel::kDoubleIndex
                                             : sdr::SynthModel::kSparseSupport;
    spec.x_dist = sim_dist == "normal" ? sdr::XDist::kNormal
                  : sim_dist == "elliptic_t" ? sdr::XDist::kEllipticT
                                             : sdr::XDist::kUniform;
    const auto gen = sdr::generate(spec);
    sdr::write_dataset_csv(resolve_out(sim_data_out), gen.data);

    doc["command"] = "simulate";
    doc["config"] = {{"n", sim_n},
                     {"p", sim_p},
                     {"q", sim_q},
                     {"model", sim_model},
                     {"x_dist", sim_dist},
                     {"noise_sd", sim_noise},
                     {"seed", sim_o.seed},
                     {"data_out", sim_data_out}};
    doc["result"] = {{"rows", gen.data.n()},
                     {"true_basis", matrix_to_json(gen.true_basis)}};
    doc["warnings"] = warnings;
    emit(doc, sim_o.out);
    return 0;
  }

  if (*sd) {
    if (sd_o.threads > 0) sdr::set_thread_count(sd_o.threads);
    const auto rep = sdr::ingest_file(sd_o.input, sd_o.response, sd_o.delimiter);
    sdr::ItmConfig cfg;
    cfg.space = sd_space == "mean" ? sdr::Space::kMean : sdr::Space::kPdf;
    cfg.method = sd_method == "FM" ? sdr::Method::kFM : sdr::Method::kCM;
    cfg.density = parse_density(sd_density);
    cfg.sw2 = sd_sw2;
    cfg.st2 = sd_st2;
    cfg.h = sd_h;
    const auto trace =
        sdr::select_dimension(rep.data, cfg, sd_B, sd_o.seed, sd_window);
    if (!sd_trace_csv.empty()) write_trace_csv(trace, sd_trace_csv);

    doc["command"] = "select-dim";
    doc["config"] = config_block(sd_o);
    doc["config"]["itm"] = itm_config_block(cfg);
    doc["config"]["B"] = sd_B;
    doc["config"]["smooth_window"] = sd_window;
    doc["ingest"] = ingest_block(rep);
    doc["result"] = trace_block(trace);
    doc["result"]["d_hat"] = int(trace.chosen);
    if (trace.no_peak) warnings.push_back("no peak in the variability trace");
    doc["warnings"] = warnings;
    emit(doc, sd_o.out);
    return 0;
  }

  if (*tn) {
    if (tn_o.threads > 0) sdr::set_thread_count(tn_o.threads);
    const auto rep = sdr::ingest_file(tn_o.input, tn_o.response, tn_o.delimiter);
    sdr::ItmConfig cfg;
    cfg.space = tn_space == "mean" ? sdr::Space::kMean : sdr::Space::kPdf;
    cfg.method = tn_method == "FM" ? sdr::Method::kFM : sdr::Method::kCM;
    cfg.density = parse_density(tn_density);
    cfg.sw2 = tn_sw2;
    cfg.st2 = tn_st2;
    cfg.h = tn_h;
    std::vector<double> grid;
    const int steps = int(std::floor((tn_to - tn_from) / tn_step + 1e-9));
    for (int i = 0; i <= steps; ++i) grid.push_back(tn_from + i * tn_step);
    const sdr::TuneTarget target = tn_target == "sw2" ? sdr::TuneTarget::kSw2
                                   : tn_target == "st2" ? sdr::TuneTarget::kSt2
                                                        : sdr::TuneTarget::kH;
    const auto trace =
        sdr::select_tuning(rep.data, cfg, target, grid, tn_d, tn_B, tn_o.seed);
    if (!tn_trace_csv.empty()) write_trace_csv(trace, tn_trace_csv);

    doc["command"] = "tune";
    doc["config"] = config_block(tn_o);
    doc["config"]["itm"] = itm_config_block(cfg);
    doc["config"]["target"] = tn_target;
    doc["config"]["d"] = tn_d;
    doc["config"]["B"] = tn_B;
    doc["config"]["grid"] = {{"from", tn_from}, {"to", tn_to}, {"step", tn_step}};
    doc["ingest"] = ingest_block(rep);
    doc["result"] = trace_block(trace);
    doc["warnings"] = warnings;
    emit(doc, tn_o.out);
    return 0;
  }

  if (*es) {
    if (es_o.threads > 0) sdr::set_thread_count(es_o.threads);
    const auto rep = sdr::ingest_file(es_o.input, es_o.response, es_o.delimiter);

    sdr::SubspaceBasis basis;
    sdr::ItmConfig cfg;
    if (es_method == "iht") {
      const auto sample = sdr::standardize(rep.data);
      basis = sdr::iht_estimate(sample, es_d);
    } else {
      cfg.space = es_space == "mean" ? sdr::Space::kMean : sdr::Space::kPdf;
      cfg.method = es_method == "FM" ? sdr::Method::kFM : sdr::Method::kCM;
      cfg.density = parse_density(es_density);
      cfg.sw2 = es_sw2;
      cfg.st2 = es_st2;
      cfg.h = es_h;
      cfg.standardize_response = !es_raw_y;
      basis = sdr::estimate_subspace(rep.data, cfg, es_d);
    }

    doc["command"] = "estimate";
    doc["config"] = config_block(es_o);
    doc["config"]["method"] = es_method;
    doc["config"]["d"] = es_d;
    if (es_method != "iht") doc["config"]["itm"] = itm_config_block(cfg);
    doc["ingest"] = ingest_block(rep);

    if (es_o.format == "csv") {
      const std::string base = es_o.out.empty() ? "basis" : es_o.out;
      sdr::write_csv(resolve_out(base + ".csv"), basis.B);
      Eigen::MatrixXd spec_col = basis.full_spectrum;
      sdr::write_csv(resolve_out(base + "_eigenvalues.csv"), spec_col);
      doc["result"] = {{"basis_csv", base + ".csv"},
                       {"eigenvalues_csv", base + "_eigenvalues.csv"}};
      doc["warnings"] = warnings;
      emit(doc, "-");
    } else {
      doc["result"] = {{"basis", matrix_to_json(basis.B)},
                       {"eigenvalues", vector_to_json(basis.eigvals)},
                       {"full_spectrum", vector_to_json(basis.full_spectrum)}};
      doc["warnings"] = warnings;
      emit(doc, es_o.out);
    }
    return 0;
  }

  if (*td) {
    if (td_o.threads > 0) sdr::set_thread_count(td_o.threads);
    const auto rep = sdr::ingest_file(td_o.input, td_o.response, td_o.delimiter);
    const auto design = sdr::make_design(rep.data.q(), td_k, td_o.seed);
    const auto r = sdr::invfm_estimate(rep.data, 1, design, !td_no_scale_x);

    doc["command"] = "test-dim";
    doc["config"] = config_block(td_o);
    doc["config"]["k"] = td_k;
    doc["config"]["mc_draws"] = td_mc;
    doc["config"]["level"] = td_level;
    doc["ingest"] = ingest_block(rep);

    auto report_json = [](const sdr::DimensionTestReport& t) {
      return json{{"m", t.m},
                  {"lambda_stat", t.lambda_stat},
                  {"p_star", t.p_star},
                  {"s_star", t.s_star},
                  {"pvalues",
                   {{"weighted", t.weighted_pvalue},
                    {"scaled", t.scaled_pvalue},
                    {"adjusted", t.adjusted_pvalue}}}};
    };

    if (td_m >= 0) {
      const auto t =
          sdr::dimension_tests(r.kernel, rep.data.n(), td_m, td_mc, td_o.seed);
      doc["result"] = {{"mode", "single"}, {"report", report_json(t)}};
    } else {
      const auto seq = sdr::sequential_dimension_test(
          r.kernel, rep.data.n(), td_level, sdr::TestKind::kScaled, td_mc,
          td_o.seed);
      json reports = json::array();
      for (const auto& t : seq.reports) reports.push_back(report_json(t));
      doc["result"] = {{"mode", "sequential"},
                       {"d_hat", seq.d_hat},
                       {"stopped", seq.stopped},
                       {"reports", reports}};
    }
    if (r.kernel.degenerate) warnings.push_back("degenerate Fourier kernel");
    doc["warnings"] = warnings;
    emit(doc, td_o.out);
    return 0;
  }

  if (*iv) {
    if (iv_o.threads > 0) sdr::set_thread_count(iv_o.threads);
    const auto rep = sdr::ingest_file(iv_o.input, iv_o.response, iv_o.delimiter);
    const auto design = sdr::make_design(rep.data.q(), iv_k, iv_o.seed);
    const auto r = sdr::invfm_estimate(rep.data, iv_d, design, !iv_no_scale_x);

    doc["command"] = "invfm";
    doc["config"] = config_block(iv_o);
    doc["config"]["d"] = iv_d;
    doc["config"]["k"] = iv_k;
    doc["config"]["scale_x"] = !iv_no_scale_x;
    doc["ingest"] = ingest_block(rep);
    doc["result"] = {{"basis", matrix_to_json(r.basis.B)},
                     {"eigenvalues", vector_to_json(r.basis.eigvals)},
                     {"full_spectrum", vector_to_json(r.basis.full_spectrum)}};
    if (r.kernel.degenerate) warnings.push_back("degenerate Fourier kernel");
    doc["warnings"] = warnings;
    emit(doc, iv_o.out);
    return 0;
  }

  if (*xr) {
    if (xr_o.threads > 0) sdr::set_thread_count(xr_o.threads);
    const auto rep = sdr::ingest_file(xr_o.input, xr_o.response, xr_o.delimiter);
    const auto r =
        sdr::fm_xire(rep.data, xr_d, xr_m, parse_ft_kind(xr_kind), xr_o.seed);

    doc["command"] = "xire";
    doc["config"] = config_block(xr_o);
    doc["config"]["d"] = xr_d;
    doc["config"]["m"] = xr_m;
    doc["config"]["kind"] = xr_kind;
    doc["ingest"] = ingest_block(rep);
    doc["result"] = {{"basis", matrix_to_json(r.solution.Gamma)},
                     {"objective", r.solution.objective},
                     {"iterations", r.solution.iterations},
                     {"converged", r.solution.converged},
                     {"kernel_spectrum", vector_to_json(r.basis.full_spectrum)}};
    if (!r.solution.converged) warnings.push_back("QDF solver hit iteration cap");
    if (r.ridge_used) warnings.push_back("ridge-regularized inner product");
    doc["warnings"] = warnings;
    emit(doc, xr_o.out);
    return 0;
  }

  if (*sp) {
    if (sp_o.threads > 0) sdr::set_thread_count(sp_o.threads);
    const auto rep = sdr::ingest_file(sp_o.input, sp_o.response, sp_o.delimiter);
    sdr::AdmmConfig cfg;
    if (sp->count("--lambda")) sp_lambda = sp_lambda_in;
    cfg.lambda = sp_lambda;
    cfg.rho = sp_rho;
    cfg.eps = sp_eps;
    cfg.noB = sp_noB;
    cfg.noC = sp_noC;
    cfg.noW = sp_noW;
    cfg.sparse_cov = sp_sparse_cov;
    cfg.scale_x = sp_scale_x;
    cfg.seed = sp_o.seed;
    const auto sol = sdr::admmft(rep.data, sp_d, sp_m, cfg);

    doc["command"] = "sparse";
    doc["config"] = config_block(sp_o);
    doc["config"]["d"] = sp_d;
    doc["config"]["m"] = sp_m;
    doc["config"]["lambda"] =
        sp_lambda ? json(*sp_lambda) : json("cross-validation");
    doc["config"]["rho"] = sp_rho;
    doc["config"]["eps"] = sp_eps;
    doc["config"]["noB"] = sp_noB;
    doc["config"]["noC"] = sp_noC;
    doc["config"]["noW"] = sp_noW;
    doc["config"]["sparse_cov"] = sp_sparse_cov;
    doc["config"]["scale_x"] = sp_scale_x;
    doc["ingest"] = ingest_block(rep);
    doc["result"] = {{"active_set", sol.active_set},
                     {"lambda", sol.lambda},
                     {"lambda_max", sol.lambda_max},
                     {"gamma", matrix_to_json(sol.Gamma)},
                     {"objective_trace", sol.objective_trace},
                     {"converged", sol.converged},
                     {"primal_residual", sol.primal_residual},
                     {"dual_residual", sol.dual_residual}};
    if (!sol.converged) warnings.push_back("ADMM hit its iteration caps");
    doc["warnings"] = warnings;
    emit(doc, sp_o.out);
    return 0;
  }

  return 1;
}

}  // namespace

int main(int argc, char** argv) {
  try {
    return run_app(argc, argv);
  } catch (const sdr::SdrError& e) {
    json err{{"schema", kSchema},
             {"error", {{"type", "SdrError"}, {"message", e.what()}}}};
    std::cerr << err.dump(2) << "\n";
    return 2;
  } catch (const std::exception& e) {
    json err{{"schema", kSchema},
             {"error", {{"type", "error"}, {"message", e.what()}}}};
    std::cerr << err.dump(2) << "\n";
    return 2;
  }
}

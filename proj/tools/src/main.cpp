#include <CLI11.hpp>
#include <iostream>

#include "config.hpp"
#include "runner.hpp"

namespace {

struct Flags {
  std::string config;
  std::optional<std::string> pipeline;
  std::optional<int> d;
  std::optional<int> K;
  std::optional<std::vector<int>> K_list;
  std::optional<std::size_t> n_window;
  std::optional<int> levels;
  std::optional<double> log_tail_start;
  std::optional<std::string> symbol;
  std::optional<std::string> angular;
  std::optional<double> cutoff;
  std::optional<std::string> integrand;
  std::optional<double> tol_relative, tol_absolute, tol_measurability, min_band_width, tol_slope, tol_diagonal;
  std::optional<std::string> csv, report;
  std::optional<std::uint64_t> seed;
  std::optional<int> threads;
};

void add_flags(CLI::App* cmd, Flags& f, const char* pipeline_help) {
  cmd->add_option("-c,--config", f.config, "JSON experiment config (flags override its keys)");
  cmd->add_option("--pipeline", f.pipeline, pipeline_help);
  cmd->add_option("--d", f.d, "dimension (1..3)");
  cmd->add_option("--K", f.K, "frequency cutoff |m|_inf <= K");
  cmd->add_option("--K-list", f.K_list, "comma-separated increasing K values (sweep)")->delimiter(',');
  cmd->add_option("--n-window", f.n_window, "eigenvalue window n (<= N/2)");
  cmd->add_option("--levels", f.levels, "modulation levels");
  cmd->add_option("--log-tail-start", f.log_tail_start, "log of the first tail index for the surrogates");
  cmd->add_option("--symbol", f.symbol, "symbol kind: classical, zero, nonmeasurable");
  cmd->add_option("--angular", f.angular, "principal angular part: even or odd");
  cmd->add_option("--cutoff", f.cutoff, "radius where the classical symbol becomes homogeneous");
  cmd->add_option("--integrand", f.integrand, "integrate pipeline: one_plus_cos or bumps");
  cmd->add_option("--tol-relative", f.tol_relative, "relative tolerance");
  cmd->add_option("--tol-absolute", f.tol_absolute, "absolute tolerance for references near zero");
  cmd->add_option("--tol-measurability", f.tol_measurability, "band width below which a series is measurable");
  cmd->add_option("--min-band-width", f.min_band_width, "band width required by the nonmeasurable pipeline");
  cmd->add_option("--tol-slope", f.tol_slope, "trend slope bound");
  cmd->add_option("--tol-diagonal", f.tol_diagonal, "relative tolerance of the diagonal residue");
  cmd->add_option("--csv", f.csv, "series CSV output path");
  cmd->add_option("--report", f.report, "report JSON output path");
  cmd->add_option("--seed", f.seed, "seed recorded in the report");
  cmd->add_option("--threads", f.threads, "worker threads");
}

pdolab::cli::ExperimentConfig resolve(const Flags& f, bool is_sweep) {
  using namespace pdolab::cli;
  ExperimentConfig c = f.config.empty() ? ExperimentConfig{} : load_config(f.config);
  if (f.pipeline) {
    if (is_sweep) c.sweep_pipeline = parse_pipeline(*f.pipeline);
    else c.pipeline = parse_pipeline(*f.pipeline);
  }
  if (is_sweep) c.pipeline = Pipeline::sweep;
  if (f.d) c.d = *f.d;
  if (f.K) {
    c.K = *f.K;
    c.K_given = true;
  }
  if (f.K_list) {
    c.K_list = *f.K_list;
    c.K_list_given = true;
  }
  if (f.n_window) c.n_window = *f.n_window;
  if (f.levels) c.levels = *f.levels;
  if (f.log_tail_start) c.log_tail_start = *f.log_tail_start;
  if (f.symbol) {
    if (*f.symbol == "classical") c.symbol.kind = SymbolKindSpec::classical;
    else if (*f.symbol == "zero") c.symbol.kind = SymbolKindSpec::zero;
    else if (*f.symbol == "nonmeasurable") c.symbol.kind = SymbolKindSpec::nonmeasurable;
    else throw ConfigError("--symbol", "expected classical, zero or nonmeasurable");
  }
  if (f.angular) {
    if (*f.angular == "even") c.symbol.angular = Angular::even;
    else if (*f.angular == "odd") c.symbol.angular = Angular::odd;
    else throw ConfigError("--angular", "expected even or odd");
  }
  if (f.cutoff) c.symbol.cutoff = *f.cutoff;
  if (f.integrand) {
    if (*f.integrand == "one_plus_cos") c.integrand.kind = IntegrandKind::one_plus_cos;
    else if (*f.integrand == "bumps") c.integrand.kind = IntegrandKind::bumps;
    else throw ConfigError("--integrand", "expected one_plus_cos or bumps");
  }
  if (f.tol_relative) c.tolerances.relative = *f.tol_relative;
  if (f.tol_absolute) c.tolerances.absolute = *f.tol_absolute;
  if (f.tol_measurability) c.tolerances.measurability = *f.tol_measurability;
  if (f.min_band_width) c.tolerances.min_band_width = *f.min_band_width;
  if (f.tol_slope) c.tolerances.slope = *f.tol_slope;
  if (f.tol_diagonal) c.tolerances.diagonal = *f.tol_diagonal;
  if (f.csv) c.csv = *f.csv;
  if (f.report) c.report = *f.report;
  if (f.seed) c.seed = *f.seed;
  if (f.threads) c.threads = *f.threads;
  validate(c);
  return c;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"pdolab: residues, Dixmier-trace surrogates and spectra of order -d operators on the torus"};
  app.require_subcommand(1);
  Flags run_flags, sweep_flags;
  CLI::App* run_cmd = app.add_subcommand("run", "run one pipeline");
  add_flags(run_cmd, run_flags, "residue, connes, nonmeasurable, integrate, spectral-formula, modulation or sweep");
  CLI::App* sweep_cmd = app.add_subcommand("sweep", "run a pipeline over a list of K");
  add_flags(sweep_cmd, sweep_flags, "pipeline run per K (default connes)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 1;
  }

  try {
    const bool is_sweep = sweep_cmd->parsed();
    const auto config = resolve(is_sweep ? sweep_flags : run_flags, is_sweep);
    return pdolab::cli::run(config, std::cout);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
}

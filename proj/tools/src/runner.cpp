#include "runner.hpp"

#include <algorithm>
#include <atomic>
#include <charconv>
#include <chrono>
#include <cmath>
#include <fstream>
#include <limits>
#include <numbers>
#include <ostream>
#include <sstream>
#include <thread>
#include <unistd.h>

#include "pdolab/basis.hpp"
#include "pdolab/errors.hpp"
#include "pdolab/traces.hpp"

namespace pdolab::cli {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

std::vector<Bump> make_bumps(const std::vector<BumpSpec>& specs, int d) {
  std::vector<Bump> out;
  if (specs.empty()) {
    out.push_back(Bump::with_integral(std::vector<double>(static_cast<std::size_t>(d), 0.0), 2.5, 1.0));
    return out;
  }
  for (const BumpSpec& s : specs) {
    if (s.integral) out.push_back(Bump::with_integral(s.center, s.half_width, *s.integral));
    else out.push_back(Bump{s.center, s.half_width, *s.amplitude});
  }
  return out;
}

Box bounding_box(const std::vector<Bump>& bumps) {
  Box box = bumps.front().support();
  for (const Bump& b : bumps) {
    const Box s = b.support();
    for (std::size_t i = 0; i < box.lo.size(); ++i) {
      box.lo[i] = std::min(box.lo[i], s.lo[i]);
      box.hi[i] = std::max(box.hi[i], s.hi[i]);
    }
  }
  return box;
}

std::string describe(const std::vector<Bump>& bumps) {
  std::string s;
  for (const Bump& b : bumps) {
    if (!s.empty()) s += "+";
    s += "bump(c=";
    for (std::size_t i = 0; i < b.center.size(); ++i) s += (i ? ";" : "") + format_number(b.center[i]);
    s += ",h=" + format_number(b.half_width) + ",int=" + format_number(b.integral()) + ")";
  }
  return s;
}

Symbol build_symbol(const ExperimentConfig& c) {
  switch (c.symbol.kind) {
    case SymbolKindSpec::zero:
      return make_zero_symbol(c.d);
    case SymbolKindSpec::nonmeasurable:
      return make_nonmeasurable_symbol(c.d);
    case SymbolKindSpec::classical:
      break;
  }
  const std::vector<Bump> bumps = make_bumps(c.symbol.bumps, c.d);
  const bool odd = c.symbol.angular == Angular::odd;
  PrincipalFn principal = [bumps, odd](std::span<const double> x, std::span<const double> s) {
    double v = 0.0;
    for (const Bump& b : bumps) v += b(x);
    return Complex{odd ? v * s[0] : v, 0.0};
  };
  return make_classical_symbol(c.d, principal, c.symbol.cutoff, bounding_box(bumps))
      .with_label(std::string(odd ? "odd" : "even") + " classical " + describe(bumps));
}

std::string symbol_kind_name(SymbolKindSpec k) {
  switch (k) {
    case SymbolKindSpec::classical: return "classical";
    case SymbolKindSpec::zero: return "zero";
    case SymbolKindSpec::nonmeasurable: return "nonmeasurable";
  }
  return "?";
}

PointFn build_integrand(const ExperimentConfig& c, double& exact_integral) {
  if (c.integrand.kind == IntegrandKind::one_plus_cos) {
    exact_integral = std::pow(2.0 * std::numbers::pi, c.d);
    return [](std::span<const double> x) {
      double v = 1.0;
      for (double xi : x) v *= 1.0 + std::cos(xi);
      return Complex{v, 0.0};
    };
  }
  const std::vector<Bump> bumps = make_bumps(c.integrand.bumps, c.d);
  exact_integral = 0.0;
  for (const Bump& b : bumps) exact_integral += b.integral();
  return [bumps](std::span<const double> x) {
    double v = 0.0;
    for (const Bump& b : bumps) v += b(x);
    return Complex{v, 0.0};
  };
}

SurrogateConfig symbol_level_surrogates(const ExperimentConfig& c) {
  SurrogateConfig sc;
  if (c.n_grid.kind == GridKind::doubly_exponential) sc.t_grid = c.n_grid.t;
  sc.log_tail_start = c.log_tail_start.value_or(c.n_grid.kind == GridKind::geometric || c.n_grid.kind == GridKind::list
                                                    ? std::log(10.0)
                                                    : std::exp(3.0));
  return sc;
}

SurrogateConfig matrix_level_surrogates(const ExperimentConfig& c) {
  SurrogateConfig sc;
  if (c.log_tail_start) sc.log_tail_start = *c.log_tail_start;
  return sc;
}

PipelineOptions pipeline_options(const ExperimentConfig& c) {
  PipelineOptions o;
  o.assembly.threads = c.threads;
  o.tolerance = Tolerance{c.tolerances.relative, c.tolerances.absolute};
  o.surrogates = matrix_level_surrogates(c);
  return o;
}

std::vector<std::size_t> integer_grid(const GridSpec& g) {
  if (g.kind == GridKind::geometric)
    return geometric_grid(static_cast<std::size_t>(g.min), static_cast<std::size_t>(g.max), g.points);
  std::vector<std::size_t> out;
  for (double v : g.values) out.push_back(static_cast<std::size_t>(v));
  return out;
}

ReportSeries dense_series(std::string name, const std::vector<Complex>& values) {
  ReportSeries s;
  s.name = std::move(name);
  for (std::size_t i = 0; i < values.size(); ++i) {
    const double n = static_cast<double>(i + 1);
    s.n.push_back(n);
    s.log_n.push_back(std::log(n));
  }
  s.values = values;
  return s;
}

ReportSeries grid_series(std::string name, const std::vector<std::size_t>& n, const std::vector<Complex>& values) {
  ReportSeries s;
  s.name = std::move(name);
  for (std::size_t v : n) {
    s.n.push_back(static_cast<double>(v));
    s.log_n.push_back(std::log(static_cast<double>(v)));
  }
  s.values = values;
  return s;
}

std::vector<CsvRow> rows_of(const ReportSeries& s) {
  std::vector<CsvRow> rows;
  for (std::size_t i = 0; i < s.values.size(); ++i) rows.push_back({format_count(s.n[i], s.log_n[i]), s.values[i]});
  return rows;
}

void add_common_inputs(PipelineReport& r, const ExperimentConfig& c) {
  r.inputs.emplace_back("d", std::int64_t{c.d});
  r.inputs.emplace_back("seed", static_cast<std::int64_t>(c.seed));
  r.inputs.emplace_back("threads", std::int64_t{c.threads});
  r.tolerances = {{"relative", c.tolerances.relative},        {"absolute", c.tolerances.absolute},
                  {"measurability", c.tolerances.measurability}, {"min_band_width", c.tolerances.min_band_width},
                  {"slope", c.tolerances.slope},              {"diagonal", c.tolerances.diagonal}};
}

void add_gap(PipelineReport& r, const std::string& name, const GapCheck& g) {
  r.metrics.emplace_back(name + ".gap", g.gap);
  r.metrics.emplace_back(name + ".mode", std::string(g.absolute_mode ? "absolute" : "relative"));
  r.metrics.emplace_back(name + ".passed", g.passed);
}

void add_complex(PipelineReport& r, const std::string& name, Complex v) {
  r.metrics.emplace_back(name, std::vector<double>{v.real(), v.imag()});
}

std::size_t window_for(const ExperimentConfig& c, std::size_t N) {
  return c.n_window.value_or(std::max<std::size_t>(1, std::min<std::size_t>(256, N / 2)));
}

Outcome run_residue(const ExperimentConfig& c) {
  const Symbol sym = build_symbol(c);
  const SurrogateConfig sc = symbol_level_surrogates(c);
  ResidueSeries rs;
  if (c.n_grid.kind == GridKind::geometric || c.n_grid.kind == GridKind::list) {
    std::vector<double> n;
    for (std::size_t v : integer_grid(c.n_grid)) n.push_back(static_cast<double>(v));
    rs = residue_series(sym, n);
  } else {
    std::vector<double> log_n;
    for (double ln : doubly_exponential_log_grid(sc.t_grid))
      if (ln >= std::log(2.0) && (log_n.empty() || ln > log_n.back())) log_n.push_back(ln);
    rs = residue_series_log(sym, log_n);
  }
  const MeasurabilityVerdict v = measurability_verdict(rs, c.tolerances.measurability, sc);

  Outcome o;
  PipelineReport& r = o.report;
  r.pipeline = "residue";
  add_common_inputs(r, c);
  r.inputs.emplace_back("symbol", sym.label());
  r.inputs.emplace_back("symbol_kind", symbol_kind_name(c.symbol.kind));
  r.inputs.emplace_back("log_tail_start", sc.log_tail_start);
  ReportSeries s{"residue", rs.n, rs.log_n, rs.res};
  o.rows = rows_of(s);
  r.series.push_back(std::move(s));
  r.band = v.band;
  r.metrics.emplace_back("band_width", v.band.width());
  r.metrics.emplace_back("measurable", v.measurable);
  o.passed = v.measurable;
  o.top_gap = kNaN;
  std::string extra;
  if (sym.is_classical()) {
    const Complex resw = wodzicki_residue(sym);
    add_complex(r, "wodzicki_residue", resw);
    const GapCheck g = compare_values(v.band.midpoint(), resw, resw, Tolerance{c.tolerances.relative, c.tolerances.absolute});
    add_gap(r, "midpoint_vs_wodzicki", g);
    o.top_gap = g.gap;
    o.passed = o.passed && g.passed;
    extra = ", Res_W=" + format_number(resw.real());
  }
  r.passed = o.passed;
  r.verdict_label = v.measurable ? "measurable" : "nonmeasurable";
  if (v.measurable) r.verdict_value = v.value;
  o.summary = "residue: " + r.verdict_label + " band=[" + format_number(v.band.lo.real()) + ", " +
              format_number(v.band.hi.real()) + "] width=" + format_number(v.band.width()) + extra;
  return o;
}

Outcome run_connes(const ExperimentConfig& c) {
  const Symbol sym = build_symbol(c);
  if (!sym.is_classical()) throw InvalidArgument("connes pipeline needs a classical symbol");
  const FrequencyBasis basis = enumerate_frequencies(c.d, c.K);
  const std::size_t window = window_for(c, basis.size());
  const PipelineOptions opts = pipeline_options(c);
  const OperatorMatrix P = assemble_operator(sym, basis, opts.assembly);
  const EigenSequence eig = eigenvalue_sequence(P);
  const ConnesReport rep = connes_check(sym, eig, c.K, P.size(), window, opts);

  Outcome o;
  PipelineReport& r = o.report;
  r.pipeline = "connes";
  add_common_inputs(r, c);
  r.inputs.emplace_back("K", std::int64_t{c.K});
  r.inputs.emplace_back("N", static_cast<std::int64_t>(P.size()));
  r.inputs.emplace_back("n_window", static_cast<std::int64_t>(window));
  r.inputs.emplace_back("symbol", sym.label());
  ReportSeries s = dense_series("lambda", rep.lambda);
  o.rows = rows_of(s);
  r.series.push_back(std::move(s));
  r.band = rep.band;
  add_complex(r, "wodzicki_residue", rep.wodzicki);
  add_complex(r, "target", rep.target);
  add_complex(r, "lambda_top", rep.lambda.back());
  add_gap(r, "lambda_vs_target", rep.gap);
  o.passed = rep.gap.passed;
  o.top_gap = rep.gap.gap;
  r.passed = o.passed;
  r.verdict_label = rep.gap.passed ? "consistent" : "inconsistent";
  r.verdict_value = rep.lambda.back();
  o.summary = "connes: N=" + std::to_string(P.size()) + " Lambda(" + std::to_string(window) +
              ")=" + format_number(rep.lambda.back().real()) + " target=" + format_number(rep.target.real()) +
              " gap=" + format_number(rep.gap.gap);
  return o;
}

Outcome run_nonmeasurable(const ExperimentConfig& c) {
  if (c.n_grid.kind == GridKind::geometric || c.n_grid.kind == GridKind::list)
    throw InvalidArgument("nonmeasurable pipeline takes a doubly_exponential n_grid");
  const SurrogateConfig sc = symbol_level_surrogates(c);
  const NonmeasurabilityReport rep =
      nonmeasurability_demo(c.d, c.tolerances.measurability, c.tolerances.min_band_width, sc);

  Outcome o;
  PipelineReport& r = o.report;
  r.pipeline = "nonmeasurable";
  add_common_inputs(r, c);
  r.inputs.emplace_back("t_grid", sc.t_grid);
  r.inputs.emplace_back("log_tail_start", sc.log_tail_start);
  ReportSeries s{"residue", rep.residues.n, rep.residues.log_n, rep.residues.res};
  o.rows = rows_of(s);
  r.series.push_back(std::move(s));
  r.band = rep.verdict.band;
  r.metrics.emplace_back("band_width", rep.verdict.band.width());
  r.metrics.emplace_back("measurable", rep.verdict.measurable);
  o.passed = rep.passed;
  o.top_gap = kNaN;
  r.passed = o.passed;
  r.verdict_label = rep.verdict.measurable ? "measurable" : "nonmeasurable";
  if (rep.verdict.measurable) r.verdict_value = rep.verdict.value;
  o.summary = "nonmeasurable: " + r.verdict_label + " band=[" + format_number(rep.verdict.band.lo.real()) + ", " +
              format_number(rep.verdict.band.hi.real()) + "] width=" + format_number(rep.verdict.band.width());
  return o;
}

Outcome run_integrate(const ExperimentConfig& c) {
  double exact = 0.0;
  const PointFn f = build_integrand(c, exact);
  L2IntegrationOptions opts;
  opts.diagonal_n_max = c.integrand.diagonal_n_max;
  opts.diagonal_points = c.integrand.diagonal_points;
  opts.reference_integral = c.integrand.reference_integral.value_or(exact);
  opts.diagonal_tolerance = c.tolerances.diagonal;
  opts.eigen_tolerance = Tolerance{c.tolerances.relative, c.tolerances.absolute};
  opts.assembly.threads = c.threads;
  const L2IntegrationReport rep = l2_integration_check(f, c.d, c.K_given ? c.K : 0, opts);

  Outcome o;
  PipelineReport& r = o.report;
  r.pipeline = "integrate";
  add_common_inputs(r, c);
  r.inputs.emplace_back("integrand", std::string(c.integrand.kind == IntegrandKind::one_plus_cos ? "one_plus_cos" : "bumps"));
  r.inputs.emplace_back("integral", rep.integral);
  r.inputs.emplace_back("diagonal_n_max", static_cast<std::int64_t>(opts.diagonal_n_max));
  if (c.K_given) r.inputs.emplace_back("K", std::int64_t{c.K});
  ReportSeries s = grid_series("diagonal_residue", rep.diagonal.n, rep.diagonal.residue);
  o.rows = rows_of(s);
  r.series.push_back(std::move(s));
  if (!rep.lambda.empty()) r.series.push_back(dense_series("lambda", rep.lambda));
  add_complex(r, "residue_target", rep.residue_target);
  add_complex(r, "trace_target", rep.trace_target);
  add_complex(r, "diagonal_residue_top", rep.diagonal.residue.back());
  add_gap(r, "diagonal_vs_target", rep.diagonal_gap);
  if (rep.eigen_gap) {
    add_complex(r, "lambda_top", rep.lambda.back());
    add_gap(r, "lambda_vs_trace_target", *rep.eigen_gap);
  }
  o.passed = rep.passed;
  o.top_gap = rep.diagonal_gap.gap;
  r.passed = o.passed;
  r.verdict_label = rep.passed ? "consistent" : "inconsistent";
  r.verdict_value = rep.diagonal.residue.back();
  o.summary = "integrate: residue(n=" + std::to_string(rep.diagonal.n.back()) +
              ")=" + format_number(rep.diagonal.residue.back().real()) +
              " target=" + format_number(rep.residue_target.real()) + " gap=" + format_number(rep.diagonal_gap.gap);
  if (rep.eigen_gap)
    o.summary += " Lambda=" + format_number(rep.lambda.back().real()) + " gap=" + format_number(rep.eigen_gap->gap);
  return o;
}

Outcome run_spectral_formula(const ExperimentConfig& c) {
  const Symbol sym = build_symbol(c);
  if (!sym.is_classical()) throw InvalidArgument("spectral-formula pipeline needs a classical symbol");
  const FrequencyBasis basis = enumerate_frequencies(c.d, c.K);
  const std::size_t window = window_for(c, basis.size());
  const PipelineOptions opts = pipeline_options(c);
  const OperatorMatrix P = assemble_operator(sym, basis, opts.assembly);
  const EigenSequence eig = eigenvalue_sequence(P);
  const SpectralFormulaReport rep = torus_spectral_formula_check(sym, P, eig, window, opts);

  std::vector<Complex> diag, eigs;
  Complex sd{0.0, 0.0}, se{0.0, 0.0};
  for (std::size_t n = 1; n <= window; ++n) {
    const auto j = static_cast<Eigen::Index>(n - 1);
    sd += P.entries(j, j);
    se += eig.at(n - 1);
    const double norm = std::log1p(static_cast<double>(n));
    diag.push_back(sd / norm);
    eigs.push_back(se / norm);
  }

  Outcome o;
  PipelineReport& r = o.report;
  r.pipeline = "spectral-formula";
  add_common_inputs(r, c);
  r.inputs.emplace_back("K", std::int64_t{c.K});
  r.inputs.emplace_back("N", static_cast<std::int64_t>(P.size()));
  r.inputs.emplace_back("n_window", static_cast<std::int64_t>(window));
  r.inputs.emplace_back("symbol", sym.label());
  ReportSeries s = dense_series("eigen_limit", eigs);
  o.rows = rows_of(s);
  r.series.push_back(std::move(s));
  r.series.push_back(dense_series("diagonal_limit", diag));
  add_complex(r, "diagonal_limit", rep.diagonal_limit);
  add_complex(r, "eigen_limit", rep.eigen_limit);
  add_complex(r, "target", rep.target);
  add_gap(r, "diagonal_vs_eigen", rep.diagonal_vs_eigen);
  add_gap(r, "diagonal_vs_target", rep.diagonal_vs_target);
  add_gap(r, "eigen_vs_target", rep.eigen_vs_target);
  o.passed = rep.passed;
  o.top_gap = std::max({rep.diagonal_vs_eigen.gap, rep.diagonal_vs_target.gap, rep.eigen_vs_target.gap});
  r.passed = o.passed;
  r.verdict_label = rep.passed ? "consistent" : "inconsistent";
  r.verdict_value = rep.eigen_limit;
  o.summary = "spectral-formula: diagonal=" + format_number(rep.diagonal_limit.real()) +
              " eigen=" + format_number(rep.eigen_limit.real()) + " target=" + format_number(rep.target.real()) +
              " max gap=" + format_number(o.top_gap);
  return o;
}

Outcome run_modulation(const ExperimentConfig& c) {
  const Symbol sym = build_symbol(c);
  const FrequencyBasis basis = enumerate_frequencies(c.d, c.K);
  AssemblyOptions ao;
  ao.threads = c.threads;
  const OperatorMatrix T = assemble_operator(sym, basis, ao);
  const int levels = c.levels.value_or(default_modulation_levels(basis));
  std::vector<std::size_t> grid;
  if (c.n_grid.kind == GridKind::geometric || c.n_grid.kind == GridKind::list) {
    grid = integer_grid(c.n_grid);
  } else {
    if (T.size() < 32) throw InvalidArgument("modulation pipeline: default tail grid needs N >= 32");
    grid = geometric_grid(8, T.size() / 4, 16);
  }
  const ModulationCheck mc = modulation_check(T, levels, grid, c.tolerances.slope);

  Outcome o;
  PipelineReport& r = o.report;
  r.pipeline = "modulation";
  add_common_inputs(r, c);
  r.inputs.emplace_back("K", std::int64_t{c.K});
  r.inputs.emplace_back("N", static_cast<std::int64_t>(T.size()));
  r.inputs.emplace_back("levels", std::int64_t{levels});
  r.inputs.emplace_back("symbol", sym.label());
  std::vector<Complex> e(mc.tail.e.begin(), mc.tail.e.end());
  ReportSeries s = grid_series("tail_energy", mc.tail.n, e);
  o.rows = rows_of(s);
  r.series.push_back(std::move(s));
  ReportSeries prof;
  prof.name = "modulation_profile";
  for (std::size_t i = 0; i < mc.profile.c.size(); ++i) {
    prof.n.push_back(mc.profile.level[i]);
    prof.log_n.push_back(std::log(static_cast<double>(mc.profile.level[i])));
    prof.values.emplace_back(mc.profile.c[i], 0.0);
  }
  r.series.push_back(std::move(prof));
  r.metrics.emplace_back("profile.sup", mc.profile.sup);
  r.metrics.emplace_back("profile.slope", mc.profile.trend.slope());
  r.metrics.emplace_back("profile.scale", mc.profile.scale);
  if (!mc.profile.notice.empty()) r.metrics.emplace_back("profile.notice", mc.profile.notice);
  r.metrics.emplace_back("tail.sup", mc.tail.sup);
  r.metrics.emplace_back("tail.slope", mc.tail.trend.slope());
  o.passed = mc.passed;
  o.top_gap = std::max(std::abs(mc.profile.trend.slope()), std::abs(mc.tail.trend.slope()));
  r.passed = o.passed;
  r.verdict_label = mc.passed ? "bounded" : "growing";
  o.summary = "modulation: profile slope=" + format_number(mc.profile.trend.slope()) +
              " tail slope=" + format_number(mc.tail.trend.slope()) + " levels=" + std::to_string(levels);
  return o;
}

std::string csv_line(const std::string& prefix, const CsvRow& row) {
  return prefix + row.n + "," + format_number(row.value.real()) + "," + format_number(row.value.imag()) + "\n";
}

}  // namespace

std::string format_number(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof(buf), v, std::chars_format::general, 17);
  return std::string(buf, res.ptr);
}

std::string format_count(double n, double log_n) {
  if (std::isfinite(n) && n < 9007199254740992.0) {
    char buf[32];
    const auto res = std::to_chars(buf, buf + sizeof(buf), static_cast<unsigned long long>(n));
    return std::string(buf, res.ptr);
  }
  double l10 = log_n / std::numbers::ln10;
  if (std::abs(l10 - std::round(l10)) < 1e-12 * l10) l10 = std::round(l10);  // exact powers of ten
  const double e = std::floor(l10);
  const double mantissa = std::pow(10.0, l10 - e);
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof(buf), mantissa, std::chars_format::fixed, 15);
  return std::string(buf, res.ptr) + "e+" + std::to_string(static_cast<long long>(e));
}

void write_atomically(const std::filesystem::path& path, const std::string& content) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::filesystem::path tmp = path;
  tmp += ".tmp." + std::to_string(::getpid());
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw Error("cannot write " + tmp.string());
    out << content;
    out.flush();
    if (!out) throw Error("write failed for " + tmp.string());
  }
  std::filesystem::rename(tmp, path);
}

std::filesystem::path default_csv_path(const ExperimentConfig& c) {
  return c.csv.empty() ? std::filesystem::path(to_string(c.pipeline) + ".csv") : c.csv;
}

std::filesystem::path default_report_path(const ExperimentConfig& c) {
  return c.report.empty() ? std::filesystem::path(to_string(c.pipeline) + ".report.json") : c.report;
}

std::filesystem::path summary_path(const std::filesystem::path& csv) {
  std::filesystem::path p = csv;
  p.replace_filename(csv.stem().string() + ".summary.csv");
  return p;
}

Outcome execute(const ExperimentConfig& c) {
  pin_dense_solver_threads(1);
  const auto start = std::chrono::steady_clock::now();
  Outcome o;
  switch (c.pipeline) {
    case Pipeline::residue: o = run_residue(c); break;
    case Pipeline::connes: o = run_connes(c); break;
    case Pipeline::nonmeasurable: o = run_nonmeasurable(c); break;
    case Pipeline::integrate: o = run_integrate(c); break;
    case Pipeline::spectral_formula: o = run_spectral_formula(c); break;
    case Pipeline::modulation: o = run_modulation(c); break;
    case Pipeline::sweep: throw InvalidArgument("execute: use sweep() for the sweep pipeline");
  }
  o.report.runtime_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return o;
}

int run(const ExperimentConfig& c, std::ostream& log) {
  if (c.pipeline == Pipeline::sweep) return sweep(c, log);
  const Outcome o = execute(c);
  std::string csv = "n,value_re,value_im\n";
  for (const CsvRow& row : o.rows) csv += csv_line("", row);
  const auto csv_path = default_csv_path(c);
  const auto report_path = default_report_path(c);
  write_atomically(csv_path, csv);
  write_atomically(report_path, to_json_text(o.report));
  log << o.summary << "\n" << (o.passed ? "PASS" : "FAIL") << " (" << csv_path.string() << ", "
      << report_path.string() << ")\n";
  return o.passed ? 0 : 2;
}

int sweep(const ExperimentConfig& c, std::ostream& log) {
  if (c.K_list.empty()) throw ConfigError("K_list", "sweep needs a non-empty K list");
  const auto start = std::chrono::steady_clock::now();
  pin_dense_solver_threads(1);

  struct Slot {
    std::optional<Outcome> outcome;
    std::string error;
  };
  std::vector<Slot> slots(c.K_list.size());
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i = next++; i < slots.size(); i = next++) {
      ExperimentConfig one = c;
      one.pipeline = c.sweep_pipeline;
      one.K = c.K_list[i];
      one.K_given = true;
      one.threads = 1;
      try {
        slots[i].outcome = execute(one);
      } catch (const std::exception& e) {
        slots[i].error = e.what();
      }
    }
  };
  const std::size_t workers = std::min<std::size_t>(static_cast<std::size_t>(c.threads), slots.size());
  std::vector<std::thread> pool;
  for (std::size_t w = 1; w < workers; ++w) pool.emplace_back(worker);
  worker();
  for (std::thread& t : pool) t.join();

  std::string csv = "K,n,value_re,value_im\n";
  std::string summary = "K,n_top,value_re,value_im,gap,status\n";
  PipelineReport r;
  r.pipeline = "sweep";
  add_common_inputs(r, c);
  r.inputs.emplace_back("sweep_pipeline", to_string(c.sweep_pipeline));
  r.inputs.emplace_back("K_list", std::vector<double>(c.K_list.begin(), c.K_list.end()));
  std::vector<double> ks, gaps, tops;
  bool all_passed = true;
  for (std::size_t i = 0; i < slots.size(); ++i) {
    const std::string k = std::to_string(c.K_list[i]);
    const Slot& s = slots[i];
    ks.push_back(c.K_list[i]);
    if (!s.outcome) {
      all_passed = false;
      summary += k + ",,nan,nan,nan,error\n";
      gaps.push_back(kNaN);
      tops.push_back(kNaN);
      r.metrics.emplace_back("error.K=" + k, s.error);
      log << "K=" << k << ": ERROR " << s.error << "\n";
      continue;
    }
    const Outcome& o = *s.outcome;
    for (const CsvRow& row : o.rows) csv += csv_line(k + ",", row);
    const CsvRow top = o.rows.empty() ? CsvRow{"", Complex{kNaN, kNaN}} : o.rows.back();
    summary += k + "," + top.n + "," + format_number(top.value.real()) + "," + format_number(top.value.imag()) + "," +
               format_number(o.top_gap) + "," + (o.passed ? "pass" : "fail") + "\n";
    gaps.push_back(o.top_gap);
    tops.push_back(top.value.real());
    all_passed = all_passed && o.passed;
    for (const ReportSeries& series : o.report.series) {
      ReportSeries copy = series;
      copy.name = "K=" + k + ":" + series.name;
      r.series.push_back(std::move(copy));
    }
    log << "K=" << k << ": " << o.summary << (o.passed ? " PASS" : " FAIL") << "\n";
  }
  r.metrics.emplace_back("K", ks);
  r.metrics.emplace_back("gap", gaps);
  r.metrics.emplace_back("top_value_re", tops);
  r.passed = all_passed;
  r.verdict_label = all_passed ? "all passed" : "some K failed";
  r.runtime_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();

  const auto csv_path = default_csv_path(c);
  const auto report_path = default_report_path(c);
  write_atomically(csv_path, csv);
  write_atomically(summary_path(csv_path), summary);
  write_atomically(report_path, to_json_text(r));
  log << (all_passed ? "PASS" : "FAIL") << " (" << csv_path.string() << ", " << summary_path(csv_path).string()
      << ", " << report_path.string() << ")\n";
  return all_passed ? 0 : 2;
}

}  // namespace pdolab::cli

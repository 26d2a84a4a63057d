#include "pdolab/traces.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>
#include <string>

#include "pdolab/errors.hpp"

namespace pdolab {

namespace {

std::string sample_id(const char* kind, double t) {
  std::ostringstream os;
  os.precision(6);
  os << kind << "(t=" << t << ")";
  return os.str();
}

Complex log_cesaro_mean(const Series& series, double log_start) {
  std::vector<double> x;
  std::vector<Complex> y;
  series.tail_points(log_start, x, y);
  if (y.empty()) throw InvalidArgument("dixmier_band: series too short for tail_start");
  if (y.size() == 1) return y.front();
  if (series.is_dense()) {
    // sum a_n / n over sum 1 / n
    Complex num{0.0, 0.0};
    double den = 0.0;
    for (std::size_t i = 0; i < y.size(); ++i) {
      const double w = std::exp(-x[i]);
      num += w * y[i];
      den += w;
    }
    return num / den;
  }
  Complex num{0.0, 0.0};
  for (std::size_t i = 0; i + 1 < y.size(); ++i) num += 0.5 * (x[i + 1] - x[i]) * (y[i] + y[i + 1]);
  const double len = x.back() - x.front();
  return len > 0.0 ? num / len : y.front();
}

Complex lambda_at(const EigenSequence& eigen, std::size_t n, Complex& running, std::size_t& done) {
  for (; done < n; ++done) running += eigen.at(done);
  return running / std::log1p(static_cast<double>(n));
}

}  // namespace

std::vector<double> SurrogateConfig::default_t_grid() {
  std::vector<double> t;
  for (int i = 0; i <= 30; ++i) t.push_back(0.5 + 0.25 * i);  // 0.5 .. 8.0
  return t;
}

SurrogateConfig SurrogateConfig::with_tail_start(double n) {
  if (!(n >= 1.0)) throw InvalidArgument("tail_start must be >= 1");
  SurrogateConfig c;
  c.log_tail_start = std::log(n);
  return c;
}

double DixmierBand::width() const { return std::max(hi.real() - lo.real(), hi.imag() - lo.imag()); }

Complex DixmierBand::midpoint() const { return 0.5 * (lo + hi); }

DixmierBand dixmier_band(const Series& series, const SurrogateConfig& config) {
  if (series.log_n_max() < config.log_tail_start - 1e-12)
    throw InvalidArgument("dixmier_band: series too short for tail_start (series reaches log n = " +
                          std::to_string(series.log_n_max()) + ", tail starts at log n = " +
                          std::to_string(config.log_tail_start) + ")");
  const double log_start = std::max(config.log_tail_start, series.log_n_min());

  DixmierBand band;
  band.log_tail_start = log_start;
  band.series_tail_start = log_start < 700.0 ? std::round(std::exp(log_start)) : std::numeric_limits<double>::infinity();
  band.log_n_max = series.log_n_max();

  band.samples.push_back({"cesaro_log_tail", log_cesaro_mean(series, log_start)});
  band.samples.push_back({"raw_top", series.at_log(series.log_n_max())});
  for (double t : config.t_grid) {
    const double ln = doubly_exponential_log_n(t);
    if (ln < log_start - 1e-12 || ln > series.log_n_max() + 1e-12) continue;
    const Complex v = series.is_dense() ? series.at(std::round(std::exp(ln))) : series.at_log(ln);
    band.samples.push_back({sample_id("dexp", t), v});
  }

  band.lo = band.hi = band.samples.front().value;
  for (const BandSample& s : band.samples) {
    band.lo = {std::min(band.lo.real(), s.value.real()), std::min(band.lo.imag(), s.value.imag())};
    band.hi = {std::max(band.hi.real(), s.value.real()), std::max(band.hi.imag(), s.value.imag())};
  }
  return band;
}

bool band_within_tail_extrema(const DixmierBand& band, const Series& series, double tol) {
  std::vector<double> x;
  std::vector<Complex> y;
  series.tail_points(band.log_tail_start, x, y);
  if (y.empty()) return false;
  double re_lo = y[0].real(), re_hi = y[0].real(), im_lo = y[0].imag(), im_hi = y[0].imag();
  for (const Complex& v : y) {
    re_lo = std::min(re_lo, v.real());
    re_hi = std::max(re_hi, v.real());
    im_lo = std::min(im_lo, v.imag());
    im_hi = std::max(im_hi, v.imag());
  }
  for (const BandSample& s : band.samples) {
    if (s.value.real() < re_lo - tol || s.value.real() > re_hi + tol) return false;
    if (s.value.imag() < im_lo - tol || s.value.imag() > im_hi + tol) return false;
  }
  return true;
}

MeasurabilityVerdict measurability_verdict(const ResidueSeries& rs, double tol, const SurrogateConfig& config) {
  if (rs.size() < 2) throw InvalidArgument("measurability_verdict: insufficient grid (need at least two points)");
  if (rs.log_n.back() < config.log_tail_start)
    throw InvalidArgument("measurability_verdict: insufficient grid; residue series ends before the tail window");
  MeasurabilityVerdict v;
  v.tol = tol;
  v.band = dixmier_band(Series::sampled(rs.log_n, rs.res), config);
  const bool re_ok = v.band.hi.real() - v.band.lo.real() <= tol;
  const bool im_ok = v.band.hi.imag() - v.band.lo.imag() <= tol;
  v.measurable = re_ok && im_ok;
  if (v.measurable) v.value = v.band.midpoint();
  return v;
}

GapCheck compare_values(Complex a, Complex b, Complex reference, const Tolerance& tol) {
  GapCheck g;
  const double diff = std::abs(a - b);
  const double ref = std::abs(reference);
  if (ref > tol.absolute) {
    g.gap = diff / ref;
    g.passed = g.gap <= tol.relative;
  } else {
    g.absolute_mode = true;
    g.gap = diff;
    g.passed = g.gap <= tol.absolute;
  }
  return g;
}

ConnesReport connes_check(const Symbol& sym, const EigenSequence& eigen, int K, std::size_t matrix_size,
                          std::size_t n_window, const PipelineOptions& opts) {
  if (!sym.is_classical()) throw InvalidArgument("connes_check: symbol '" + sym.label() + "' is not classical");
  if (n_window < 1 || 2 * n_window > matrix_size)
    throw InvalidArgument("connes_check: n_window=" + std::to_string(n_window) + " violates n_window <= N/2 (N=" +
                          std::to_string(matrix_size) + ")");
  ConnesReport rep;
  rep.d = sym.dim();
  rep.K = K;
  rep.matrix_size = matrix_size;
  rep.n_window = n_window;
  rep.wodzicki = wodzicki_residue(sym, opts.quad);
  rep.target = rep.wodzicki / (rep.d * std::pow(2.0 * std::numbers::pi, rep.d));

  Complex running{0.0, 0.0};
  std::size_t done = 0;
  for (std::size_t n = 1; n <= n_window; ++n) rep.lambda.push_back(lambda_at(eigen, n, running, done));

  SurrogateConfig sc = opts.surrogates;
  sc.log_tail_start = std::min(sc.log_tail_start, std::log(static_cast<double>(n_window)));
  rep.band = dixmier_band(Series::dense(rep.lambda), sc);
  rep.gap = compare_values(rep.lambda.back(), rep.target, rep.target, opts.tolerance);
  return rep;
}

ConnesReport connes_check(const Symbol& sym, int K, std::size_t n_window, const PipelineOptions& opts) {
  if (!sym.is_classical()) throw InvalidArgument("connes_check: symbol '" + sym.label() + "' is not classical");
  const FrequencyBasis basis = enumerate_frequencies(sym.dim(), K);
  if (2 * n_window > basis.size())
    throw InvalidArgument("connes_check: n_window=" + std::to_string(n_window) + " violates n_window <= N/2 (N=" +
                          std::to_string(basis.size()) + ")");
  const OperatorMatrix T = assemble_operator(sym, basis, opts.assembly);
  return connes_check(sym, eigenvalue_sequence(T), K, T.size(), n_window, opts);
}

L2IntegrationReport l2_integration_check(const PointFn& f, int d, int K, const L2IntegrationOptions& opts) {
  if (!f) throw InvalidArgument("l2_integration_check: empty function");
  if (d < 1 || d > 3) throw InvalidArgument("l2_integration_check: d must be 1, 2 or 3");
  L2IntegrationReport rep;
  rep.d = d;
  const double torus_volume = std::pow(2.0 * std::numbers::pi, d);
  const Complex f0 = torus_fourier_coefficients(f, d, 0, opts.quadrature_nodes)[0];
  rep.integral = opts.reference_integral.value_or(torus_volume * f0.real());
  rep.residue_target = sphere_volume(d) * rep.integral;
  rep.trace_target = rep.residue_target / (d * torus_volume);

  // Diagonal path: smallest basis holding diagonal_n_max vectors.
  int k_diag = 1;
  while (std::pow(2.0 * k_diag + 1.0, d) < static_cast<double>(opts.diagonal_n_max)) ++k_diag;
  const FrequencyBasis big = enumerate_frequencies(d, k_diag, std::pow(2.0 * k_diag + 1.0, d));
  const std::vector<Complex> diag = multiplier_product_diagonal(f, big, d, opts.quadrature_nodes);
  const auto grid = geometric_grid(2, opts.diagonal_n_max, opts.diagonal_points);
  rep.diagonal = torus_diagonal_sums(diag, d, grid);
  const Tolerance diag_tol{opts.diagonal_tolerance, opts.eigen_tolerance.absolute};
  rep.diagonal_gap = compare_values(rep.diagonal.residue.back(), rep.residue_target, rep.residue_target, diag_tol);
  rep.passed = rep.diagonal_gap.passed;

  if (K > 0) {
    const FrequencyBasis basis = enumerate_frequencies(d, K);
    const OperatorMatrix M = multiplication_operator(f, basis, opts.assembly);
    const OperatorMatrix L = laplacian_multiplier(basis, d);
    const EigenSequence eig = eigenvalue_sequence(M.entries * L.entries, "M_f(1-Laplacian)^{-d/2}");
    rep.n_window = basis.size() / 4;
    Complex running{0.0, 0.0};
    std::size_t done = 0;
    for (std::size_t n = 1; n <= rep.n_window; ++n) rep.lambda.push_back(lambda_at(eig, n, running, done));
    rep.eigen_gap = compare_values(rep.lambda.back(), rep.trace_target, rep.trace_target, opts.eigen_tolerance);
    rep.passed = rep.passed && rep.eigen_gap->passed;
  }
  return rep;
}

SpectralFormulaReport torus_spectral_formula_check(const Symbol& sym, const OperatorMatrix& P,
                                                   const EigenSequence& eigen, std::size_t n_window,
                                                   const PipelineOptions& opts) {
  if (!sym.is_classical())
    throw InvalidArgument("torus_spectral_formula_check: symbol '" + sym.label() + "' is not classical");
  if (n_window < 1 || 2 * n_window > P.size())
    throw InvalidArgument("torus_spectral_formula_check: n_window violates n_window <= N/2");
  SpectralFormulaReport rep;
  rep.d = sym.dim();
  rep.K = P.basis.cutoff();
  rep.n_window = n_window;
  const double log_norm = std::log1p(static_cast<double>(n_window));
  Complex diag{0.0, 0.0}, eig{0.0, 0.0};
  for (std::size_t j = 0; j < n_window; ++j) {
    diag += P.entries(static_cast<Eigen::Index>(j), static_cast<Eigen::Index>(j));
    eig += eigen.at(j);
  }
  rep.diagonal_limit = diag / log_norm;
  rep.eigen_limit = eig / log_norm;
  rep.target = wodzicki_residue(sym, opts.quad) / (rep.d * std::pow(2.0 * std::numbers::pi, rep.d));
  rep.diagonal_vs_eigen = compare_values(rep.diagonal_limit, rep.eigen_limit, rep.target, opts.tolerance);
  rep.diagonal_vs_target = compare_values(rep.diagonal_limit, rep.target, rep.target, opts.tolerance);
  rep.eigen_vs_target = compare_values(rep.eigen_limit, rep.target, rep.target, opts.tolerance);
  rep.passed = rep.diagonal_vs_eigen.passed && rep.diagonal_vs_target.passed && rep.eigen_vs_target.passed;
  return rep;
}

SpectralFormulaReport torus_spectral_formula_check(const Symbol& sym, int K, std::size_t n_window,
                                                   const PipelineOptions& opts) {
  const FrequencyBasis basis = enumerate_frequencies(sym.dim(), K);
  const OperatorMatrix P = assemble_operator(sym, basis, opts.assembly);
  return torus_spectral_formula_check(sym, P, eigenvalue_sequence(P), n_window, opts);
}

NonmeasurabilityReport nonmeasurability_demo(int d, double tol, double min_band_width, const SurrogateConfig& config,
                                             const QuadSpec& quad) {
  const Symbol q = make_nonmeasurable_symbol(d);
  std::vector<double> t = config.t_grid;
  std::sort(t.begin(), t.end());
  t.erase(std::unique(t.begin(), t.end()), t.end());
  std::vector<double> log_n;
  for (double ti : t) {
    const double ln = doubly_exponential_log_n(ti);
    if (ln >= std::log(2.0) && (log_n.empty() || ln > log_n.back())) log_n.push_back(ln);
  }
  NonmeasurabilityReport rep;
  rep.min_band_width = min_band_width;
  rep.residues = residue_series_log(q, log_n, quad);
  rep.verdict = measurability_verdict(rep.residues, tol, config);
  rep.passed = !rep.verdict.measurable && rep.verdict.band.width() >= min_band_width;
  return rep;
}

ModulationCheck modulation_check(const OperatorMatrix& T, int levels, std::span<const std::size_t> tail_grid,
                                 double slope_threshold) {
  ModulationCheck out;
  out.slope_threshold = slope_threshold;
  const OperatorMatrix V = laplacian_multiplier(T.basis, T.basis.dim());
  out.profile = modulation_profile(T.entries, V.entries, levels);
  out.tail = tail_energy(T.entries, tail_grid);
  out.passed = out.profile.trend.bounded(slope_threshold) && out.tail.trend.bounded(slope_threshold);
  return out;
}

int default_modulation_levels(const FrequencyBasis& basis) {
  double vmin = 1.0;
  for (std::size_t j = 0; j < basis.size(); ++j)
    vmin = std::min(vmin, std::pow(1.0 + static_cast<double>(basis.norm_squared(j)), -0.5 * basis.dim()));
  const int last = static_cast<int>(std::floor(-std::log2(vmin)));
  return std::max(1, last - 1);
}

std::vector<std::size_t> geometric_grid(std::size_t lo, std::size_t hi, std::size_t points) {
  if (lo < 1 || hi < lo) throw InvalidArgument("geometric_grid: need 1 <= lo <= hi");
  std::vector<std::size_t> out;
  if (points < 2 || lo == hi) {
    out.push_back(hi);
    return out;
  }
  const double a = std::log(static_cast<double>(lo));
  const double b = std::log(static_cast<double>(hi));
  for (std::size_t i = 0; i < points; ++i) {
    const auto v = static_cast<std::size_t>(std::llround(std::exp(a + (b - a) * static_cast<double>(i) / (points - 1))));
    if (out.empty() || v > out.back()) out.push_back(v);
  }
  if (out.back() != hi) out.push_back(hi);
  return out;
}

}  // namespace pdolab

#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "pdolab/operator.hpp"
#include "pdolab/quadrature.hpp"
#include "pdolab/residue.hpp"
#include "pdolab/series.hpp"
#include "pdolab/spectral.hpp"
#include "pdolab/symbol.hpp"

namespace pdolab {

/// Surrogates standing in for dilation-invariant states. The resulting band is
/// an inner approximation of the set of Dixmier-type values, never a claim
/// about all of them.
struct SurrogateConfig {
  /// Doubly-exponential sample points n_t = ceil(exp(exp(t))); points outside
  /// [tail_start, series domain] are skipped.
  std::vector<double> t_grid = default_t_grid();
  /// First n that counts as "tail"; stored as log n so it can exceed double range.
  double log_tail_start = 2.302585092994046;  // log 10

  static std::vector<double> default_t_grid();
  static SurrogateConfig with_tail_start(double n);
};

struct BandSample {
  std::string id;
  Complex value;
};

struct DixmierBand {
  Complex lo;  ///< componentwise minimum over samples (real and imaginary parts separately)
  Complex hi;
  std::vector<BandSample> samples;
  double series_tail_start = 10.0;  ///< n (may be +inf when only log_tail_start is meaningful)
  double log_tail_start = 0.0;
  double log_n_max = 0.0;

  double width() const;
  Complex midpoint() const;
};

/// Evaluates (a) the log-Cesaro mean over the tail, (b) the value at the
/// largest n, and (c) the doubly-exponential samples, then takes the
/// componentwise hull. Throws InvalidArgument when the series does not reach
/// tail_start.
DixmierBand dixmier_band(const Series& series, const SurrogateConfig& config = {});

/// True when every band sample lies within [min, max] (per component) of the
/// series' tail points, widened by tol.
bool band_within_tail_extrema(const DixmierBand& band, const Series& series, double tol);

struct MeasurabilityVerdict {
  bool measurable = false;
  Complex value;  ///< band midpoint when measurable
  DixmierBand band;
  double tol = 0.0;
};

/// Measurable iff both the real and imaginary band widths are <= tol.
MeasurabilityVerdict measurability_verdict(const ResidueSeries& rs, double tol, const SurrogateConfig& config = {});

/// Relative-or-absolute comparison used by all pipelines: relative to |ref|
/// when |ref| > absolute, otherwise absolute.
struct Tolerance {
  double relative = 0.10;
  double absolute = 0.05;
};

struct GapCheck {
  double gap = 0.0;  ///< relative gap, or absolute gap when `absolute_mode`
  bool absolute_mode = false;
  bool passed = false;
};

GapCheck compare_values(Complex a, Complex b, Complex reference, const Tolerance& tol);

struct PipelineOptions {
  AssemblyOptions assembly;
  QuadSpec quad;
  SurrogateConfig surrogates;
  Tolerance tolerance;
};

struct ConnesReport {
  int d = 1;
  int K = 0;
  std::size_t matrix_size = 0;
  std::size_t n_window = 0;
  Complex wodzicki;  ///< Res_W
  Complex target;    ///< Res_W / (d (2pi)^d)
  std::vector<Complex> lambda;  ///< Lambda(n) = sum_{j<=n} lambda_j / log(1+n), n = 1..n_window
  DixmierBand band;
  GapCheck gap;  ///< Lambda(n_window) against target
};

/// Res_W -> assembly -> eigenvalues -> Lambda(n) against Res_W / (d (2pi)^d).
ConnesReport connes_check(const Symbol& sym, int K, std::size_t n_window, const PipelineOptions& opts = {});
/// Same pipeline on an already computed eigenvalue sequence.
ConnesReport connes_check(const Symbol& sym, const EigenSequence& eigen, int K, std::size_t matrix_size,
                          std::size_t n_window, const PipelineOptions& opts = {});

struct L2IntegrationReport {
  int d = 1;
  double integral = 0.0;          ///< int f over the torus
  Complex residue_target;         ///< Vol S^{d-1} int f
  Complex trace_target;           ///< residue_target / (d (2pi)^d)
  DiagonalSums diagonal;          ///< diagonal path
  GapCheck diagonal_gap;          ///< residue representative at the largest n
  std::vector<Complex> lambda;    ///< eigenvalue path Lambda(n), n = 1..n_window (empty if skipped)
  std::size_t n_window = 0;
  std::optional<GapCheck> eigen_gap;
  bool passed = false;
};

struct L2IntegrationOptions {
  std::size_t diagonal_n_max = 100000;
  std::size_t diagonal_points = 40;
  std::optional<double> reference_integral;  ///< overrides the quadrature value of int f
  double diagonal_tolerance = 0.02;          ///< relative, on the residue representative
  Tolerance eigen_tolerance{};
  AssemblyOptions assembly;
  int quadrature_nodes = 1024;               ///< nodes per axis for int f
};

/// M_f (1 - Laplacian)^{-d/2}: diagonal sums against Vol S^{d-1} int f and,
/// when K > 0, eigenvalue sums against the trace value.
L2IntegrationReport l2_integration_check(const PointFn& f, int d, int K, const L2IntegrationOptions& opts = {});

struct SpectralFormulaReport {
  int d = 1;
  int K = 0;
  std::size_t n_window = 0;
  Complex diagonal_limit;  ///< sum_{j<=n} (P e_j, e_j) / log(1+n)
  Complex eigen_limit;     ///< sum_{j<=n} lambda_j(P) / log(1+n)
  Complex target;          ///< Res_W / (d (2pi)^d)
  GapCheck diagonal_vs_eigen;
  GapCheck diagonal_vs_target;
  GapCheck eigen_vs_target;
  bool passed = false;
};

SpectralFormulaReport torus_spectral_formula_check(const Symbol& sym, int K, std::size_t n_window,
                                                   const PipelineOptions& opts = {});
SpectralFormulaReport torus_spectral_formula_check(const Symbol& sym, const OperatorMatrix& P,
                                                   const EigenSequence& eigen, std::size_t n_window,
                                                   const PipelineOptions& opts = {});

struct NonmeasurabilityReport {
  ResidueSeries residues;
  MeasurabilityVerdict verdict;
  double min_band_width = 1.5;
  bool passed = false;  ///< non-measurable with band width >= min_band_width
};

/// Residue series of the non-measurable symbol on the doubly-exponential grid
/// of config.t_grid (symbol level, via the log-radial density).
NonmeasurabilityReport nonmeasurability_demo(int d, double tol, double min_band_width,
                                             const SurrogateConfig& config = {}, const QuadSpec& quad = {});

struct ModulationCheck {
  ModulationProfile profile;
  TailEnergy tail;
  double slope_threshold = 0.1;
  bool passed = false;
};

/// Modulation profile against V = (1 - Laplacian)^{-d/2} and tail energy on
/// the ordered basis, both judged by |slope| <= slope_threshold.
ModulationCheck modulation_check(const OperatorMatrix& T, int levels, std::span<const std::size_t> tail_grid,
                                 double slope_threshold = 0.1);

/// Default number of modulation levels for a basis: one below the level at
/// which the mask of the smallest multiplier entry becomes the last column.
int default_modulation_levels(const FrequencyBasis& basis);

/// Geometric grid of integers in [lo, hi], deduplicated.
std::vector<std::size_t> geometric_grid(std::size_t lo, std::size_t hi, std::size_t points);

}  // namespace pdolab

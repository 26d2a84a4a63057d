#pragma once

#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

#include "config.hpp"
#include "pdolab/report.hpp"

namespace pdolab::cli {

struct CsvRow {
  std::string n;  ///< integer text, or scientific text for n beyond double range
  Complex value;
};

struct Outcome {
  bool passed = false;
  PipelineReport report;
  std::vector<CsvRow> rows;
  std::string summary;  ///< one human-readable line
  double top_gap = 0.0; ///< gap figure used by sweep summaries (NaN when the pipeline has none)
};

/// Executes one (non-sweep) pipeline without touching the file system.
Outcome execute(const ExperimentConfig& config);

/// Runs the configured pipeline and writes the CSV and report atomically.
/// Returns 0 on verdict pass, 2 on verdict fail; execution errors propagate.
int run(const ExperimentConfig& config, std::ostream& log);

/// Runs config.sweep_pipeline for every K in config.K_list on a worker pool
/// of config.threads and writes `K,n,value_re,value_im` rows in K order, a
/// `<csv stem>.summary.csv` convergence table and the report. Returns 2 if
/// any K failed or errored.
int sweep(const ExperimentConfig& config, std::ostream& log);

/// 17 significant digits, '.' decimal point, no locale.
std::string format_number(double v);
/// n as text from log n; exact integer below 2^53.
std::string format_count(double n, double log_n);

/// Writes to a temporary sibling and renames it over `path`.
void write_atomically(const std::filesystem::path& path, const std::string& content);

std::filesystem::path default_csv_path(const ExperimentConfig& config);
std::filesystem::path default_report_path(const ExperimentConfig& config);
std::filesystem::path summary_path(const std::filesystem::path& csv);

}  // namespace pdolab::cli

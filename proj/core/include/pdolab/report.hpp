#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "pdolab/symbol.hpp"
#include "pdolab/traces.hpp"

namespace pdolab {

using ReportValue = std::variant<bool, std::int64_t, double, std::string, std::vector<double>>;
using ReportFields = std::vector<std::pair<std::string, ReportValue>>;

struct ReportSeries {
  std::string name;
  std::vector<double> n;  ///< may hold +inf for astronomically large n; see log_n
  std::vector<double> log_n;
  std::vector<Complex> values;
};

/// Serialized as
/// {
///   "pipeline": str,
///   "inputs": {key: value},
///   "series": [{"name": str, "n": [..], "log_n": [..], "value_re": [..], "value_im": [..]}],
///   "band": {"lo": [re, im], "hi": [re, im], "width": x, "tail_start": n,
///            "log_tail_start": x, "log_n_max": x, "samples": [{"id": str, "value": [re, im]}]} | null,
///   "verdict": {"passed": bool, "label": str, "value": [re, im] | null},
///   "metrics": {key: value},
///   "tolerances": {key: value},
///   "runtime": {"seconds": x}
/// }
struct PipelineReport {
  std::string pipeline;
  ReportFields inputs;
  std::vector<ReportSeries> series;
  std::optional<DixmierBand> band;
  bool passed = false;
  std::string verdict_label;
  std::optional<Complex> verdict_value;
  ReportFields metrics;
  ReportFields tolerances;
  double runtime_seconds = 0.0;
};

std::string to_json_text(const PipelineReport& report, int indent = 2);

}  // namespace pdolab

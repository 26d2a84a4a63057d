#include "pdolab/report.hpp"

#include <cmath>
#include <json.hpp>

namespace pdolab {

namespace {

using nlohmann::json;

json number(double v) {
  if (std::isfinite(v)) return v;
  return v > 0 ? "inf" : (v < 0 ? "-inf" : "nan");
}

json pair(Complex v) { return json::array({number(v.real()), number(v.imag())}); }

json fields(const ReportFields& f) {
  json out = json::object();
  for (const auto& [key, value] : f) {
    std::visit(
        [&](const auto& v) {
          using T = std::decay_t<decltype(v)>;
          if constexpr (std::is_same_v<T, double>) {
            out[key] = number(v);
          } else if constexpr (std::is_same_v<T, std::vector<double>>) {
            json arr = json::array();
            for (double x : v) arr.push_back(number(x));
            out[key] = arr;
          } else {
            out[key] = v;
          }
        },
        value);
  }
  return out;
}

}  // namespace

std::string to_json_text(const PipelineReport& r, int indent) {
  json j;
  j["pipeline"] = r.pipeline;
  j["inputs"] = fields(r.inputs);
  json series = json::array();
  for (const ReportSeries& s : r.series) {
    json e;
    e["name"] = s.name;
    json n = json::array(), ln = json::array(), re = json::array(), im = json::array();
    for (double v : s.n) n.push_back(number(v));
    for (double v : s.log_n) ln.push_back(number(v));
    for (const Complex& v : s.values) {
      re.push_back(number(v.real()));
      im.push_back(number(v.imag()));
    }
    e["n"] = n;
    e["log_n"] = ln;
    e["value_re"] = re;
    e["value_im"] = im;
    series.push_back(e);
  }
  j["series"] = series;
  if (r.band) {
    const DixmierBand& b = *r.band;
    json band;
    band["lo"] = pair(b.lo);
    band["hi"] = pair(b.hi);
    band["width"] = number(b.width());
    band["tail_start"] = number(b.series_tail_start);
    band["log_tail_start"] = number(b.log_tail_start);
    band["log_n_max"] = number(b.log_n_max);
    json samples = json::array();
    for (const BandSample& s : b.samples) samples.push_back({{"id", s.id}, {"value", pair(s.value)}});
    band["samples"] = samples;
    j["band"] = band;
  } else {
    j["band"] = nullptr;
  }
  j["verdict"] = {{"passed", r.passed},
                  {"label", r.verdict_label},
                  {"value", r.verdict_value ? pair(*r.verdict_value) : json(nullptr)}};
  j["metrics"] = fields(r.metrics);
  j["tolerances"] = fields(r.tolerances);
  j["runtime"] = {{"seconds", r.runtime_seconds}};
  return j.dump(indent) + "\n";
}

}  // namespace pdolab

#include "config.hpp"

#include <cmath>
#include <fstream>
#include <json.hpp>
#include <set>
#include <sstream>

namespace pdolab::cli {

namespace {

using nlohmann::json;

struct PipelineName {
  Pipeline p;
  const char* name;
};

constexpr PipelineName kPipelines[] = {
    {Pipeline::residue, "residue"},       {Pipeline::connes, "connes"},
    {Pipeline::nonmeasurable, "nonmeasurable"}, {Pipeline::integrate, "integrate"},
    {Pipeline::spectral_formula, "spectral-formula"}, {Pipeline::modulation, "modulation"},
    {Pipeline::sweep, "sweep"},
};

std::string join_path(const std::string& base, const std::string& key) {
  return base.empty() ? key : base + "." + key;
}

void reject_unknown(const json& obj, const std::string& where, std::initializer_list<const char*> allowed) {
  if (!obj.is_object()) throw ConfigError(where.empty() ? "<root>" : where, "expected an object");
  const std::set<std::string> keys(allowed.begin(), allowed.end());
  for (const auto& [key, _] : obj.items())
    if (!keys.count(key)) throw ConfigError(join_path(where, key), "unknown key");
}

double get_number(const json& v, const std::string& where) {
  if (!v.is_number()) throw ConfigError(where, "expected a number");
  const double x = v.get<double>();
  if (!std::isfinite(x)) throw ConfigError(where, "expected a finite number");
  return x;
}

long long get_integer(const json& v, const std::string& where) {
  if (!v.is_number_integer()) throw ConfigError(where, "expected an integer");
  return v.get<long long>();
}

std::string get_string(const json& v, const std::string& where) {
  if (!v.is_string()) throw ConfigError(where, "expected a string");
  return v.get<std::string>();
}

std::vector<double> get_numbers(const json& v, const std::string& where) {
  if (!v.is_array()) throw ConfigError(where, "expected an array of numbers");
  std::vector<double> out;
  for (std::size_t i = 0; i < v.size(); ++i) out.push_back(get_number(v[i], where + "[" + std::to_string(i) + "]"));
  return out;
}

std::size_t get_count(const json& v, const std::string& where) {
  const long long x = get_integer(v, where);
  if (x < 1) throw ConfigError(where, "must be >= 1");
  return static_cast<std::size_t>(x);
}

std::vector<BumpSpec> parse_bumps(const json& v, const std::string& where) {
  if (!v.is_array()) throw ConfigError(where, "expected an array of bumps");
  std::vector<BumpSpec> out;
  for (std::size_t i = 0; i < v.size(); ++i) {
    const std::string at = where + "[" + std::to_string(i) + "]";
    reject_unknown(v[i], at, {"center", "half_width", "amplitude", "integral"});
    BumpSpec b;
    if (!v[i].contains("center")) throw ConfigError(join_path(at, "center"), "missing");
    b.center = get_numbers(v[i]["center"], join_path(at, "center"));
    if (v[i].contains("half_width")) b.half_width = get_number(v[i]["half_width"], join_path(at, "half_width"));
    if (v[i].contains("amplitude")) b.amplitude = get_number(v[i]["amplitude"], join_path(at, "amplitude"));
    if (v[i].contains("integral")) b.integral = get_number(v[i]["integral"], join_path(at, "integral"));
    if (b.amplitude.has_value() == b.integral.has_value())
      throw ConfigError(at, "give exactly one of 'amplitude' or 'integral'");
    if (!(b.half_width > 0.0)) throw ConfigError(join_path(at, "half_width"), "must be > 0");
    out.push_back(std::move(b));
  }
  return out;
}

SymbolSpec parse_symbol(const json& v, const std::string& where) {
  reject_unknown(v, where, {"kind", "bumps", "angular", "cutoff"});
  SymbolSpec s;
  if (v.contains("kind")) {
    const std::string k = get_string(v["kind"], join_path(where, "kind"));
    if (k == "classical") s.kind = SymbolKindSpec::classical;
    else if (k == "zero") s.kind = SymbolKindSpec::zero;
    else if (k == "nonmeasurable") s.kind = SymbolKindSpec::nonmeasurable;
    else throw ConfigError(join_path(where, "kind"), "expected one of classical, zero, nonmeasurable (got '" + k + "')");
  }
  if (v.contains("bumps")) s.bumps = parse_bumps(v["bumps"], join_path(where, "bumps"));
  if (v.contains("angular")) {
    const std::string a = get_string(v["angular"], join_path(where, "angular"));
    if (a == "even") s.angular = Angular::even;
    else if (a == "odd") s.angular = Angular::odd;
    else throw ConfigError(join_path(where, "angular"), "expected 'even' or 'odd'");
  }
  if (v.contains("cutoff")) s.cutoff = get_number(v["cutoff"], join_path(where, "cutoff"));
  return s;
}

IntegrandSpec parse_integrand(const json& v, const std::string& where) {
  reject_unknown(v, where, {"kind", "bumps", "reference_integral", "diagonal_n_max", "diagonal_points"});
  IntegrandSpec s;
  if (v.contains("kind")) {
    const std::string k = get_string(v["kind"], join_path(where, "kind"));
    if (k == "one_plus_cos") s.kind = IntegrandKind::one_plus_cos;
    else if (k == "bumps") s.kind = IntegrandKind::bumps;
    else throw ConfigError(join_path(where, "kind"), "expected 'one_plus_cos' or 'bumps'");
  }
  if (v.contains("bumps")) s.bumps = parse_bumps(v["bumps"], join_path(where, "bumps"));
  if (v.contains("reference_integral"))
    s.reference_integral = get_number(v["reference_integral"], join_path(where, "reference_integral"));
  if (v.contains("diagonal_n_max")) s.diagonal_n_max = get_count(v["diagonal_n_max"], join_path(where, "diagonal_n_max"));
  if (v.contains("diagonal_points"))
    s.diagonal_points = get_count(v["diagonal_points"], join_path(where, "diagonal_points"));
  return s;
}

GridSpec parse_grid(const json& v, const std::string& where) {
  reject_unknown(v, where, {"kind", "t", "min", "max", "points", "values"});
  GridSpec g;
  if (!v.contains("kind")) throw ConfigError(join_path(where, "kind"), "missing");
  const std::string k = get_string(v["kind"], join_path(where, "kind"));
  if (k == "doubly_exponential") {
    g.kind = GridKind::doubly_exponential;
    if (!v.contains("t")) throw ConfigError(join_path(where, "t"), "missing");
    g.t = get_numbers(v["t"], join_path(where, "t"));
    if (g.t.empty()) throw ConfigError(join_path(where, "t"), "must not be empty");
  } else if (k == "geometric") {
    g.kind = GridKind::geometric;
    for (const char* key : {"min", "max", "points"})
      if (!v.contains(key)) throw ConfigError(join_path(where, key), "missing");
    g.min = get_number(v["min"], join_path(where, "min"));
    g.max = get_number(v["max"], join_path(where, "max"));
    g.points = get_count(v["points"], join_path(where, "points"));
    if (g.min < 1 || g.max < g.min) throw ConfigError(where, "need 1 <= min <= max");
  } else if (k == "list") {
    g.kind = GridKind::list;
    if (!v.contains("values")) throw ConfigError(join_path(where, "values"), "missing");
    g.values = get_numbers(v["values"], join_path(where, "values"));
    if (g.values.empty()) throw ConfigError(join_path(where, "values"), "must not be empty");
  } else {
    throw ConfigError(join_path(where, "kind"), "expected doubly_exponential, geometric or list");
  }
  for (const char* key : {"t", "min", "max", "points", "values"}) {
    const bool used = (g.kind == GridKind::doubly_exponential && std::string(key) == "t") ||
                      (g.kind == GridKind::geometric && (std::string(key) == "min" || std::string(key) == "max" ||
                                                         std::string(key) == "points")) ||
                      (g.kind == GridKind::list && std::string(key) == "values");
    if (v.contains(key) && !used) throw ConfigError(join_path(where, key), "not used by grid kind '" + k + "'");
  }
  return g;
}

Tolerances parse_tolerances(const json& v, const std::string& where) {
  reject_unknown(v, where, {"relative", "absolute", "measurability", "min_band_width", "slope", "diagonal"});
  Tolerances t;
  auto read = [&](const char* key, double& out) {
    if (!v.contains(key)) return;
    out = get_number(v[key], join_path(where, key));
    if (out < 0.0) throw ConfigError(join_path(where, key), "must be >= 0");
  };
  read("relative", t.relative);
  read("absolute", t.absolute);
  read("measurability", t.measurability);
  read("min_band_width", t.min_band_width);
  read("slope", t.slope);
  read("diagonal", t.diagonal);
  return t;
}

std::string line_column(const std::string& text, std::size_t byte) {
  std::size_t line = 1, col = 1;
  for (std::size_t i = 0; i + 1 < byte && i < text.size(); ++i) {
    if (text[i] == '\n') {
      ++line;
      col = 1;
    } else {
      ++col;
    }
  }
  return "line " + std::to_string(line) + ", column " + std::to_string(col);
}

}  // namespace

std::string to_string(Pipeline p) {
  for (const auto& e : kPipelines)
    if (e.p == p) return e.name;
  return "?";
}

Pipeline parse_pipeline(const std::string& name) {
  for (const auto& e : kPipelines)
    if (name == e.name) return e.p;
  throw ConfigError("pipeline", "unknown pipeline '" + name +
                                    "' (expected residue, connes, nonmeasurable, integrate, spectral-formula, "
                                    "modulation or sweep)");
}

ExperimentConfig parse_config_text(const std::string& text, const std::string& source) {
  json root;
  try {
    root = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ConfigError(source + " " + line_column(text, e.byte), "malformed JSON");
  }
  reject_unknown(root, "", {"schema_version", "pipeline", "sweep_pipeline", "d", "K", "K_list", "n_window", "levels",
                            "n_grid", "log_tail_start", "symbol", "integrand", "tolerances", "output", "seed",
                            "threads"});
  ExperimentConfig c;
  if (!root.contains("schema_version")) throw ConfigError("schema_version", "missing");
  c.schema_version = static_cast<int>(get_integer(root["schema_version"], "schema_version"));
  if (c.schema_version != kSchemaVersion)
    throw ConfigError("schema_version", "unsupported version " + std::to_string(c.schema_version) + " (expected " +
                                            std::to_string(kSchemaVersion) + ")");
  if (root.contains("pipeline")) c.pipeline = parse_pipeline(get_string(root["pipeline"], "pipeline"));
  if (root.contains("sweep_pipeline")) {
    try {
      c.sweep_pipeline = parse_pipeline(get_string(root["sweep_pipeline"], "sweep_pipeline"));
    } catch (const ConfigError&) {
      throw ConfigError("sweep_pipeline", "unknown pipeline");
    }
  }
  if (root.contains("d")) c.d = static_cast<int>(get_integer(root["d"], "d"));
  if (root.contains("K")) {
    c.K = static_cast<int>(get_integer(root["K"], "K"));
    c.K_given = true;
  }
  if (root.contains("K_list")) {
    const json& v = root["K_list"];
    if (!v.is_array()) throw ConfigError("K_list", "expected an array of integers");
    for (std::size_t i = 0; i < v.size(); ++i)
      c.K_list.push_back(static_cast<int>(get_integer(v[i], "K_list[" + std::to_string(i) + "]")));
    c.K_list_given = true;
  }
  if (root.contains("n_window")) c.n_window = get_count(root["n_window"], "n_window");
  if (root.contains("levels")) c.levels = static_cast<int>(get_count(root["levels"], "levels"));
  if (root.contains("n_grid")) c.n_grid = parse_grid(root["n_grid"], "n_grid");
  if (root.contains("log_tail_start")) c.log_tail_start = get_number(root["log_tail_start"], "log_tail_start");
  if (root.contains("symbol")) c.symbol = parse_symbol(root["symbol"], "symbol");
  if (root.contains("integrand")) c.integrand = parse_integrand(root["integrand"], "integrand");
  if (root.contains("tolerances")) c.tolerances = parse_tolerances(root["tolerances"], "tolerances");
  if (root.contains("output")) {
    const json& o = root["output"];
    reject_unknown(o, "output", {"csv", "report"});
    if (o.contains("csv")) c.csv = get_string(o["csv"], "output.csv");
    if (o.contains("report")) c.report = get_string(o["report"], "output.report");
  }
  if (root.contains("seed")) {
    const json& s = root["seed"];
    if (!s.is_number_unsigned() && !(s.is_number_integer() && s.get<long long>() >= 0))
      throw ConfigError("seed", "expected a non-negative integer");
    c.seed = s.get<std::uint64_t>();
  }
  if (root.contains("threads")) c.threads = static_cast<int>(get_count(root["threads"], "threads"));
  validate(c);
  return c;
}

ExperimentConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError(path.string(), "cannot open file");
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_config_text(ss.str(), path.string());
}

void validate(ExperimentConfig& c) {
  if (c.d < 1 || c.d > 3) throw ConfigError("d", "must be 1, 2 or 3");
  if (c.K < 1) throw ConfigError("K", "must be >= 1");
  if (c.threads < 1 || c.threads > 256) throw ConfigError("threads", "must be in [1, 256]");
  if (c.sweep_pipeline == Pipeline::sweep) throw ConfigError("sweep_pipeline", "cannot itself be 'sweep'");
  if (c.pipeline == Pipeline::sweep) {
    if (c.K_list.empty()) throw ConfigError("K_list", "sweep needs a non-empty K list");
    for (std::size_t i = 0; i < c.K_list.size(); ++i) {
      if (c.K_list[i] < 1) throw ConfigError("K_list[" + std::to_string(i) + "]", "must be >= 1");
      if (i > 0 && c.K_list[i] <= c.K_list[i - 1])
        throw ConfigError("K_list[" + std::to_string(i) + "]", "K list must be strictly increasing");
    }
  }
  if (!(c.symbol.cutoff > 0.0)) throw ConfigError("symbol.cutoff", "must be > 0");
  auto check_bumps = [&](const std::vector<BumpSpec>& bumps, const std::string& where) {
    for (std::size_t i = 0; i < bumps.size(); ++i)
      if (static_cast<int>(bumps[i].center.size()) != c.d)
        throw ConfigError(where + "[" + std::to_string(i) + "].center",
                          "has " + std::to_string(bumps[i].center.size()) + " coordinates, d=" + std::to_string(c.d));
  };
  check_bumps(c.symbol.bumps, "symbol.bumps");
  check_bumps(c.integrand.bumps, "integrand.bumps");
  if (c.integrand.kind == IntegrandKind::bumps && c.integrand.bumps.empty())
    throw ConfigError("integrand.bumps", "integrand kind 'bumps' needs at least one bump");
  if (c.n_grid.kind == GridKind::list)
    for (std::size_t i = 0; i < c.n_grid.values.size(); ++i) {
      const double v = c.n_grid.values[i];
      if (v < 1 || v != std::floor(v))
        throw ConfigError("n_grid.values[" + std::to_string(i) + "]", "must be a positive integer");
      if (i > 0 && v <= c.n_grid.values[i - 1])
        throw ConfigError("n_grid.values[" + std::to_string(i) + "]", "grid must be strictly increasing");
    }
  const double rel = c.tolerances.relative;
  if (rel > 1.0) throw ConfigError("tolerances.relative", "must be <= 1");
}

}  // namespace pdolab::cli

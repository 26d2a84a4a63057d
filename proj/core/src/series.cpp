#include "pdolab/series.hpp"

#include <algorithm>
#include <cmath>

#include "pdolab/errors.hpp"

namespace pdolab {

Series Series::dense(std::vector<std::complex<double>> values) {
  if (values.empty()) throw InvalidArgument("Series::dense: empty series");
  Series s;
  s.kind_ = Kind::dense;
  s.values_ = std::move(values);
  s.log_min_ = 0.0;
  s.log_max_ = std::log(static_cast<double>(s.values_.size()));
  return s;
}

Series Series::sampled(std::vector<double> log_n, std::vector<std::complex<double>> values) {
  if (log_n.empty() || log_n.size() != values.size()) throw InvalidArgument("Series::sampled: bad grid");
  for (std::size_t i = 1; i < log_n.size(); ++i)
    if (!(log_n[i] > log_n[i - 1])) throw InvalidArgument("Series::sampled: grid must be strictly increasing");
  Series s;
  s.kind_ = Kind::sampled;
  s.log_min_ = log_n.front();
  s.log_max_ = log_n.back();
  s.log_n_ = std::move(log_n);
  s.values_ = std::move(values);
  return s;
}

Series Series::function(Fn fn, double log_n_min, double log_n_max, std::size_t resolution) {
  if (!fn) throw InvalidArgument("Series::function: empty function");
  if (!(log_n_max > log_n_min)) throw InvalidArgument("Series::function: empty domain");
  Series s;
  s.kind_ = Kind::function;
  s.fn_ = std::move(fn);
  s.log_min_ = log_n_min;
  s.log_max_ = log_n_max;
  s.resolution_ = std::max<std::size_t>(resolution, 2);
  return s;
}

std::complex<double> Series::at_log(double log_n) const {
  if (log_n < log_min_ - 1e-12 || log_n > log_max_ + 1e-12)
    throw InvalidArgument("Series: log n outside the series domain");
  switch (kind_) {
    case Kind::dense:
      return at(std::round(std::exp(log_n)));
    case Kind::function:
      return fn_(log_n);
    case Kind::sampled: {
      const auto it = std::lower_bound(log_n_.begin(), log_n_.end(), log_n);
      if (it == log_n_.end()) return values_.back();
      const auto i = static_cast<std::size_t>(it - log_n_.begin());
      if (i == 0 || *it == log_n) return values_[i];
      const double w = (log_n - log_n_[i - 1]) / (log_n_[i] - log_n_[i - 1]);
      return (1.0 - w) * values_[i - 1] + w * values_[i];
    }
  }
  return {};
}

std::complex<double> Series::at(double n) const {
  if (kind_ == Kind::dense) {
    const auto idx = static_cast<std::size_t>(std::llround(n));
    if (idx < 1 || idx > values_.size()) throw InvalidArgument("Series: n outside the series domain");
    return values_[idx - 1];
  }
  return at_log(std::log(n));
}

void Series::tail_points(double log_start, std::vector<double>& log_n,
                         std::vector<std::complex<double>>& values) const {
  log_n.clear();
  values.clear();
  switch (kind_) {
    case Kind::dense: {
      const auto first = static_cast<std::size_t>(std::max(1.0, std::ceil(std::exp(log_start) - 1e-9)));
      for (std::size_t n = first; n <= values_.size(); ++n) {
        log_n.push_back(std::log(static_cast<double>(n)));
        values.push_back(values_[n - 1]);
      }
      break;
    }
    case Kind::sampled:
      for (std::size_t i = 0; i < log_n_.size(); ++i)
        if (log_n_[i] >= log_start - 1e-12) {
          log_n.push_back(log_n_[i]);
          values.push_back(values_[i]);
        }
      break;
    case Kind::function: {
      const double a = std::max(log_start, log_min_);
      if (a > log_max_) break;
      for (std::size_t i = 0; i < resolution_; ++i) {
        const double u = a + (log_max_ - a) * static_cast<double>(i) / static_cast<double>(resolution_ - 1);
        log_n.push_back(u);
        values.push_back(fn_(u));
      }
      break;
    }
  }
}

}  // namespace pdolab

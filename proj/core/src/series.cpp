#include "sbheom/series.hpp"

#include <algorithm>
#include <cmath>

#include "sbheom/errors.hpp"

namespace sbheom {

void TimeSeries::validate() const {
  if (!(dt > 0.0)) throw ConfigError("time series: dt must be > 0");
  if (values.size() < 2) throw ConfigError("time series: need at least 2 samples");
}

std::vector<double> TimeSeries::real_values() const {
  std::vector<double> out(values.size());
  std::transform(values.begin(), values.end(), out.begin(),
                 [](const std::complex<double>& v) { return v.real(); });
  return out;
}

std::vector<double> TimeSeries::imag_values() const {
  std::vector<double> out(values.size());
  std::transform(values.begin(), values.end(), out.begin(),
                 [](const std::complex<double>& v) { return v.imag(); });
  return out;
}

double TimeSeries::max_imag() const noexcept {
  double m = 0.0;
  for (const auto& v : values) m = std::max(m, std::abs(v.imag()));
  return m;
}

TimeSeries TimeSeries::from_real(double t0, double dt, std::vector<double> v,
                                 std::string t_unit, std::string v_unit) {
  TimeSeries out;
  out.t0 = t0;
  out.dt = dt;
  out.t_unit = std::move(t_unit);
  out.v_unit = std::move(v_unit);
  out.values.reserve(v.size());
  for (double x : v) out.values.emplace_back(x, 0.0);
  return out;
}

double log_log_slope(const std::vector<double>& t, const std::vector<double>& y) {
  if (t.size() != y.size() || t.size() < 2) {
    throw ConfigError("log_log_slope: need two equally sized arrays with >= 2 points");
  }
  double sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0;
  const double n = static_cast<double>(t.size());
  for (std::size_t i = 0; i < t.size(); ++i) {
    if (!(t[i] > 0.0)) throw ConfigError("log_log_slope: t must be positive");
    if (!(std::abs(y[i]) > 0.0)) throw ConfigError("log_log_slope: zero sample in window");
    const double lx = std::log(t[i]);
    const double ly = std::log(std::abs(y[i]));
    sx += lx;
    sy += ly;
    sxx += lx * lx;
    sxy += lx * ly;
  }
  const double denom = n * sxx - sx * sx;
  if (denom == 0.0) throw ConfigError("log_log_slope: degenerate abscissa");
  return (n * sxy - sx * sy) / denom;
}

double tail_exponent(const TimeSeries& series, double t_lo, double t_hi,
                     SeriesComponent component) {
  series.validate();
  if (!(t_lo < t_hi)) throw ConfigError("tail_exponent: empty window");
  if (t_lo < series.t0 || t_hi > series.t_end() + 1e-12 * series.dt) {
    throw ConfigError("tail_exponent: window outside the series");
  }

  std::vector<double> t, y;
  for (std::size_t i = 0; i < series.size(); ++i) {
    const double ti = series.time_at(i);
    if (ti < t_lo || ti > t_hi) continue;
    double v = 0.0;
    switch (component) {
      case SeriesComponent::Real: v = series.values[i].real(); break;
      case SeriesComponent::Imag: v = series.values[i].imag(); break;
      case SeriesComponent::Abs: v = std::abs(series.values[i]); break;
    }
    t.push_back(ti);
    y.push_back(v);
  }
  if (t.size() < 2) throw ConfigError("tail_exponent: window holds fewer than 2 samples");
  for (std::size_t i = 0; i < y.size(); ++i) {
    if (y[i] == 0.0) throw ConfigError("tail_exponent: zero sample in window");
    if (component != SeriesComponent::Abs && y[i] * y[0] < 0.0) {
      throw ConfigError("tail_exponent: sign change inside window");
    }
  }
  return log_log_slope(t, y);
}

}  // namespace sbheom

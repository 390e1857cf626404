// series.hpp — Uniformly sampled signals with grid metadata

#pragma once

#include <complex>
#include <cstddef>
#include <string>
#include <vector>

namespace sbheom {

// A uniformly sampled signal. Real-valued series are stored with
// identically zero imaginary parts so that one type covers M(t'), chi(t),
// k(t) and complex correlation exports alike.
struct TimeSeries {
  double t0 = 0.0;
  double dt = 0.0;
  std::vector<std::complex<double>> values;
  std::string t_unit;
  std::string v_unit;

  std::size_t size() const noexcept { return values.size(); }
  double time_at(std::size_t i) const noexcept { return t0 + dt * static_cast<double>(i); }
  double t_end() const noexcept {
    return values.empty() ? t0 : time_at(values.size() - 1);
  }

  // Throws ConfigError unless dt > 0 and length >= 2.
  void validate() const;

  std::vector<double> real_values() const;
  std::vector<double> imag_values() const;
  // Largest |Im| over all samples; zero for properly real series.
  double max_imag() const noexcept;

  static TimeSeries from_real(double t0, double dt, std::vector<double> v,
                              std::string t_unit = {}, std::string v_unit = {});
};

enum class SeriesComponent { Real, Imag, Abs };

// Least-squares slope of log|component| vs log t over the samples with
// t in [t_lo, t_hi]. The window must contain at least two samples, all
// nonzero and (for Real/Imag) of one sign; violations throw ConfigError.
double tail_exponent(const TimeSeries& series, double t_lo, double t_hi,
                     SeriesComponent component = SeriesComponent::Real);

// Same fit on raw arrays; shared by the series overload and fit overlays.
double log_log_slope(const std::vector<double>& t, const std::vector<double>& y);

}  // namespace sbheom

#include "sbheom/bath.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "sbheom/errors.hpp"
#include "sbheom/quadrature.hpp"

namespace sbheom {

void BathSpec::validate() const {
  if (!(s > 0.0)) throw ConfigError("bath: s must be > 0");
  if (!(alpha >= 0.0)) throw ConfigError("bath: alpha must be >= 0");
  if (!(omega_c > 0.0)) throw ConfigError("bath: omega_c must be > 0");
  if (!(temperature >= 0.0)) throw ConfigError("bath: temperature must be >= 0");
}

double BathSpec::peak_frequency() const {
  switch (cutoff) {
    case CutoffForm::RationalFraction:
      // maximum of w^s / (1+(w/wc)^2)^2
      return omega_c * std::sqrt(s / (4.0 - s));
    case CutoffForm::Exponential:
      return s * omega_c;
  }
  return omega_c;
}

double spectral_density(double omega, const BathSpec& spec) {
  if (omega < 0.0) {
    throw std::domain_error("spectral_density: omega must be non-negative");
  }
  if (omega == 0.0) return 0.0;
  const double x = omega / spec.omega_c;
  double f = 0.0;
  switch (spec.cutoff) {
    case CutoffForm::RationalFraction: {
      const double d = 1.0 + x * x;
      f = 1.0 / (d * d);
      break;
    }
    case CutoffForm::Exponential:
      f = std::exp(-x);
      break;
  }
  return 0.5 * M_PI * spec.alpha * std::pow(omega, spec.s) *
         std::pow(spec.omega_c, 1.0 - spec.s) * f;
}

namespace {

// Envelope of the correlation integral: J(w)/pi, optionally dressed with
// the Bose factor for the real part at T > 0.
std::function<double(double)> correlation_envelope(const BathSpec& spec,
                                                   bool with_bose) {
  if (with_bose && spec.temperature > 0.0) {
    const double beta = 1.0 / spec.temperature;
    return [spec, beta](double w) {
      if (w <= 0.0) return 0.0;
      const double x = 0.5 * beta * w;
      // coth(x), stable for large arguments
      const double coth = x > 20.0 ? 1.0 : 1.0 / std::tanh(x);
      return spectral_density(w, spec) * coth / M_PI;
    };
  }
  return [spec](double w) {
    if (w <= 0.0) return 0.0;
    return spectral_density(w, spec) / M_PI;
  };
}

}  // namespace

std::complex<double> correlation_value(double t, const BathSpec& spec,
                                       const QuadratureConfig& quad,
                                       double& error_estimate) {
  spec.validate();
  if (t < 0.0) throw ConfigError("correlation_value: t must be >= 0");
  if (spec.alpha == 0.0) {
    error_estimate = 0.0;
    return {0.0, 0.0};
  }

  const double peak = spec.peak_frequency();
  auto g_real = correlation_envelope(spec, true);
  auto g_imag = correlation_envelope(spec, false);

  OscillatoryResult re = fourier_cos_integral(g_real, t, peak, quad);
  OscillatoryResult im = fourier_sin_integral(g_imag, t, peak, quad);

  error_estimate = re.error_estimate + im.error_estimate;
  const double scale = spec.alpha * spec.omega_c * spec.omega_c;
  const double magnitude = std::max({std::abs(re.value), std::abs(im.value),
                                     quad.abs_tol * scale});
  if (error_estimate > std::max(quad.rel_tol * magnitude, quad.abs_tol * scale)) {
    throw QuadratureError("correlation_value: quadrature did not reach tolerance",
                          error_estimate);
  }
  return {re.value, -im.value};
}

std::complex<double> correlation_value(double t, const BathSpec& spec,
                                       const QuadratureConfig& quad) {
  double err = 0.0;
  return correlation_value(t, spec, quad, err);
}

std::uint64_t CorrelationSamples::hash() const noexcept {
  // FNV-1a over the raw bytes of the grid and samples.
  std::uint64_t h = 1469598103934665603ull;
  auto absorb = [&h](const void* data, std::size_t n) {
    const auto* p = static_cast<const unsigned char*>(data);
    for (std::size_t i = 0; i < n; ++i) {
      h ^= p[i];
      h *= 1099511628211ull;
    }
  };
  absorb(t.data(), t.size() * sizeof(double));
  absorb(real_part.data(), real_part.size() * sizeof(double));
  absorb(imag_part.data(), imag_part.size() * sizeof(double));
  return h;
}

CorrelationSamples sample_correlation(const BathSpec& spec, double t_max,
                                      std::size_t n_points,
                                      const QuadratureConfig& quad) {
  spec.validate();
  if (!(t_max > 0.0)) throw ConfigError("sample_correlation: t_max must be > 0");
  if (n_points < 2) throw ConfigError("sample_correlation: need at least 2 points");

  // Hybrid grid: t = 0, then log-spaced until the short-time structure is
  // resolved, uniform across the tail.
  const double t_knee = std::min(10.0 / spec.omega_c, t_max);
  std::vector<double> grid;
  grid.reserve(n_points);
  grid.push_back(0.0);

  const std::size_t n_log = (t_knee < t_max) ? (n_points - 1) / 2 : n_points - 1;
  const double t_lo = t_knee * 1e-3;
  for (std::size_t i = 0; i < n_log; ++i) {
    const double frac = static_cast<double>(i) / static_cast<double>(n_log - 1);
    grid.push_back(t_lo * std::pow(t_knee / t_lo, frac));
  }
  if (t_knee < t_max) {
    const std::size_t n_lin = n_points - 1 - n_log;
    for (std::size_t i = 1; i <= n_lin; ++i) {
      const double frac = static_cast<double>(i) / static_cast<double>(n_lin);
      grid.push_back(t_knee + frac * (t_max - t_knee));
    }
  }
  std::sort(grid.begin(), grid.end());
  grid.erase(std::unique(grid.begin(), grid.end()), grid.end());

  CorrelationSamples out;
  out.spec = spec;
  out.t = std::move(grid);
  out.real_part.resize(out.t.size());
  out.imag_part.resize(out.t.size());
  for (std::size_t i = 0; i < out.t.size(); ++i) {
    const std::complex<double> c = correlation_value(out.t[i], spec, quad);
    out.real_part[i] = c.real();
    out.imag_part[i] = c.imag();
  }
  return out;
}

TimeSeries correlation_series(const BathSpec& spec, double t_max,
                              std::size_t n_samples,
                              const QuadratureConfig& quad) {
  spec.validate();
  if (!(t_max > 0.0)) throw ConfigError("correlation_series: t_max must be > 0");
  if (n_samples < 2) throw ConfigError("correlation_series: need at least 2 samples");

  TimeSeries out;
  out.t0 = 0.0;
  out.dt = t_max / static_cast<double>(n_samples - 1);
  out.t_unit = "t*omega_c";
  out.v_unit = "C/omega_c^2";
  out.values.resize(n_samples);
  for (std::size_t i = 0; i < n_samples; ++i) {
    out.values[i] = correlation_value(out.time_at(i), spec, quad);
  }
  return out;
}

}  // namespace sbheom

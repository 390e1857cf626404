// bath.hpp — Spectral density and exact bath correlation function

#pragma once

#include <complex>
#include <cstddef>
#include <cstdint>
#include <vector>

#include "sbheom/series.hpp"

namespace sbheom {

enum class CutoffForm {
  RationalFraction,  // f(x) = 1/(1+x^2)^2
  Exponential,       // f(x) = exp(-x); admitted by the interface, unvalidated
};

// Parameter set of the bath spectral density
//   J(w) = (pi/2) * alpha * w^s * omega_c^(1-s) * f(w/omega_c).
struct BathSpec {
  double s = 1.0;            // bath exponent; sub-Ohmic for s < 1
  double alpha = 0.0;        // Kondo parameter (dimensionless coupling)
  double omega_c = 1.0;      // cutoff frequency
  CutoffForm cutoff = CutoffForm::RationalFraction;
  double temperature = 0.0;  // 0 is exact (T = 0 has no Bose factor)

  // Throws ConfigError unless s > 0, alpha >= 0, omega_c > 0, temperature >= 0.
  void validate() const;

  // Frequency at which J(w) attains its maximum.
  double peak_frequency() const;
};

// Controls for the oscillatory quadrature behind correlation_value.
struct QuadratureConfig {
  double rel_tol = 1e-8;     // requested relative accuracy
  double abs_tol = 1e-12;    // absolute floor (units of alpha * omega_c^2)
  int panel_depth = 12;      // adaptive refinement depth inside one panel
  int accel_terms = 28;      // alternating-tail panels fed to the accelerator
  std::size_t max_panels = 200000;
};

// J(omega). Throws std::domain_error for omega < 0.
double spectral_density(double omega, const BathSpec& spec);

// C(t) = C_R(t) + i C_I(t) by direct quadrature of the spectral integral.
// Throws QuadratureError if the requested tolerance cannot be certified.
std::complex<double> correlation_value(double t, const BathSpec& spec,
                                       const QuadratureConfig& quad = {});

// Like correlation_value but also reports the achieved error estimate.
std::complex<double> correlation_value(double t, const BathSpec& spec,
                                       const QuadratureConfig& quad,
                                       double& error_estimate);

// Sampled correlation function on a shared (possibly non-uniform) grid;
// the fitting target. Grid layout: t = 0, log-spaced points up to
// min(10/omega_c, t_max), uniform beyond.
struct CorrelationSamples {
  std::vector<double> t;
  std::vector<double> real_part;
  std::vector<double> imag_part;
  BathSpec spec;

  std::size_t size() const noexcept { return t.size(); }
  // FNV-1a hash over the raw sample bytes; keys fit caches.
  std::uint64_t hash() const noexcept;
};

CorrelationSamples sample_correlation(const BathSpec& spec, double t_max,
                                      std::size_t n_points,
                                      const QuadratureConfig& quad = {});

// Uniform-grid export of C(t) over [0, t_max] for diagnostics.
TimeSeries correlation_series(const BathSpec& spec, double t_max,
                              std::size_t n_samples,
                              const QuadratureConfig& quad = {});

}  // namespace sbheom

// quadrature.hpp — Oscillatory Fourier-type integrals over [0, inf)

#pragma once

#include <functional>

#include "sbheom/bath.hpp"

namespace sbheom {

struct OscillatoryResult {
  double value = 0.0;
  double error_estimate = 0.0;
  std::size_t panels = 0;
};

// Integrals of g(w) * cos(w t) resp. g(w) * sin(w t) over w in [0, inf).
// The envelope g must be integrable at 0 (an algebraic singularity is fine)
// and decay at infinity. Panels are bounded by the half-periods of the
// trigonometric factor; once the envelope is past `peak_hint` and the panel
// series alternates, the remaining tail is summed by series acceleration.
OscillatoryResult fourier_cos_integral(const std::function<double(double)>& g,
                                       double t, double peak_hint,
                                       const QuadratureConfig& quad = {});
OscillatoryResult fourier_sin_integral(const std::function<double(double)>& g,
                                       double t, double peak_hint,
                                       const QuadratureConfig& quad = {});

// Integral of g(w) * (1 - cos(w t)) over [0, inf) for envelopes whose
// integral alone may diverge at w -> 0 (the difference is integrable).
OscillatoryResult fourier_one_minus_cos_integral(
    const std::function<double(double)>& g, double t, double peak_hint,
    const QuadratureConfig& quad = {});

// Plain integral of g over [0, inf), split at `split` to isolate an
// algebraic endpoint singularity at 0.
OscillatoryResult semi_infinite_integral(const std::function<double(double)>& g,
                                         double split,
                                         const QuadratureConfig& quad = {});

}  // namespace sbheom

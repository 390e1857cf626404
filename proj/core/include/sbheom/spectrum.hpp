// spectrum.hpp — Windowed Fourier transforms of recorded signals and peaks

#pragma once

#include <string>
#include <vector>

#include "sbheom/series.hpp"

namespace sbheom {

enum class WindowKind {
  None,
  Exponential,  // exp(-t / tau), tau = window_param (in the series' units)
  CosineTaper,  // flat, cosine rolloff over the trailing `window_param` fraction
};

std::string to_string(WindowKind kind);
WindowKind window_kind_from_string(const std::string& name);

struct Spectrum {
  double omega0 = 0.0;
  double d_omega = 0.0;
  std::vector<double> values;
  WindowKind window = WindowKind::None;
  double window_param = 0.0;

  std::size_t size() const noexcept { return values.size(); }
  double omega_at(std::size_t i) const noexcept {
    return omega0 + d_omega * static_cast<double>(i);
  }
};

struct SpectrumConfig {
  double omega_max = 0.0;
  double d_omega = 0.0;
  WindowKind window = WindowKind::CosineTaper;
  double window_param = 0.1;
  bool resolution_warning = true;  // warn when d_omega < 2*pi/t_record
};

// Window weight at time t for a record of length t_total.
double window_weight(WindowKind kind, double param, double t, double t_total);

// One-sided transforms on the recorded grid (trapezoidal sum).
// sine_transform_at is odd in omega by construction.
double sine_transform_at(const TimeSeries& series, WindowKind window, double param,
                         double omega);
double cosine_transform_at(const TimeSeries& series, WindowKind window, double param,
                           double omega);

// chi''(omega) as the one-sided sine transform of the real causal response
// record: for chi real with chi(t<0) = 0, Im of the two-sided Fourier
// integral reduces to the sine transform over [0, t_record].
Spectrum absorption_spectrum(const TimeSeries& chi, const SpectrumConfig& config);

// 2 * integral of the series times cos(omega t); used for delta-M spectra.
Spectrum cosine_spectrum(const TimeSeries& series, const SpectrumConfig& config);

struct Peak {
  double location = 0.0;
  double height = 0.0;
  double half_width = 0.0;
  double prominence = 0.0;
};

// Local maxima with topographic prominence above `min_prominence`, refined
// by parabolic sub-grid interpolation, sorted by descending height.
std::vector<Peak> spectrum_peaks(const Spectrum& spec, double min_prominence);

}  // namespace sbheom

#include "sbheom/spectrum.hpp"

#include <algorithm>
#include <cmath>
#include <iostream>

#include "sbheom/errors.hpp"

namespace sbheom {

std::string to_string(WindowKind kind) {
  switch (kind) {
    case WindowKind::None: return "none";
    case WindowKind::Exponential: return "exponential";
    case WindowKind::CosineTaper: return "cosine";
  }
  return "unknown";
}

WindowKind window_kind_from_string(const std::string& name) {
  if (name == "none") return WindowKind::None;
  if (name == "exponential") return WindowKind::Exponential;
  if (name == "cosine") return WindowKind::CosineTaper;
  throw ConfigError("spectrum: unknown window '" + name + "'");
}

double window_weight(WindowKind kind, double param, double t, double t_total) {
  switch (kind) {
    case WindowKind::None:
      return 1.0;
    case WindowKind::Exponential:
      return param > 0.0 ? std::exp(-t / param) : 1.0;
    case WindowKind::CosineTaper: {
      const double frac = std::clamp(param, 0.0, 1.0);
      const double t_flat = t_total * (1.0 - frac);
      if (t <= t_flat || frac == 0.0) return 1.0;
      const double x = (t - t_flat) / (t_total - t_flat);
      return 0.5 * (1.0 + std::cos(M_PI * x));
    }
  }
  return 1.0;
}

namespace {

enum class Kernel { Sine, Cosine };

double transform_at(const TimeSeries& series, WindowKind window, double param,
                    double omega, Kernel kernel) {
  series.validate();
  // Oddness (sine) / evenness (cosine) hold exactly by construction.
  if (omega < 0.0) {
    const double v = transform_at(series, window, param, -omega, kernel);
    return kernel == Kernel::Sine ? -v : v;
  }
  const double t_total = series.dt * static_cast<double>(series.size() - 1);
  double sum = 0.0;
  for (std::size_t i = 0; i < series.size(); ++i) {
    const double t = series.time_at(i);
    const double w = window_weight(window, param, t - series.t0, t_total);
    const double k =
        kernel == Kernel::Sine ? std::sin(omega * t) : std::cos(omega * t);
    const double term = series.values[i].real() * w * k;
    sum += (i == 0 || i + 1 == series.size()) ? 0.5 * term : term;
  }
  return sum * series.dt;
}

Spectrum build_spectrum(const TimeSeries& series, const SpectrumConfig& config,
                        Kernel kernel, double scale) {
  series.validate();
  if (!(config.d_omega > 0.0) || !(config.omega_max > 0.0)) {
    throw ConfigError("spectrum: omega_max and d_omega must be > 0");
  }
  const double t_record = series.dt * static_cast<double>(series.size() - 1);
  if (config.resolution_warning && config.d_omega < 2.0 * M_PI / t_record) {
    std::cerr << "[sbheom] warning: d_omega below the resolution limit 2*pi/t_record = "
              << 2.0 * M_PI / t_record << "\n";
  }

  Spectrum spec;
  spec.omega0 = 0.0;
  spec.d_omega = config.d_omega;
  spec.window = config.window;
  spec.window_param = config.window_param;
  const auto n = static_cast<std::size_t>(std::floor(config.omega_max / config.d_omega)) + 1;
  spec.values.resize(n);
#pragma omp parallel for schedule(static)
  for (std::ptrdiff_t i = 0; i < static_cast<std::ptrdiff_t>(n); ++i) {
    const double omega = config.d_omega * static_cast<double>(i);
    spec.values[static_cast<std::size_t>(i)] =
        scale * transform_at(series, config.window, config.window_param, omega, kernel);
  }
  return spec;
}

}  // namespace

double sine_transform_at(const TimeSeries& series, WindowKind window, double param,
                         double omega) {
  return transform_at(series, window, param, omega, Kernel::Sine);
}

double cosine_transform_at(const TimeSeries& series, WindowKind window, double param,
                           double omega) {
  return transform_at(series, window, param, omega, Kernel::Cosine);
}

Spectrum absorption_spectrum(const TimeSeries& chi, const SpectrumConfig& config) {
  if (chi.t0 != 0.0) throw ConfigError("absorption_spectrum: record must start at t = 0");
  return build_spectrum(chi, config, Kernel::Sine, 1.0);
}

Spectrum cosine_spectrum(const TimeSeries& series, const SpectrumConfig& config) {
  return build_spectrum(series, config, Kernel::Cosine, 2.0);
}

std::vector<Peak> spectrum_peaks(const Spectrum& spec, double min_prominence) {
  std::vector<Peak> peaks;
  const auto n = spec.size();
  if (n < 3) return peaks;
  const auto& v = spec.values;

  for (std::size_t i = 1; i + 1 < n; ++i) {
    if (!(v[i] > v[i - 1] && v[i] >= v[i + 1])) continue;

    // Topographic prominence: walk outward to the nearest higher point,
    // tracking the lowest saddle on each side.
    double left_min = v[i];
    bool left_higher = false;
    for (std::size_t j = i; j-- > 0;) {
      if (v[j] > v[i]) {
        left_higher = true;
        break;
      }
      left_min = std::min(left_min, v[j]);
    }
    double right_min = v[i];
    bool right_higher = false;
    for (std::size_t j = i + 1; j < n; ++j) {
      if (v[j] > v[i]) {
        right_higher = true;
        break;
      }
      right_min = std::min(right_min, v[j]);
    }
    // An edge without a higher point acts like a base at the series minimum.
    const double saddle =
        left_higher && right_higher ? std::max(left_min, right_min)
        : left_higher               ? right_min
        : right_higher              ? left_min
                                    : std::min(left_min, right_min);
    const double prominence = v[i] - saddle;
    if (prominence < min_prominence) continue;

    Peak p;
    p.prominence = prominence;
    // parabolic sub-grid refinement
    const double denom = v[i - 1] - 2.0 * v[i] + v[i + 1];
    double shift = 0.0;
    if (denom < 0.0) shift = 0.5 * (v[i - 1] - v[i + 1]) / denom;
    p.location = spec.omega_at(i) + shift * spec.d_omega;
    p.height = v[i] - 0.25 * (v[i - 1] - v[i + 1]) * shift;

    // half width at half prominence, linear interpolation
    const double half_level = v[i] - 0.5 * prominence;
    double left_x = spec.omega_at(0);
    for (std::size_t j = i; j-- > 0;) {
      if (v[j] <= half_level) {
        const double f = (v[j + 1] - half_level) / (v[j + 1] - v[j]);
        left_x = spec.omega_at(j + 1) - f * spec.d_omega;
        break;
      }
    }
    double right_x = spec.omega_at(n - 1);
    for (std::size_t j = i + 1; j < n; ++j) {
      if (v[j] <= half_level) {
        const double f = (v[j - 1] - half_level) / (v[j - 1] - v[j]);
        right_x = spec.omega_at(j - 1) + f * spec.d_omega;
        break;
      }
    }
    p.half_width = 0.5 * (right_x - left_x);
    peaks.push_back(p);
  }
  std::sort(peaks.begin(), peaks.end(),
            [](const Peak& a, const Peak& b) { return a.height > b.height; });
  return peaks;
}

}  // namespace sbheom

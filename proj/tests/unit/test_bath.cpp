#include <cmath>
#include <complex>

#include "doctest.h"
#include "sbheom/bath.hpp"
#include "sbheom/errors.hpp"
#include "sbheom/quadrature.hpp"

using namespace sbheom;

namespace {

BathSpec make_spec(double s, double alpha) {
  BathSpec spec;
  spec.s = s;
  spec.alpha = alpha;
  spec.omega_c = 1.0;
  return spec;
}

// Closed form of the Ohmic imaginary part at T = 0.
double ohmic_imag(double t, double alpha, double omega_c) {
  return -(M_PI / 8.0) * alpha * std::pow(omega_c, 3) * t * std::exp(-omega_c * t);
}

}  // namespace

TEST_CASE("spectral density matches direct substitution") {
  BathSpec spec = make_spec(1.0, 0.5);
  // J(w_c) = (pi/2)(0.5)(w_c)(1/4)
  CHECK(spectral_density(1.0, spec) == doctest::Approx(M_PI / 16.0).epsilon(1e-14));
  CHECK(spectral_density(0.0, spec) == 0.0);
  CHECK(spectral_density(0.0, make_spec(0.3, 1.0)) == 0.0);
  CHECK_THROWS_AS(spectral_density(-0.1, spec), std::domain_error);
}

TEST_CASE("spectral density peaks at w_c/sqrt(3) for s = 1") {
  BathSpec spec = make_spec(1.0, 0.5);
  double best_w = 0.0, best_j = -1.0;
  for (double w = 1e-4; w < 3.0; w += 1e-4) {
    const double j = spectral_density(w, spec);
    if (j > best_j) {
      best_j = j;
      best_w = w;
    }
  }
  CHECK(best_w == doctest::Approx(1.0 / std::sqrt(3.0)).epsilon(1e-3));
  CHECK(spec.peak_frequency() == doctest::Approx(1.0 / std::sqrt(3.0)).epsilon(1e-12));
}

TEST_CASE("correlation value at t = 0 matches the beta-function integral") {
  for (double s : {0.1, 0.5, 0.7, 1.0}) {
    BathSpec spec = make_spec(s, 0.5);
    const double expected =
        0.25 * spec.alpha * std::beta(0.5 * (s + 1.0), 0.5 * (3.0 - s));
    const std::complex<double> c = correlation_value(0.0, spec);
    CHECK(c.real() == doctest::Approx(expected).epsilon(1e-9));
    CHECK(c.imag() == 0.0);  // sine integrand vanishes identically
  }
  BathSpec ohmic = make_spec(1.0, 0.5);
  CHECK(correlation_value(0.0, ohmic).real() == doctest::Approx(0.125).epsilon(1e-10));
}

TEST_CASE("Ohmic imaginary part reproduces the closed form") {
  BathSpec spec = make_spec(1.0, 0.5);
  double worst = 0.0;
  for (double t : {0.0, 0.05, 0.3, 1.0, 2.5, 7.0, 15.0, 30.0, 50.0}) {
    const std::complex<double> c = correlation_value(t, spec);
    worst = std::max(worst, std::abs(c.imag() - ohmic_imag(t, 0.5, 1.0)));
  }
  CHECK(worst < 1e-10);
}

TEST_CASE("imaginary part is non-positive at T = 0") {
  for (double s : {0.1, 0.5, 0.7, 1.0}) {
    BathSpec spec = make_spec(s, 0.5);
    for (double t : {0.0, 0.1, 0.7, 2.0, 5.0, 20.0, 100.0}) {
      CHECK(correlation_value(t, spec).imag() <= 1e-14);
    }
  }
}

TEST_CASE("long-time tails follow the -(1+s) power law") {
  for (double s : {0.1, 0.5, 1.0}) {
    BathSpec spec = make_spec(s, 0.5);
    TimeSeries window;
    window.t0 = 500.0;
    window.dt = 50.0;
    window.t_unit = "t*omega_c";
    for (int i = 0; i <= 30; ++i) {
      window.values.push_back(correlation_value(window.t0 + i * window.dt, spec));
    }
    const double slope_r = tail_exponent(window, 500.0, 2000.0, SeriesComponent::Real);
    CHECK(slope_r == doctest::Approx(-(1.0 + s)).epsilon(0.05 / (1.0 + s)));
    if (s < 1.0) {
      // The Ohmic imaginary part decays exponentially instead.
      const double slope_i = tail_exponent(window, 500.0, 2000.0, SeriesComponent::Imag);
      CHECK(slope_i == doctest::Approx(-(1.0 + s)).epsilon(0.05 / (1.0 + s)));
    }
  }
}

TEST_CASE("doubling quadrature resolution stays within the error estimate") {
  BathSpec spec = make_spec(0.5, 0.5);
  QuadratureConfig base;
  QuadratureConfig fine;
  fine.panel_depth = base.panel_depth + 2;
  fine.accel_terms = base.accel_terms * 2;
  for (double t : {0.3, 3.0, 40.0, 400.0, 2400.0}) {
    double err = 0.0;
    const std::complex<double> a = correlation_value(t, spec, base, err);
    const std::complex<double> b = correlation_value(t, spec, fine);
    CHECK(std::abs(a - b) <= std::max(err, 1e-13));
  }
}

TEST_CASE("correlation series covers endpoints and crosses zero once for s = 0.1") {
  BathSpec spec = make_spec(0.1, 0.5);

  TimeSeries tiny = correlation_series(spec, 5.0, 2);
  CHECK(tiny.size() == 2);
  CHECK(tiny.time_at(0) == 0.0);
  CHECK(tiny.time_at(1) == doctest::Approx(5.0));

  TimeSeries series = correlation_series(spec, 2400.0, 601);
  int sign_changes = 0;
  double prev = series.values.front().real();
  for (std::size_t i = 1; i < series.size(); ++i) {
    const double cur = series.values[i].real();
    if (prev * cur < 0.0) ++sign_changes;
    prev = cur;
  }
  CHECK(sign_changes == 1);
  CHECK(series.values.back().real() < 0.0);
}

TEST_CASE("Ohmic imaginary series matches the closed form on a uniform grid") {
  BathSpec spec = make_spec(1.0, 0.5);
  TimeSeries series = correlation_series(spec, 50.0, 201);
  double worst = 0.0;
  for (std::size_t i = 0; i < series.size(); ++i) {
    worst = std::max(worst, std::abs(series.values[i].imag() -
                                     ohmic_imag(series.time_at(i), 0.5, 1.0)));
  }
  CHECK(worst < 1e-8);
}

TEST_CASE("hybrid sampling grid is log-dense early and reaches t_max") {
  BathSpec spec = make_spec(0.5, 0.5);
  CorrelationSamples samples = sample_correlation(spec, 100.0, 200);
  CHECK(samples.t.front() == 0.0);
  CHECK(samples.t.back() == doctest::Approx(100.0));
  // more than a third of the points resolve t < 10
  std::size_t early = 0;
  for (double t : samples.t)
    if (t < 10.0) ++early;
  CHECK(early > samples.size() / 3);
  CHECK(samples.hash() == sample_correlation(spec, 100.0, 200).hash());
}

TEST_CASE("tail exponent recovers an exact power law and rejects sign changes") {
  TimeSeries series;
  series.t0 = 1.0;
  series.dt = 0.5;
  for (int i = 0; i < 200; ++i) {
    const double t = series.time_at(i);
    series.values.emplace_back(std::pow(t, -1.1), 0.0);
  }
  CHECK(tail_exponent(series, 2.0, 80.0) == doctest::Approx(-1.1).epsilon(1e-6));

  TimeSeries flip = series;
  flip.values[40] = -flip.values[40];
  CHECK_THROWS_AS(tail_exponent(flip, 2.0, 80.0, SeriesComponent::Real), ConfigError);
}

TEST_CASE("one-minus-cos integral matches a Lorentzian closed form") {
  auto g = [](double w) { return std::exp(-w); };
  for (double t : {0.2, 1.0, 4.0, 15.0}) {
    const double expected = 1.0 - 1.0 / (1.0 + t * t);
    OscillatoryResult r = fourier_one_minus_cos_integral(g, t, 0.0);
    CHECK(r.value == doctest::Approx(expected).epsilon(1e-9));
  }
}

TEST_CASE("bath spec validation") {
  BathSpec bad = make_spec(0.0, 0.5);
  CHECK_THROWS_AS(bad.validate(), ConfigError);
  bad = make_spec(0.5, -1.0);
  CHECK_THROWS_AS(bad.validate(), ConfigError);
  bad = make_spec(0.5, 0.5);
  bad.temperature = -2.0;
  CHECK_THROWS_AS(bad.validate(), ConfigError);
  CHECK_THROWS_AS(correlation_value(-1.0, make_spec(0.5, 0.5)), ConfigError);
}

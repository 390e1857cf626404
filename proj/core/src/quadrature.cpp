#include "sbheom/quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <vector>

#include <boost/math/quadrature/gauss.hpp>
#include <boost/math/quadrature/tanh_sinh.hpp>

#include "sbheom/errors.hpp"

namespace sbheom {

namespace {

// Cohen-Villegas-Zagier acceleration of an alternating series
// sum_k (-1)^k a_k with a_k >= 0. Converges like (3+sqrt(8))^-n for
// well-behaved tails.
double cvz_alternating(const std::vector<double>& a) {
  const int n = static_cast<int>(a.size());
  double d = std::pow(3.0 + std::sqrt(8.0), n);
  d = (d + 1.0 / d) / 2.0;
  double b = -1.0;
  double c = -d;
  double s = 0.0;
  for (int k = 0; k < n; ++k) {
    c = b - c;
    s += c * a[static_cast<std::size_t>(k)];
    b = (k + n) * (k - n) * b / ((k + 0.5) * (k + 1.0));
  }
  return s / d;
}

// Geometric grid tracking the envelope's own scale of variation. Panels are
// split at these knots so a fixed-order rule stays accurate even when a
// half-period is much wider than the envelope structure.
std::vector<double> envelope_knots(double peak_hint) {
  const double anchor = std::max(peak_hint, 1.0);
  std::vector<double> knots;
  for (int j = -26; j <= 18; ++j) {
    knots.push_back(anchor * std::pow(2.0, j));
  }
  return knots;
}

double gl30(const std::function<double(double)>& f, double a, double b) {
  return boost::math::quadrature::gauss<double, 30>::integrate(f, a, b);
}

// Integrate [a, b] with splits at the envelope knots strictly inside.
double integrate_with_knots(const std::function<double(double)>& f, double a,
                            double b, const std::vector<double>& knots) {
  double sum = 0.0;
  double x = a;
  auto it = std::upper_bound(knots.begin(), knots.end(), a);
  for (; it != knots.end() && *it < b; ++it) {
    sum += gl30(f, x, *it);
    x = *it;
  }
  sum += gl30(f, x, b);
  return sum;
}

// Leading piece [0, b] may contain an algebraic singularity of the envelope
// at 0; tanh-sinh keeps double-exponential convergence there.
double integrate_singular(const std::function<double(double)>& f, double b) {
  boost::math::quadrature::tanh_sinh<double> ts;
  return ts.integrate(f, 0.0, b, 1e-12);
}

// First panel: tanh-sinh on the sub-knot piece, knot-split GL beyond.
double integrate_first_panel(const std::function<double(double)>& f, double b,
                             const std::vector<double>& knots) {
  const double cut = std::min(knots.front(), b);
  double sum = integrate_singular(f, cut);
  if (cut < b) sum += integrate_with_knots(f, cut, b, knots);
  return sum;
}

enum class Trig { Cos, Sin };

struct PassResult {
  double value = 0.0;
  double l1 = 0.0;  // sum of |panel| contributions, for the noise floor
  std::size_t panels = 0;
};

// One pass of the half-period panel scheme. `subdivide` splits every
// half-period into that many sub-panels; running two passes at different
// subdivisions yields an a-posteriori error estimate.
PassResult fourier_pass(const std::function<double(double)>& g, double t,
                        double peak_hint, Trig trig, int subdivide,
                        const QuadratureConfig& quad) {
  auto f = [&](double w) {
    return trig == Trig::Cos ? g(w) * std::cos(w * t) : g(w) * std::sin(w * t);
  };
  const std::vector<double> knots = envelope_knots(peak_hint);

  const double half = M_PI / t;
  // Panel boundaries sit on the zeros of the trigonometric factor so that
  // consecutive half-period integrals alternate in sign once g decays.
  const double first_end = trig == Trig::Cos ? 0.5 * half : half;

  PassResult out;
  double sum = integrate_first_panel(f, first_end, knots);
  out.l1 = std::abs(sum);
  out.panels = 1;

  // Direct summation until the envelope is clearly decaying, then hand the
  // alternating tail to the accelerator.
  const double accel_start = std::max(3.0 * peak_hint, 1.5 * peak_hint + half);

  std::vector<double> tail;
  tail.reserve(static_cast<std::size_t>(quad.accel_terms));
  double prev = sum;
  int alternating_run = 0;
  bool accumulating_tail = false;
  double tail_sign = 1.0;

  double a = first_end;
  for (std::size_t k = 0; k < quad.max_panels; ++k) {
    const double b = a + half;
    double u = 0.0;
    for (int j = 0; j < subdivide; ++j) {
      const double sa = a + (b - a) * j / subdivide;
      const double sb = a + (b - a) * (j + 1) / subdivide;
      u += integrate_with_knots(f, sa, sb, knots);
    }
    ++out.panels;
    out.l1 += std::abs(u);

    if (accumulating_tail) {
      if (u * prev < 0.0 && std::abs(u) <= std::abs(prev)) {
        tail.push_back(std::abs(u));
        prev = u;
        if (static_cast<int>(tail.size()) >= quad.accel_terms) {
          sum += tail_sign * cvz_alternating(tail);
          out.value = sum;
          return out;
        }
        a = b;
        continue;
      }
      // Alternation broke down; fold collected terms back and resume direct.
      double signk = tail_sign;
      for (double mag : tail) {
        sum += signk * mag;
        signk = -signk;
      }
      tail.clear();
      accumulating_tail = false;
      alternating_run = 0;
    }

    sum += u;
    const double floor =
        std::max(quad.abs_tol * 1e-3, 1e-17 * std::max(out.l1, 1e-300));
    if (std::abs(u) < floor && k > 2) {
      out.value = sum;
      return out;
    }

    if (u * prev < 0.0 && std::abs(u) <= std::abs(prev)) {
      ++alternating_run;
    } else {
      alternating_run = 0;
    }
    prev = u;
    if (a > accel_start && alternating_run >= 4) {
      accumulating_tail = true;
      tail.clear();
      tail_sign = prev > 0.0 ? -1.0 : 1.0;  // the next term alternates
    }
    a = b;
  }

  throw QuadratureError("fourier integral: panel budget exhausted before convergence",
                        std::numeric_limits<double>::infinity());
}

OscillatoryResult fourier_integral(const std::function<double(double)>& g,
                                   double t, double peak_hint, Trig trig,
                                   const QuadratureConfig& quad) {
  if (t < 0.0) {
    throw ConfigError("fourier integral: t must be non-negative");
  }

  if (t == 0.0) {
    if (trig == Trig::Sin) {
      return {};  // integrand identically zero
    }
    return semi_infinite_integral(g, std::max(peak_hint, 1.0), quad);
  }

  const PassResult coarse = fourier_pass(g, t, peak_hint, trig, 1, quad);
  QuadratureConfig fine_cfg = quad;
  fine_cfg.accel_terms = quad.accel_terms + 8;
  const PassResult fine = fourier_pass(g, t, peak_hint, trig, 2, fine_cfg);

  OscillatoryResult out;
  out.value = fine.value;
  // A-posteriori estimate: resolution-doubling difference plus the
  // cancellation noise floor of the panel summation.
  out.error_estimate =
      std::abs(fine.value - coarse.value) + 4.0 * 1e-16 * fine.l1;
  out.panels = coarse.panels + fine.panels;
  return out;
}

}  // namespace

OscillatoryResult fourier_cos_integral(const std::function<double(double)>& g,
                                       double t, double peak_hint,
                                       const QuadratureConfig& quad) {
  return fourier_integral(g, t, peak_hint, Trig::Cos, quad);
}

OscillatoryResult fourier_sin_integral(const std::function<double(double)>& g,
                                       double t, double peak_hint,
                                       const QuadratureConfig& quad) {
  return fourier_integral(g, t, peak_hint, Trig::Sin, quad);
}

OscillatoryResult semi_infinite_integral(const std::function<double(double)>& g,
                                         double split,
                                         const QuadratureConfig& quad) {
  (void)quad;
  boost::math::quadrature::tanh_sinh<double> ts;

  auto run = [&](double cut) {
    double head = ts.integrate(g, 0.0, cut, 1e-12);
    // Map [cut, inf) to (0, 1] via w = cut/u; du weight cut/u^2. The
    // envelope decays at least algebraically, so the u -> 0 endpoint is
    // clamped before the overflow regime.
    auto mapped = [&](double u) {
      if (u < 1e-12) return 0.0;
      const double w = cut / u;
      return g(w) * cut / (u * u);
    };
    return head + ts.integrate(mapped, 0.0, 1.0, 1e-12);
  };

  OscillatoryResult out;
  const double v1 = run(split);
  const double v2 = run(2.0 * split);
  out.value = v2;
  out.error_estimate = std::abs(v2 - v1) + 1e-15 * std::abs(v2);
  out.panels = 4;
  return out;
}

OscillatoryResult fourier_one_minus_cos_integral(
    const std::function<double(double)>& g, double t, double peak_hint,
    const QuadratureConfig& quad) {
  OscillatoryResult out;
  if (t < 0.0) {
    throw ConfigError("fourier integral: t must be non-negative");
  }
  if (t == 0.0) {
    return out;
  }
  // Head: integrate g(w)(1-cos(wt)) directly; the factor vanishes like w^2
  // at the origin, which regularizes envelopes as singular as w^-2.
  const double split = std::max({1.0, peak_hint, 4.0 * M_PI / t});
  auto head_f = [&](double w) {
    const double s = std::sin(0.5 * w * t);  // 1-cos, stable for small phases
    return g(w) * 2.0 * s * s;
  };
  const std::vector<double> knots = envelope_knots(peak_hint);
  const double half = M_PI / t;
  double a = 0.0;
  bool first = true;
  while (a < split) {
    const double b = std::min(a + half, split);
    if (first) {
      out.value += integrate_first_panel(head_f, b, knots);
      first = false;
    } else {
      out.value += integrate_with_knots(head_f, a, b, knots);
    }
    ++out.panels;
    a = b;
  }
  out.error_estimate = 1e-14 * std::abs(out.value);
  // Tail: plain integral minus oscillatory part, both convergent away from
  // the origin; cos((u+split)t) re-expanded by angle addition.
  auto shifted = [&](double u) { return g(u + split); };
  OscillatoryResult plain = semi_infinite_integral(shifted, 1.0, quad);
  const double cs = std::cos(split * t);
  const double sn = std::sin(split * t);
  OscillatoryResult oc = fourier_cos_integral(shifted, t, 0.0, quad);
  OscillatoryResult os = fourier_sin_integral(shifted, t, 0.0, quad);
  out.value += plain.value - (cs * oc.value - sn * os.value);
  out.error_estimate += plain.error_estimate + oc.error_estimate + os.error_estimate;
  out.panels += plain.panels + oc.panels + os.panels;
  return out;
}

}  // namespace sbheom

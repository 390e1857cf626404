#include "sbheom/fit.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <limits>
#include <random>
#include <thread>

#include "sbheom/errors.hpp"

namespace sbheom {

double CorrelationFit::evaluate_real(double t) const {
  double v = 0.0;
  for (std::size_t j = 0; j < basis_real.size(); ++j) {
    v += coeff_real(static_cast<Eigen::Index>(j)) * basis_real[j].value(t);
  }
  return v;
}

double CorrelationFit::evaluate_imag(double t) const {
  double v = 0.0;
  for (std::size_t j = 0; j < basis_imag.size(); ++j) {
    v += coeff_imag(static_cast<Eigen::Index>(j)) * basis_imag[j].value(t);
  }
  return v;
}

std::complex<double> CorrelationFit::evaluate(double t) const {
  return {evaluate_real(t), evaluate_imag(t)};
}

int ComponentTemplate::basis_size() const {
  int n = 0;
  for (const TemplateEntry& e : entries) {
    n += e.type == TemplateEntry::Type::Decay ? 1 : 2;
  }
  return n;
}

ComponentTemplate ComponentTemplate::decays(int n) {
  ComponentTemplate t;
  t.entries.assign(static_cast<std::size_t>(n), {TemplateEntry::Type::Decay});
  return t;
}

ComponentTemplate ComponentTemplate::osc_plus_decays(int n_pairs, int n_decays) {
  ComponentTemplate t;
  for (int i = 0; i < n_pairs; ++i) t.entries.push_back({TemplateEntry::Type::OscPair});
  for (int i = 0; i < n_decays; ++i) t.entries.push_back({TemplateEntry::Type::Decay});
  return t;
}

ComponentTemplate ComponentTemplate::linear_plus_decays(int n_pairs, int n_decays) {
  ComponentTemplate t;
  for (int i = 0; i < n_pairs; ++i) t.entries.push_back({TemplateEntry::Type::LinearPair});
  for (int i = 0; i < n_decays; ++i) t.entries.push_back({TemplateEntry::Type::Decay});
  return t;
}

namespace {

// Bounds on log-rates keep LM steps from drifting into degenerate regimes.
constexpr double kLogLo = -18.0;
constexpr double kLogHi = 10.0;

struct EntrySlot {
  TemplateEntry::Type type;
  int param_offset;  // into theta
  int basis_offset;  // into the expanded basis list
};

struct Layout {
  std::vector<EntrySlot> slots;
  int n_params = 0;
  int n_basis = 0;
};

Layout make_layout(const ComponentTemplate& tmpl) {
  Layout l;
  for (const TemplateEntry& e : tmpl.entries) {
    EntrySlot s{e.type, l.n_params, l.n_basis};
    switch (e.type) {
      case TemplateEntry::Type::Decay:
        l.n_params += 1;
        l.n_basis += 1;
        break;
      case TemplateEntry::Type::OscPair:
        l.n_params += 2;  // log freq, log rate
        l.n_basis += 2;
        break;
      case TemplateEntry::Type::LinearPair:
        l.n_params += 1;  // shared log rate
        l.n_basis += 2;
        break;
    }
    l.slots.push_back(s);
  }
  return l;
}

std::vector<BasisFunction> expand_basis(const Layout& layout,
                                        const Eigen::VectorXd& theta) {
  std::vector<BasisFunction> basis(static_cast<std::size_t>(layout.n_basis));
  for (const EntrySlot& s : layout.slots) {
    switch (s.type) {
      case TemplateEntry::Type::Decay: {
        const double rate = std::exp(theta(s.param_offset));
        basis[static_cast<std::size_t>(s.basis_offset)] = {BasisKind::Decay, rate, 0.0};
        break;
      }
      case TemplateEntry::Type::OscPair: {
        const double freq = std::exp(theta(s.param_offset));
        const double rate = std::exp(theta(s.param_offset + 1));
        basis[static_cast<std::size_t>(s.basis_offset)] = {BasisKind::CosDecay, rate, freq};
        basis[static_cast<std::size_t>(s.basis_offset) + 1] = {BasisKind::SinDecay, rate, freq};
        break;
      }
      case TemplateEntry::Type::LinearPair: {
        const double rate = std::exp(theta(s.param_offset));
        basis[static_cast<std::size_t>(s.basis_offset)] = {BasisKind::LinearDecay, rate, 0.0};
        basis[static_cast<std::size_t>(s.basis_offset) + 1] = {BasisKind::Decay, rate, 0.0};
        break;
      }
    }
  }
  return basis;
}

struct ComponentProblem {
  std::vector<double> t;
  std::vector<double> y;
  std::vector<double> w;
  Layout layout;
};

struct VarproState {
  Eigen::VectorXd theta;
  Eigen::VectorXd coeff;
  double chi2 = std::numeric_limits<double>::infinity();
};

// Fill the weighted design matrix Phi(i,j) = w_i phi_j(t_i).
void design_matrix(const ComponentProblem& p, const std::vector<BasisFunction>& basis,
                   Eigen::MatrixXd& phi) {
  const auto m = static_cast<Eigen::Index>(p.t.size());
  const auto n = static_cast<Eigen::Index>(basis.size());
  phi.resize(m, n);
  for (Eigen::Index j = 0; j < n; ++j) {
    const BasisFunction& b = basis[static_cast<std::size_t>(j)];
    for (Eigen::Index i = 0; i < m; ++i) {
      phi(i, j) = p.w[static_cast<std::size_t>(i)] * b.value(p.t[static_cast<std::size_t>(i)]);
    }
  }
}

// d phi_j / d theta_q restricted to the entry owning theta_q; log-rate
// parameterization keeps all rates positive.
void entry_derivative(const EntrySlot& s, const std::vector<BasisFunction>& basis,
                      int param, double t, double* dvals /* size 2 */) {
  const BasisFunction& b0 = basis[static_cast<std::size_t>(s.basis_offset)];
  switch (s.type) {
    case TemplateEntry::Type::Decay: {
      dvals[0] = -b0.rate * t * std::exp(-b0.rate * t);
      return;
    }
    case TemplateEntry::Type::OscPair: {
      const double e = std::exp(-b0.rate * t);
      const double c = std::cos(b0.freq * t);
      const double sn = std::sin(b0.freq * t);
      if (param == s.param_offset) {  // d / d log freq
        dvals[0] = -b0.freq * t * sn * e;
        dvals[1] = b0.freq * t * c * e;
      } else {  // d / d log rate
        dvals[0] = -b0.rate * t * c * e;
        dvals[1] = -b0.rate * t * sn * e;
      }
      return;
    }
    case TemplateEntry::Type::LinearPair: {
      const double e = std::exp(-b0.rate * t);
      dvals[0] = -b0.rate * t * t * e;  // t exp(-G t)
      dvals[1] = -b0.rate * t * e;      // exp(-G t)
      return;
    }
  }
}

// Solve the linear subproblem and residual for fixed nonlinear parameters.
// Returns false when the design matrix is unusable.
bool linear_solve(const ComponentProblem& p, const Eigen::VectorXd& theta,
                  Eigen::MatrixXd& phi, Eigen::VectorXd& coeff,
                  Eigen::VectorXd& resid, double& chi2) {
  const std::vector<BasisFunction> basis = expand_basis(p.layout, theta);
  design_matrix(p, basis, phi);
  if (!phi.allFinite()) return false;

  Eigen::VectorXd rhs(static_cast<Eigen::Index>(p.y.size()));
  for (std::size_t i = 0; i < p.y.size(); ++i) {
    rhs(static_cast<Eigen::Index>(i)) = p.w[i] * p.y[i];
  }
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(phi, Eigen::ComputeThinU | Eigen::ComputeThinV);
  svd.setThreshold(1e-12);
  coeff = svd.solve(rhs);
  resid = phi * coeff - rhs;
  chi2 = resid.squaredNorm();
  return std::isfinite(chi2);
}

// Levenberg-Marquardt on the projected (variable-projection) residual with
// the Kaufman approximation of the Jacobian.
VarproState solve_varpro(const ComponentProblem& p, Eigen::VectorXd theta,
                         int max_iter) {
  VarproState st;
  Eigen::MatrixXd phi;
  Eigen::VectorXd coeff, resid;
  double chi2 = 0.0;
  if (!linear_solve(p, theta, phi, coeff, resid, chi2)) {
    return st;  // infinite chi2
  }

  const auto m = static_cast<Eigen::Index>(p.t.size());
  const Eigen::Index nq = theta.size();
  double lambda = 1e-3;

  for (int iter = 0; iter < max_iter; ++iter) {
    const std::vector<BasisFunction> basis = expand_basis(p.layout, theta);

    // Kaufman Jacobian: J_q = P_perp (dPhi/dtheta_q) a.
    Eigen::MatrixXd jac(m, nq);
    for (const EntrySlot& s : p.layout.slots) {
      const int np = s.type == TemplateEntry::Type::OscPair ? 2 : 1;
      const int nb = s.type == TemplateEntry::Type::Decay ? 1 : 2;
      for (int q = s.param_offset; q < s.param_offset + np; ++q) {
        for (Eigen::Index i = 0; i < m; ++i) {
          double d[2] = {0.0, 0.0};
          entry_derivative(s, basis, q, p.t[static_cast<std::size_t>(i)], d);
          double v = 0.0;
          for (int b = 0; b < nb; ++b) {
            v += coeff(s.basis_offset + b) * d[b];
          }
          jac(i, q) = p.w[static_cast<std::size_t>(i)] * v;
        }
      }
    }
    // Project out the span of Phi using its thin QR factor.
    Eigen::HouseholderQR<Eigen::MatrixXd> qr(phi);
    Eigen::MatrixXd qtj =
        qr.householderQ().transpose() * jac;  // (m x nq), top rows = Q1^T J
    const Eigen::Index nb_tot = phi.cols();
    Eigen::MatrixXd jproj = jac;
    jproj.noalias() -= qr.householderQ() *
                       (Eigen::MatrixXd(m, nq) << qtj.topRows(nb_tot),
                        Eigen::MatrixXd::Zero(m - nb_tot, nq))
                           .finished();

    const Eigen::VectorXd grad = jproj.transpose() * resid;
    if (grad.lpNorm<Eigen::Infinity>() < 1e-14 * (1.0 + chi2)) break;

    const Eigen::MatrixXd jtj = jproj.transpose() * jproj;
    bool stepped = false;
    for (int attempt = 0; attempt < 12; ++attempt) {
      Eigen::MatrixXd a = jtj;
      a.diagonal() += lambda * jtj.diagonal().cwiseMax(1e-12);
      const Eigen::VectorXd delta = a.ldlt().solve(-grad);
      Eigen::VectorXd trial = theta + delta;
      bool in_bounds = true;
      for (Eigen::Index q = 0; q < nq; ++q) {
        if (trial(q) < kLogLo || trial(q) > kLogHi) in_bounds = false;
      }
      double trial_chi2 = 0.0;
      Eigen::MatrixXd phi_t;
      Eigen::VectorXd coeff_t, resid_t;
      if (in_bounds &&
          linear_solve(p, trial, phi_t, coeff_t, resid_t, trial_chi2) &&
          trial_chi2 < chi2) {
        theta = std::move(trial);
        phi = std::move(phi_t);
        coeff = std::move(coeff_t);
        resid = std::move(resid_t);
        const double gain = chi2 - trial_chi2;
        chi2 = trial_chi2;
        lambda = std::max(lambda / 3.0, 1e-12);
        stepped = true;
        if (gain < 1e-15 * (chi2 + 1e-30) ||
            delta.lpNorm<Eigen::Infinity>() < 1e-13) {
          iter = max_iter;  // converged
        }
        break;
      }
      lambda *= 4.0;
    }
    if (!stepped) break;
  }

  st.theta = theta;
  st.coeff = coeff;
  st.chi2 = chi2;
  return st;
}

// First sign change of y (skipping the t = 0 sample); falls back to the
// first |y| maximum. Seeds the oscillatory frequency guess.
double feature_time(const std::vector<double>& t, const std::vector<double>& y) {
  std::size_t first = 0;
  while (first < y.size() && y[first] == 0.0) ++first;
  for (std::size_t i = first + 1; i < y.size(); ++i) {
    if (y[i] * y[first] < 0.0) return t[i];
  }
  std::size_t arg = first;
  for (std::size_t i = first + 1; i < y.size(); ++i) {
    if (std::abs(y[i]) > std::abs(y[arg])) arg = i;
  }
  return std::max(t[arg], t.size() > 1 ? t[1] : 1e-3);
}

Eigen::VectorXd initial_theta(const ComponentProblem& p, double t_max,
                              double omega_c, std::uint64_t seed, int start) {
  const Layout& layout = p.layout;
  Eigen::VectorXd theta(layout.n_params);

  // Decay rates log-spaced between the slowest resolvable scale 2*pi/t_max
  // and 10 * omega_c; oscillatory frequency seeded from the first zero
  // crossing of the target.
  int n_decay = 0;
  for (const EntrySlot& s : layout.slots) {
    if (s.type == TemplateEntry::Type::Decay) ++n_decay;
  }
  const double lo = std::log(2.0 * M_PI / t_max);
  const double hi = std::log(10.0 * omega_c);
  const double t_feat = feature_time(p.t, p.y);
  const double freq0 = M_PI / (2.0 * t_feat);

  int decay_idx = 0;
  for (const EntrySlot& s : layout.slots) {
    switch (s.type) {
      case TemplateEntry::Type::Decay: {
        const double frac =
            n_decay == 1 ? 0.5
                         : static_cast<double>(decay_idx) / (n_decay - 1);
        theta(s.param_offset) = hi + frac * (lo - hi);
        ++decay_idx;
        break;
      }
      case TemplateEntry::Type::OscPair:
        theta(s.param_offset) = std::log(std::max(freq0, 1e-6));
        theta(s.param_offset + 1) = std::log(omega_c);
        break;
      case TemplateEntry::Type::LinearPair:
        theta(s.param_offset) = std::log(omega_c);
        break;
    }
  }

  if (start > 0) {
    std::mt19937_64 rng(seed ^ (0x9e3779b97f4a7c15ull * static_cast<std::uint64_t>(start)));
    std::normal_distribution<double> jitter(0.0, 0.6);
    for (Eigen::Index q = 0; q < theta.size(); ++q) {
      theta(q) = std::clamp(theta(q) + jitter(rng), kLogLo + 1.0, kLogHi - 1.0);
    }
  }
  return theta;
}

ComponentProblem make_problem(const std::vector<double>& t,
                              const std::vector<double>& y,
                              const ComponentTemplate& tmpl,
                              const FitConfig& config, double omega_c) {
  ComponentProblem p;
  p.t = t;
  p.y = y;
  p.layout = make_layout(tmpl);
  p.w.resize(y.size(), 1.0);
  if (config.weighting == FitWeighting::Relative) {
    const double floor = config.relative_floor * omega_c * omega_c;
    for (std::size_t i = 0; i < y.size(); ++i) {
      p.w[i] = 1.0 / (floor + std::abs(y[i]));
    }
  }
  return p;
}

VarproState fit_component(const ComponentProblem& p, double t_max,
                          double omega_c, const FitConfig& config) {
  const int n_starts = std::max(config.multistart, 1);
  std::vector<VarproState> results(static_cast<std::size_t>(n_starts));

  // Multistart runs are independent; selection below is a deterministic
  // reduction regardless of scheduling.
  const unsigned hw = std::max(1u, std::thread::hardware_concurrency());
  const int n_workers = static_cast<int>(std::min<unsigned>(hw, 4));
  std::vector<std::thread> workers;
  std::atomic<int> next{0};
  auto body = [&]() {
    for (int s = next.fetch_add(1); s < n_starts; s = next.fetch_add(1)) {
      const Eigen::VectorXd theta0 = initial_theta(p, t_max, omega_c, config.seed, s);
      results[static_cast<std::size_t>(s)] =
          solve_varpro(p, theta0, config.max_iterations);
    }
  };
  for (int i = 1; i < n_workers; ++i) workers.emplace_back(body);
  body();
  for (auto& th : workers) th.join();

  int best = 0;
  for (int s = 1; s < n_starts; ++s) {
    if (results[static_cast<std::size_t>(s)].chi2 <
        results[static_cast<std::size_t>(best)].chi2) {
      best = s;  // ties keep the lowest start index
    }
  }
  return results[static_cast<std::size_t>(best)];
}

}  // namespace

ResidualReport fit_error_report(const CorrelationFit& fit,
                                const CorrelationSamples& target) {
  if (target.size() == 0) throw ConfigError("fit_error_report: empty target");
  ResidualReport rep;
  rep.error_real.resize(target.size());
  rep.error_imag.resize(target.size());
  const double scale = fit.omega_c * fit.omega_c;
  double ssr = 0.0, ssi = 0.0;
  for (std::size_t i = 0; i < target.size(); ++i) {
    const double dr = fit.evaluate_real(target.t[i]) - target.real_part[i];
    const double di = fit.evaluate_imag(target.t[i]) - target.imag_part[i];
    rep.error_real[i] = dr;
    rep.error_imag[i] = di;
    rep.max_real = std::max(rep.max_real, std::abs(dr) / scale);
    rep.max_imag = std::max(rep.max_imag, std::abs(di) / scale);
    ssr += dr * dr;
    ssi += di * di;
  }
  const double n = static_cast<double>(target.size());
  rep.rms_real = std::sqrt(ssr / n) / scale;
  rep.rms_imag = std::sqrt(ssi / n) / scale;
  return rep;
}

CorrelationFit fit_correlation(const CorrelationSamples& target,
                               const FitConfig& config) {
  if (target.size() < 4) {
    throw ConfigError("fit_correlation: target must hold at least 4 samples");
  }
  for (std::size_t i = 0; i < target.size(); ++i) {
    if (!std::isfinite(target.t[i]) || !std::isfinite(target.real_part[i]) ||
        !std::isfinite(target.imag_part[i])) {
      throw ConfigError("fit_correlation: non-finite sample in target");
    }
  }
  if (config.real_template.entries.empty() || config.imag_template.entries.empty()) {
    throw ConfigError("fit_correlation: each component needs at least one basis function");
  }

  const double omega_c = target.spec.omega_c;
  const double t_max = target.t.back();

  ComponentProblem pr =
      make_problem(target.t, target.real_part, config.real_template, config, omega_c);
  ComponentProblem pi =
      make_problem(target.t, target.imag_part, config.imag_template, config, omega_c);

  const VarproState sr = fit_component(pr, t_max, omega_c, config);
  const VarproState si = fit_component(pi, t_max, omega_c, config);
  if (!std::isfinite(sr.chi2) || !std::isfinite(si.chi2)) {
    throw ConfigError("fit_correlation: optimizer failed to produce a finite fit");
  }

  CorrelationFit fit;
  fit.bath = target.spec;
  fit.omega_c = omega_c;
  fit.t_max = t_max;
  fit.basis_real = expand_basis(pr.layout, sr.theta);
  fit.basis_imag = expand_basis(pi.layout, si.theta);
  fit.coeff_real = sr.coeff;
  fit.coeff_imag = si.coeff;
  fit.eta_real = build_closure(fit.basis_real);
  fit.eta_imag = build_closure(fit.basis_imag);
  fit.target_hash = target.hash();
  fit.seed = config.seed;
  fit.multistart = config.multistart;
  fit.residual = fit_error_report(fit, target);
  fit.residual.tolerance_met = std::max(fit.residual.max_real, fit.residual.max_imag) <
                               config.tolerance;
  return fit;
}

CorrelationFit null_fit(const BathSpec& spec) {
  CorrelationFit fit;
  fit.bath = spec;
  fit.omega_c = spec.omega_c;
  fit.t_max = std::numeric_limits<double>::infinity();
  fit.basis_real = {{BasisKind::Decay, spec.omega_c, 0.0}};
  fit.basis_imag = {{BasisKind::Decay, spec.omega_c, 0.0}};
  fit.coeff_real = Eigen::VectorXd::Zero(1);
  fit.coeff_imag = Eigen::VectorXd::Zero(1);
  fit.eta_real = build_closure(fit.basis_real);
  fit.eta_imag = build_closure(fit.basis_imag);
  return fit;
}

}  // namespace sbheom

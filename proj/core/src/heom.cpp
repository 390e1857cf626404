#include "sbheom/heom.hpp"

#include <cmath>
#include <iostream>
#include <random>

#include "sbheom/errors.hpp"

namespace sbheom {

namespace {

using Block = Eigen::Matrix2cd;
constexpr std::complex<double> kNegI{0.0, -1.0};

// [sigma_x, b]
inline Block commutator_x(const Block& b) {
  Block r;
  r(0, 0) = b(1, 0) - b(0, 1);
  r(0, 1) = b(1, 1) - b(0, 0);
  r(1, 0) = b(0, 0) - b(1, 1);
  r(1, 1) = b(0, 1) - b(1, 0);
  return r;
}

// [sigma_z, b]; diagonal is exactly zero by construction.
inline Block commutator_z(const Block& b) {
  Block r;
  r(0, 0) = 0.0;
  r(0, 1) = 2.0 * b(0, 1);
  r(1, 0) = -2.0 * b(1, 0);
  r(1, 1) = 0.0;
  return r;
}

// {sigma_z, b}
inline Block anticommutator_z(const Block& b) {
  Block r;
  r(0, 0) = 2.0 * b(0, 0);
  r(0, 1) = 0.0;
  r(1, 0) = 0.0;
  r(1, 1) = -2.0 * b(1, 1);
  return r;
}

}  // namespace

void SystemSpec::validate() const {
  if (!(delta >= 0.0) || !std::isfinite(delta)) {
    throw ConfigError("system: delta must be finite and >= 0");
  }
  if (!std::isfinite(mu_e)) throw ConfigError("system: mu_e must be finite");
}

AdoState::AdoState(std::shared_ptr<const HierarchySpace> space, StateRole role)
    : space_(std::move(space)), role_(role) {
  blocks_.assign(space_->size(), Block::Zero());
}

AdoState AdoState::density(std::shared_ptr<const HierarchySpace> space,
                           const Eigen::Matrix2cd& rho0) {
  AdoState st(std::move(space), StateRole::Density);
  st.blocks_[0] = rho0;
  return st;
}

void AdoState::set_zero() {
  for (auto& b : blocks_) b.setZero();
}

bool AdoState::all_finite() const noexcept {
  for (const auto& b : blocks_) {
    if (!b.allFinite()) return false;
  }
  return true;
}

double AdoState::max_abs() const noexcept {
  double m = 0.0;
  for (const auto& b : blocks_) {
    m = std::max(m, b.cwiseAbs().maxCoeff());
  }
  return m;
}

void AdoState::axpy(double a, const AdoState& x) {
  if (x.blocks_.size() != blocks_.size()) {
    throw ConfigError("ado state: axpy over mismatched spaces");
  }
  const auto n = static_cast<std::ptrdiff_t>(blocks_.size());
#pragma omp parallel for schedule(static)
  for (std::ptrdiff_t i = 0; i < n; ++i) {
    blocks_[static_cast<std::size_t>(i)] += a * x.blocks_[static_cast<std::size_t>(i)];
  }
}

AdoState commute_z(const AdoState& state) {
  AdoState out(state.space_ptr(), StateRole::Quasi);
  for (std::size_t i = 0; i < state.size(); ++i) {
    out.block(i) = commutator_z(state.block(i));
  }
  return out;
}

Eigen::Matrix2cd project_rdm(const AdoState& state) { return state.block(0); }

HeomGenerator::HeomGenerator(std::shared_ptr<const HierarchySpace> space,
                             const CorrelationFit& fit, const SystemSpec& sys)
    : space_(std::move(space)), sys_(sys) {
  sys_.validate();
  n_real_ = fit.n_real();
  n_imag_ = fit.n_imag();
  if (space_->n_real() != n_real_ || space_->n_imag() != n_imag_) {
    throw ConfigError("heom: hierarchy space does not match the fit's basis sizes");
  }

  const int slots = n_real_ + n_imag_;
  coeff_.resize(static_cast<std::size_t>(slots));
  phi0_.resize(static_cast<std::size_t>(slots));
  eta_rows_.resize(static_cast<std::size_t>(slots));
  for (int n = 0; n < n_real_; ++n) {
    coeff_[static_cast<std::size_t>(n)] = fit.coeff_real(n);
    phi0_[static_cast<std::size_t>(n)] = fit.basis_real[static_cast<std::size_t>(n)].value_at_zero();
    for (int m = 0; m < n_real_; ++m) {
      const double eta = fit.eta_real(n, m);
      if (eta != 0.0) eta_rows_[static_cast<std::size_t>(n)].emplace_back(m, eta);
    }
  }
  for (int n = 0; n < n_imag_; ++n) {
    const int slot = n_real_ + n;
    coeff_[static_cast<std::size_t>(slot)] = fit.coeff_imag(n);
    phi0_[static_cast<std::size_t>(slot)] =
        fit.basis_imag[static_cast<std::size_t>(n)].value_at_zero();
    for (int m = 0; m < n_imag_; ++m) {
      const double eta = fit.eta_imag(n, m);
      if (eta != 0.0) {
        eta_rows_[static_cast<std::size_t>(slot)].emplace_back(n_real_ + m, eta);
      }
    }
  }
}

void HeomGenerator::apply(const AdoState& in, AdoState& out) const {
  if (&in.space() != space_.get() || &out.space() != space_.get()) {
    throw ConfigError("heom: state space does not match the generator");
  }
  const auto n_ados = static_cast<std::ptrdiff_t>(space_->size());
  const int slots = n_real_ + n_imag_;
  const double delta = sys_.delta;

#pragma omp parallel for schedule(static)
  for (std::ptrdiff_t ip = 0; ip < n_ados; ++ip) {
    const auto i = static_cast<std::size_t>(ip);
    Block acc = Block::Zero();

    // (i) system term -i [H_S, .]
    if (delta != 0.0) {
      acc += (kNegI * delta) * commutator_x(in.block(i));
    }

    for (int n = 0; n < slots; ++n) {
      const int occ = space_->occupation(i, n);
      if (occ == 0) continue;
      const double occ_d = static_cast<double>(occ);

      // (ii) same-order closure mixing
      for (const auto& [m, eta] : eta_rows_[static_cast<std::size_t>(n)]) {
        const std::size_t j = (m == n) ? i : space_->shift(i, n, m);
        acc += (occ_d * eta) * in.block(j);
      }

      // (iii) down-couplings weighted by phi_X(0)
      const double w = phi0_[static_cast<std::size_t>(n)];
      if (w != 0.0) {
        const std::size_t j = space_->lower(i, n);
        if (n < n_real_) {
          acc += (kNegI * (occ_d * w)) * commutator_z(in.block(j));
        } else {
          acc += (occ_d * w) * anticommutator_z(in.block(j));
        }
      }
    }

    // (iv) up-couplings weighted by the linear coefficients
    for (int m = 0; m < slots; ++m) {
      const double a = coeff_[static_cast<std::size_t>(m)];
      if (a == 0.0) continue;
      const std::size_t j = space_->raise(i, m);
      if (j == HierarchySpace::npos) continue;  // truncation: drop above H
      acc += (kNegI * a) * commutator_z(in.block(j));
    }

    out.block(i) = acc;
  }
  out.set_role(in.role());
}

double HeomGenerator::spectral_radius_estimate(int iterations) const {
  AdoState x(space_, StateRole::Density);
  std::mt19937_64 rng(0x5bd1e995u);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  for (std::size_t i = 0; i < x.size(); ++i) {
    x.block(i) << std::complex<double>(u(rng), u(rng)),
        std::complex<double>(u(rng), u(rng)), std::complex<double>(u(rng), u(rng)),
        std::complex<double>(u(rng), u(rng));
  }
  AdoState y(space_, StateRole::Density);
  double radius = 0.0;
  for (int it = 0; it < iterations; ++it) {
    apply(x, y);
    const double norm = y.max_abs();
    if (norm == 0.0 || !std::isfinite(norm)) break;
    radius = norm / std::max(x.max_abs(), 1e-300);
    std::swap(x, y);
    // renormalize to avoid overflow
    const double scale = 1.0 / std::max(x.max_abs(), 1e-300);
    for (std::size_t i = 0; i < x.size(); ++i) x.block(i) *= scale;
  }
  return radius;
}

Observer observe_m() {
  return {"m", [](const AdoState& st) {
            const Block& b = st.block(0);
            return b(0, 0) - b(1, 1);
          }};
}

Observer observe_sx() {
  return {"sx", [](const AdoState& st) {
            const Block& b = st.block(0);
            return b(0, 1) + b(1, 0);
          }};
}

Observer observe_chi() {
  return {"chi", [](const AdoState& st) {
            const Block& b = st.block(0);
            return std::complex<double>(0.0, 1.0) * (b(0, 0) - b(1, 1));
          }};
}

Observer observe_trace() {
  return {"trace", [](const AdoState& st) {
            const Block& b = st.block(0);
            return b(0, 0) + b(1, 1);
          }};
}

Observer observe_coherence() {
  return {"coherence", [](const AdoState& st) { return st.block(0)(0, 1); }};
}

TimeSeries Trajectory::series(const std::string& name) const {
  for (std::size_t i = 0; i < names.size(); ++i) {
    if (names[i] == name) {
      TimeSeries s;
      s.t0 = t0;
      s.dt = dt;
      s.values = records[i];
      return s;
    }
  }
  throw ConfigError("trajectory: no observer named '" + name + "'");
}

Trajectory propagate(AdoState& state, const HeomGenerator& gen,
                     const PropagationSpan& span, std::span<const Observer> observers,
                     bool stability_check) {
  if (!(span.dt > 0.0)) throw ConfigError("propagate: dt must be > 0");
  if (span.record_stride < 1) throw ConfigError("propagate: stride must be >= 1");
  if (&state.space() != &gen.space()) {
    throw ConfigError("propagate: state space does not match the generator");
  }

  const auto n_records =
      static_cast<std::size_t>(std::llround(span.t_end / (span.dt * span.record_stride)));
  const std::size_t n_steps = n_records * static_cast<std::size_t>(span.record_stride);

  if (stability_check) {
    const double radius = gen.spectral_radius_estimate();
    if (radius * span.dt > 2.5) {
      std::cerr << "[sbheom] warning: dt * spectral radius estimate = "
                << radius * span.dt << " exceeds the RK4 stability margin\n";
    }
  }

  Trajectory traj;
  traj.t0 = 0.0;
  traj.dt = span.dt * span.record_stride;
  traj.records.resize(observers.size());
  for (const Observer& o : observers) traj.names.push_back(o.name);

  auto record = [&](const AdoState& st) {
    for (std::size_t o = 0; o < observers.size(); ++o) {
      traj.records[o].push_back(observers[o].eval(st));
    }
  };
  record(state);

  AdoState k1(state.space_ptr(), state.role());
  AdoState k2 = k1, k3 = k1, k4 = k1, tmp = k1;
  const double dt = span.dt;

  for (std::size_t step = 0; step < n_steps; ++step) {
    gen.apply(state, k1);
    tmp = state;
    tmp.axpy(0.5 * dt, k1);
    gen.apply(tmp, k2);
    tmp = state;
    tmp.axpy(0.5 * dt, k2);
    gen.apply(tmp, k3);
    tmp = state;
    tmp.axpy(dt, k3);
    gen.apply(tmp, k4);

    state.axpy(dt / 6.0, k1);
    state.axpy(dt / 3.0, k2);
    state.axpy(dt / 3.0, k3);
    state.axpy(dt / 6.0, k4);

    if ((step + 1) % static_cast<std::size_t>(span.record_stride) == 0) {
      const double t_now = dt * static_cast<double>(step + 1);
      if (!state.all_finite() || state.max_abs() > 1e100) {
        throw DivergenceError("propagate: state diverged at t = " + std::to_string(t_now),
                              t_now);
      }
      record(state);
    }
  }
  return traj;
}

Trajectory propagate(AdoState& state, const CorrelationFit& fit, const SystemSpec& sys,
                     const PropagationSpan& span, std::span<const Observer> observers,
                     bool stability_check) {
  HeomGenerator gen(state.space_ptr(), fit, sys);
  return propagate(state, gen, span, observers, stability_check);
}

}  // namespace sbheom

// heom.hpp — ADO states, the hierarchy generator, and time propagation

#pragma once

#include <complex>
#include <functional>
#include <memory>
#include <span>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "sbheom/fit.hpp"
#include "sbheom/hierarchy.hpp"
#include "sbheom/series.hpp"

namespace sbheom {

struct SystemSpec {
  double delta = 1.0;  // tunneling amplitude; H_S = delta * sigma_x
  double mu_e = 1.0;   // dipole scale

  void validate() const;  // delta >= 0 (0 = pure dephasing), mu_e finite
};

enum class StateRole {
  Density,  // zeroth block is the reduced density matrix
  Quasi,    // commutator-seeded response state
};

// One 2x2 complex block per ADO over an enumerated hierarchy space.
class AdoState {
 public:
  AdoState(std::shared_ptr<const HierarchySpace> space, StateRole role);

  // Density state from a system density matrix: zeroth block rho0, higher
  // orders zero.
  static AdoState density(std::shared_ptr<const HierarchySpace> space,
                          const Eigen::Matrix2cd& rho0);

  const HierarchySpace& space() const noexcept { return *space_; }
  std::shared_ptr<const HierarchySpace> space_ptr() const noexcept { return space_; }
  StateRole role() const noexcept { return role_; }
  void set_role(StateRole role) noexcept { role_ = role; }

  Eigen::Matrix2cd& block(std::size_t i) { return blocks_[i]; }
  const Eigen::Matrix2cd& block(std::size_t i) const { return blocks_[i]; }
  std::size_t size() const noexcept { return blocks_.size(); }

  void set_zero();
  bool all_finite() const noexcept;
  double max_abs() const noexcept;

  // y += a * x (blocks elementwise); spaces must match.
  void axpy(double a, const AdoState& x);

 private:
  std::shared_ptr<const HierarchySpace> space_;
  std::vector<Eigen::Matrix2cd> blocks_;
  StateRole role_;
};

// [sigma_z, b] on every block; role flips Density -> Quasi.
AdoState commute_z(const AdoState& state);

// The zeroth ADO block (projection onto the system subspace).
Eigen::Matrix2cd project_rdm(const AdoState& state);

// Hierarchy generator in occupation form: d sigma / dt = apply(sigma).
class HeomGenerator {
 public:
  HeomGenerator(std::shared_ptr<const HierarchySpace> space,
                const CorrelationFit& fit, const SystemSpec& sys);

  const HierarchySpace& space() const noexcept { return *space_; }
  std::shared_ptr<const HierarchySpace> space_ptr() const noexcept { return space_; }
  const SystemSpec& system() const noexcept { return sys_; }

  // out = time derivative of `in`. Pure gather over ADOs; parallelized.
  void apply(const AdoState& in, AdoState& out) const;

  // Crude spectral radius estimate (fixed-seed power iteration) used for
  // the integrator stability warning.
  double spectral_radius_estimate(int iterations = 12) const;

 private:
  std::shared_ptr<const HierarchySpace> space_;
  SystemSpec sys_;
  int n_real_ = 0;
  int n_imag_ = 0;
  std::vector<double> coeff_;  // a_X per slot (up-coupling weights)
  std::vector<double> phi0_;   // phi_X(0) per slot (down-coupling weights)
  // sparse eta rows per slot: (destination slot, value)
  std::vector<std::vector<std::pair<int, double>>> eta_rows_;
};

struct PropagationSpan {
  double t_end = 0.0;
  double dt = 0.0;
  int record_stride = 1;  // observers sampled every `record_stride` steps
};

struct Observer {
  std::string name;
  std::function<std::complex<double>(const AdoState&)> eval;
};

// Canonical observers.
Observer observe_m();          // Tr{sigma_z rho_S}
Observer observe_sx();         // Tr{sigma_x rho_S}
Observer observe_chi();        // i Tr{sigma_z block_0}, response tracer
Observer observe_trace();      // Tr{block_0}
Observer observe_coherence();  // block_0(0,1)

struct Trajectory {
  double t0 = 0.0;
  double dt = 0.0;  // recording step (integration dt x stride)
  std::vector<std::string> names;
  std::vector<std::vector<std::complex<double>>> records;  // [observer][sample]

  TimeSeries series(const std::string& name) const;
};

// Classical fixed-step RK4. The state is advanced in place and returned
// trajectories include the t = 0 sample. Throws DivergenceError (with the
// failure time) when blocks become non-finite. A stability warning is
// emitted to stderr when dt times the spectral radius estimate exceeds the
// RK4 margin.
Trajectory propagate(AdoState& state, const HeomGenerator& gen,
                     const PropagationSpan& span, std::span<const Observer> observers,
                     bool stability_check = true);

// Convenience overload building the generator in place.
Trajectory propagate(AdoState& state, const CorrelationFit& fit, const SystemSpec& sys,
                     const PropagationSpan& span, std::span<const Observer> observers,
                     bool stability_check = true);

}  // namespace sbheom

// response.hpp — Equilibrium relaxation and the linear response pipeline

#pragma once

#include <memory>

#include "sbheom/heom.hpp"
#include "sbheom/spectrum.hpp"

namespace sbheom {

struct RelaxationConfig {
  double t_eq = 0.0;           // total relaxation span
  double dt = 0.0;
  int record_stride = 10;
  double drift_threshold = 1e-3;  // on max-min of M over the final window
  double drift_window = 0.1;      // trailing fraction used for the diagnostic
};

struct RelaxationResult {
  AdoState sigma_eq;
  TimeSeries m;       // recorded M(t') = Tr{sigma_z rho_S}
  double drift = 0.0; // spread of M over the trailing window
  bool equilibrated = false;
};

// Step (1): propagate from a factorized initial state (default |+><+|,
// higher orders zero) for a long span and return the approximate
// equilibrium ADOs plus the recorded magnetization. Excessive trailing
// drift sets equilibrated = false (localized phase or t_eq too short); it
// is a flag, not an error.
RelaxationResult relax_to_equilibrium(const CorrelationFit& fit, const SystemSpec& sys,
                                      std::shared_ptr<const HierarchySpace> space,
                                      const RelaxationConfig& config);
RelaxationResult relax_to_equilibrium(const CorrelationFit& fit, const SystemSpec& sys,
                                      std::shared_ptr<const HierarchySpace> space,
                                      const RelaxationConfig& config,
                                      const Eigen::Matrix2cd& rho0);

struct ResponseConfig {
  double t_resp = 0.0;
  double dt = 0.0;
  int record_stride = 10;
};

struct ResponseResult {
  TimeSeries chi;                  // real-valued record of chi(t)
  double max_imag_residual = 0.0;  // health metric: |Im| leakage before discarding
};

// Steps (2)-(4): seed quasi-ADOs as [sigma_z, sigma_eq], evolve, and record
// chi(t) = i Tr{sigma_z block_0}. chi(0) = 0 exactly.
ResponseResult linear_response(const AdoState& sigma_eq, const CorrelationFit& fit,
                               const SystemSpec& sys, const ResponseConfig& config);

}  // namespace sbheom

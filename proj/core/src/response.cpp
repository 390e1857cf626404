#include "sbheom/response.hpp"

#include <algorithm>
#include <cmath>

#include "sbheom/errors.hpp"

namespace sbheom {

RelaxationResult relax_to_equilibrium(const CorrelationFit& fit, const SystemSpec& sys,
                                      std::shared_ptr<const HierarchySpace> space,
                                      const RelaxationConfig& config) {
  Eigen::Matrix2cd plus;
  plus << 1, 0, 0, 0;
  return relax_to_equilibrium(fit, sys, std::move(space), config, plus);
}

RelaxationResult relax_to_equilibrium(const CorrelationFit& fit, const SystemSpec& sys,
                                      std::shared_ptr<const HierarchySpace> space,
                                      const RelaxationConfig& config,
                                      const Eigen::Matrix2cd& rho0) {
  if (!(config.t_eq > 0.0)) throw ConfigError("relax: t_eq must be > 0");

  AdoState state = AdoState::density(std::move(space), rho0);
  HeomGenerator gen(state.space_ptr(), fit, sys);

  Observer obs[] = {observe_m()};
  PropagationSpan span{config.t_eq, config.dt, config.record_stride};
  Trajectory traj = propagate(state, gen, span, obs);

  RelaxationResult out{std::move(state), traj.series("m"), 0.0, false};
  out.m.t_unit = "t";
  out.m.v_unit = "M";

  // Drift of M over the trailing window; flat tail = usable equilibrium.
  const std::size_t n = out.m.size();
  const auto window =
      std::max<std::size_t>(2, static_cast<std::size_t>(std::ceil(
                                   config.drift_window * static_cast<double>(n))));
  double lo = 1e300, hi = -1e300;
  for (std::size_t i = n - window; i < n; ++i) {
    lo = std::min(lo, out.m.values[i].real());
    hi = std::max(hi, out.m.values[i].real());
  }
  out.drift = hi - lo;
  out.equilibrated = out.drift <= config.drift_threshold;
  return out;
}

ResponseResult linear_response(const AdoState& sigma_eq, const CorrelationFit& fit,
                               const SystemSpec& sys, const ResponseConfig& config) {
  if (sigma_eq.role() != StateRole::Density) {
    throw ConfigError("linear_response: sigma_eq must be a density-role state");
  }
  if (!(config.t_resp > 0.0)) throw ConfigError("linear_response: t_resp must be > 0");

  AdoState quasi = commute_z(sigma_eq);
  HeomGenerator gen(quasi.space_ptr(), fit, sys);

  Observer obs[] = {observe_chi()};
  PropagationSpan span{config.t_resp, config.dt, config.record_stride};
  Trajectory traj = propagate(quasi, gen, span, obs);

  ResponseResult out;
  const auto& rec = traj.records[0];
  std::vector<double> chi(rec.size());
  for (std::size_t i = 0; i < rec.size(); ++i) {
    chi[i] = rec[i].real();
    out.max_imag_residual = std::max(out.max_imag_residual, std::abs(rec[i].imag()));
  }
  out.chi = TimeSeries::from_real(0.0, traj.dt, std::move(chi), "t", "chi");
  return out;
}

}  // namespace sbheom

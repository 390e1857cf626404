// fit.hpp — Multi-exponential fit of the bath correlation function

#pragma once

#include <complex>
#include <cstdint>
#include <optional>
#include <vector>

#include <Eigen/Dense>

#include "sbheom/basis.hpp"
#include "sbheom/bath.hpp"

namespace sbheom {

struct ResidualReport {
  double max_real = 0.0;  // max |dC_R| / omega_c^2
  double max_imag = 0.0;
  double rms_real = 0.0;
  double rms_imag = 0.0;
  std::vector<double> error_real;  // per-sample dC_X = C_X^fit - C_X
  std::vector<double> error_imag;
  bool tolerance_met = true;
};

struct CorrelationFit {
  std::vector<BasisFunction> basis_real;
  std::vector<BasisFunction> basis_imag;
  Eigen::VectorXd coeff_real;
  Eigen::VectorXd coeff_imag;
  Eigen::MatrixXd eta_real;
  Eigen::MatrixXd eta_imag;
  double t_max = 0.0;
  double omega_c = 1.0;
  ResidualReport residual;
  std::uint64_t target_hash = 0;
  std::uint64_t seed = 0;
  int multistart = 0;
  BathSpec bath;

  int n_real() const { return static_cast<int>(basis_real.size()); }
  int n_imag() const { return static_cast<int>(basis_imag.size()); }

  double evaluate_real(double t) const;
  double evaluate_imag(double t) const;
  // C_fit(t) = sum a_R phi_R + i sum a_I phi_I. Evaluation beyond t_max is
  // permitted (extrapolation).
  std::complex<double> evaluate(double t) const;
  bool is_extrapolated(double t) const { return t > t_max; }

  // Content hash over the canonical serialization; keys downstream caches.
  std::uint64_t hash() const;
};

// Nonlinear structure of one component's basis. Entries expand to basis
// functions: Decay -> one exp term; OscPair -> adjacent cos/sin sharing
// (freq, rate); LinearPair -> {t exp(-G t), exp(-G t)} sharing one rate.
struct TemplateEntry {
  enum class Type { Decay, OscPair, LinearPair };
  Type type = Type::Decay;
};

struct ComponentTemplate {
  std::vector<TemplateEntry> entries;

  int basis_size() const;
  static ComponentTemplate decays(int n);
  static ComponentTemplate osc_plus_decays(int n_pairs, int n_decays);
  static ComponentTemplate linear_plus_decays(int n_pairs, int n_decays);
};

enum class FitWeighting {
  Absolute,  // uniform weights on the hybrid grid
  Relative,  // 1 / (floor + |C|); emphasizes the power-law tail
};

struct FitConfig {
  ComponentTemplate real_template;
  ComponentTemplate imag_template;
  int multistart = 16;
  std::uint64_t seed = 20240915;
  double tolerance = 5e-5;  // on max |dC_X| / omega_c^2
  FitWeighting weighting = FitWeighting::Absolute;
  int max_iterations = 400;
  double relative_floor = 1e-6;  // floor for Relative weighting, x omega_c^2
};

// Variable-projection nonlinear least squares with multistart; the linear
// coefficients are solved exactly at every step. Fails soft: if the
// tolerance is unmet the best fit is returned with tolerance_met = false.
CorrelationFit fit_correlation(const CorrelationSamples& target, const FitConfig& config);

ResidualReport fit_error_report(const CorrelationFit& fit,
                                const CorrelationSamples& target);

// A coupling-free fit (all coefficients zero) on a minimal basis; the
// closed-system limit used for alpha = 0 pipelines.
CorrelationFit null_fit(const BathSpec& spec);

}  // namespace sbheom

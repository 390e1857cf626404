// basis.hpp — Exponentially decaying basis functions and their closure

#pragma once

#include <span>
#include <string>
#include <vector>

#include <Eigen/Dense>

namespace sbheom {

enum class BasisKind {
  Decay,        // exp(-rate t)
  CosDecay,     // cos(freq t) exp(-rate t)
  SinDecay,     // sin(freq t) exp(-rate t)
  LinearDecay,  // t exp(-rate t)
};

std::string to_string(BasisKind kind);
BasisKind basis_kind_from_string(const std::string& name);

struct BasisFunction {
  BasisKind kind = BasisKind::Decay;
  double rate = 1.0;  // decay rate, > 0
  double freq = 0.0;  // oscillation frequency for Cos/SinDecay

  double value(double t) const;
  double derivative(double t) const;  // analytic d/dt
  double value_at_zero() const;
};

// Enforces the structural invariants: positive rates, Cos/SinDecay only as
// adjacent pairs sharing (freq, rate), LinearDecay only with a Decay partner
// of the same rate. Throws ConfigError on violation.
void validate_basis(std::span<const BasisFunction> basis);

// Closure matrix eta with d/dt phi_n(t) = sum_n' eta(n,n') phi_n'(t):
// a Decay row holds -rate on itself; a (cos,sin) pair contributes the
// 2x2 block [[-rate, -freq],[freq, -rate]]; LinearDecay holds -rate on
// itself and +1 on its Decay partner.
Eigen::MatrixXd build_closure(std::span<const BasisFunction> basis);

}  // namespace sbheom

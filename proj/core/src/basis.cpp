#include "sbheom/basis.hpp"

#include <cmath>

#include "sbheom/errors.hpp"

namespace sbheom {

std::string to_string(BasisKind kind) {
  switch (kind) {
    case BasisKind::Decay: return "decay";
    case BasisKind::CosDecay: return "cos-decay";
    case BasisKind::SinDecay: return "sin-decay";
    case BasisKind::LinearDecay: return "linear-decay";
  }
  return "unknown";
}

BasisKind basis_kind_from_string(const std::string& name) {
  if (name == "decay") return BasisKind::Decay;
  if (name == "cos-decay") return BasisKind::CosDecay;
  if (name == "sin-decay") return BasisKind::SinDecay;
  if (name == "linear-decay") return BasisKind::LinearDecay;
  throw ConfigError("basis: unknown kind '" + name + "'");
}

double BasisFunction::value(double t) const {
  switch (kind) {
    case BasisKind::Decay: return std::exp(-rate * t);
    case BasisKind::CosDecay: return std::cos(freq * t) * std::exp(-rate * t);
    case BasisKind::SinDecay: return std::sin(freq * t) * std::exp(-rate * t);
    case BasisKind::LinearDecay: return t * std::exp(-rate * t);
  }
  return 0.0;
}

double BasisFunction::derivative(double t) const {
  const double e = std::exp(-rate * t);
  switch (kind) {
    case BasisKind::Decay: return -rate * e;
    case BasisKind::CosDecay:
      return (-rate * std::cos(freq * t) - freq * std::sin(freq * t)) * e;
    case BasisKind::SinDecay:
      return (freq * std::cos(freq * t) - rate * std::sin(freq * t)) * e;
    case BasisKind::LinearDecay: return (1.0 - rate * t) * e;
  }
  return 0.0;
}

double BasisFunction::value_at_zero() const {
  switch (kind) {
    case BasisKind::Decay: return 1.0;
    case BasisKind::CosDecay: return 1.0;
    case BasisKind::SinDecay: return 0.0;
    case BasisKind::LinearDecay: return 0.0;
  }
  return 0.0;
}

namespace {

// Index of the Decay partner sharing LinearDecay's rate, or -1.
int decay_partner(std::span<const BasisFunction> basis, double rate) {
  for (std::size_t i = 0; i < basis.size(); ++i) {
    if (basis[i].kind == BasisKind::Decay && basis[i].rate == rate) {
      return static_cast<int>(i);
    }
  }
  return -1;
}

}  // namespace

void validate_basis(std::span<const BasisFunction> basis) {
  for (std::size_t i = 0; i < basis.size(); ++i) {
    const BasisFunction& b = basis[i];
    if (!(b.rate > 0.0)) {
      throw ConfigError("basis: decay rate must be > 0");
    }
    switch (b.kind) {
      case BasisKind::CosDecay:
        if (i + 1 >= basis.size() || basis[i + 1].kind != BasisKind::SinDecay ||
            basis[i + 1].freq != b.freq || basis[i + 1].rate != b.rate) {
          throw ConfigError("basis: cos-decay must be followed by its sin-decay partner");
        }
        break;
      case BasisKind::SinDecay:
        if (i == 0 || basis[i - 1].kind != BasisKind::CosDecay ||
            basis[i - 1].freq != b.freq || basis[i - 1].rate != b.rate) {
          throw ConfigError("basis: unpaired sin-decay");
        }
        break;
      case BasisKind::LinearDecay:
        if (decay_partner(basis, b.rate) < 0) {
          throw ConfigError("basis: linear-decay without a decay partner of equal rate");
        }
        break;
      case BasisKind::Decay:
        break;
    }
  }
}

Eigen::MatrixXd build_closure(std::span<const BasisFunction> basis) {
  validate_basis(basis);
  const auto n = static_cast<Eigen::Index>(basis.size());
  Eigen::MatrixXd eta = Eigen::MatrixXd::Zero(n, n);
  for (Eigen::Index i = 0; i < n; ++i) {
    const BasisFunction& b = basis[static_cast<std::size_t>(i)];
    switch (b.kind) {
      case BasisKind::Decay:
        eta(i, i) = -b.rate;
        break;
      case BasisKind::CosDecay:
        eta(i, i) = -b.rate;
        eta(i, i + 1) = -b.freq;  // partner sin is adjacent by the invariant
        break;
      case BasisKind::SinDecay:
        eta(i, i - 1) = b.freq;
        eta(i, i) = -b.rate;
        break;
      case BasisKind::LinearDecay: {
        eta(i, i) = -b.rate;
        eta(i, decay_partner(basis, b.rate)) = 1.0;
        break;
      }
    }
  }
  return eta;
}

}  // namespace sbheom

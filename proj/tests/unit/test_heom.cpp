#include <cmath>
#include <random>

#include "doctest.h"
#include "oracles.hpp"
#include "sbheom/checkpoint.hpp"
#include "sbheom/errors.hpp"
#include "sbheom/heom.hpp"

using namespace sbheom;

namespace {

using Block = Eigen::Matrix2cd;

Block plus_state() {
  Block rho;
  rho << 1, 0, 0, 0;
  return rho;
}

// Hand-built fits with prescribed bases and coefficients.
CorrelationFit synthetic_fit(std::vector<BasisFunction> basis_r, Eigen::VectorXd a_r,
                             std::vector<BasisFunction> basis_i, Eigen::VectorXd a_i) {
  CorrelationFit fit;
  fit.bath.s = 1.0;
  fit.bath.alpha = 0.1;
  fit.basis_real = std::move(basis_r);
  fit.basis_imag = std::move(basis_i);
  fit.coeff_real = std::move(a_r);
  fit.coeff_imag = std::move(a_i);
  fit.eta_real = build_closure(fit.basis_real);
  fit.eta_imag = build_closure(fit.basis_imag);
  fit.t_max = 1e9;
  return fit;
}

CorrelationFit single_decay_fit(double a_r, double gamma) {
  Eigen::VectorXd ar(1), ai(1);
  ar << a_r;
  ai << 0.0;
  return synthetic_fit({{BasisKind::Decay, gamma, 0.0}}, ar,
                       {{BasisKind::Decay, 2.0, 0.0}}, ai);
}

AdoState random_state(std::shared_ptr<const HierarchySpace> space, unsigned seed) {
  AdoState st(space, StateRole::Density);
  std::mt19937 rng(seed);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  for (std::size_t i = 0; i < st.size(); ++i) {
    st.block(i) << std::complex<double>(u(rng), u(rng)), std::complex<double>(u(rng), u(rng)),
        std::complex<double>(u(rng), u(rng)), std::complex<double>(u(rng), u(rng));
  }
  return st;
}

double max_block_diff(const AdoState& a, const AdoState& b) {
  double m = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    m = std::max(m, (a.block(i) - b.block(i)).cwiseAbs().maxCoeff());
  }
  return m;
}

}  // namespace

TEST_CASE("decoupled hierarchy reduces to the closed system") {
  // With all linear coefficients zero the up-couplings vanish: nothing feeds
  // back into the reduced density matrix and a depth-0 hierarchy is exact.
  auto trivial = std::make_shared<HierarchySpace>(1, 1, 0);
  CorrelationFit fit = single_decay_fit(0.0, 1.5);  // all coefficients zero
  SystemSpec sys{1.0, 1.0};
  HeomGenerator gen(trivial, fit, sys);

  AdoState state = AdoState::density(trivial, plus_state());
  AdoState deriv(trivial, StateRole::Density);
  gen.apply(state, deriv);

  // derivative confined to the zeroth ADO: -i Delta [sigma_x, rho]
  Block expected;
  expected << 0.0, std::complex<double>(0.0, 1.0), std::complex<double>(0.0, -1.0), 0.0;
  REQUIRE(deriv.size() == 1);
  CHECK((deriv.block(0) - expected).cwiseAbs().maxCoeff() < 1e-15);

  // On a deeper space the zeroth block still never receives feedback: its
  // derivative depends on the reduced density matrix alone.
  auto space = std::make_shared<HierarchySpace>(1, 1, 2);
  HeomGenerator gen2(space, fit, sys);
  AdoState st2 = random_state(space, 11);
  st2.block(0) = plus_state();
  AdoState d2(space, StateRole::Density);
  gen2.apply(st2, d2);
  CHECK((d2.block(0) - expected).cwiseAbs().maxCoeff() < 1e-15);
}

TEST_CASE("minimal hierarchy matches the hand expansion") {
  // N_R = 1 decay (a_R, G), N_I = 0 equivalent (zero coefficient), H = 1.
  const double a_r = 0.35, gamma = 0.8, delta = 0.7;
  auto space = std::make_shared<HierarchySpace>(1, 1, 1);
  CorrelationFit fit = single_decay_fit(a_r, gamma);
  SystemSpec sys{delta, 1.0};
  HeomGenerator gen(space, fit, sys);

  AdoState state(space, StateRole::Density);
  std::mt19937 rng(3);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  for (std::size_t i = 0; i < state.size(); ++i) {
    state.block(i) << std::complex<double>(u(rng), u(rng)), std::complex<double>(u(rng), u(rng)),
        std::complex<double>(u(rng), u(rng)), std::complex<double>(u(rng), u(rng));
  }
  AdoState deriv(space, StateRole::Density);
  gen.apply(state, deriv);

  Block sx, sz;
  sx << 0, 1, 1, 0;
  sz << 1, 0, 0, -1;
  const std::complex<double> mi{0.0, -1.0};
  auto comm = [](const Block& a, const Block& b) { return (a * b - b * a).eval(); };

  std::vector<int> occ0{0, 0}, occ1{1, 0};
  const std::size_t i0 = space->position(occ0);
  const std::size_t i1 = space->position(occ1);
  const Block s0 = state.block(i0);
  const Block s1 = state.block(i1);

  const Block d0 = mi * delta * comm(sx, s0) + mi * a_r * comm(sz, s1);
  const Block d1 = mi * delta * comm(sx, s1) - gamma * s1 + mi * 1.0 * comm(sz, s0);
  CHECK((deriv.block(i0) - d0).cwiseAbs().maxCoeff() < 1e-14);
  CHECK((deriv.block(i1) - d1).cwiseAbs().maxCoeff() < 1e-14);
}

TEST_CASE("zeroth-block derivative is traceless for density states") {
  auto space = std::make_shared<HierarchySpace>(2, 1, 3);
  Eigen::VectorXd ar(2), ai(1);
  ar << 0.2, -0.05;
  ai << -0.1;
  CorrelationFit fit = synthetic_fit(
      {{BasisKind::Decay, 1.0, 0.0}, {BasisKind::Decay, 0.3, 0.0}}, ar,
      {{BasisKind::Decay, 0.9, 0.0}}, ai);
  HeomGenerator gen(space, fit, SystemSpec{1.3, 1.0});

  AdoState deriv(space, StateRole::Density);
  for (unsigned seed : {1u, 2u, 3u}) {
    AdoState st = random_state(space, seed);
    gen.apply(st, deriv);
    const std::complex<double> tr = deriv.block(0)(0, 0) + deriv.block(0)(1, 1);
    CHECK(std::abs(tr) < 1e-14);
  }
}

TEST_CASE("occupation form equals the brute-force sequence form") {
  struct Scenario {
    CorrelationFit fit;
    int depth;
  };
  Eigen::VectorXd a1(1), a2(2);

  std::vector<Scenario> scenarios;
  a1 << 0.4;
  Eigen::VectorXd b1(1);
  b1 << -0.25;
  scenarios.push_back({synthetic_fit({{BasisKind::Decay, 0.7, 0.0}}, a1,
                                     {{BasisKind::Decay, 1.9, 0.0}}, b1),
                       3});
  // oscillatory pair on the real side exercises off-diagonal closure rows
  a2 << 0.3, -0.6;
  Eigen::VectorXd b0 = Eigen::VectorXd::Zero(1);
  scenarios.push_back(
      {synthetic_fit({{BasisKind::CosDecay, 0.8, 1.7}, {BasisKind::SinDecay, 0.8, 1.7}},
                     a2, {{BasisKind::Decay, 1.1, 0.0}}, b0),
       2});
  // linear pair on the imaginary side exercises the +1 closure entry
  Eigen::VectorXd c2(2);
  c2 << -0.15, 0.22;
  a1 << 0.0;
  scenarios.push_back(
      {synthetic_fit({{BasisKind::Decay, 1.4, 0.0}}, a1,
                     {{BasisKind::LinearDecay, 1.0, 0.0}, {BasisKind::Decay, 1.0, 0.0}},
                     c2),
       3});

  for (std::size_t sc = 0; sc < scenarios.size(); ++sc) {
    const CorrelationFit& fit = scenarios[sc].fit;
    const int depth = scenarios[sc].depth;
    auto space = std::make_shared<HierarchySpace>(fit.n_real(), fit.n_imag(), depth);
    SystemSpec sys{0.9, 1.0};
    HeomGenerator gen(space, fit, sys);

    AdoState st = random_state(space, 17u + static_cast<unsigned>(sc));
    AdoState occ_deriv(space, StateRole::Density);
    gen.apply(st, occ_deriv);

    testing::SequenceState seq = testing::to_sequence_state(st);
    testing::SequenceState seq_deriv =
        testing::sequence_generator_apply(seq, fit, sys, depth);

    for (const auto& [key, block] : seq_deriv) {
      std::vector<int> occ(static_cast<std::size_t>(space->slots()), 0);
      for (int n : key.first) ++occ[static_cast<std::size_t>(n)];
      for (int m : key.second) ++occ[static_cast<std::size_t>(fit.n_real() + m)];
      const std::size_t pos = space->position(occ);
      REQUIRE(pos != HierarchySpace::npos);
      CHECK((occ_deriv.block(pos) - block).cwiseAbs().maxCoeff() < 1e-14);
    }
  }
}

TEST_CASE("generator output is block tri-diagonal in the hierarchy order") {
  auto space = std::make_shared<HierarchySpace>(2, 1, 3);
  Eigen::VectorXd ar(2), ai(1);
  ar << 0.2, 0.1;
  ai << -0.3;
  CorrelationFit fit = synthetic_fit(
      {{BasisKind::Decay, 1.0, 0.0}, {BasisKind::Decay, 0.2, 0.0}}, ar,
      {{BasisKind::Decay, 0.8, 0.0}}, ai);
  HeomGenerator gen(space, fit, SystemSpec{1.0, 1.0});

  AdoState probe(space, StateRole::Density);
  AdoState deriv(space, StateRole::Density);
  for (std::size_t src = 0; src < space->size(); ++src) {
    probe.set_zero();
    probe.block(src) << 1.0, 0.5, -0.25, 0.75;
    gen.apply(probe, deriv);
    for (std::size_t dst = 0; dst < space->size(); ++dst) {
      if (deriv.block(dst).cwiseAbs().maxCoeff() > 0.0) {
        CHECK(std::abs(space->order(dst) - space->order(src)) <= 1);
      }
    }
  }
}

TEST_CASE("free spin performs Rabi oscillations at frequency 2 Delta") {
  auto space = std::make_shared<HierarchySpace>(1, 1, 1);
  CorrelationFit fit = single_decay_fit(0.0, 1.0);
  SystemSpec sys{1.0, 1.0};

  AdoState state = AdoState::density(space, plus_state());
  PropagationSpan span{5.0, 1e-3, 10};
  Observer obs[] = {observe_m(), observe_trace()};
  Trajectory traj = propagate(state, fit, sys, span, obs);

  TimeSeries m = traj.series("m");
  double worst = 0.0;
  for (std::size_t i = 0; i < m.size(); ++i) {
    worst = std::max(worst, std::abs(m.values[i].real() - std::cos(2.0 * m.time_at(i))));
  }
  CHECK(worst < 1e-6);

  // half a Rabi period from |+><+| lands on |-><-|; the span is a whole
  // number of recording strides so t_end is hit exactly
  AdoState half = AdoState::density(space, plus_state());
  PropagationSpan half_span{M_PI / 2.0, M_PI / 2.0 / 20000.0, 20000};
  propagate(half, fit, sys, half_span, {});
  Block target;
  target << 0, 0, 0, 1;
  CHECK((project_rdm(half) - target).cwiseAbs().maxCoeff() < 1e-6);
}

TEST_CASE("pure dephasing conserves the population observable") {
  auto space = std::make_shared<HierarchySpace>(1, 1, 4);
  CorrelationFit fit = single_decay_fit(0.2, 1.0);
  fit.coeff_imag(0) = -0.1;
  SystemSpec sys{0.0, 1.0};  // Delta = 0

  Block rho0;
  rho0 << 0.75, std::complex<double>(0.25, 0.1), std::complex<double>(0.25, -0.1), 0.25;
  AdoState state = AdoState::density(space, rho0);
  Observer obs[] = {observe_m()};
  Trajectory traj = propagate(state, fit, sys, PropagationSpan{10.0, 1e-2, 10}, obs);

  TimeSeries m = traj.series("m");
  for (const auto& v : m.values) {
    CHECK(std::abs(v.real() - 0.5) < 1e-8);
  }
}

TEST_CASE("commute_z matches the Pauli algebra and flips the role") {
  auto space = std::make_shared<HierarchySpace>(1, 1, 1);
  AdoState st(space, StateRole::Density);
  st.block(0) << 1, 0, 0, 0;  // diagonal commutes with sigma_z
  st.block(1) << 0, 1, 0, 0;  // sigma_plus doubles
  AdoState once = commute_z(st);
  CHECK(once.role() == StateRole::Quasi);
  CHECK(once.block(0).cwiseAbs().maxCoeff() == 0.0);
  CHECK(once.block(1)(0, 1) == std::complex<double>(2.0, 0.0));
  AdoState twice = commute_z(once);
  CHECK(twice.block(1)(0, 1) == std::complex<double>(4.0, 0.0));
}

TEST_CASE("trace and Hermiticity are preserved over a dissipative run") {
  auto space = std::make_shared<HierarchySpace>(2, 2, 4);
  Eigen::VectorXd ar(2), ai(2);
  ar << 0.15, 0.05;
  ai << -0.08, -0.02;
  CorrelationFit fit = synthetic_fit(
      {{BasisKind::Decay, 1.2, 0.0}, {BasisKind::Decay, 0.25, 0.0}}, ar,
      {{BasisKind::Decay, 1.0, 0.0}, {BasisKind::Decay, 0.4, 0.0}}, ai);
  SystemSpec sys{1.0, 1.0};

  AdoState state = AdoState::density(space, plus_state());
  Observer obs[] = {observe_trace()};
  Trajectory traj = propagate(state, fit, sys, PropagationSpan{20.0, 5e-3, 100}, obs);

  for (const auto& tr : traj.records[0]) {
    CHECK(std::abs(tr - std::complex<double>(1.0, 0.0)) < 1e-8);
  }
  const Block rho = project_rdm(state);
  CHECK((rho - rho.adjoint()).cwiseAbs().maxCoeff() < 1e-8);

  // quasi state stays anti-Hermitian under the same generator
  AdoState quasi = commute_z(state);
  Trajectory qt = propagate(quasi, fit, sys, PropagationSpan{10.0, 5e-3, 100}, {});
  const Block q = project_rdm(quasi);
  CHECK((q + q.adjoint()).cwiseAbs().maxCoeff() < 1e-8);
}

TEST_CASE("deeper hierarchies converge monotonically in the weak-coupling regime") {
  Eigen::VectorXd ar(1), ai(1);
  ar << 0.06;
  ai << -0.03;
  CorrelationFit fit = synthetic_fit({{BasisKind::Decay, 1.0, 0.0}}, ar,
                                     {{BasisKind::Decay, 1.5, 0.0}}, ai);
  SystemSpec sys{1.0, 1.0};

  auto run_m = [&](int depth) {
    auto space = std::make_shared<HierarchySpace>(1, 1, depth);
    AdoState state = AdoState::density(space, plus_state());
    Observer obs[] = {observe_m()};
    Trajectory traj = propagate(state, fit, sys, PropagationSpan{12.0, 5e-3, 20}, obs);
    return traj.series("m").real_values();
  };

  const auto m2 = run_m(2), m4 = run_m(4), m6 = run_m(6), m8 = run_m(8);
  auto sup = [](const std::vector<double>& a, const std::vector<double>& b) {
    double m = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) m = std::max(m, std::abs(a[i] - b[i]));
    return m;
  };
  const double d24 = sup(m2, m4);
  const double d46 = sup(m4, m6);
  const double d68 = sup(m6, m8);
  CHECK(d46 < d24);
  CHECK(d68 < d46);
}

TEST_CASE("halving dt improves the solution at fourth order") {
  auto space = std::make_shared<HierarchySpace>(1, 1, 3);
  CorrelationFit fit = single_decay_fit(0.3, 1.0);
  fit.coeff_imag(0) = -0.15;
  SystemSpec sys{1.0, 1.0};

  auto run_final = [&](double dt) {
    AdoState state = AdoState::density(space, plus_state());
    propagate(state, fit, sys, PropagationSpan{4.0, dt, 1}, {}, false);
    return project_rdm(state);
  };
  const Block ref = run_final(1e-3 / 4.0);
  const double e1 = (run_final(4e-2) - ref).cwiseAbs().maxCoeff();
  const double e2 = (run_final(2e-2) - ref).cwiseAbs().maxCoeff();
  const double ratio = e1 / e2;
  CHECK(ratio > 8.0);
  CHECK(ratio < 32.0);
}

TEST_CASE("divergence is reported with the failure time") {
  auto space = std::make_shared<HierarchySpace>(1, 1, 4);
  CorrelationFit fit = single_decay_fit(5.0, 8.0);
  fit.coeff_imag(0) = -4.0;
  SystemSpec sys{1.0, 1.0};
  AdoState state = AdoState::density(space, plus_state());
  // dt far beyond the stability margin
  CHECK_THROWS_AS(
      propagate(state, fit, sys, PropagationSpan{50.0, 0.9, 1}, {}, false),
      DivergenceError);
}

TEST_CASE("checkpoints round-trip bit-exactly") {
  auto space = std::make_shared<HierarchySpace>(2, 1, 3);
  AdoState state = random_state(space, 99);
  state.set_role(StateRole::Quasi);

  const std::string path = "/tmp/sbheom_test_checkpoint.bin";
  save_checkpoint(path, state, 0xabcdef1234ull, 7.25);

  CheckpointHeader header;
  AdoState loaded = load_checkpoint(path, header);
  CHECK(header.n_real == 2);
  CHECK(header.n_imag == 1);
  CHECK(header.depth == 3);
  CHECK(header.role == StateRole::Quasi);
  CHECK(header.time == 7.25);
  CHECK(header.fit_hash == 0xabcdef1234ull);
  CHECK(max_block_diff(state, loaded) == 0.0);
}

TEST_CASE("generator rejects mismatched spaces") {
  auto space = std::make_shared<HierarchySpace>(2, 1, 2);
  CorrelationFit fit = single_decay_fit(0.1, 1.0);  // 1 real, 1 imag slot
  CHECK_THROWS_AS(HeomGenerator(space, fit, SystemSpec{1.0, 1.0}), ConfigError);
}

// oracles.hpp — Independent reference implementations used only by tests
//
// These deliberately avoid the library's production code paths: the
// sequence-form hierarchy generator works on raw index sequences, and the
// dephasing reference builds a one-mode exact diagonalization.

#pragma once

#include <complex>
#include <map>
#include <vector>

#include <Eigen/Dense>

#include "sbheom/fit.hpp"
#include "sbheom/heom.hpp"

namespace sbheom::testing {

// An ADO labelled by two ordered index sequences (real, imag); values are
// permutation-symmetric within each sequence.
using SequenceKey = std::pair<std::vector<int>, std::vector<int>>;
using SequenceState = std::map<SequenceKey, Eigen::Matrix2cd>;

// All sequences with total length <= depth over the fit's basis sizes.
std::vector<SequenceKey> enumerate_sequences(int n_real, int n_imag, int depth);

// Expand an occupation-form state into the sequence representation
// (every permutation receives the same block).
SequenceState to_sequence_state(const AdoState& state);

// Literal sequence-form time derivative of the hierarchy.
SequenceState sequence_generator_apply(const SequenceState& state,
                                       const CorrelationFit& fit,
                                       const SystemSpec& sys, int depth);

// One bath mode omega with coupling c, truncated at n_max quanta:
// the exact off-diagonal factor Tr_B{ exp(-i H_+ t) |0><0| exp(+i H_- t) }
// for the pure-dephasing spin-boson model.
std::complex<double> one_mode_dephasing_factor(double omega, double c, double t,
                                               int n_max);

}  // namespace sbheom::testing

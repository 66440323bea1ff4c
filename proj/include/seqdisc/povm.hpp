#pragma once

#include <cstdint>
#include <vector>

#include "seqdisc/linalg.hpp"
#include "seqdisc/rng.hpp"
#include "seqdisc/states.hpp"

// Unambiguous measurement construction and sampling.
//
// For linearly independent states the rank-one elements
//   E_i = gamma |dual_i><dual_i|
// built on the reciprocal basis never fire on a wrong state, and the
// largest uniform weight gamma keeping E_0 = I - sum E_i positive is the
// smallest eigenvalue of the overlap matrix. Every conclusive outcome is
// therefore correct by construction; the only tradeoff is the rate of
// outcome 0 (inconclusive).

namespace seqdisc {

struct Povm {
    std::vector<SymMatrix> success_ops;  // E_1 .. E_m
    SymMatrix inconclusive_op = SymMatrix::identity(0);  // E_0
    std::size_t dim = 0;
};

struct SimReport {
    std::int64_t trials = 0;
    std::int64_t successes = 0;
    std::int64_t inconclusives = 0;
    std::int64_t errors = 0;  // conclusive but wrong; zero for a valid POVM
    double frequency = 0.0;   // successes / trials
    double std_error = 0.0;   // sqrt(f (1-f) / trials)
    std::uint64_t seed = 0;

    bool operator==(const SimReport&) const = default;
};

struct SiftReport {
    std::int64_t trials = 0;
    double per_symbol_conclusive_rate = 0.0;
    double whole_sequence_keep_rate = 0.0;
    std::uint64_t seed = 0;
};

// Builds the unambiguous POVM for the given states and validates it
// numerically: each element PSD, completeness exact, cross firing below
// 1e-10. Domain error when the states are not linearly independent.
Povm build_unambiguous_povm(const StateMatrix& states);

// Outcome probabilities for a prepared unit state: entries 0..m-1 are the
// conclusive outcomes, entry m is inconclusive. Probabilities are clipped
// at -1e-12 (hard error beyond) and renormalized; an internal-consistency
// error is raised if the total mass strays from 1 by more than 1e-8.
std::vector<double> outcome_distribution(const Povm& povm, const std::vector<double>& state);

// One measurement by inverse-CDF sampling: returns 1..m for conclusive
// outcomes, 0 for inconclusive.
int measure_once(const Povm& povm, const std::vector<double>& state, SplitMix64& rng);

// Measures each of the `length` symbols of a uniformly drawn sequence with
// the single-copy POVM; a trial succeeds when every symbol is conclusive.
SimReport simulate_individual(const ParentSpec& spec, int length, std::int64_t trials,
                              std::uint64_t seed);

// Measures the joint sequence state with the collective POVM on all N^k
// sequence states (dimension subject to the capacity guard).
SimReport simulate_collective(const ParentSpec& spec, int length, std::int64_t trials,
                              std::uint64_t seed);

// Sifting view of the individual strategy: fraction of conclusive symbol
// slots and fraction of fully conclusive sequences.
SiftReport sift_statistics(const ParentSpec& spec, int length, std::int64_t trials,
                           std::uint64_t seed);

}  // namespace seqdisc

#pragma once

#include "seqdisc/linalg.hpp"

// Closed-form optimal conclusive probabilities and the matching
// primal/dual certificate pair for sequence families at common overlap s.
//
// For equal priors the optimal single-copy conclusive probability is
//   1 - s                 for s in [0, 1)
//   1 + (N-1)s            for s in (-1/(N-1), 0]
// (the branches agree at s = 0), and the optimum for length-k sequences is
// exactly its k-th power: measuring each symbol separately is optimal.

namespace seqdisc {

struct OptimalityReport {
    double primal_value = 0.0;   // eta . p for the diagonal ansatz
    double dual_value = 0.0;     // trace(gram * Z)
    double gap = 0.0;            // dual_value - primal_value
    bool primal_feasible = false;
    bool dual_feasible = false;
    double min_eig_slack = 0.0;       // smallest eigenvalue of gram - P
    double min_eig_certificate = 0.0; // smallest eigenvalue of Z
    double max_diag_violation = 0.0;  // max |Z_ii - 1/N^k|
};

// Error floor for discriminating two pure states with overlap ov at priors
// (p1, p2): (1 - sqrt(1 - 4 p1 p2 ov^2)) / 2.
double two_state_error_bound(double p1, double p2, double overlap);

// Inconclusive-rate floor for unambiguous discrimination of the same pair:
// 2 sqrt(p1 p2) |ov|.
double two_state_inconclusive_bound(double p1, double p2, double overlap);

// Optimal single-copy conclusive probability at equal priors; domain error
// outside the linear-independence window.
double optimal_single(int n_states, double overlap);

// Optimal conclusive probability for length-k sequences at equal priors:
// optimal_single(N, s)^k on both branches.
double optimal_sequence(int n_states, int length, double overlap);

// Yield of the symbol-by-symbol strategy whose per-copy conclusive
// probability is p_single: p_single^k.
double individual_strategy_bound(double p_single, int length);

// Diagonal primal ansatz P = optimal_sequence * I on the sequence space.
SymMatrix primal_ansatz(int n_states, int length, double overlap);

// Dual certificate Z with diagonal exactly 1/N^k and
// trace(gram * Z) = optimal_sequence; built as a Kronecker power.
SymMatrix dual_certificate(int n_states, int length, double overlap);

// Checks the certificate pair numerically: primal slack PSD, Z PSD, diagonal
// match, zero gap. Failures are reported in the struct, never thrown.
OptimalityReport verify_optimality(int n_states, int length, double overlap,
                                   double psd_tol = 1e-10, double gap_tol = 1e-9);

}  // namespace seqdisc

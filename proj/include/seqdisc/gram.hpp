#pragma once

#include <cstdint>
#include <utility>
#include <vector>

#include "seqdisc/linalg.hpp"

// Overlap matrices of sequence families and their closed-form spectra.
//
// With N parent states at common overlap s, the overlap matrix of all
// length-k sequences factors as the k-fold Kronecker power of the parent
// overlap matrix: the entry for a sequence pair is s raised to the number
// of positions where the two sequences differ.

namespace seqdisc {

// One eigenvalue of the sequence overlap matrix: value
// (1-s)^a * (1+(N-1)s)^b with a+b=k, repeated `multiplicity` times.
struct SpectrumEntry {
    int a;
    int b;
    double value;
    std::int64_t multiplicity;
};

struct GramSpectrum {
    std::vector<SpectrumEntry> entries;

    std::int64_t total_multiplicity() const;
    double weighted_value_sum() const;  // sum of multiplicity * value, i.e. the trace
};

struct CrosscheckReport {
    bool pass = false;
    double worst_deviation = 0.0;
    std::size_t compared = 0;
};

// Overlap matrix of all N^k sequences, built as a Kronecker power.
// Dimension N^k is subject to the capacity guard.
SymMatrix gram_structured(int n_states, int length, double overlap);

// Eigenvalues of the n x n matrix with unit diagonal and constant
// off-diagonal r: (1-r) with multiplicity n-1 and (1+(n-1)r) with
// multiplicity 1, merged into a single entry when r = 0.
std::vector<std::pair<double, int>> uniform_offdiag_eigs(int n, double r);

// Closed-form spectrum of gram_structured(N, k, s): entries for a = 0..k
// with multiplicity C(k,a) * (N-1)^a, merged to one entry when s = 0.
GramSpectrum structured_spectrum(int n_states, int length, double overlap);

// Compares the closed-form spectrum against the numeric eigenvalues of the
// assembled matrix as sorted multisets. Mismatch is reported, not thrown.
CrosscheckReport spectrum_crosscheck(int n_states, int length, double overlap, double tol);

}  // namespace seqdisc

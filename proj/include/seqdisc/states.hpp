#pragma once

#include <cstddef>
#include <vector>

#include "seqdisc/linalg.hpp"

// Construction of the symmetric state family and of sequence states.
//
// A parent set is N unit vectors with one common real overlap s between
// every pair. Such a set is linearly independent exactly when s lies in
// the open interval (-1/(N-1), 1); all constructors below enforce that.
// Sequences of length k are tuples over {1..N}; their joint states are
// Kronecker products with the first symbol as the outermost factor.

namespace seqdisc {

struct ParentSpec {
    int n_states;                // N >= 2
    double overlap;              // s
    std::vector<double> priors;  // nonnegative, sums to 1 within 1e-12

    ParentSpec(int n_states, double overlap);
    ParentSpec(int n_states, double overlap, std::vector<double> priors);

    bool uniform_priors() const;
};

// Columns are unit vectors (norm 1 within 1e-12).
class StateMatrix {
public:
    explicit StateMatrix(Matrix columns);

    std::size_t dim() const noexcept { return cols_.rows(); }
    std::size_t count() const noexcept { return cols_.cols(); }
    const Matrix& columns() const noexcept { return cols_; }
    std::vector<double> column(std::size_t j) const;

    // Matrix of pairwise inner products, symmetrized to kill roundoff skew.
    SymMatrix gram() const;

private:
    Matrix cols_;
};

// Symbols are 1-based entries in {1..N}.
struct SequenceIndex {
    std::vector<int> symbols;
};

// Lower edge of the linear-independence window, -1/(N-1).
double independence_window_lo(int n_states);

// True exactly when s lies strictly inside (-1/(N-1), 1).
bool check_linear_independence(int n_states, double overlap);

// Realizes the parent set in dimension N as the columns of L^T, where L is
// the Cholesky factor of the parent overlap matrix.
StateMatrix build_parent_states(const ParentSpec& spec);

// All length-k tuples in lexicographic order; N^k of them, or N!/(N-k)!
// distinct-symbol tuples when injective is set (requires k <= N).
std::vector<SequenceIndex> enumerate_sequences(int n_states, int length, bool injective);

// Joint state of one sequence: the iterated Kronecker product of the
// selected columns, first symbol outermost (slowest-varying index).
std::vector<double> sequence_state(const StateMatrix& states, const SequenceIndex& index);

// Columns are the joint states of every length-k sequence in lexicographic
// order. Dimension (dim^k) is subject to the capacity guard.
StateMatrix sequence_state_matrix(const StateMatrix& states, int length);

// Reciprocal (dual) basis: states * gram^{-1}. Column i is the unique vector
// in the span with <dual_i|state_j> = delta_ij; columns are not unit vectors.
Matrix reciprocal_basis(const StateMatrix& states);

}  // namespace seqdisc

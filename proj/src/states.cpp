#include "seqdisc/states.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

namespace seqdisc {

namespace {

constexpr double k_prior_sum_tol = 1e-12;
constexpr double k_unit_norm_tol = 1e-12;

void validate_parent_spec(const ParentSpec& spec) {
    if (spec.n_states < 2) throw std::domain_error("parent set needs at least 2 states");
    if (spec.priors.size() != static_cast<std::size_t>(spec.n_states))
        throw std::invalid_argument("priors length must equal the number of states");
    double sum = 0.0;
    for (double p : spec.priors) {
        if (p < 0.0) throw std::invalid_argument("priors must be nonnegative");
        sum += p;
    }
    if (std::abs(sum - 1.0) > k_prior_sum_tol)
        throw std::invalid_argument("priors must sum to 1 within 1e-12");
}

}  // namespace

ParentSpec::ParentSpec(int n, double s)
    : n_states(n), overlap(s), priors(n > 0 ? std::vector<double>(n, 1.0 / n) : std::vector<double>{}) {
    validate_parent_spec(*this);
}

ParentSpec::ParentSpec(int n, double s, std::vector<double> given)
    : n_states(n), overlap(s), priors(std::move(given)) {
    validate_parent_spec(*this);
}

bool ParentSpec::uniform_priors() const {
    const double uniform = 1.0 / n_states;
    return std::all_of(priors.begin(), priors.end(),
                       [uniform](double p) { return std::abs(p - uniform) <= k_prior_sum_tol; });
}

StateMatrix::StateMatrix(Matrix columns) : cols_(std::move(columns)) {
    if (cols_.rows() == 0 || cols_.cols() == 0)
        throw std::invalid_argument("state matrix must be nonempty");
    for (std::size_t j = 0; j < cols_.cols(); ++j) {
        double norm2 = 0.0;
        for (std::size_t i = 0; i < cols_.rows(); ++i) norm2 += cols_(i, j) * cols_(i, j);
        if (std::abs(std::sqrt(norm2) - 1.0) > k_unit_norm_tol)
            throw std::invalid_argument("state column " + std::to_string(j) + " is not unit norm");
    }
}

std::vector<double> StateMatrix::column(std::size_t j) const {
    if (j >= count()) throw std::out_of_range("state column index out of range");
    std::vector<double> v(dim());
    for (std::size_t i = 0; i < dim(); ++i) v[i] = cols_(i, j);
    return v;
}

SymMatrix StateMatrix::gram() const {
    const std::size_t m = count();
    Matrix g(m, m);
    for (std::size_t i = 0; i < m; ++i) {
        for (std::size_t j = i; j < m; ++j) {
            double dot = 0.0;
            for (std::size_t r = 0; r < dim(); ++r) dot += cols_(r, i) * cols_(r, j);
            g(i, j) = dot;
            g(j, i) = dot;
        }
    }
    return SymMatrix::trusted(std::move(g));
}

double independence_window_lo(int n_states) {
    if (n_states < 2) throw std::domain_error("window needs at least 2 states");
    return -1.0 / (n_states - 1);
}

bool check_linear_independence(int n_states, double overlap) {
    return overlap > independence_window_lo(n_states) && overlap < 1.0;
}

StateMatrix build_parent_states(const ParentSpec& spec) {
    if (!check_linear_independence(spec.n_states, spec.overlap))
        throw std::domain_error("overlap outside the linear-independence window");
    const std::size_t n = static_cast<std::size_t>(spec.n_states);
    Matrix overlaps(n, n, spec.overlap);
    for (std::size_t i = 0; i < n; ++i) overlaps(i, i) = 1.0;
    const Matrix l = chol(SymMatrix::trusted(std::move(overlaps)));
    // Rows of L have the prescribed pairwise inner products; use them as columns.
    return StateMatrix(l.transposed());
}

std::vector<SequenceIndex> enumerate_sequences(int n_states, int length, bool injective) {
    if (n_states < 2) throw std::domain_error("sequences need at least 2 symbols");
    if (length < 1) throw std::domain_error("sequence length must be positive");
    if (injective && length > n_states)
        throw std::domain_error("injective sequences require length <= number of states");

    std::vector<SequenceIndex> out;
    std::vector<int> tuple(length, 1);
    std::vector<bool> used(static_cast<std::size_t>(n_states) + 1, false);

    // Depth-first in symbol order yields lexicographic output directly.
    auto emit = [&](auto&& self, int pos) -> void {
        if (pos == length) {
            out.push_back(SequenceIndex{tuple});
            return;
        }
        for (int sym = 1; sym <= n_states; ++sym) {
            if (injective && used[sym]) continue;
            tuple[pos] = sym;
            used[sym] = true;
            self(self, pos + 1);
            used[sym] = false;
        }
    };
    emit(emit, 0);
    return out;
}

std::vector<double> sequence_state(const StateMatrix& states, const SequenceIndex& index) {
    if (index.symbols.empty()) throw std::domain_error("sequence must be nonempty");
    for (int sym : index.symbols) {
        if (sym < 1 || static_cast<std::size_t>(sym) > states.count())
            throw std::domain_error("sequence symbol out of range");
    }
    std::vector<double> v = states.column(static_cast<std::size_t>(index.symbols[0] - 1));
    for (std::size_t pos = 1; pos < index.symbols.size(); ++pos) {
        const std::vector<double> factor =
            states.column(static_cast<std::size_t>(index.symbols[pos] - 1));
        std::vector<double> next(v.size() * factor.size());
        for (std::size_t i = 0; i < v.size(); ++i)
            for (std::size_t x = 0; x < factor.size(); ++x)
                next[i * factor.size() + x] = v[i] * factor[x];
        v = std::move(next);
    }
    return v;
}

StateMatrix sequence_state_matrix(const StateMatrix& states, int length) {
    if (length < 1) throw std::domain_error("sequence length must be positive");
    const std::size_t cap = max_matrix_dim();
    std::size_t joint_dim = 1;
    std::size_t count = 1;
    for (int i = 0; i < length; ++i) {
        if (joint_dim > cap / states.dim() || count > cap / states.count())
            throw capacity_error("sequence state space exceeds the capacity guard " +
                                 std::to_string(cap) + " (override with SEQDISC_MAX_DIM)");
        joint_dim *= states.dim();
        count *= states.count();
    }

    const std::vector<SequenceIndex> sequences =
        enumerate_sequences(static_cast<int>(states.count()), length, false);
    Matrix cols(joint_dim, count);
    for (std::size_t j = 0; j < sequences.size(); ++j) {
        const std::vector<double> v = sequence_state(states, sequences[j]);
        for (std::size_t i = 0; i < joint_dim; ++i) cols(i, j) = v[i];
    }
    return StateMatrix(std::move(cols));
}

Matrix reciprocal_basis(const StateMatrix& states) {
    if (states.count() > states.dim())
        throw std::domain_error("more states than dimensions: no reciprocal basis");
    Matrix solved;
    try {
        solved = solve_spd(states.gram(), states.columns().transposed());
    } catch (const not_positive_definite&) {
        throw std::domain_error("states are not linearly independent: singular overlap matrix");
    }
    return solved.transposed();
}

}  // namespace seqdisc

#include "seqdisc/povm.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace seqdisc {

namespace {

constexpr double k_povm_psd_tol = 1e-10;
constexpr double k_cross_fire_tol = 1e-10;
constexpr double k_prob_clip = 1e-12;
constexpr double k_mass_tol = 1e-8;

double quadratic_form(const SymMatrix& op, const std::vector<double>& state) {
    double sum = 0.0;
    for (std::size_t i = 0; i < op.dim(); ++i) {
        double row = 0.0;
        for (std::size_t j = 0; j < op.dim(); ++j) row += op(i, j) * state[j];
        sum += state[i] * row;
    }
    return sum;
}

void require_uniform_priors(const ParentSpec& spec) {
    if (!spec.uniform_priors())
        throw std::domain_error("simulation requires equal priors");
}

int sample_outcome(const std::vector<double>& dist, SplitMix64& rng) {
    const double u = rng.next_double();
    double cumulative = 0.0;
    const std::size_t m = dist.size() - 1;
    for (std::size_t i = 0; i < m; ++i) {
        cumulative += dist[i];
        if (u < cumulative) return static_cast<int>(i) + 1;
    }
    return 0;  // inconclusive absorbs the tail
}

SimReport finalize(SimReport report) {
    if (report.trials > 0) {
        report.frequency =
            static_cast<double>(report.successes) / static_cast<double>(report.trials);
        report.std_error = std::sqrt(report.frequency * (1.0 - report.frequency) /
                                     static_cast<double>(report.trials));
    }
    return report;
}

}  // namespace

Povm build_unambiguous_povm(const StateMatrix& states) {
    const std::size_t d = states.dim();
    const std::size_t m = states.count();
    const Matrix dual = reciprocal_basis(states);

    // Sum of the dual projectors; its top eigenvalue fixes the largest
    // uniform weight that keeps the inconclusive element positive.
    Matrix dual_sum(d, d);
    for (std::size_t k = 0; k < m; ++k) {
        for (std::size_t i = 0; i < d; ++i) {
            const double di = dual(i, k);
            if (di == 0.0) continue;
            for (std::size_t j = 0; j < d; ++j) dual_sum(i, j) += di * dual(j, k);
        }
    }
    const double top = sym_eig(SymMatrix::trusted(dual_sum)).eigenvalues.back();
    if (!(top > 0.0) || !std::isfinite(top))
        throw std::domain_error("states are not linearly independent");
    const double gamma = 1.0 / top;  // equals the smallest overlap eigenvalue

    Povm povm;
    povm.dim = d;
    povm.success_ops.reserve(m);
    Matrix residual = Matrix::identity(d);
    for (std::size_t k = 0; k < m; ++k) {
        Matrix e(d, d);
        for (std::size_t i = 0; i < d; ++i) {
            const double di = gamma * dual(i, k);
            for (std::size_t j = 0; j < d; ++j) e(i, j) = di * dual(j, k);
        }
        residual -= e;
        povm.success_ops.push_back(SymMatrix::trusted(std::move(e)));
    }
    povm.inconclusive_op = SymMatrix::trusted(std::move(residual));

    // Validate rather than trust the construction.
    if (gamma < -k_povm_psd_tol) throw std::runtime_error("negative measurement weight");
    if (!is_psd(povm.inconclusive_op, k_povm_psd_tol))
        throw std::runtime_error("inconclusive element is not positive semidefinite");
    for (std::size_t i = 0; i < m; ++i) {
        for (std::size_t j = 0; j < m; ++j) {
            if (i == j) continue;
            const double fired = quadratic_form(povm.success_ops[i], states.column(j));
            if (std::abs(fired) > k_cross_fire_tol)
                throw std::runtime_error("POVM fires on a wrong state: element " +
                                         std::to_string(i) + " on state " + std::to_string(j));
        }
    }
    return povm;
}

std::vector<double> outcome_distribution(const Povm& povm, const std::vector<double>& state) {
    if (state.size() != povm.dim)
        throw std::invalid_argument("state dimension does not match the POVM");
    const std::size_t m = povm.success_ops.size();
    std::vector<double> dist(m + 1);
    for (std::size_t i = 0; i < m; ++i) dist[i] = quadratic_form(povm.success_ops[i], state);
    dist[m] = quadratic_form(povm.inconclusive_op, state);

    double mass = 0.0;
    for (double& v : dist) {
        if (v < -k_prob_clip)
            throw std::runtime_error("negative outcome probability beyond clip tolerance");
        if (v < 0.0) v = 0.0;
        mass += v;
    }
    if (std::abs(mass - 1.0) > k_mass_tol)
        throw std::runtime_error("outcome probabilities do not sum to 1");
    for (double& v : dist) v /= mass;
    return dist;
}

int measure_once(const Povm& povm, const std::vector<double>& state, SplitMix64& rng) {
    return sample_outcome(outcome_distribution(povm, state), rng);
}

SimReport simulate_individual(const ParentSpec& spec, int length, std::int64_t trials,
                              std::uint64_t seed) {
    require_uniform_priors(spec);
    if (length < 1) throw std::domain_error("sequence length must be positive");
    if (trials < 1) throw std::domain_error("trial count must be positive");

    const StateMatrix parents = build_parent_states(spec);
    const Povm povm = build_unambiguous_povm(parents);
    const int n = spec.n_states;
    std::vector<std::vector<double>> dists;
    dists.reserve(n);
    for (int i = 0; i < n; ++i)
        dists.push_back(outcome_distribution(povm, parents.column(i)));

    SimReport report;
    report.trials = trials;
    report.seed = seed;
    SplitMix64 rng(seed);
    for (std::int64_t t = 0; t < trials; ++t) {
        bool all_conclusive = true;
        bool any_wrong = false;
        for (int pos = 0; pos < length; ++pos) {
            const int symbol = static_cast<int>(rng.next_below(n)) + 1;
            const int outcome = sample_outcome(dists[symbol - 1], rng);
            if (outcome == 0)
                all_conclusive = false;
            else if (outcome != symbol)
                any_wrong = true;
        }
        if (any_wrong)
            ++report.errors;
        else if (all_conclusive)
            ++report.successes;
        else
            ++report.inconclusives;
    }
    return finalize(report);
}

SimReport simulate_collective(const ParentSpec& spec, int length, std::int64_t trials,
                              std::uint64_t seed) {
    require_uniform_priors(spec);
    if (length < 1) throw std::domain_error("sequence length must be positive");
    if (trials < 1) throw std::domain_error("trial count must be positive");

    const StateMatrix parents = build_parent_states(spec);
    const StateMatrix joint = sequence_state_matrix(parents, length);
    const Povm povm = build_unambiguous_povm(joint);
    const std::size_t count = joint.count();
    std::vector<std::vector<double>> dists;
    dists.reserve(count);
    for (std::size_t i = 0; i < count; ++i)
        dists.push_back(outcome_distribution(povm, joint.column(i)));

    SimReport report;
    report.trials = trials;
    report.seed = seed;
    SplitMix64 rng(seed);
    for (std::int64_t t = 0; t < trials; ++t) {
        const int prepared = static_cast<int>(rng.next_below(count)) + 1;
        const int outcome = sample_outcome(dists[prepared - 1], rng);
        if (outcome == 0)
            ++report.inconclusives;
        else if (outcome == prepared)
            ++report.successes;
        else
            ++report.errors;
    }
    return finalize(report);
}

SiftReport sift_statistics(const ParentSpec& spec, int length, std::int64_t trials,
                           std::uint64_t seed) {
    require_uniform_priors(spec);
    if (length < 1) throw std::domain_error("sequence length must be positive");
    if (trials < 1) throw std::domain_error("trial count must be positive");

    const StateMatrix parents = build_parent_states(spec);
    const Povm povm = build_unambiguous_povm(parents);
    const int n = spec.n_states;
    std::vector<std::vector<double>> dists;
    dists.reserve(n);
    for (int i = 0; i < n; ++i)
        dists.push_back(outcome_distribution(povm, parents.column(i)));

    std::int64_t conclusive_symbols = 0;
    std::int64_t kept_sequences = 0;
    SplitMix64 rng(seed);
    for (std::int64_t t = 0; t < trials; ++t) {
        int conclusive_here = 0;
        for (int pos = 0; pos < length; ++pos) {
            const int symbol = static_cast<int>(rng.next_below(n)) + 1;
            if (sample_outcome(dists[symbol - 1], rng) != 0) ++conclusive_here;
        }
        conclusive_symbols += conclusive_here;
        if (conclusive_here == length) ++kept_sequences;
    }

    SiftReport report;
    report.trials = trials;
    report.seed = seed;
    report.per_symbol_conclusive_rate = static_cast<double>(conclusive_symbols) /
                                        (static_cast<double>(trials) * length);
    report.whole_sequence_keep_rate =
        static_cast<double>(kept_sequences) / static_cast<double>(trials);
    return report;
}

}  // namespace seqdisc

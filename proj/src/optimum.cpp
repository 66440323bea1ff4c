#include "seqdisc/optimum.hpp"

#include <cmath>
#include <stdexcept>

#include "seqdisc/gram.hpp"
#include "seqdisc/states.hpp"

namespace seqdisc {

namespace {

void validate_pair(double p1, double p2, double overlap) {
    if (p1 < 0.0 || p2 < 0.0 || std::abs(p1 + p2 - 1.0) > 1e-12)
        throw std::domain_error("pair priors must be nonnegative and sum to 1");
    if (std::abs(overlap) > 1.0) throw std::domain_error("overlap magnitude cannot exceed 1");
}

}  // namespace

double two_state_error_bound(double p1, double p2, double overlap) {
    validate_pair(p1, p2, overlap);
    const double inner = 1.0 - 4.0 * p1 * p2 * overlap * overlap;
    return 0.5 * (1.0 - std::sqrt(std::max(0.0, inner)));
}

double two_state_inconclusive_bound(double p1, double p2, double overlap) {
    validate_pair(p1, p2, overlap);
    return 2.0 * std::sqrt(p1 * p2) * std::abs(overlap);
}

double optimal_single(int n_states, double overlap) {
    if (!check_linear_independence(n_states, overlap))
        throw std::domain_error("overlap outside the linear-independence window");
    return overlap >= 0.0 ? 1.0 - overlap : 1.0 + (n_states - 1) * overlap;
}

double optimal_sequence(int n_states, int length, double overlap) {
    if (length < 1) throw std::domain_error("sequence length must be positive");
    return std::pow(optimal_single(n_states, overlap), length);
}

double individual_strategy_bound(double p_single, int length) {
    if (p_single < 0.0 || p_single > 1.0)
        throw std::domain_error("per-copy probability must lie in [0, 1]");
    if (length < 1) throw std::domain_error("sequence length must be positive");
    return std::pow(p_single, length);
}

SymMatrix primal_ansatz(int n_states, int length, double overlap) {
    const double value = optimal_sequence(n_states, length, overlap);
    const std::size_t cap = max_matrix_dim();
    std::size_t dim = 1;
    for (int i = 0; i < length; ++i) {
        if (dim > cap / static_cast<std::size_t>(n_states)) check_capacity(cap + 1);
        dim *= static_cast<std::size_t>(n_states);
    }
    Matrix p(dim, dim);
    for (std::size_t i = 0; i < dim; ++i) p(i, i) = value;
    return SymMatrix::trusted(std::move(p));
}

SymMatrix dual_certificate(int n_states, int length, double overlap) {
    if (!check_linear_independence(n_states, overlap))
        throw std::domain_error("overlap outside the linear-independence window");
    if (length < 1) throw std::domain_error("sequence length must be positive");
    const std::size_t n = static_cast<std::size_t>(n_states);

    // Single-copy certificate: for s >= 0 the uniform-offdiagonal matrix at
    // r = -1/(N-1) scaled by 1/N (top of the overlap spectrum wins); for
    // s < 0 the flat matrix J/N (bottom of the spectrum wins).
    const double offdiag =
        overlap >= 0.0 ? -1.0 / (static_cast<double>(n_states) * (n_states - 1)) : 1.0 / n_states;
    Matrix z1(n, n, offdiag);
    for (std::size_t i = 0; i < n; ++i) z1(i, i) = 1.0 / n_states;
    return kron_power(SymMatrix::trusted(std::move(z1)), length);
}

OptimalityReport verify_optimality(int n_states, int length, double overlap, double psd_tol,
                                   double gap_tol) {
    const SymMatrix gram = gram_structured(n_states, length, overlap);
    const SymMatrix p = primal_ansatz(n_states, length, overlap);
    const SymMatrix z = dual_certificate(n_states, length, overlap);
    const std::size_t dim = gram.dim();
    const double eta = 1.0 / static_cast<double>(dim);

    OptimalityReport report;
    report.primal_value = 0.0;
    for (std::size_t i = 0; i < dim; ++i) report.primal_value += eta * p(i, i);

    report.dual_value = 0.0;
    for (std::size_t i = 0; i < dim; ++i)
        for (std::size_t j = 0; j < dim; ++j) report.dual_value += gram(i, j) * z(i, j);
    report.gap = report.dual_value - report.primal_value;

    report.min_eig_slack = min_eigenvalue(SymMatrix::trusted(gram.mat() - p.mat()));
    report.min_eig_certificate = min_eigenvalue(z);
    for (std::size_t i = 0; i < dim; ++i)
        report.max_diag_violation =
            std::max(report.max_diag_violation, std::abs(z(i, i) - eta));

    report.primal_feasible = report.min_eig_slack >= -psd_tol;
    report.dual_feasible =
        report.min_eig_certificate >= -psd_tol && report.max_diag_violation <= 1e-12;
    return report;
}

}  // namespace seqdisc

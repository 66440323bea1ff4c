#include "seqdisc/gram.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace seqdisc {

namespace {

void validate_family(int n_states, int length) {
    if (n_states < 2) throw std::domain_error("sequence family needs at least 2 states");
    if (length < 1) throw std::domain_error("sequence length must be positive");
}

std::int64_t binomial(int n, int k) {
    if (k < 0 || k > n) return 0;
    std::int64_t r = 1;
    for (int i = 1; i <= k; ++i) r = r * (n - k + i) / i;
    return r;
}

std::int64_t int_pow(std::int64_t base, int exp) {
    std::int64_t r = 1;
    for (int i = 0; i < exp; ++i) r *= base;
    return r;
}

}  // namespace

std::int64_t GramSpectrum::total_multiplicity() const {
    std::int64_t sum = 0;
    for (const SpectrumEntry& e : entries) sum += e.multiplicity;
    return sum;
}

double GramSpectrum::weighted_value_sum() const {
    double sum = 0.0;
    for (const SpectrumEntry& e : entries) sum += static_cast<double>(e.multiplicity) * e.value;
    return sum;
}

SymMatrix gram_structured(int n_states, int length, double overlap) {
    validate_family(n_states, length);
    const std::size_t n = static_cast<std::size_t>(n_states);
    Matrix parent(n, n, overlap);
    for (std::size_t i = 0; i < n; ++i) parent(i, i) = 1.0;
    return kron_power(SymMatrix::trusted(std::move(parent)), length);
}

std::vector<std::pair<double, int>> uniform_offdiag_eigs(int n, double r) {
    if (n < 1) throw std::domain_error("matrix order must be positive");
    const double common = 1.0 - r;
    const double shifted = 1.0 + (n - 1) * r;
    if (n == 1 || r == 0.0) return {{shifted, n}};
    return {{common, n - 1}, {shifted, 1}};
}

GramSpectrum structured_spectrum(int n_states, int length, double overlap) {
    validate_family(n_states, length);
    GramSpectrum spec;
    if (overlap == 0.0) {
        spec.entries.push_back({0, length, 1.0, int_pow(n_states, length)});
        return spec;
    }
    const double common = 1.0 - overlap;
    const double shifted = 1.0 + (n_states - 1) * overlap;
    for (int a = 0; a <= length; ++a) {
        const int b = length - a;
        const double value = std::pow(common, a) * std::pow(shifted, b);
        const std::int64_t mult = binomial(length, a) * int_pow(n_states - 1, a);
        spec.entries.push_back({a, b, value, mult});
    }
    return spec;
}

CrosscheckReport spectrum_crosscheck(int n_states, int length, double overlap, double tol) {
    const GramSpectrum spec = structured_spectrum(n_states, length, overlap);
    const SymMatrix gram = gram_structured(n_states, length, overlap);
    const EigDecomp eig = sym_eig(gram);

    std::vector<double> predicted;
    predicted.reserve(eig.eigenvalues.size());
    for (const SpectrumEntry& e : spec.entries)
        for (std::int64_t i = 0; i < e.multiplicity; ++i) predicted.push_back(e.value);
    std::sort(predicted.begin(), predicted.end());

    CrosscheckReport report;
    report.compared = eig.eigenvalues.size();
    if (predicted.size() != eig.eigenvalues.size()) {
        report.pass = false;
        report.worst_deviation = std::numeric_limits<double>::infinity();
        return report;
    }
    for (std::size_t i = 0; i < predicted.size(); ++i)
        report.worst_deviation =
            std::max(report.worst_deviation, std::abs(predicted[i] - eig.eigenvalues[i]));
    report.pass = report.worst_deviation <= tol;
    return report;
}

}  // namespace seqdisc

#pragma once

#include <algorithm>
#include <cfloat>
#include <cmath>
#include <cstddef>
#include <vector>

#include "seqdisc/sdp.hpp"

// Shared helpers for the unit and acceptance suites.

namespace testsupport {

// Grid-search oracle for the discrimination SDP, independent of the barrier
// solver. Ascending loops over the first n-1 coordinates at step h with a
// bisection on the last; feasibility is downward closed (shrinking any p_i
// keeps gram - diag(p) positive definite), so a prefix that fails with a
// zero tail prunes its whole branch. Underestimates the optimum by at most
// h * sum of the first n-1 priors, plus the bisection slop.
//
// Feasibility probes run millions of times, so they use a flat in-place
// Cholesky with no allocation and no exceptions, mirroring the library's
// pivot threshold.
inline double brute_force_value(const seqdisc::SdpProblem& problem, double h) {
    const std::size_t n = problem.dim();
    const std::vector<double>& eta = problem.priors;

    std::vector<double> g(n * n);
    double max_diag = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < n; ++j) g[i * n + j] = problem.gram(i, j);
        max_diag = std::max(max_diag, std::abs(problem.gram(i, i)));
    }
    const double pivot_tol = 8.0 * static_cast<double>(n) * DBL_EPSILON * max_diag;

    std::vector<double> scratch(n * n);
    std::vector<double> p(n, 0.0);

    auto feasible = [&]() -> bool {
        scratch = g;
        for (std::size_t i = 0; i < n; ++i) scratch[i * n + i] -= p[i];
        for (std::size_t j = 0; j < n; ++j) {
            double d = scratch[j * n + j];
            for (std::size_t r = 0; r < j; ++r) d -= scratch[j * n + r] * scratch[j * n + r];
            if (d <= pivot_tol) return false;
            const double root = std::sqrt(d);
            scratch[j * n + j] = root;
            for (std::size_t i = j + 1; i < n; ++i) {
                double v = scratch[i * n + j];
                for (std::size_t r = 0; r < j; ++r)
                    v -= scratch[i * n + r] * scratch[j * n + r];
                scratch[i * n + j] = v / root;
            }
        }
        return true;
    };

    if (!feasible()) return 0.0;

    double best = 0.0;
    auto rec = [&](auto&& self, std::size_t idx) -> void {
        if (idx + 1 == n) {
            double lo = 0.0;
            p[idx] = 1.0;
            if (feasible()) {
                lo = 1.0;
            } else {
                double hi = 1.0;
                for (int it = 0; it < 32; ++it) {
                    const double mid = 0.5 * (lo + hi);
                    p[idx] = mid;
                    (feasible() ? lo : hi) = mid;
                }
            }
            p[idx] = lo;
            double value = 0.0;
            for (std::size_t i = 0; i < n; ++i) value += eta[i] * p[i];
            best = std::max(best, value);
            p[idx] = 0.0;
            return;
        }
        for (double v = 0.0; v <= 1.0 + 1e-12; v += h) {
            p[idx] = v;
            if (!feasible()) break;
            self(self, idx + 1);
        }
        p[idx] = 0.0;
    };
    rec(rec, 0);
    return best;
}

}  // namespace testsupport

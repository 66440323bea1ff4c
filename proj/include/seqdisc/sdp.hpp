#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "seqdisc/linalg.hpp"

#include "json.hpp"

// Semidefinite program for optimal unambiguous discrimination.
//
// Primal: maximize eta . p subject to gram - diag(p) >= 0 and p >= 0,
// where eta are the priors. The dual variable Z >= 0 satisfies
// z_i + eta_i = Z_ii with slack z >= 0; strong duality holds because the
// primal has a strictly feasible interior point whenever gram is positive
// definite.
//
// solve_primal follows the central path of the log-barrier
//   eta . p + mu * (log det(gram - diag(p)) + sum_i log p_i)
// with damped Newton steps, shrinking mu from 1 by a factor of 5 per level
// down to 1e-12. The dual is read off the barrier: Z = mu * (gram-diag(p))^-1.

namespace seqdisc {

struct SdpProblem {
    SymMatrix gram;
    std::vector<double> priors;

    // Validates the unit diagonal (within 1e-10) and the priors; positive
    // definiteness is checked by the solver, which reports infeasible input.
    SdpProblem(SymMatrix gram, std::vector<double> priors);

    std::size_t dim() const noexcept { return gram.dim(); }
};

enum class SdpStatus { converged, iteration_cap, infeasible_input };

std::string to_string(SdpStatus status);

struct SdpSolution {
    std::vector<double> p;
    double value = 0.0;  // eta . p
    SymMatrix certificate = SymMatrix::identity(0);  // Z
    std::vector<double> dual_slack;                  // z, z_i = Z_ii - eta_i
    double gap = 0.0;                                // trace(gram Z) - value
    int iterations = 0;                              // Newton steps taken
    SdpStatus status = SdpStatus::infeasible_input;
    double mu_final = 0.0;  // barrier parameter of the reported certificate
    // Centered iterate the certificate was read off from. p itself comes
    // from the deepest centered level; the certificate may use a shallower
    // one, because the literal inverse mu * (gram - diag(p))^-1 loses
    // accuracy (absolute noise ~ eps ||S||^2 / mu) below mu ~ sqrt(eps).
    std::vector<double> p_certificate;
    std::vector<double> central_path;  // eta . p after each centered level
};

struct SolveOptions {
    double tol = 1e-9;        // target accuracy of eta . p
    int max_iter = 2000;      // total Newton step cap
    double mu0 = 1.0;
    double mu_shrink = 0.2;
};

SdpSolution solve_primal(const SdpProblem& problem, const SolveOptions& opts = {});

struct DualExtract {
    SymMatrix certificate = SymMatrix::identity(0);
    std::vector<double> dual_slack;
    double dual_value = 0.0;
};

// Recomputes Z = mu_final * (gram - diag(p_certificate))^-1 and z from a
// converged solution (falling back to p when no certificate iterate is
// recorded). Precondition error if the solution did not converge.
DualExtract extract_dual(const SdpProblem& problem, const SdpSolution& solution);

double duality_gap(const SdpProblem& problem, const std::vector<double>& p, const SymMatrix& z);

// JSON forms: {"gram": [[...]], "priors": [...]}; priors default to uniform.
SdpProblem problem_from_json(const nlohmann::json& j);
nlohmann::ordered_json problem_to_json(const SdpProblem& problem);
nlohmann::ordered_json solution_to_json(const SdpSolution& solution);

}  // namespace seqdisc

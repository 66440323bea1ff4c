#include "seqdisc/sdp.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <utility>

namespace seqdisc {

namespace {

constexpr double k_unit_diag_tol = 1e-10;
constexpr double k_prior_sum_tol = 1e-12;
constexpr double k_mu_stop = 1e-12;
constexpr double k_newton_tol = 1e-10;  // threshold on half the squared decrement
constexpr double k_armijo = 1e-4;
constexpr double k_backtrack = 0.5;
constexpr int k_inner_cap = 60;

// Newton phases: damped steps guard progress with the Armijo test; once the
// decrement is small the full step is safe and function values (which lose
// resolution as mu shrinks) are no longer consulted.
constexpr double k_damped_phase = 0.1;

// Once the decrement is this small, exact Newton contracts it by 50x or
// more per step, so a step that fails to beat k_jitter_shrink of the
// previous decrement marks the roundoff jitter floor of the level.
constexpr double k_quadratic_phase = 0.01;
constexpr double k_jitter_shrink = 0.1;

bool try_chol(const SymMatrix& m, Matrix& factor) {
    try {
        factor = chol(m);
        return true;
    } catch (const not_positive_definite&) {
        return false;
    }
}

double log_det_from_chol(const Matrix& factor) {
    double sum = 0.0;
    for (std::size_t i = 0; i < factor.rows(); ++i) sum += std::log(factor(i, i));
    return 2.0 * sum;
}

SymMatrix slack_matrix(const SymMatrix& gram, const std::vector<double>& p) {
    Matrix s = gram.mat();
    for (std::size_t i = 0; i < p.size(); ++i) s(i, i) -= p[i];
    return SymMatrix::trusted(std::move(s));
}

double dot(const std::vector<double>& a, const std::vector<double>& b) {
    double sum = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) sum += a[i] * b[i];
    return sum;
}

// Literal dual read-off at one barrier level: Z = mu * S^{-1} symmetrized,
// z from its diagonal, dual value as the full trace product.
DualExtract literal_dual(const SdpProblem& problem, const std::vector<double>& p, double mu) {
    const SymMatrix s = slack_matrix(problem.gram, p);
    Matrix z = spd_inverse(s);
    z *= mu;
    DualExtract out;
    out.certificate = SymMatrix::trusted(std::move(z));
    out.dual_slack.resize(problem.dim());
    for (std::size_t i = 0; i < problem.dim(); ++i)
        out.dual_slack[i] = out.certificate(i, i) - problem.priors[i];
    out.dual_value = 0.0;
    for (std::size_t i = 0; i < problem.dim(); ++i)
        for (std::size_t j = 0; j < problem.dim(); ++j)
            out.dual_value += problem.gram(i, j) * out.certificate(i, j);
    return out;
}

}  // namespace

SdpProblem::SdpProblem(SymMatrix gram_in, std::vector<double> priors_in)
    : gram(std::move(gram_in)), priors(std::move(priors_in)) {
    if (gram.dim() == 0) throw std::invalid_argument("problem must be nonempty");
    if (priors.size() != gram.dim())
        throw std::invalid_argument("priors length must match the matrix dimension");
    for (std::size_t i = 0; i < gram.dim(); ++i) {
        if (std::abs(gram(i, i) - 1.0) > k_unit_diag_tol)
            throw std::invalid_argument("overlap matrix must have unit diagonal");
    }
    double sum = 0.0;
    for (double p : priors) {
        if (p < 0.0) throw std::invalid_argument("priors must be nonnegative");
        sum += p;
    }
    if (std::abs(sum - 1.0) > k_prior_sum_tol)
        throw std::invalid_argument("priors must sum to 1 within 1e-12");
}

std::string to_string(SdpStatus status) {
    switch (status) {
        case SdpStatus::converged: return "converged";
        case SdpStatus::iteration_cap: return "iteration-cap";
        case SdpStatus::infeasible_input: return "infeasible-input";
    }
    return "unknown";
}

SdpSolution solve_primal(const SdpProblem& problem, const SolveOptions& opts) {
    const std::size_t n = problem.dim();
    const std::vector<double>& eta = problem.priors;

    SdpSolution out;

    double lambda_min = 0.0;
    try {
        lambda_min = min_eigenvalue(problem.gram);
    } catch (const solver_failure&) {
        lambda_min = 0.0;
    }
    Matrix scratch;
    if (lambda_min <= 0.0 || !try_chol(problem.gram, scratch)) {
        out.status = SdpStatus::infeasible_input;
        return out;
    }

    // Strictly feasible start: half the smallest eigenvalue in every slot.
    std::vector<double> p(n, 0.5 * lambda_min);
    double mu = opts.mu0;

    // Centered iterates, one per barrier level, shallowest first.
    std::vector<std::pair<double, std::vector<double>>> snapshots;
    bool out_of_budget = false;
    bool descent_lost = false;

    while (!out_of_budget && !descent_lost) {
        bool centered = false;
        double prev_decrement = std::numeric_limits<double>::infinity();
        for (int inner = 0; inner < k_inner_cap; ++inner) {
            try {
                const SymMatrix s = slack_matrix(problem.gram, p);
                const Matrix s_inv = spd_inverse(s);

                // Gradient and Hessian of the mu-normalized barrier objective
                //   eta . p / mu + log det(S) + sum_i log p_i.
                std::vector<double> grad(n);
                for (std::size_t i = 0; i < n; ++i)
                    grad[i] = eta[i] / mu - s_inv(i, i) + 1.0 / p[i];

                // Jacobi-scaled Newton system: the raw Hessian spans many
                // orders of magnitude late on the path, the scaled one stays
                // factorable.
                std::vector<double> scale(n);
                for (std::size_t i = 0; i < n; ++i)
                    scale[i] =
                        std::sqrt(s_inv(i, i) * s_inv(i, i) + 1.0 / (p[i] * p[i]));
                Matrix hess(n, n);
                for (std::size_t i = 0; i < n; ++i) {
                    for (std::size_t j = 0; j < n; ++j)
                        hess(i, j) = s_inv(i, j) * s_inv(i, j) / (scale[i] * scale[j]);
                    hess(i, i) += 1.0 / (p[i] * p[i] * scale[i] * scale[i]);
                }
                std::vector<double> rhs(n);
                for (std::size_t i = 0; i < n; ++i) rhs[i] = grad[i] / scale[i];
                std::vector<double> step = solve_spd(SymMatrix::trusted(std::move(hess)), rhs);
                for (std::size_t i = 0; i < n; ++i) step[i] /= scale[i];

                const double decrement_sq = dot(grad, step);
                if (0.5 * decrement_sq <= k_newton_tol) {
                    centered = true;
                    break;
                }
                // Jitter floor: the step no longer contracts even though the
                // decrement is deep in the quadratic regime. The iterate is
                // centered to within roundoff, so accept it and descend on.
                if (decrement_sq <= k_quadratic_phase &&
                    decrement_sq > k_jitter_shrink * prev_decrement) {
                    centered = true;
                    break;
                }
                prev_decrement = decrement_sq;
                if (out.iterations >= opts.max_iter) {
                    out_of_budget = true;
                    break;
                }

                const bool damped = decrement_sq > k_damped_phase;
                double f0 = 0.0;
                if (damped) {
                    Matrix l;
                    try_chol(s, l);  // feasible by invariant
                    f0 = dot(eta, p) / mu + log_det_from_chol(l);
                    for (double v : p) f0 += std::log(v);
                }

                double t = 1.0;
                bool accepted = false;
                std::vector<double> candidate(n);
                while (t >= 1e-16 && !accepted) {
                    bool positive = true;
                    for (std::size_t i = 0; i < n; ++i) {
                        candidate[i] = p[i] + t * step[i];
                        if (candidate[i] <= 0.0) {
                            positive = false;
                            break;
                        }
                    }
                    Matrix l;
                    if (positive && try_chol(slack_matrix(problem.gram, candidate), l)) {
                        if (damped) {
                            double f1 = dot(eta, candidate) / mu + log_det_from_chol(l);
                            for (double v : candidate) f1 += std::log(v);
                            accepted = f1 >= f0 + k_armijo * t * decrement_sq;
                        } else {
                            accepted = true;
                        }
                    }
                    if (!accepted) t *= k_backtrack;
                }
                if (!accepted) {
                    descent_lost = true;  // no feasible progress at any step size
                    break;
                }

                p = candidate;
                ++out.iterations;
            } catch (const not_positive_definite&) {
                descent_lost = true;  // factorizations lost definiteness
                break;
            } catch (const solver_failure&) {
                descent_lost = true;
                break;
            }
            if (inner + 1 == k_inner_cap) descent_lost = true;
        }

        if (centered) {
            snapshots.emplace_back(mu, p);
            out.central_path.push_back(dot(eta, p));
            if (mu <= k_mu_stop) break;
            mu *= opts.mu_shrink;
        }
    }

    if (snapshots.empty()) {
        // Nothing was ever certified as centered; report the raw iterate.
        out.status = SdpStatus::iteration_cap;
        out.p = std::move(p);
        out.value = dot(eta, out.p);
        out.mu_final = mu;
        return out;
    }
    out.status = out_of_budget ? SdpStatus::iteration_cap : SdpStatus::converged;
    out.p = snapshots.back().second;
    out.value = dot(eta, out.p);
    out.mu_final = snapshots.back().first;

    if (out.status == SdpStatus::converged) {
        // Certificate level: the literal inverse loses accuracy as mu
        // shrinks (absolute noise ~ eps ||S||^2 / mu), so walk up from the
        // deepest level to the first one whose read-off still agrees with
        // the central-path identities z_i = mu/p_i and gap = 2 n mu to
        // within half their own size. p and value keep the deepest level.
        for (std::size_t level = snapshots.size(); level-- > 0;) {
            const double level_mu = snapshots[level].first;
            const std::vector<double>& level_p = snapshots[level].second;
            const DualExtract dual = literal_dual(problem, level_p, level_mu);
            bool slack_ok = true;
            for (std::size_t i = 0; i < n; ++i) {
                if (dual.dual_slack[i] < 0.5 * level_mu / level_p[i]) {
                    slack_ok = false;
                    break;
                }
            }
            const double gap = dual.dual_value - out.value;
            const bool gap_ok =
                gap >= -1e-10 && gap <= 3.0 * static_cast<double>(n) * level_mu + 1e-12;
            if ((slack_ok && gap_ok) || level == 0) {
                out.certificate = dual.certificate;
                out.dual_slack = dual.dual_slack;
                out.gap = gap;
                out.mu_final = level_mu;
                out.p_certificate = level_p;
                break;
            }
        }
    }
    return out;
}

DualExtract extract_dual(const SdpProblem& problem, const SdpSolution& solution) {
    if (solution.status != SdpStatus::converged)
        throw std::logic_error("dual extraction requires a converged solution");
    const std::vector<double>& p =
        solution.p_certificate.empty() ? solution.p : solution.p_certificate;
    if (p.size() != problem.dim())
        throw std::invalid_argument("solution does not match the problem dimension");
    return literal_dual(problem, p, solution.mu_final);
}

double duality_gap(const SdpProblem& problem, const std::vector<double>& p, const SymMatrix& z) {
    if (p.size() != problem.dim() || z.dim() != problem.dim())
        throw std::invalid_argument("duality_gap dimension mismatch");
    double trace = 0.0;
    for (std::size_t i = 0; i < problem.dim(); ++i)
        for (std::size_t j = 0; j < problem.dim(); ++j) trace += problem.gram(i, j) * z(i, j);
    return trace - dot(p, problem.priors);
}

SdpProblem problem_from_json(const nlohmann::json& j) {
    if (!j.is_object() || !j.contains("gram"))
        throw std::invalid_argument("problem JSON must contain a \"gram\" matrix");
    const nlohmann::json& g = j.at("gram");
    if (!g.is_array() || g.empty()) throw std::invalid_argument("\"gram\" must be a nonempty array");
    const std::size_t n = g.size();
    Matrix m(n, n);
    for (std::size_t i = 0; i < n; ++i) {
        const nlohmann::json& row = g.at(i);
        if (!row.is_array() || row.size() != n)
            throw std::invalid_argument("\"gram\" must be square");
        for (std::size_t k = 0; k < n; ++k) m(i, k) = row.at(k).get<double>();
    }
    std::vector<double> priors;
    if (j.contains("priors")) {
        priors = j.at("priors").get<std::vector<double>>();
        if (priors.size() != n)
            throw std::invalid_argument("\"priors\" length must match the matrix dimension");
    } else {
        priors.assign(n, 1.0 / static_cast<double>(n));
    }
    return SdpProblem(SymMatrix(std::move(m)), std::move(priors));
}

nlohmann::ordered_json problem_to_json(const SdpProblem& problem) {
    nlohmann::ordered_json j;
    auto& gram = j["gram"];
    gram = nlohmann::ordered_json::array();
    for (std::size_t i = 0; i < problem.dim(); ++i) {
        nlohmann::ordered_json row = nlohmann::ordered_json::array();
        for (std::size_t k = 0; k < problem.dim(); ++k) row.push_back(problem.gram(i, k));
        gram.push_back(std::move(row));
    }
    j["priors"] = problem.priors;
    return j;
}

nlohmann::ordered_json solution_to_json(const SdpSolution& solution) {
    nlohmann::ordered_json j;
    j["status"] = to_string(solution.status);
    j["p"] = solution.p;
    j["value"] = solution.value;
    j["p_certificate"] = solution.p_certificate;
    auto& z = j["Z"];
    z = nlohmann::ordered_json::array();
    for (std::size_t i = 0; i < solution.certificate.dim(); ++i) {
        nlohmann::ordered_json row = nlohmann::ordered_json::array();
        for (std::size_t k = 0; k < solution.certificate.dim(); ++k)
            row.push_back(solution.certificate(i, k));
        z.push_back(std::move(row));
    }
    j["z"] = solution.dual_slack;
    j["gap"] = solution.gap;
    j["iterations"] = solution.iterations;
    j["mu_final"] = solution.mu_final;
    j["central_path"] = solution.central_path;
    return j;
}

}  // namespace seqdisc

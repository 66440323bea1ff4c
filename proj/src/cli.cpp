#include "seqdisc/cli.hpp"

#include <algorithm>
#include <array>
#include <charconv>
#include <cmath>
#include <cstdint>
#include <fstream>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "seqdisc/gram.hpp"
#include "seqdisc/linalg.hpp"
#include "seqdisc/optimum.hpp"
#include "seqdisc/povm.hpp"
#include "seqdisc/rng.hpp"
#include "seqdisc/sdp.hpp"
#include "seqdisc/states.hpp"

#include "json.hpp"

namespace seqdisc::cli {

namespace {

using json = nlohmann::ordered_json;

// Shortest round-trip decimal form; keeps output byte-identical across runs.
std::string fmt(double v) {
    std::array<char, 32> buf{};
    auto res = std::to_chars(buf.data(), buf.data() + buf.size(), v);
    return std::string(buf.data(), res.ptr);
}

json config_to_json(const RunConfig& c) {
    json j;
    j["command"] = c.command;
    j["N"] = c.n_states ? json(*c.n_states) : json(nullptr);
    j["k"] = c.length ? json(*c.length) : json(nullptr);
    j["s"] = c.s ? json(*c.s) : json(nullptr);
    if (c.s_range) {
        j["s_range"] = {{"lo", c.s_range->lo}, {"hi", c.s_range->hi}, {"steps", c.s_range->steps}};
    } else {
        j["s_range"] = nullptr;
    }
    j["trials"] = c.trials;
    j["seed"] = c.seed;
    j["injective"] = c.injective;
    j["format"] = c.format;
    j["out"] = c.out_path ? json(*c.out_path) : json(nullptr);
    j["tol_psd"] = c.tol_psd;
    j["tol_gap"] = c.tol_gap;
    j["problem"] = c.problem_file ? json(*c.problem_file) : json(nullptr);
    j["count"] = c.count;
    j["mode"] = c.mode;
    return j;
}

// Same fields as config_to_json, echoed as leading comment lines.
void write_csv_config(std::ostream& os, const RunConfig& c) {
    os << "# command=" << c.command << '\n';
    os << "# N=" << (c.n_states ? std::to_string(*c.n_states) : "-") << '\n';
    os << "# k=" << (c.length ? std::to_string(*c.length) : "-") << '\n';
    os << "# s=" << (c.s ? fmt(*c.s) : "-") << '\n';
    if (c.s_range) {
        os << "# s_range=" << fmt(c.s_range->lo) << ':' << fmt(c.s_range->hi) << ':'
           << c.s_range->steps << '\n';
    } else {
        os << "# s_range=-\n";
    }
    os << "# trials=" << c.trials << '\n';
    os << "# seed=" << c.seed << '\n';
    os << "# injective=" << (c.injective ? "true" : "false") << '\n';
    os << "# format=" << c.format << '\n';
    os << "# out=" << (c.out_path ? *c.out_path : "-") << '\n';
    os << "# tol_psd=" << fmt(c.tol_psd) << '\n';
    os << "# tol_gap=" << fmt(c.tol_gap) << '\n';
    os << "# problem=" << (c.problem_file ? *c.problem_file : "-") << '\n';
    os << "# count=" << c.count << '\n';
    os << "# mode=" << c.mode << '\n';
}

int require_n(const RunConfig& c) {
    if (!c.n_states) throw std::invalid_argument("this command requires --N");
    if (*c.n_states < 2) throw std::domain_error("N must be at least 2");
    return *c.n_states;
}

int require_k(const RunConfig& c) {
    if (!c.length) throw std::invalid_argument("this command requires --k");
    if (*c.length < 1) throw std::domain_error("k must be at least 1");
    return *c.length;
}

double require_s(const RunConfig& c) {
    if (!c.s) throw std::invalid_argument("this command requires --s");
    return *c.s;
}

void require_json_format(const RunConfig& c) {
    if (c.format != "json") {
        throw std::invalid_argument("command '" + c.command + "' only supports --format json");
    }
}

std::vector<double> linspace(double lo, double hi, int steps) {
    if (steps < 1) throw std::invalid_argument("sweep steps must be at least 1");
    if (steps == 1) {
        if (lo != hi) throw std::invalid_argument("a single-step sweep requires lo == hi");
        return {lo};
    }
    std::vector<double> vals(static_cast<std::size_t>(steps));
    for (int i = 0; i < steps; ++i) {
        vals[static_cast<std::size_t>(i)] =
            lo + (hi - lo) * static_cast<double>(i) / static_cast<double>(steps - 1);
    }
    return vals;
}

// Sweep endpoints must sit inside the open independence window with a
// 1e-6 margin; a bare --s is passed through and range-checked by the
// operation itself.
std::vector<double> resolve_s_values(const RunConfig& c, int n) {
    if (c.s_range && c.s) throw std::invalid_argument("--s and --s-range are mutually exclusive");
    if (c.s_range) {
        const SweepRange& r = *c.s_range;
        if (r.hi < r.lo) throw std::invalid_argument("sweep hi must be >= lo");
        const double margin = 1e-6;
        const double lo_edge = independence_window_lo(n);
        if (r.lo < lo_edge + margin || r.hi > 1.0 - margin) {
            throw std::domain_error(
                "sweep range must stay inside (" + fmt(lo_edge) + ", 1) with a 1e-6 margin");
        }
        return linspace(r.lo, r.hi, r.steps);
    }
    return {require_s(c)};
}

// Writes the payload to --out when given, otherwise to the stream.
int emit(const RunConfig& c, const std::string& payload, std::ostream& out, std::ostream& err) {
    if (c.out_path) {
        std::ofstream file(*c.out_path);
        if (!file) {
            err << "cannot open output path: " << *c.out_path << '\n';
            return exit_domain;
        }
        file << payload;
        file.flush();
        if (!file) {
            err << "failed while writing output path: " << *c.out_path << '\n';
            return exit_domain;
        }
        return exit_ok;
    }
    out << payload;
    return exit_ok;
}

json report_to_json(const SimReport& r) {
    json j;
    j["trials"] = r.trials;
    j["successes"] = r.successes;
    j["inconclusives"] = r.inconclusives;
    j["errors"] = r.errors;
    j["frequency"] = r.frequency;
    j["std_error"] = r.std_error;
    j["seed"] = r.seed;
    return j;
}

// ---------------------------------------------------------------- optimal

int cmd_optimal(const RunConfig& c, std::ostream& out, std::ostream& err) {
    const int n = require_n(c);
    const int k = require_k(c);
    const std::vector<double> svals = resolve_s_values(c, n);

    struct Row {
        double s, single, sequence;
    };
    std::vector<Row> rows;
    rows.reserve(svals.size());
    for (double s : svals) {
        rows.push_back({s, optimal_single(n, s), optimal_sequence(n, k, s)});
    }

    std::string payload;
    if (c.format == "csv") {
        std::ostringstream os;
        write_csv_config(os, c);
        os << "N,k,s,p_single,p_sequence\n";
        for (const Row& r : rows) {
            os << n << ',' << k << ',' << fmt(r.s) << ',' << fmt(r.single) << ','
               << fmt(r.sequence) << '\n';
        }
        payload = os.str();
    } else {
        json j;
        j["config"] = config_to_json(c);
        json arr = json::array();
        for (const Row& r : rows) {
            arr.push_back({{"N", n},
                           {"k", k},
                           {"s", r.s},
                           {"p_single", r.single},
                           {"p_sequence", r.sequence}});
        }
        j["rows"] = arr;
        payload = j.dump(2) + "\n";
    }
    return emit(c, payload, out, err);
}

// ---------------------------------------------------------------- certify

struct CertPoint {
    int n, k;
    double s;
};

std::vector<CertPoint> certify_points(const RunConfig& c) {
    if (c.n_states || c.length || c.s || c.s_range) {
        const int n = require_n(c);
        const int k = require_k(c);
        std::vector<CertPoint> pts;
        for (double s : resolve_s_values(c, n)) pts.push_back({n, k, s});
        return pts;
    }
    // Default audit grid: every (N, k) pair with nine overlaps spanning the
    // independence window at a 1e-3 margin from both edges.
    std::vector<CertPoint> pts;
    for (int n : {2, 3, 4}) {
        const double lo = independence_window_lo(n) + 1e-3;
        const double hi = 1.0 - 1e-3;
        for (int k : {1, 2, 3}) {
            for (double s : linspace(lo, hi, 9)) pts.push_back({n, k, s});
        }
    }
    return pts;
}

int cmd_certify(const RunConfig& c, std::ostream& out, std::ostream& err) {
    const std::vector<CertPoint> pts = certify_points(c);

    struct Row {
        CertPoint pt;
        OptimalityReport rep;
        double closed = 0.0;
        double deviation = 0.0;
        bool pass = false;
    };
    std::vector<Row> rows;
    rows.reserve(pts.size());
    int failures = 0;
    for (const CertPoint& pt : pts) {
        Row r;
        r.pt = pt;
        r.rep = verify_optimality(pt.n, pt.k, pt.s, c.tol_psd, c.tol_gap);
        r.closed = optimal_sequence(pt.n, pt.k, pt.s);
        r.deviation = std::abs(r.rep.dual_value - r.closed);
        r.pass = r.rep.primal_feasible && r.rep.dual_feasible &&
                 std::abs(r.rep.gap) <= c.tol_gap && r.deviation <= 1e-10;
        if (!r.pass) ++failures;
        rows.push_back(r);
    }

    std::string payload;
    if (c.format == "csv") {
        std::ostringstream os;
        write_csv_config(os, c);
        os << "N,k,s,primal_value,dual_value,gap,min_eig_slack,min_eig_certificate,"
              "max_diag_violation,closed_form,closed_form_deviation,pass\n";
        for (const Row& r : rows) {
            os << r.pt.n << ',' << r.pt.k << ',' << fmt(r.pt.s) << ',' << fmt(r.rep.primal_value)
               << ',' << fmt(r.rep.dual_value) << ',' << fmt(r.rep.gap) << ','
               << fmt(r.rep.min_eig_slack) << ',' << fmt(r.rep.min_eig_certificate) << ','
               << fmt(r.rep.max_diag_violation) << ',' << fmt(r.closed) << ','
               << fmt(r.deviation) << ',' << (r.pass ? 1 : 0) << '\n';
        }
        os << "# points=" << rows.size() << '\n';
        os << "# failures=" << failures << '\n';
        payload = os.str();
    } else {
        json j;
        j["config"] = config_to_json(c);
        json arr = json::array();
        for (const Row& r : rows) {
            arr.push_back({{"N", r.pt.n},
                           {"k", r.pt.k},
                           {"s", r.pt.s},
                           {"primal_value", r.rep.primal_value},
                           {"dual_value", r.rep.dual_value},
                           {"gap", r.rep.gap},
                           {"min_eig_slack", r.rep.min_eig_slack},
                           {"min_eig_certificate", r.rep.min_eig_certificate},
                           {"max_diag_violation", r.rep.max_diag_violation},
                           {"closed_form", r.closed},
                           {"closed_form_deviation", r.deviation},
                           {"pass", r.pass}});
        }
        j["rows"] = arr;
        j["summary"] = {{"points", rows.size()}, {"failures", failures}};
        payload = j.dump(2) + "\n";
    }
    const int io = emit(c, payload, out, err);
    if (io != exit_ok) return io;
    return failures == 0 ? exit_ok : exit_certification;
}

// -------------------------------------------------------------------- sdp

int cmd_sdp(const RunConfig& c, std::ostream& out, std::ostream& err) {
    require_json_format(c);

    json j;
    j["config"] = config_to_json(c);

    SdpSolution sol;
    if (c.problem_file) {
        std::ifstream file(*c.problem_file);
        if (!file) throw std::invalid_argument("cannot read problem file: " + *c.problem_file);
        json input = json::parse(file);
        SdpProblem problem = problem_from_json(input);
        sol = solve_primal(problem);
        j["dim"] = problem.dim();
    } else {
        const int n = require_n(c);
        const int k = require_k(c);
        const double s = require_s(c);
        SymMatrix gram = gram_structured(n, k, s);
        const std::size_t dim = gram.dim();
        SdpProblem problem(std::move(gram),
                           std::vector<double>(dim, 1.0 / static_cast<double>(dim)));
        sol = solve_primal(problem);
        j["dim"] = dim;
        const double closed = optimal_sequence(n, k, s);
        j["closed_form"] = closed;
        j["closed_form_deviation"] = std::abs(sol.value - closed);
    }
    j["solution"] = solution_to_json(sol);

    const int io = emit(c, j.dump(2) + "\n", out, err);
    if (io != exit_ok) return io;
    return sol.status == SdpStatus::infeasible_input ? exit_infeasible : exit_ok;
}

// --------------------------------------------------------------- simulate

int cmd_simulate(const RunConfig& c, std::ostream& out, std::ostream& err) {
    require_json_format(c);
    const int n = require_n(c);
    const int k = require_k(c);
    const double s = require_s(c);
    if (c.trials < 1) throw std::invalid_argument("--trials must be at least 1");
    const bool run_individual = c.mode == "individual" || c.mode == "both";
    const bool run_collective = c.mode == "collective" || c.mode == "both";
    if (!run_individual && !run_collective) {
        throw std::invalid_argument("mode must be individual, collective, or both");
    }

    const ParentSpec spec(n, s);
    json j;
    j["config"] = config_to_json(c);
    j["target"] = optimal_sequence(n, k, s);
    j["individual"] =
        run_individual ? report_to_json(simulate_individual(spec, k, c.trials, c.seed)) : json();
    j["collective"] =
        run_collective ? report_to_json(simulate_collective(spec, k, c.trials, c.seed)) : json();

    return emit(c, j.dump(2) + "\n", out, err);
}

// --------------------------------------------------------------- spectrum

int cmd_spectrum(const RunConfig& c, std::ostream& out, std::ostream& err) {
    const int n = require_n(c);
    const int k = require_k(c);
    const double s = require_s(c);
    if (!check_linear_independence(n, s)) {
        throw std::domain_error("overlap outside the open independence window");
    }

    const GramSpectrum spectrum = structured_spectrum(n, k, s);
    const CrosscheckReport check = spectrum_crosscheck(n, k, s, 1e-9);

    std::string payload;
    if (c.format == "csv") {
        std::ostringstream os;
        write_csv_config(os, c);
        os << "a,b,value,multiplicity\n";
        for (const SpectrumEntry& e : spectrum.entries) {
            os << e.a << ',' << e.b << ',' << fmt(e.value) << ',' << e.multiplicity << '\n';
        }
        os << "# total_multiplicity=" << spectrum.total_multiplicity() << '\n';
        os << "# trace=" << fmt(spectrum.weighted_value_sum()) << '\n';
        os << "# crosscheck_pass=" << (check.pass ? "true" : "false") << '\n';
        os << "# crosscheck_worst_deviation=" << fmt(check.worst_deviation) << '\n';
        payload = os.str();
    } else {
        json j;
        j["config"] = config_to_json(c);
        json arr = json::array();
        for (const SpectrumEntry& e : spectrum.entries) {
            arr.push_back(
                {{"a", e.a}, {"b", e.b}, {"value", e.value}, {"multiplicity", e.multiplicity}});
        }
        j["entries"] = arr;
        j["total_multiplicity"] = spectrum.total_multiplicity();
        j["trace"] = spectrum.weighted_value_sum();
        j["crosscheck"] = {{"pass", check.pass},
                           {"worst_deviation", check.worst_deviation},
                           {"compared", check.compared}};
        payload = j.dump(2) + "\n";
    }
    return emit(c, payload, out, err);
}

// ------------------------------------------------------- random-experiment

double gaussian(SplitMix64& rng) {
    const double u1 = rng.next_double();
    const double u2 = rng.next_double();
    return std::sqrt(-2.0 * std::log1p(-u1)) * std::cos(6.283185307179586 * u2);
}

// Random unit columns in dimension n, redrawn until the overlap matrix is
// safely nonsingular (smallest eigenvalue above the recorded threshold).
StateMatrix random_states(int n, SplitMix64& rng, double eig_floor) {
    constexpr int k_max_attempts = 10000;
    for (int attempt = 0; attempt < k_max_attempts; ++attempt) {
        Matrix cols(static_cast<std::size_t>(n), static_cast<std::size_t>(n));
        bool degenerate = false;
        for (std::size_t jcol = 0; jcol < cols.cols(); ++jcol) {
            double norm_sq = 0.0;
            for (std::size_t i = 0; i < cols.rows(); ++i) {
                cols(i, jcol) = gaussian(rng);
                norm_sq += cols(i, jcol) * cols(i, jcol);
            }
            if (norm_sq < 1e-12) {
                degenerate = true;
                break;
            }
            const double inv = 1.0 / std::sqrt(norm_sq);
            for (std::size_t i = 0; i < cols.rows(); ++i) cols(i, jcol) *= inv;
        }
        if (degenerate) continue;
        StateMatrix states(std::move(cols));
        if (min_eigenvalue(states.gram()) > eig_floor) return states;
    }
    throw solver_failure("rejection sampling failed to find a nonsingular state set");
}

int cmd_random_experiment(const RunConfig& c, std::ostream& out, std::ostream& err) {
    require_json_format(c);
    const int n = require_n(c);
    const int k = require_k(c);
    if (c.count < 1) throw std::invalid_argument("--count must be at least 1");
    const double eig_floor = 1e-4;

    json rows = json::array();
    int flagged = 0;
    double min_excess = 0.0;
    double max_excess = 0.0;
    bool self_check = true;
    for (int i = 0; i < c.count; ++i) {
        SplitMix64 rng = SplitMix64::for_stream(c.seed, static_cast<std::uint64_t>(i));
        const StateMatrix states = random_states(n, rng, eig_floor);
        const SymMatrix gram = states.gram();
        const double lambda_min = min_eigenvalue(gram);

        const std::size_t dim1 = gram.dim();
        SdpProblem single(gram, std::vector<double>(dim1, 1.0 / static_cast<double>(dim1)));
        const SdpSolution sol1 = solve_primal(single);

        SymMatrix joint = kron_power(gram, k);
        const std::size_t dimk = joint.dim();
        SdpProblem joint_problem(std::move(joint),
                                 std::vector<double>(dimk, 1.0 / static_cast<double>(dimk)));
        const SdpSolution solk = solve_primal(joint_problem);

        const double product = std::pow(sol1.value, k);
        const double excess = solk.value - product;
        const bool flag = excess > 1e-5;
        if (flag) ++flagged;
        if (excess < -1e-6) self_check = false;
        if (i == 0) {
            min_excess = excess;
            max_excess = excess;
        } else {
            min_excess = std::min(min_excess, excess);
            max_excess = std::max(max_excess, excess);
        }
        rows.push_back({{"instance", i},
                        {"lambda_min", lambda_min},
                        {"single_value", sol1.value},
                        {"single_status", to_string(sol1.status)},
                        {"product_bound", product},
                        {"joint_value", solk.value},
                        {"joint_status", to_string(solk.status)},
                        {"excess", excess},
                        {"flagged", flag}});
    }

    json j;
    j["config"] = config_to_json(c);
    j["rows"] = rows;
    j["summary"] = {{"instances", c.count},
                    {"eig_floor", eig_floor},
                    {"flagged", flagged},
                    {"min_excess", min_excess},
                    {"max_excess", max_excess},
                    {"self_check_pass", self_check}};
    return emit(c, j.dump(2) + "\n", out, err);
}

// ---------------------------------------------------- injective-experiment

int cmd_injective_experiment(const RunConfig& c, std::ostream& out, std::ostream& err) {
    require_json_format(c);
    const int n = require_n(c);
    const int k = require_k(c);
    const double s = require_s(c);
    if (s <= 0.0 || s >= 1.0) {
        throw std::domain_error("the injective experiment requires s in (0, 1)");
    }

    const std::vector<SequenceIndex> seqs = enumerate_sequences(n, k, true);
    const std::size_t count = seqs.size();
    Matrix g(count, count);
    for (std::size_t i = 0; i < count; ++i) {
        for (std::size_t jcol = 0; jcol < count; ++jcol) {
            int differing = 0;
            for (int pos = 0; pos < k; ++pos) {
                if (seqs[i].symbols[static_cast<std::size_t>(pos)] !=
                    seqs[jcol].symbols[static_cast<std::size_t>(pos)]) {
                    ++differing;
                }
            }
            g(i, jcol) = std::pow(s, differing);
        }
    }
    SdpProblem problem(SymMatrix::trusted(std::move(g)),
                       std::vector<double>(count, 1.0 / static_cast<double>(count)));
    const SdpSolution sol = solve_primal(problem);

    const double reference = std::pow(1.0 - s, k);
    json j;
    j["config"] = config_to_json(c);
    j["sequence_count"] = count;
    j["status"] = to_string(sol.status);
    j["value"] = sol.value;
    j["reference"] = reference;
    j["abs_deviation"] = std::abs(sol.value - reference);
    j["gap"] = sol.gap;
    j["iterations"] = sol.iterations;

    const int io = emit(c, j.dump(2) + "\n", out, err);
    if (io != exit_ok) return io;
    return sol.status == SdpStatus::infeasible_input ? exit_infeasible : exit_ok;
}

}  // namespace

SweepRange parse_sweep(const std::string& text) {
    const auto first = text.find(':');
    const auto second = text.find(':', first == std::string::npos ? first : first + 1);
    if (first == std::string::npos || second == std::string::npos ||
        text.find(':', second + 1) != std::string::npos) {
        throw std::invalid_argument("sweep must have the form lo:hi:steps");
    }
    SweepRange r;
    const std::string lo = text.substr(0, first);
    const std::string hi = text.substr(first + 1, second - first - 1);
    const std::string steps = text.substr(second + 1);
    try {
        std::size_t used = 0;
        r.lo = std::stod(lo, &used);
        if (used != lo.size()) throw std::invalid_argument(lo);
        r.hi = std::stod(hi, &used);
        if (used != hi.size()) throw std::invalid_argument(hi);
        r.steps = std::stoi(steps, &used);
        if (used != steps.size()) throw std::invalid_argument(steps);
    } catch (const std::exception&) {
        throw std::invalid_argument("sweep must have the form lo:hi:steps with numeric fields");
    }
    return r;
}

int run_command(const RunConfig& config, std::ostream& out, std::ostream& err) {
    try {
        if (config.format != "json" && config.format != "csv") {
            throw std::invalid_argument("unknown format: " + config.format);
        }
        if (config.command == "optimal") return cmd_optimal(config, out, err);
        if (config.command == "certify") return cmd_certify(config, out, err);
        if (config.command == "sdp") return cmd_sdp(config, out, err);
        if (config.command == "simulate") return cmd_simulate(config, out, err);
        if (config.command == "spectrum") return cmd_spectrum(config, out, err);
        if (config.command == "random-experiment") return cmd_random_experiment(config, out, err);
        if (config.command == "injective-experiment") {
            return cmd_injective_experiment(config, out, err);
        }
        throw std::invalid_argument("unknown command: " + config.command);
    } catch (const capacity_error& e) {
        err << "capacity error: " << e.what() << '\n';
        return exit_domain;
    } catch (const nlohmann::json::exception& e) {
        err << "input error: " << e.what() << '\n';
        return exit_domain;
    } catch (const std::domain_error& e) {
        err << "domain error: " << e.what() << '\n';
        return exit_domain;
    } catch (const std::invalid_argument& e) {
        err << "argument error: " << e.what() << '\n';
        return exit_domain;
    } catch (const std::out_of_range& e) {
        err << "argument error: " << e.what() << '\n';
        return exit_domain;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << '\n';
        return 1;
    }
}

}  // namespace seqdisc::cli

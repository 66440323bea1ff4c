#include <iostream>
#include <string>

#include "CLI11.hpp"

#include "seqdisc/cli.hpp"

int main(int argc, char** argv) {
    CLI::App app{"optimal unambiguous discrimination of symmetric state sequences"};
    app.require_subcommand(1);

    seqdisc::cli::RunConfig config;
    std::string sweep_text;
    std::string out_text;
    std::string problem_text;

    const auto add_output = [&](CLI::App* cmd) {
        cmd->add_option("--format", config.format, "output format (json or csv)")
            ->check(CLI::IsMember({"json", "csv"}));
        cmd->add_option("--out", out_text, "write the payload to this path instead of stdout");
    };
    const auto add_family = [&](CLI::App* cmd) {
        cmd->add_option("--N", config.n_states, "number of parent states");
        cmd->add_option("--k", config.length, "sequence length");
    };

    CLI::App* optimal =
        app.add_subcommand("optimal", "closed-form conclusive probabilities, single point or sweep");
    add_family(optimal);
    optimal->add_option("--s", config.s, "common overlap");
    optimal->add_option("--s-range", sweep_text, "overlap sweep lo:hi:steps");
    add_output(optimal);

    CLI::App* certify = app.add_subcommand(
        "certify", "verify the primal/dual certificate pair on a point, sweep, or default grid");
    add_family(certify);
    certify->add_option("--s", config.s, "common overlap");
    certify->add_option("--s-range", sweep_text, "overlap sweep lo:hi:steps");
    certify->add_option("--tol-psd", config.tol_psd, "eigenvalue tolerance for PSD checks");
    certify->add_option("--tol-gap", config.tol_gap, "duality gap tolerance");
    add_output(certify);

    CLI::App* sdp = app.add_subcommand(
        "sdp", "solve the discrimination SDP for a structured family or a JSON problem file");
    add_family(sdp);
    sdp->add_option("--s", config.s, "common overlap");
    sdp->add_option("--problem", problem_text, "JSON problem file {\"gram\": ..., \"priors\": ...}");
    add_output(sdp);

    CLI::App* simulate =
        app.add_subcommand("simulate", "Monte Carlo sampling of the unambiguous measurements");
    add_family(simulate);
    simulate->add_option("--s", config.s, "common overlap");
    simulate->add_option("--trials", config.trials, "number of trials");
    simulate->add_option("--seed", config.seed, "RNG seed");
    simulate->add_option("--mode", config.mode, "individual, collective, or both")
        ->check(CLI::IsMember({"individual", "collective", "both"}));
    add_output(simulate);

    CLI::App* spectrum =
        app.add_subcommand("spectrum", "closed-form sequence overlap spectrum with crosscheck");
    add_family(spectrum);
    spectrum->add_option("--s", config.s, "common overlap");
    add_output(spectrum);

    CLI::App* random_exp = app.add_subcommand(
        "random-experiment", "joint vs single-copy optimum on random state families");
    add_family(random_exp);
    random_exp->add_option("--count", config.count, "number of random instances");
    random_exp->add_option("--seed", config.seed, "RNG seed");
    add_output(random_exp);

    CLI::App* injective_exp = app.add_subcommand(
        "injective-experiment", "SDP value of the distinct-symbol sequence family");
    add_family(injective_exp);
    injective_exp->add_option("--s", config.s, "common overlap");
    add_output(injective_exp);

    try {
        app.parse(argc, argv);
    } catch (const CLI::Success& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return seqdisc::cli::exit_domain;
    }

    CLI::App* sub = app.get_subcommands().front();
    config.command = sub->get_name();
    if (sub == injective_exp) config.injective = true;
    if (!sweep_text.empty()) {
        try {
            config.s_range = seqdisc::cli::parse_sweep(sweep_text);
        } catch (const std::exception& e) {
            std::cerr << "argument error: " << e.what() << '\n';
            return seqdisc::cli::exit_domain;
        }
    }
    if (!out_text.empty()) config.out_path = out_text;
    if (!problem_text.empty()) config.problem_file = problem_text;

    return seqdisc::cli::run_command(config, std::cout, std::cerr);
}

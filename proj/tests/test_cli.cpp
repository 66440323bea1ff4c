#include <cstdio>
#include <fstream>
#include <sstream>
#include <string>

#include "doctest.h"
#include "json.hpp"
#include "seqdisc/cli.hpp"
#include "seqdisc/optimum.hpp"

using namespace seqdisc;
using nlohmann::json;

namespace {

struct RunResult {
    int code = -1;
    std::string out;
    std::string err;
};

RunResult run(const cli::RunConfig& config) {
    std::ostringstream out;
    std::ostringstream err;
    RunResult r;
    r.code = cli::run_command(config, out, err);
    r.out = out.str();
    r.err = err.str();
    return r;
}

cli::RunConfig base(const std::string& command) {
    cli::RunConfig c;
    c.command = command;
    return c;
}

// Writes `text` to a scratch file in the working directory and removes it
// on scope exit.
struct ScratchFile {
    ScratchFile(std::string name, const std::string& text) : path(std::move(name)) {
        std::ofstream f(path);
        f << text;
    }
    ~ScratchFile() { std::remove(path.c_str()); }
    std::string path;
};

}  // namespace

TEST_CASE("optimal emits closed-form values in both formats") {
    cli::RunConfig c = base("optimal");
    c.n_states = 3;
    c.length = 2;
    c.s = 0.5;

    RunResult j = run(c);
    REQUIRE(j.code == cli::exit_ok);
    json payload = json::parse(j.out);
    REQUIRE(payload["rows"].size() == 1);
    const json& row = payload["rows"][0];
    CHECK(row["N"] == 3);
    CHECK(row["k"] == 2);
    // Bitwise: the command must evaluate the same closed forms.
    CHECK(row["p_single"].get<double>() == optimal_single(3, 0.5));
    CHECK(row["p_sequence"].get<double>() == optimal_sequence(3, 2, 0.5));
    CHECK(payload["config"]["N"] == 3);
    CHECK(payload["config"]["command"] == "optimal");
    CHECK(payload["config"]["s_range"].is_null());

    c.format = "csv";
    RunResult v = run(c);
    REQUIRE(v.code == cli::exit_ok);
    CHECK(v.out.find("N,k,s,p_single,p_sequence\n") != std::string::npos);
    CHECK(v.out.rfind("# command=optimal\n", 0) == 0);
    CHECK(v.out.find("3,2,0.5,0.5,0.25\n") != std::string::npos);
}

TEST_CASE("sweeps expand to evenly spaced overlap values") {
    cli::RunConfig c = base("optimal");
    c.n_states = 2;
    c.length = 1;
    c.s_range = cli::SweepRange{-0.5, 0.5, 5};

    RunResult r = run(c);
    REQUIRE(r.code == cli::exit_ok);
    json payload = json::parse(r.out);
    REQUIRE(payload["rows"].size() == 5);
    CHECK(payload["rows"][0]["s"].get<double>() == -0.5);
    CHECK(payload["rows"][2]["s"].get<double>() == 0.0);
    CHECK(payload["rows"][4]["s"].get<double>() == 0.5);

    // Outside the window margin: rejected before any row is produced.
    c.s_range = cli::SweepRange{-1.0, 0.5, 3};
    CHECK(run(c).code == cli::exit_domain);
    c.s_range = cli::SweepRange{0.0, 1.0, 3};
    CHECK(run(c).code == cli::exit_domain);

    // Degenerate one-step sweep needs lo == hi.
    c.s_range = cli::SweepRange{0.2, 0.2, 1};
    CHECK(run(c).code == cli::exit_ok);
    c.s_range = cli::SweepRange{0.2, 0.3, 1};
    CHECK(run(c).code == cli::exit_domain);

    // A sweep and a point value cannot both be given.
    c.s_range = cli::SweepRange{0.1, 0.5, 3};
    c.s = 0.3;
    CHECK(run(c).code == cli::exit_domain);
}

TEST_CASE("parameter validation maps to the domain exit code") {
    cli::RunConfig missing_n = base("optimal");
    missing_n.length = 1;
    missing_n.s = 0.5;
    CHECK(run(missing_n).code == cli::exit_domain);

    cli::RunConfig bad_n = base("optimal");
    bad_n.n_states = 1;
    bad_n.length = 1;
    bad_n.s = 0.5;
    CHECK(run(bad_n).code == cli::exit_domain);

    cli::RunConfig bad_k = base("optimal");
    bad_k.n_states = 2;
    bad_k.length = 0;
    bad_k.s = 0.5;
    CHECK(run(bad_k).code == cli::exit_domain);

    cli::RunConfig edge_s = base("optimal");
    edge_s.n_states = 3;
    edge_s.length = 1;
    edge_s.s = 1.0;
    CHECK(run(edge_s).code == cli::exit_domain);

    cli::RunConfig bad_format = base("optimal");
    bad_format.n_states = 2;
    bad_format.length = 1;
    bad_format.s = 0.5;
    bad_format.format = "xml";
    CHECK(run(bad_format).code == cli::exit_domain);

    cli::RunConfig unknown = base("no-such-command");
    CHECK(run(unknown).code == cli::exit_domain);

    // Commands with machine-readable reports refuse the csv format.
    cli::RunConfig sdp_csv = base("sdp");
    sdp_csv.n_states = 2;
    sdp_csv.length = 1;
    sdp_csv.s = 0.5;
    sdp_csv.format = "csv";
    CHECK(run(sdp_csv).code == cli::exit_domain);

    // Capacity guard: 2^11 sequence states exceed the default cap.
    cli::RunConfig huge = base("sdp");
    huge.n_states = 2;
    huge.length = 11;
    huge.s = 0.5;
    CHECK(run(huge).code == cli::exit_domain);
}

TEST_CASE("certify reports a clean audit on a small grid") {
    cli::RunConfig c = base("certify");
    c.n_states = 3;
    c.length = 2;
    c.s_range = cli::SweepRange{-0.4, 0.9, 5};

    RunResult r = run(c);
    REQUIRE(r.code == cli::exit_ok);
    json payload = json::parse(r.out);
    REQUIRE(payload["rows"].size() == 5);
    CHECK(payload["summary"]["failures"] == 0);
    for (const json& row : payload["rows"]) {
        CHECK(row["pass"] == true);
        CHECK(std::abs(row["gap"].get<double>()) <= 1e-9);
        CHECK(row["closed_form_deviation"].get<double>() <= 1e-10);
    }
}

TEST_CASE("sdp command solves the structured family") {
    cli::RunConfig c = base("sdp");
    c.n_states = 3;
    c.length = 1;
    c.s = 0.5;

    RunResult r = run(c);
    REQUIRE(r.code == cli::exit_ok);
    json payload = json::parse(r.out);
    CHECK(payload["dim"] == 3);
    CHECK(payload["solution"]["status"] == "converged");
    CHECK(payload["closed_form"].get<double>() == 0.5);
    CHECK(payload["closed_form_deviation"].get<double>() <= 1e-6);
    CHECK(payload["solution"]["p"].size() == 3);

    // Identical configuration, byte-identical report.
    RunResult again = run(c);
    CHECK(again.out == r.out);
}

TEST_CASE("sdp command accepts a problem file") {
    ScratchFile good("cli_test_problem.json", R"({"gram": [[1.0, 0.5], [0.5, 1.0]]})");
    cli::RunConfig c = base("sdp");
    c.problem_file = good.path;
    RunResult r = run(c);
    REQUIRE(r.code == cli::exit_ok);
    json payload = json::parse(r.out);
    CHECK(payload["dim"] == 2);
    CHECK(payload["solution"]["value"].get<double>() == doctest::Approx(0.5).epsilon(1e-6));

    ScratchFile flat("cli_test_flat.json", R"({"gram": [[1.0, 1.0], [1.0, 1.0]]})");
    cli::RunConfig infeasible = base("sdp");
    infeasible.problem_file = flat.path;
    CHECK(run(infeasible).code == cli::exit_infeasible);

    ScratchFile broken("cli_test_broken.json", "{nope");
    cli::RunConfig garbage = base("sdp");
    garbage.problem_file = broken.path;
    CHECK(run(garbage).code == cli::exit_domain);

    cli::RunConfig missing = base("sdp");
    missing.problem_file = "cli_test_void.json";
    CHECK(run(missing).code == cli::exit_domain);
}

TEST_CASE("simulate reports both strategies against the target") {
    cli::RunConfig c = base("simulate");
    c.n_states = 3;
    c.length = 2;
    c.s = 0.5;
    c.trials = 400;
    c.seed = 5;

    RunResult r = run(c);
    REQUIRE(r.code == cli::exit_ok);
    json payload = json::parse(r.out);
    CHECK(payload["target"].get<double>() == 0.25);
    CHECK(payload["individual"]["trials"] == 400);
    CHECK(payload["individual"]["errors"] == 0);
    CHECK(payload["collective"]["errors"] == 0);

    c.mode = "individual";
    json ind = json::parse(run(c).out);
    CHECK(ind["collective"].is_null());
    CHECK_FALSE(ind["individual"].is_null());

    c.mode = "bogus";
    CHECK(run(c).code == cli::exit_domain);

    c.mode = "both";
    c.trials = 0;
    CHECK(run(c).code == cli::exit_domain);
}

TEST_CASE("spectrum lists closed-form eigenvalues with a crosscheck") {
    cli::RunConfig c = base("spectrum");
    c.n_states = 3;
    c.length = 2;
    c.s = 0.5;

    RunResult r = run(c);
    REQUIRE(r.code == cli::exit_ok);
    json payload = json::parse(r.out);
    REQUIRE(payload["entries"].size() == 3);
    CHECK(payload["entries"][0]["a"] == 0);
    CHECK(payload["entries"][0]["value"].get<double>() == 4.0);
    CHECK(payload["entries"][0]["multiplicity"] == 1);
    CHECK(payload["total_multiplicity"] == 9);
    CHECK(payload["trace"].get<double>() == doctest::Approx(9.0).epsilon(1e-12));
    CHECK(payload["crosscheck"]["pass"] == true);
    CHECK(payload["crosscheck"]["compared"] == 9);

    c.format = "csv";
    RunResult v = run(c);
    REQUIRE(v.code == cli::exit_ok);
    CHECK(v.out.find("a,b,value,multiplicity\n") != std::string::npos);
    CHECK(v.out.find("# crosscheck_pass=true\n") != std::string::npos);

    c.format = "json";
    c.s = -0.5;  // closed boundary: dependent family
    CHECK(run(c).code == cli::exit_domain);
}

TEST_CASE("random experiment never finds the product bound beaten meaningfully") {
    cli::RunConfig c = base("random-experiment");
    c.n_states = 3;
    c.length = 2;
    c.count = 2;
    c.seed = 9;

    RunResult r = run(c);
    REQUIRE(r.code == cli::exit_ok);
    json payload = json::parse(r.out);
    REQUIRE(payload["rows"].size() == 2);
    CHECK(payload["summary"]["self_check_pass"] == true);
    CHECK(payload["summary"]["instances"] == 2);
    for (const json& row : payload["rows"]) {
        CHECK(row["single_status"] == "converged");
        CHECK(row["joint_status"] == "converged");
        CHECK(row["joint_value"].get<double>() >=
              row["product_bound"].get<double>() - 1e-6);
    }

    // Determinism across repeat runs, instance streams included.
    CHECK(run(c).out == r.out);

    c.count = 0;
    CHECK(run(c).code == cli::exit_domain);
}

TEST_CASE("injective experiment solves the distinct-symbol family") {
    cli::RunConfig c = base("injective-experiment");
    c.n_states = 2;
    c.length = 2;
    c.s = 0.3;
    c.injective = true;

    RunResult r = run(c);
    REQUIRE(r.code == cli::exit_ok);
    json payload = json::parse(r.out);
    CHECK(payload["sequence_count"] == 2);
    // Two distinct-symbol sequences overlap at s^2: a plain two-state pair.
    CHECK(payload["value"].get<double>() == doctest::Approx(0.91).epsilon(1e-6));
    CHECK(payload["reference"].get<double>() == doctest::Approx(0.49).epsilon(1e-12));
    CHECK(payload["abs_deviation"].get<double>() == doctest::Approx(0.42).epsilon(1e-4));

    c.s = -0.2;
    CHECK(run(c).code == cli::exit_domain);
    c.s = 0.3;
    c.length = 3;  // needs k <= N
    CHECK(run(c).code == cli::exit_domain);
}

TEST_CASE("out path receives the payload") {
    const std::string path = "cli_test_out.json";
    cli::RunConfig c = base("optimal");
    c.n_states = 2;
    c.length = 1;
    c.s = 0.4;

    RunResult direct = run(c);
    REQUIRE(direct.code == cli::exit_ok);

    c.out_path = path;
    RunResult filed = run(c);
    REQUIRE(filed.code == cli::exit_ok);
    CHECK(filed.out.empty());

    std::ifstream in(path);
    std::stringstream buf;
    buf << in.rdbuf();
    std::remove(path.c_str());

    // The config echo differs (it records the path), the rows must not.
    json from_file = json::parse(buf.str());
    json from_stream = json::parse(direct.out);
    CHECK(from_file["rows"] == from_stream["rows"]);
    CHECK(from_file["config"]["out"] == path);

    c.out_path = "no_such_dir_seqdisc/cli_test_out.json";
    RunResult bad = run(c);
    CHECK(bad.code == cli::exit_domain);
    CHECK(bad.err.find("cannot open") != std::string::npos);
}

TEST_CASE("sweep strings parse strictly") {
    cli::SweepRange r = cli::parse_sweep("0.1:0.9:5");
    CHECK(r.lo == 0.1);
    CHECK(r.hi == 0.9);
    CHECK(r.steps == 5);

    r = cli::parse_sweep("-0.4:0.8:9");
    CHECK(r.lo == -0.4);
    CHECK(r.steps == 9);

    CHECK_THROWS_AS(cli::parse_sweep("0.1:0.9"), std::invalid_argument);
    CHECK_THROWS_AS(cli::parse_sweep("0.1:0.9:5:2"), std::invalid_argument);
    CHECK_THROWS_AS(cli::parse_sweep("a:0.9:5"), std::invalid_argument);
    CHECK_THROWS_AS(cli::parse_sweep("0.1:0.9:five"), std::invalid_argument);
    CHECK_THROWS_AS(cli::parse_sweep("0.1:0.9:5.5"), std::invalid_argument);
    CHECK_THROWS_AS(cli::parse_sweep(""), std::invalid_argument);
}

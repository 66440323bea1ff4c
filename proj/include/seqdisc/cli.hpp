#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>

// Command layer shared by the command-line binary and the test drivers.
//
// Exit codes are part of the stable interface:
//   0  success
//   2  domain or capacity violation (bad parameters, guard exceeded)
//   3  certification failure
//   4  solver reported infeasible input

namespace seqdisc::cli {

inline constexpr int exit_ok = 0;
inline constexpr int exit_domain = 2;
inline constexpr int exit_certification = 3;
inline constexpr int exit_infeasible = 4;

struct SweepRange {
    double lo = 0.0;
    double hi = 0.0;
    int steps = 0;
};

// Fully resolved invocation. Optionals stay empty when the flag was not
// given; every command echoes the resolved configuration in its output.
struct RunConfig {
    std::string command;
    std::optional<int> n_states;
    std::optional<int> length;
    std::optional<double> s;
    std::optional<SweepRange> s_range;
    std::int64_t trials = 100000;
    std::uint64_t seed = 1;
    bool injective = false;
    std::string format = "json";  // json | csv
    std::optional<std::string> out_path;
    double tol_psd = 1e-10;
    double tol_gap = 1e-9;
    std::optional<std::string> problem_file;
    int count = 100;              // random-experiment instances
    std::string mode = "both";    // simulate: individual | collective | both
};

// Parses "lo:hi:steps".
SweepRange parse_sweep(const std::string& text);

// Dispatches config.command, writing results to `out` (or config.out_path
// when set) and diagnostics to `err`. Returns one of the exit codes above.
int run_command(const RunConfig& config, std::ostream& out, std::ostream& err);

}  // namespace seqdisc::cli

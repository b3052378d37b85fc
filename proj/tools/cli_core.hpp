#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "cadec/noise.hpp"

namespace cadec::cli {

// Outcome of one subcommand invocation. `table` carries the CSV (or netlist
// text) payload and `manifest` the JSON run manifest, whether or not they
// were also written to files; both are empty on parse failure.
struct CmdResult {
    int exit_code = 0;   // 0 ok, 2 usage error, 3 internal invariant failure
    std::string table;
    std::string manifest;
    std::string hints;   // gnuplot script when --gnuplot-hints was given
    std::string message; // help text or error message
    std::string out_path; // file the table went to; empty = stdout
};

// Grid syntax, shared by --L-grid / --p0-grid:
//   "v"        singleton
//   "a,b,c"    explicit list
//   "a:b:s"    arithmetic from a to b in steps of s (b included within 1e-9)
//   "a:b"      arithmetic with the default step 0.01
//   "a:b:+"    doubling ladder: a, 2a, 4a, ... capped and ended at b
// Throws std::invalid_argument on malformed input.
std::vector<double> parse_double_grid(const std::string& text);
std::vector<long long> parse_length_grid(const std::string& text);

// "unbounded" | "linear" | "linear:<c>" | "pow:<kappa>" | "const:<T>".
TMaxPolicy parse_tmax(const std::string& text);

// --seed default: the CADEC_SEED environment variable when set, else 0.
std::uint64_t default_seed();

CmdResult cmd_decode(const std::vector<std::string>& args);
CmdResult cmd_ff(const std::vector<std::string>& args);
CmdResult cmd_circuit(const std::vector<std::string>& args);
CmdResult cmd_bounds(const std::vector<std::string>& args);
CmdResult cmd_fixed_points(const std::vector<std::string>& args);
CmdResult cmd_eroder(const std::vector<std::string>& args);
CmdResult cmd_sparse(const std::vector<std::string>& args);

// Dispatches argv[1] to the matching cmd_* and prints/writes its outputs.
int run_cli(int argc, char** argv);

} // namespace cadec::cli

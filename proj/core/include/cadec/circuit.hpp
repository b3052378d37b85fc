#pragma once

#include <cstdint>
#include <deque>
#include <optional>
#include <string>
#include <vector>

#include "cadec/ca.hpp"
#include "cadec/decode.hpp"
#include "cadec/rng.hpp"

namespace cadec {

struct CircuitState {
    std::size_t L = 0;
    long long D_L = 0;
    Syndrome syndrome_register; // latest measured syndrome
    Syndrome syndrome_memory;   // previous measured syndrome
    struct Row {
        Syndrome syndrome;          // residual syndrome after r map steps
        CorrectionMask correction;  // accumulated deltas
    };
    std::vector<Row> rows;          // rows[0] newest, rows[D_L-1] next to exit
    CorrectionMask final_correction; // mask applied this step
    Syndrome exit_syndrome;          // residual syndrome emitted with it;
                                     // nonzero marks a failed batch

    bool registers_empty() const;
};

// All registers zero. Requires even L >= 2 (mirrored TLV) and D_L >= 1.
CircuitState circuit_init(std::size_t L, long long D_L);

struct CoSimState {
    CircuitState circuit;
    ChainState truth_chain;        // hidden error pattern; read only via
                                   // boundary() at measurement
    std::deque<ChainState> pending; // injected batches still in flight,
                                    // oldest first; always D_L entries
    long long logical_flip_count = 0;
};

CoSimState cosim_init(std::size_t L, long long D_L);

// One synchronous circuit step against fresh errors e_new:
//   1. measure: truth absorbs e_new; syndrome_register = boundary(truth);
//      staged row = syndrome_register ^ syndrome_memory
//                   ^ boundary(final_correction)  (= boundary(e_new) exactly)
//   2. advance: every row moves down one level through syndrome_delta_step;
//      the bottom row's exit hop lands in final_correction;
//      rows[0] = staged with zero correction; syndrome_memory catches up
//   3. apply: truth absorbs final_correction (returned to the caller)
// A whole-chain flip applied to truth increments logical_flip_count.
CorrectionMask circuit_time_step(CoSimState& cosim, const ChainState& e_new);

struct CircuitRunResult {
    std::optional<long long> t_tff; // step index (1-based) of the first
                                    // batch the pipeline failed to clear
    long long steps_run = 0;        // noise steps injected
    long long batches_exited = 0;
    long long failed_batches = 0;
    long long logical_flips = 0;    // clean whole-chain flips applied
};

// Per-step Bernoulli(p0) noise against the pipeline. Every injected batch is
// judged on exit: clean iff the exit syndrome is zero and the emitted mask
// reproduces the batch or its complement (complement = logical flip).
// Stops at the first failure (after draining the pipeline) unless
// continue_after_failure; horizon caps injected steps.
CircuitRunResult run_circuit_sim(std::size_t L, long long D_L, double p0,
                                 long long horizon, SplitMix& rng,
                                 bool continue_after_failure = false);

struct CircuitTffStats {
    std::size_t L = 0;
    long long D_L = 0;
    double p0 = 0.0;
    long long trials = 0;
    long long censored = 0;         // no failure within horizon
    double mean = 0.0;              // over uncensored; NaN if none
    double stderr_ = 0.0;
    double per_step_fail = 0.0;     // failed batches / exited batches
    double per_step_fail_stderr = 0.0;
    long long total_logical_flips = 0;
    std::vector<long long> samples; // uncensored t_tff in trial order
};

// Independent co-simulations; deterministic for fixed seed at any thread
// count.
CircuitTffStats estimate_circuit_tff(std::size_t L, long long D_L, double p0,
                                     long long trials, long long horizon,
                                     std::uint64_t seed, int threads = 1);

struct Gate {
    enum class Op { In, Out, And, Or, Xor, Not };
    Op op = Op::In;
    std::vector<int> inputs; // ids of earlier gates
};

struct Netlist {
    std::vector<Gate> gates;     // id = position
    std::vector<int> input_ids;  // IN gates in binding order
    std::vector<int> output_ids; // OUT gates in emission order

    // One gate per line: "<id> <AND|OR|XOR|NOT|IN|OUT> <input ids...>".
    std::string to_text() const;
    std::vector<std::uint8_t> evaluate(
        const std::vector<std::uint8_t>& inputs) const;
};

// 3-input majority from 3 AND + 2 OR gates.
Netlist maj3_netlist();

// Combinational form of syndrome_delta_step for even length L: inputs are
// the L-1 syndrome bits; outputs are the L delta bits followed by the L-1
// updated syndrome bits. Built from XOR chains and majority blocks only
// (majority blocks with a constant-zero arm fold to AND).
Netlist row_netlist(std::size_t L);

// Evaluates row_netlist(L) on s; bit-exact with syndrome_delta_step.
DecodeStep gate_level_row_step(const Syndrome& s);

} // namespace cadec

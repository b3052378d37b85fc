#include <cctype>
#include <cmath>
#include <cstdint>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "cadec/circuit.hpp"
#include "cadec/decode.hpp"
#include "cadec/noise.hpp"
#include "cadec/rng.hpp"
#include "doctest.h"

using namespace cadec;

namespace {

RuleSet mirrored_tlv() { return RuleSet::tlv(BoundaryMode::mirrored()); }

ChainState state_from_string(const std::string& bits) {
    ChainState x(bits.size());
    for (std::size_t j = 0; j < bits.size(); ++j)
        if (bits[j] == '1') x.set(j, true);
    return x;
}

Syndrome syndrome_from_mask(std::size_t n, std::uint64_t mask) {
    Syndrome s(n);
    for (std::size_t j = 0; j < n; ++j)
        if ((mask >> j) & 1) s.set(j, true);
    return s;
}

bool same_registers(const CircuitState& a, const CircuitState& b) {
    if (a.L != b.L || a.D_L != b.D_L) return false;
    if (a.syndrome_register != b.syndrome_register) return false;
    if (a.syndrome_memory != b.syndrome_memory) return false;
    if (a.final_correction != b.final_correction) return false;
    if (a.exit_syndrome != b.exit_syndrome) return false;
    if (a.rows.size() != b.rows.size()) return false;
    for (std::size_t r = 0; r < a.rows.size(); ++r) {
        if (a.rows[r].syndrome != b.rows[r].syndrome) return false;
        if (a.rows[r].correction != b.rows[r].correction) return false;
    }
    return true;
}

} // namespace

TEST_CASE("noiseless pipeline is a fixed point") {
    CoSimState cs = cosim_init(10, 5);
    CHECK(cs.circuit.registers_empty());
    const ChainState zero(10);
    for (int call = 1; call <= 20; ++call) {
        const CorrectionMask applied = circuit_time_step(cs, zero);
        CHECK(applied.none());
        CHECK(cs.circuit.exit_syndrome.none());
    }
    CHECK(cs.circuit.registers_empty());
    CHECK(cs.truth_chain.none());
    CHECK(cs.logical_flip_count == 0);
}

TEST_CASE("single batch exits after exactly the pipeline latency") {
    struct Scenario {
        std::string bits;
        long long D_L;
    };
    for (const Scenario& sc :
         {Scenario{"0000111000", 5}, Scenario{"00000001110000000000", 10}}) {
        const ChainState batch = state_from_string(sc.bits);
        const std::size_t L = batch.size();
        CoSimState cs = cosim_init(L, sc.D_L);
        const ChainState zero(L);

        CorrectionMask applied = circuit_time_step(cs, batch);
        CHECK(applied.none());
        for (long long call = 2; call <= sc.D_L; ++call) {
            applied = circuit_time_step(cs, zero);
            CHECK(applied.none());
        }
        applied = circuit_time_step(cs, zero);
        CHECK(applied == batch);
        CHECK(cs.circuit.exit_syndrome.none());
        CHECK(cs.truth_chain.none());
        CHECK(cs.logical_flip_count == 0);

        for (long long call = 0; call < sc.D_L; ++call)
            CHECK(circuit_time_step(cs, zero).none());
        CHECK(cs.circuit.registers_empty());
    }
}

TEST_CASE("all-ones batch exits as an invisible logical flip") {
    const std::size_t L = 10;
    const long long D_L = 5;
    CoSimState cs = cosim_init(L, D_L);
    ChainState ones(L);
    ones = ones.complement();

    CorrectionMask applied = circuit_time_step(cs, ones);
    for (long long call = 2; call <= D_L + 1; ++call)
        applied = circuit_time_step(cs, ChainState(L));

    // The flooded batch has a zero syndrome, so the pipeline emits the
    // complement correction (nothing) and the truth chain stays flipped.
    CHECK(applied.none());
    CHECK(cs.circuit.exit_syndrome.none());
    CHECK(cs.logical_flip_count == 1);
    CHECK(cs.truth_chain.all());
}

TEST_CASE("complementary batches drive identical registers") {
    const ChainState batch = state_from_string("0110010000");
    const std::size_t L = batch.size();
    const long long D_L = 6;
    CoSimState a = cosim_init(L, D_L);
    CoSimState b = cosim_init(L, D_L);
    const ChainState zero(L);

    CorrectionMask applied_a = circuit_time_step(a, batch);
    CorrectionMask applied_b = circuit_time_step(b, batch.complement());
    CHECK(same_registers(a.circuit, b.circuit));
    for (long long call = 2; call <= D_L + 3; ++call) {
        applied_a = circuit_time_step(a, zero);
        applied_b = circuit_time_step(b, zero);
        CHECK(applied_a == applied_b);
        CHECK(same_registers(a.circuit, b.circuit));
    }
    CHECK(a.truth_chain.none());
    CHECK(a.logical_flip_count == 0);
    CHECK(b.truth_chain.all());
    CHECK(b.logical_flip_count == 1);
}

TEST_CASE("three-input majority netlist") {
    const Netlist net = maj3_netlist();
    CHECK(net.gates.size() == 9);
    CHECK(net.input_ids.size() == 3);
    CHECK(net.output_ids.size() == 1);
    for (int a = 0; a <= 1; ++a)
        for (int b = 0; b <= 1; ++b)
            for (int c = 0; c <= 1; ++c) {
                const auto out = net.evaluate(
                    {static_cast<std::uint8_t>(a), static_cast<std::uint8_t>(b),
                     static_cast<std::uint8_t>(c)});
                REQUIRE(out.size() == 1);
                CHECK(out[0] == (a + b + c >= 2 ? 1 : 0));
            }
}

TEST_CASE("netlist text is topologically ordered") {
    const std::set<std::string> ops = {"AND", "OR", "XOR", "NOT", "IN", "OUT"};
    for (const Netlist& net : {maj3_netlist(), row_netlist(8)}) {
        std::istringstream text(net.to_text());
        std::string line;
        int expect_id = 0;
        while (std::getline(text, line)) {
            std::istringstream fields(line);
            int id = -1;
            std::string op;
            const bool has_header = static_cast<bool>(fields >> id >> op);
            REQUIRE(has_header);
            CHECK(id == expect_id);
            CHECK(ops.count(op) == 1);
            int in;
            while (fields >> in) {
                CHECK(in >= 0);
                CHECK(in < id);
            }
            ++expect_id;
        }
        CHECK(expect_id == static_cast<int>(net.gates.size()));
    }
    CHECK(row_netlist(8).to_text().rfind("0 IN", 0) == 0);
    CHECK(row_netlist(8).gates.size() == 77);
}

TEST_CASE("row netlist matches the syndrome automaton exhaustively") {
    const std::size_t L = 12;
    const RuleSet rules = mirrored_tlv();
    const Netlist net = row_netlist(L);
    REQUIRE(net.input_ids.size() == L - 1);
    REQUIRE(net.output_ids.size() == L + L - 1);

    for (std::uint64_t mask = 0; mask < (1u << (L - 1)); ++mask) {
        const Syndrome s = syndrome_from_mask(L - 1, mask);
        const DecodeStep want = syndrome_delta_step(s, rules);

        std::vector<std::uint8_t> in(L - 1);
        for (std::size_t j = 0; j < L - 1; ++j) in[j] = s.get(j) ? 1 : 0;
        const auto out = net.evaluate(in);
        for (std::size_t j = 0; j < L; ++j)
            REQUIRE(out[j] == (want.delta.get(j) ? 1 : 0));
        for (std::size_t j = 0; j < L - 1; ++j)
            REQUIRE(out[L + j] == (want.new_syndrome.get(j) ? 1 : 0));
    }
}

TEST_CASE("gate-level step matches the packed step on long chains") {
    const std::size_t L = 200;
    const RuleSet rules = mirrored_tlv();
    SplitMix rng = make_trial_rng(18, 0, 0);
    for (int rep = 0; rep < 50; ++rep) {
        Syndrome s(L - 1);
        for (std::size_t j = 0; j < L - 1; ++j)
            if (rng.next() & 1) s.set(j, true);
        const DecodeStep want = syndrome_delta_step(s, rules);
        const DecodeStep got = gate_level_row_step(s);
        REQUIRE(got.delta == want.delta);
        REQUIRE(got.new_syndrome == want.new_syndrome);
    }
}

TEST_CASE("circuit simulation accounting") {
    SplitMix r1 = make_trial_rng(44, 0, 0);
    SplitMix r2 = make_trial_rng(44, 0, 0);
    const CircuitRunResult a = run_circuit_sim(20, 5, 0.25, 400, r1, true);
    const CircuitRunResult b = run_circuit_sim(20, 5, 0.25, 400, r2, true);
    CHECK(a.t_tff == b.t_tff);
    CHECK(a.steps_run == b.steps_run);
    CHECK(a.batches_exited == b.batches_exited);
    CHECK(a.failed_batches == b.failed_batches);
    CHECK(a.logical_flips == b.logical_flips);

    // continue_after_failure judges every injected batch, drain included.
    CHECK(a.steps_run == 400);
    CHECK(a.batches_exited == 400);
    CHECK(a.failed_batches >= 1);
    REQUIRE(a.t_tff.has_value());
    CHECK(*a.t_tff >= 1);
    CHECK(*a.t_tff <= a.steps_run);

    SplitMix r3 = make_trial_rng(44, 0, 0);
    const CircuitRunResult first = run_circuit_sim(20, 5, 0.25, 400, r3);
    CHECK(first.t_tff == a.t_tff);
    CHECK(first.failed_batches == 1);
    CHECK(first.batches_exited <= a.batches_exited);

    SplitMix r4 = make_trial_rng(44, 0, 1);
    const CircuitRunResult quiet = run_circuit_sim(20, 5, 0.0, 50, r4);
    CHECK(!quiet.t_tff.has_value());
    CHECK(quiet.failed_batches == 0);
    CHECK(quiet.batches_exited == 50);
    CHECK(quiet.logical_flips == 0);
}

TEST_CASE("circuit tff sweep is deterministic and censor-aware") {
    const CircuitTffStats one = estimate_circuit_tff(20, 5, 0.25, 200, 2000, 7, 1);
    const CircuitTffStats two = estimate_circuit_tff(20, 5, 0.25, 200, 2000, 7, 2);
    CHECK(one.censored == two.censored);
    CHECK(one.samples == two.samples);
    CHECK(one.total_logical_flips == two.total_logical_flips);
    CHECK(((one.mean == two.mean) ||
           (std::isnan(one.mean) && std::isnan(two.mean))));
    CHECK(((one.stderr_ == two.stderr_) ||
           (std::isnan(one.stderr_) && std::isnan(two.stderr_))));
    CHECK(one.per_step_fail == two.per_step_fail);

    CHECK(one.censored + static_cast<long long>(one.samples.size()) ==
          one.trials);
    if (!one.samples.empty()) {
        long long sum = 0;
        for (long long s : one.samples) sum += s;
        CHECK(one.mean ==
              doctest::Approx(static_cast<double>(sum) / one.samples.size())
                  .epsilon(1e-12));
    }

    const CircuitTffStats silent = estimate_circuit_tff(12, 3, 0.0, 20, 100, 7);
    CHECK(silent.censored == 20);
    CHECK(silent.samples.empty());
    CHECK(std::isnan(silent.mean));
    CHECK(silent.total_logical_flips == 0);
    CHECK(silent.per_step_fail == 0.0);
}

TEST_CASE("circuit construction rejects invalid shapes") {
    CHECK_THROWS_AS(circuit_init(11, 5), std::invalid_argument);
    CHECK_THROWS_AS(circuit_init(10, 0), std::invalid_argument);
    CHECK_THROWS_AS(circuit_init(0, 1), std::invalid_argument);
    CHECK_NOTHROW(circuit_init(10, 1));
}

#include <benchmark/benchmark.h>

#include "cadec/ca.hpp"
#include "cadec/circuit.hpp"
#include "cadec/decode.hpp"
#include "cadec/noise.hpp"
#include "cadec/rng.hpp"

namespace {

using namespace cadec;

RuleSet mirrored_tlv() { return RuleSet::tlv(BoundaryMode::mirrored()); }

ChainState random_state(std::size_t L, double density, std::uint64_t key) {
    SplitMix rng = make_trial_rng(key, 0, 0);
    return sample_bernoulli(L, density, rng);
}

void bm_step(benchmark::State& state) {
    const std::size_t L = static_cast<std::size_t>(state.range(0));
    const RuleSet rules = mirrored_tlv();
    ChainState x = random_state(L, 0.3, 1);
    ChainState buf(L);
    for (auto _ : state) {
        step_into(x, rules, buf);
        std::swap(x, buf);
        benchmark::DoNotOptimize(x);
    }
    state.SetItemsProcessed(state.iterations() * static_cast<long long>(L));
}

void bm_syndrome_delta_step(benchmark::State& state) {
    const std::size_t L = static_cast<std::size_t>(state.range(0));
    const RuleSet rules = mirrored_tlv();
    Syndrome s = boundary(random_state(L, 0.3, 2));
    for (auto _ : state) {
        DecodeStep d = syndrome_delta_step(s, rules);
        benchmark::DoNotOptimize(d);
        s = std::move(d.new_syndrome);
    }
    state.SetItemsProcessed(state.iterations() * static_cast<long long>(L));
}

void bm_global_majority_decode(benchmark::State& state) {
    const std::size_t L = static_cast<std::size_t>(state.range(0));
    const Syndrome s = boundary(random_state(L, 0.3, 3));
    for (auto _ : state) {
        CorrectionMask m = global_majority_decode(s);
        benchmark::DoNotOptimize(m);
    }
    state.SetItemsProcessed(state.iterations() * static_cast<long long>(L));
}

void bm_decode_trial(benchmark::State& state) {
    const std::size_t L = static_cast<std::size_t>(state.range(0));
    const double p0 = 0.2;
    const long long cap = TMaxPolicy::unbounded().resolve(L);
    std::uint64_t trial = 0;
    for (auto _ : state) {
        SplitMix rng = make_trial_rng(4, 0, trial++);
        TrialOutcome o = run_decode_trial(L, p0, cap, rng);
        benchmark::DoNotOptimize(o);
    }
    state.SetItemsProcessed(state.iterations());
}

void bm_circuit_time_step(benchmark::State& state) {
    const std::size_t L = static_cast<std::size_t>(state.range(0));
    const long long D_L = 10;
    CoSimState cs = cosim_init(L, D_L);
    SplitMix rng = make_trial_rng(5, 0, 0);
    const Bernoulli ber(0.05);
    ChainState noise(L);
    for (auto _ : state) {
        state.PauseTiming();
        noise.clear();
        for (std::size_t j = 0; j < L; ++j)
            if (ber(rng)) noise.set(j, true);
        state.ResumeTiming();
        CorrectionMask applied = circuit_time_step(cs, noise);
        benchmark::DoNotOptimize(applied);
    }
    state.SetItemsProcessed(state.iterations());
}

BENCHMARK(bm_step)->Arg(1000)->Arg(100000);
BENCHMARK(bm_syndrome_delta_step)->Arg(1000)->Arg(100000);
BENCHMARK(bm_global_majority_decode)->Arg(1000)->Arg(100000);
BENCHMARK(bm_decode_trial)->Arg(1000);
BENCHMARK(bm_circuit_time_step)->Arg(100)->Arg(1000);

} // namespace

BENCHMARK_MAIN();

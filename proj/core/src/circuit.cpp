#include "cadec/circuit.hpp"

#include "cadec/noise.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <map>
#include <stdexcept>
#include <thread>
#include <tuple>

namespace cadec {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

RuleSet mirrored_tlv() { return RuleSet::tlv(BoundaryMode::mirrored()); }

void parallel_ranges(long long trials, int threads,
                     const std::function<void(long long, long long)>& fn) {
    const int n = std::max(1, threads);
    if (n == 1 || trials < 2) {
        fn(0, trials);
        return;
    }
    const long long chunk = (trials + n - 1) / n;
    std::vector<std::thread> pool;
    for (int w = 0; w < n; ++w) {
        const long long t0 = std::min<long long>(trials, w * chunk);
        const long long t1 = std::min<long long>(trials, t0 + chunk);
        if (t0 >= t1) break;
        pool.emplace_back(fn, t0, t1);
    }
    for (auto& t : pool) t.join();
}

} // namespace

bool CircuitState::registers_empty() const {
    if (!syndrome_register.none() || !syndrome_memory.none()) return false;
    if (!final_correction.none() || !exit_syndrome.none()) return false;
    for (const Row& r : rows)
        if (!r.syndrome.none() || !r.correction.none()) return false;
    return true;
}

CircuitState circuit_init(std::size_t L, long long D_L) {
    validate(mirrored_tlv(), L);
    if (D_L < 1) throw std::invalid_argument("circuit_init: D_L < 1");
    CircuitState c;
    c.L = L;
    c.D_L = D_L;
    c.syndrome_register = Syndrome(L - 1);
    c.syndrome_memory = Syndrome(L - 1);
    c.rows.assign(static_cast<std::size_t>(D_L),
                  {Syndrome(L - 1), CorrectionMask(L)});
    c.final_correction = CorrectionMask(L);
    c.exit_syndrome = Syndrome(L - 1);
    return c;
}

CoSimState cosim_init(std::size_t L, long long D_L) {
    CoSimState cs;
    cs.circuit = circuit_init(L, D_L);
    cs.truth_chain = ChainState(L);
    cs.pending.assign(static_cast<std::size_t>(D_L), ChainState(L));
    return cs;
}

CorrectionMask circuit_time_step(CoSimState& cosim, const ChainState& e_new) {
    CircuitState& c = cosim.circuit;
    if (e_new.size() != c.L)
        throw std::invalid_argument("circuit_time_step: noise width mismatch");
    if (cosim.pending.size() != static_cast<std::size_t>(c.D_L))
        throw std::invalid_argument(
            "circuit_time_step: co-simulation batch queue out of sync");
    const RuleSet rules = mirrored_tlv();
    const std::size_t D = static_cast<std::size_t>(c.D_L);

    // Substep 1: measure. The staged row equals boundary(e_new) exactly:
    // previous corrections cancel against syndrome_memory and the boundary
    // of the mask they applied.
    cosim.truth_chain ^= e_new;
    c.syndrome_register = boundary(cosim.truth_chain);
    Syndrome staged = c.syndrome_register;
    staged ^= c.syndrome_memory;
    staged ^= boundary(c.final_correction);

    // Substep 2: advance. The bottom row's exit hop is its D_L-th map
    // application; everything else shifts down one level.
    const DecodeStep exit_step =
        syndrome_delta_step(c.rows[D - 1].syndrome, rules);
    CorrectionMask exit_corr = c.rows[D - 1].correction;
    exit_corr ^= exit_step.delta;
    c.exit_syndrome = exit_step.new_syndrome;
    for (std::size_t r = D - 1; r >= 1; --r) {
        const DecodeStep st =
            syndrome_delta_step(c.rows[r - 1].syndrome, rules);
        c.rows[r].syndrome = st.new_syndrome;
        c.rows[r].correction = c.rows[r - 1].correction;
        c.rows[r].correction ^= st.delta;
    }
    c.rows[0].syndrome = std::move(staged);
    c.rows[0].correction = CorrectionMask(c.L);
    c.syndrome_memory = c.syndrome_register;
    c.final_correction = std::move(exit_corr);

    // Substep 3: apply.
    cosim.truth_chain ^= c.final_correction;

    cosim.pending.push_back(e_new);
    const ChainState exited = std::move(cosim.pending.front());
    cosim.pending.pop_front();
    if (c.exit_syndrome.none() &&
        c.final_correction == exited.complement())
        ++cosim.logical_flip_count;

    return c.final_correction;
}

CircuitRunResult run_circuit_sim(std::size_t L, long long D_L, double p0,
                                 long long horizon, SplitMix& rng,
                                 bool continue_after_failure) {
    if (horizon < 1)
        throw std::invalid_argument("run_circuit_sim: horizon < 1");
    CoSimState cs = cosim_init(L, D_L);
    CircuitRunResult res;

    // A batch fails unless its emitted mask reproduces it exactly with a
    // clean exit syndrome: complement exits (logical flips), residual
    // syndromes, and overtime all count.
    const auto judge_exit = [&](long long batch_step, const ChainState& batch,
                                const CorrectionMask& applied) {
        ++res.batches_exited;
        const bool failed =
            !cs.circuit.exit_syndrome.none() || applied != batch;
        if (failed) {
            ++res.failed_batches;
            if (!res.t_tff) res.t_tff = batch_step;
        }
        return failed;
    };

    bool stop = false;
    for (long long t = 1; t <= horizon && !stop; ++t) {
        const ChainState e = sample_bernoulli(L, p0, rng);
        const ChainState exiting = cs.pending.front();
        const CorrectionMask applied = circuit_time_step(cs, e);
        ++res.steps_run;
        if (t > D_L) {
            const bool failed = judge_exit(t - D_L, exiting, applied);
            if (failed && !continue_after_failure) stop = true;
        }
    }
    if (!stop) {
        // Drain: flush in-flight batches with zero noise.
        const ChainState zero(L);
        const long long last = res.steps_run;
        for (long long d = 1; d <= D_L; ++d) {
            const long long batch_step = last - D_L + d;
            if (batch_step < 1) {
                circuit_time_step(cs, zero);
                continue;
            }
            const ChainState exiting = cs.pending.front();
            const CorrectionMask applied = circuit_time_step(cs, zero);
            const bool failed = judge_exit(batch_step, exiting, applied);
            if (failed && !continue_after_failure) break;
        }
    }
    res.logical_flips = cs.logical_flip_count;
    return res;
}

CircuitTffStats estimate_circuit_tff(std::size_t L, long long D_L, double p0,
                                     long long trials, long long horizon,
                                     std::uint64_t seed, int threads) {
    if (trials < 1)
        throw std::invalid_argument("estimate_circuit_tff: trials < 1");
    CircuitTffStats st;
    st.L = L;
    st.D_L = D_L;
    st.p0 = p0;
    st.trials = trials;

    std::vector<long long> per_trial(static_cast<std::size_t>(trials), -1);
    std::vector<long long> exited(static_cast<std::size_t>(trials), 0);
    std::vector<long long> failed(static_cast<std::size_t>(trials), 0);
    std::vector<long long> flips(static_cast<std::size_t>(trials), 0);
    parallel_ranges(trials, threads, [&](long long t0, long long t1) {
        for (long long t = t0; t < t1; ++t) {
            SplitMix rng =
                make_trial_rng(seed, 0, static_cast<std::uint64_t>(t));
            const CircuitRunResult r =
                run_circuit_sim(L, D_L, p0, horizon, rng);
            const std::size_t i = static_cast<std::size_t>(t);
            per_trial[i] = r.t_tff.value_or(-1);
            exited[i] = r.batches_exited;
            failed[i] = r.failed_batches;
            flips[i] = r.logical_flips;
        }
    });

    long long sum = 0, total_exited = 0, total_failed = 0;
    unsigned __int128 sumsq = 0;
    for (std::size_t i = 0; i < per_trial.size(); ++i) {
        total_exited += exited[i];
        total_failed += failed[i];
        st.total_logical_flips += flips[i];
        if (per_trial[i] < 0) {
            ++st.censored;
            continue;
        }
        st.samples.push_back(per_trial[i]);
        sum += per_trial[i];
        sumsq += static_cast<unsigned __int128>(per_trial[i]) *
                 static_cast<unsigned __int128>(per_trial[i]);
    }
    const long long n = static_cast<long long>(st.samples.size());
    if (n >= 1) {
        st.mean = static_cast<double>(sum) / static_cast<double>(n);
        if (n >= 2) {
            const double var = (static_cast<double>(sumsq) -
                                static_cast<double>(n) * st.mean * st.mean) /
                               (n - 1.0);
            st.stderr_ =
                std::sqrt(std::max(var, 0.0) / static_cast<double>(n));
        } else {
            st.stderr_ = kNaN;
        }
    } else {
        st.mean = kNaN;
        st.stderr_ = kNaN;
    }
    if (total_exited > 0) {
        st.per_step_fail =
            static_cast<double>(total_failed) / total_exited;
        st.per_step_fail_stderr =
            std::sqrt(st.per_step_fail * (1.0 - st.per_step_fail) /
                      static_cast<double>(total_exited));
    } else {
        st.per_step_fail = kNaN;
        st.per_step_fail_stderr = kNaN;
    }
    return st;
}

namespace {

const char* op_name(Gate::Op op) {
    switch (op) {
        case Gate::Op::In: return "IN";
        case Gate::Op::Out: return "OUT";
        case Gate::Op::And: return "AND";
        case Gate::Op::Or: return "OR";
        case Gate::Op::Xor: return "XOR";
        case Gate::Op::Not: return "NOT";
    }
    return "?";
}

struct NetBuilder {
    Netlist net;
    // Structural sharing for binary And/Or/Xor (all commutative).
    std::map<std::tuple<Gate::Op, int, int>, int> memo;

    int add(Gate::Op op, std::vector<int> inputs) {
        for (const int i : inputs)
            if (i < 0 || i >= static_cast<int>(net.gates.size()))
                throw std::logic_error("netlist: forward reference");
        const bool shareable = inputs.size() == 2 && op != Gate::Op::Out;
        std::tuple<Gate::Op, int, int> key{
            op, shareable ? std::min(inputs[0], inputs[1]) : 0,
            shareable ? std::max(inputs[0], inputs[1]) : 0};
        if (shareable) {
            const auto it = memo.find(key);
            if (it != memo.end()) return it->second;
        }
        net.gates.push_back({op, std::move(inputs)});
        const int id = static_cast<int>(net.gates.size()) - 1;
        if (shareable) memo.emplace(key, id);
        return id;
    }

    int add_in() {
        const int id = add(Gate::Op::In, {});
        net.input_ids.push_back(id);
        return id;
    }

    void add_out(int src) { net.output_ids.push_back(add(Gate::Op::Out, {src})); }

    // XOR of the given nets after pairwise cancellation; -1 = constant 0.
    int xor_net(std::vector<int> terms) {
        std::sort(terms.begin(), terms.end());
        std::vector<int> kept;
        for (std::size_t i = 0; i < terms.size();) {
            std::size_t j = i;
            while (j < terms.size() && terms[j] == terms[i]) ++j;
            if ((j - i) % 2) kept.push_back(terms[i]);
            i = j;
        }
        if (kept.empty()) return -1;
        int acc = kept[0];
        for (std::size_t i = 1; i < kept.size(); ++i)
            acc = add(Gate::Op::Xor, {acc, kept[i]});
        return acc;
    }

    // Majority of three nets; constant-zero arms fold the block down.
    int maj_net(int a, int b, int c, int const0) {
        std::vector<int> live;
        for (const int v : {a, b, c})
            if (v >= 0) live.push_back(v);
        // Two equal arms decide the vote outright.
        if (live.size() >= 2 && live[0] == live[1]) return live[0];
        if (live.size() == 3) {
            if (live[0] == live[2] || live[1] == live[2]) return live[2];
            const int ab = add(Gate::Op::And, {live[0], live[1]});
            const int ac = add(Gate::Op::And, {live[0], live[2]});
            const int bc = add(Gate::Op::And, {live[1], live[2]});
            const int o1 = add(Gate::Op::Or, {ab, ac});
            return add(Gate::Op::Or, {o1, bc});
        }
        if (live.size() == 2) return add(Gate::Op::And, {live[0], live[1]});
        return const0; // at most one live arm can never reach majority
    }
};

} // namespace

std::string Netlist::to_text() const {
    std::string out;
    for (std::size_t id = 0; id < gates.size(); ++id) {
        out += std::to_string(id);
        out += ' ';
        out += op_name(gates[id].op);
        for (const int i : gates[id].inputs) {
            out += ' ';
            out += std::to_string(i);
        }
        out += '\n';
    }
    return out;
}

std::vector<std::uint8_t> Netlist::evaluate(
    const std::vector<std::uint8_t>& inputs) const {
    if (inputs.size() != input_ids.size())
        throw std::invalid_argument("netlist: input arity mismatch");
    std::vector<std::uint8_t> val(gates.size(), 0);
    std::size_t next_in = 0;
    for (std::size_t id = 0; id < gates.size(); ++id) {
        const Gate& g = gates[id];
        switch (g.op) {
            case Gate::Op::In:
                val[id] = inputs[next_in++] ? 1 : 0;
                break;
            case Gate::Op::Out:
                val[id] = val[static_cast<std::size_t>(g.inputs.at(0))];
                break;
            case Gate::Op::Not:
                val[id] =
                    val[static_cast<std::size_t>(g.inputs.at(0))] ? 0 : 1;
                break;
            case Gate::Op::And: {
                std::uint8_t v = 1;
                for (const int i : g.inputs)
                    v &= val[static_cast<std::size_t>(i)];
                val[id] = v;
                break;
            }
            case Gate::Op::Or: {
                std::uint8_t v = 0;
                for (const int i : g.inputs)
                    v |= val[static_cast<std::size_t>(i)];
                val[id] = v;
                break;
            }
            case Gate::Op::Xor: {
                std::uint8_t v = 0;
                for (const int i : g.inputs)
                    v ^= val[static_cast<std::size_t>(i)];
                val[id] = v;
                break;
            }
        }
    }
    std::vector<std::uint8_t> out;
    out.reserve(output_ids.size());
    for (const int id : output_ids)
        out.push_back(val[static_cast<std::size_t>(id)]);
    return out;
}

Netlist maj3_netlist() {
    NetBuilder b;
    const int x = b.add_in(), y = b.add_in(), z = b.add_in();
    const int xy = b.add(Gate::Op::And, {x, y});
    const int xz = b.add(Gate::Op::And, {x, z});
    const int yz = b.add(Gate::Op::And, {y, z});
    const int o1 = b.add(Gate::Op::Or, {xy, xz});
    const int o2 = b.add(Gate::Op::Or, {o1, yz});
    b.add_out(o2);
    return std::move(b.net);
}

Netlist row_netlist(std::size_t L) {
    validate(mirrored_tlv(), L);
    const long long n_s = static_cast<long long>(L) - 1;
    NetBuilder b;
    std::vector<int> in(static_cast<std::size_t>(n_s));
    for (long long j = 0; j < n_s; ++j)
        in[static_cast<std::size_t>(j)] = b.add_in();

    // Extended syndrome index -> input net, or -1 for a wall bond (0).
    const auto resolve = [&](long long q) -> int {
        while (true) {
            if (q >= 0 && q < n_s) return in[static_cast<std::size_t>(q)];
            if (q == -1 || q == n_s) return -1;
            if (q < -1)
                q = -2 - q;
            else
                q = 2 * n_s - q;
        }
    };
    const auto xor_of = [&](std::initializer_list<long long> qs) {
        std::vector<int> terms;
        for (const long long q : qs) {
            const int id = resolve(q);
            if (id >= 0) terms.push_back(id);
        }
        return b.xor_net(terms);
    };

    // Constant-zero net, needed only if a whole majority block folds away.
    int const0 = -1;
    const auto get_const0 = [&]() {
        if (const0 < 0) const0 = b.add(Gate::Op::Xor, {in[0], in[0]});
        return const0;
    };

    std::vector<int> delta(L);
    for (long long n = 0; n < static_cast<long long>(L); ++n) {
        int a, bb, cc;
        if (n % 2 == 0) { // paper-odd site
            a = xor_of({n});
            bb = xor_of({n - 1, n - 2});
            cc = xor_of({n - 1, n - 2, n - 3, n - 4});
        } else { // paper-even site
            a = xor_of({n - 1});
            bb = xor_of({n, n + 1});
            cc = xor_of({n, n + 1, n + 2, n + 3});
        }
        int net;
        if ((a < 0) + (bb < 0) + (cc < 0) >= 2)
            net = get_const0();
        else
            net = b.maj_net(a, bb, cc, -1);
        delta[static_cast<std::size_t>(n)] = net;
    }
    for (long long n = 0; n < static_cast<long long>(L); ++n)
        b.add_out(delta[static_cast<std::size_t>(n)]);
    for (long long j = 0; j < n_s; ++j)
        b.add_out(b.xor_net({in[static_cast<std::size_t>(j)],
                             delta[static_cast<std::size_t>(j)],
                             delta[static_cast<std::size_t>(j) + 1]}));
    return std::move(b.net);
}

DecodeStep gate_level_row_step(const Syndrome& s) {
    const std::size_t L = s.size() + 1;
    const Netlist net = row_netlist(L);
    std::vector<std::uint8_t> inputs(s.size());
    for (std::size_t j = 0; j < s.size(); ++j) inputs[j] = s.get(j) ? 1 : 0;
    const std::vector<std::uint8_t> out = net.evaluate(inputs);
    DecodeStep step{CorrectionMask(L), Syndrome(L - 1)};
    for (std::size_t n = 0; n < L; ++n) step.delta.set(n, out[n] != 0);
    for (std::size_t j = 0; j + 1 < L; ++j)
        step.new_syndrome.set(j, out[L + j] != 0);
    return step;
}

} // namespace cadec

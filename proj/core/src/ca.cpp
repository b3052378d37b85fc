#include "cadec/ca.hpp"

#include <algorithm>
#include <stdexcept>
#include <string>
#include <unordered_set>
#include <utility>

namespace cadec {

namespace {

constexpr std::uint64_t kInternalEven = 0x5555555555555555ull; // j even
constexpr std::uint64_t kInternalOdd = 0xaaaaaaaaaaaaaaaaull;  // j odd

inline bool maj3(bool a, bool b, bool c) {
    return (a && b) || (a && c) || (b && c);
}

// 0-based cell read with out-of-range indices resolved per boundary.
bool cell_value(const ChainState& x, long long j, const BoundaryMode& b) {
    const long long L = static_cast<long long>(x.size());
    switch (b.kind) {
        case BoundaryMode::Kind::OpenWindow:
            if (j < 0 || j >= L) return b.background;
            return x.get(static_cast<std::size_t>(j));
        case BoundaryMode::Kind::Periodic: {
            j %= L;
            if (j < 0) j += L;
            return x.get(static_cast<std::size_t>(j));
        }
        case BoundaryMode::Kind::Mirrored:
        default:
            while (j < 0 || j >= L) {
                if (j < 0)
                    j = -1 - j;
                else
                    j = 2 * L - 1 - j;
            }
            return x.get(static_cast<std::size_t>(j));
    }
}

// g[j] = x[j+d]; the ≤|d| out-of-range bits per end are resolved scalar.
void gather(const ChainState& x, int d, const BoundaryMode& b, BitVec& g) {
    const std::size_t W = x.word_count();
    const long long L = static_cast<long long>(x.size());
    if (d > 0) {
        for (std::size_t w = 0; w < W; ++w) {
            std::uint64_t v = x.word(w) >> d;
            if (w + 1 < W) v |= x.word(w + 1) << (64 - d);
            g.set_word(w, v);
        }
        for (long long j = std::max<long long>(0, L - d); j < L; ++j)
            g.set(static_cast<std::size_t>(j), cell_value(x, j + d, b));
    } else {
        const int s = -d;
        for (std::size_t w = W; w-- > 0;) {
            std::uint64_t v = x.word(w) << s;
            if (w > 0) v |= x.word(w - 1) >> (64 - s);
            g.set_word(w, v);
        }
        for (long long j = 0; j < std::min<long long>(s, L); ++j)
            g.set(static_cast<std::size_t>(j), cell_value(x, j + d, b));
    }
}

struct Scratch {
    BitVec g0, g1, g2, g3, g4, g5;

    void resize(std::size_t n) {
        if (g0.size() != n) {
            g0 = BitVec(n);
            g1 = BitVec(n);
            g2 = BitVec(n);
            g3 = BitVec(n);
            g4 = BitVec(n);
            g5 = BitVec(n);
        }
    }
};

Scratch& scratch_for(std::size_t n) {
    thread_local Scratch s;
    s.resize(n);
    return s;
}

void tlv_step_packed(const ChainState& x, const BoundaryMode& b,
                     ChainState& out) {
    Scratch& s = scratch_for(x.size());
    gather(x, -1, b, s.g0); // paper-even lane: x_{i-1}
    gather(x, +2, b, s.g1); //                  x_{i+2}
    gather(x, +4, b, s.g2); //                  x_{i+4}
    gather(x, +1, b, s.g3); // paper-odd lane:  x_{i+1}
    gather(x, -2, b, s.g4); //                  x_{i-2}
    gather(x, -4, b, s.g5); //                  x_{i-4}
    const std::size_t W = x.word_count();
    for (std::size_t w = 0; w < W; ++w) {
        const std::uint64_t a = s.g0.word(w), c = s.g1.word(w),
                            e = s.g2.word(w);
        const std::uint64_t p = s.g3.word(w), q = s.g4.word(w),
                            r = s.g5.word(w);
        // paper-even sites sit at internal odd indices and vice versa
        const std::uint64_t even_lane = (a & c) | (a & e) | (c & e);
        const std::uint64_t odd_lane = (p & q) | (p & r) | (q & r);
        out.set_word(w, (even_lane & kInternalOdd) | (odd_lane & kInternalEven));
    }
}

void gkl_step_packed(const ChainState& x, const BoundaryMode& b,
                     ChainState& out) {
    Scratch& s = scratch_for(x.size());
    gather(x, -1, b, s.g0);
    gather(x, -3, b, s.g1);
    gather(x, +1, b, s.g2);
    gather(x, +3, b, s.g3);
    const std::size_t W = x.word_count();
    for (std::size_t w = 0; w < W; ++w) {
        const std::uint64_t c = x.word(w);
        out.set_word(w, (~c & s.g0.word(w) & s.g1.word(w)) |
                            (c & (s.g2.word(w) | s.g3.word(w))));
    }
}

} // namespace

void validate(const RuleSet& rules, std::size_t L) {
    if (L < 2) throw std::invalid_argument("chain length must be at least 2");
    if (rules.family == RuleFamily::TLV && rules.radius != 4)
        throw std::invalid_argument("TLV requires radius 4");
    if (rules.family == RuleFamily::GKL && rules.radius != 3)
        throw std::invalid_argument("GKL requires radius 3");
    if (rules.family == RuleFamily::GKL &&
        rules.boundary.kind == BoundaryMode::Kind::Mirrored)
        throw std::invalid_argument("GKL has no mirrored-boundary form");
    if (rules.family == RuleFamily::TLV &&
        rules.boundary.kind == BoundaryMode::Kind::Mirrored && (L % 2) != 0)
        throw std::invalid_argument(
            "TLV with mirrored boundaries requires even length "
            "(first site paper-odd, last paper-even)");
    if (rules.boundary.kind == BoundaryMode::Kind::OpenWindow &&
        rules.boundary.padding < 0)
        throw std::invalid_argument("open window padding must be nonnegative");
}

bool tlv_local_rule(const std::array<std::uint8_t, 9>& w, bool paper_even) {
    // window[k] = x_{i-4+k}
    if (paper_even) return maj3(w[3], w[6], w[8]);
    return maj3(w[5], w[2], w[0]);
}

bool gkl_local_rule(const std::array<std::uint8_t, 7>& w, bool center) {
    // window[k] = x_{i-3+k}
    if (center) return maj3(w[3], w[4], w[6]);
    return maj3(w[3], w[2], w[0]);
}

long long resolve_index(long long i, long long L, const BoundaryMode& mode) {
    switch (mode.kind) {
        case BoundaryMode::Kind::OpenWindow:
            return i;
        case BoundaryMode::Kind::Periodic: {
            long long j = (i - 1) % L;
            if (j < 0) j += L;
            return j + 1;
        }
        case BoundaryMode::Kind::Mirrored:
        default:
            while (i < 1 || i > L) {
                if (i < 1)
                    i = 1 - i;
                else
                    i = 2 * L + 1 - i;
            }
            return i;
    }
}

void step_into(const ChainState& state, const RuleSet& rules,
               ChainState& out) {
    validate(rules, state.size());
    if (out.size() != state.size()) out = ChainState(state.size());
    if (rules.family == RuleFamily::TLV)
        tlv_step_packed(state, rules.boundary, out);
    else
        gkl_step_packed(state, rules.boundary, out);
}

ChainState step(const ChainState& state, const RuleSet& rules) {
    ChainState out(state.size());
    step_into(state, rules, out);
    return out;
}

ChainState step_reference(const ChainState& state, const RuleSet& rules) {
    validate(rules, state.size());
    const long long L = static_cast<long long>(state.size());
    ChainState out(state.size());
    if (rules.family == RuleFamily::TLV) {
        for (long long j = 0; j < L; ++j) {
            std::array<std::uint8_t, 9> w{};
            for (int k = 0; k < 9; ++k)
                w[static_cast<std::size_t>(k)] =
                    cell_value(state, j - 4 + k, rules.boundary) ? 1 : 0;
            const bool paper_even = ((j + 1) % 2) == 0;
            out.set(static_cast<std::size_t>(j), tlv_local_rule(w, paper_even));
        }
    } else {
        for (long long j = 0; j < L; ++j) {
            std::array<std::uint8_t, 7> w{};
            for (int k = 0; k < 7; ++k)
                w[static_cast<std::size_t>(k)] =
                    cell_value(state, j - 3 + k, rules.boundary) ? 1 : 0;
            out.set(static_cast<std::size_t>(j),
                    gkl_local_rule(w, w[3] != 0));
        }
    }
    return out;
}

ChainState evolve(ChainState state, const RuleSet& rules, long long t) {
    if (t < 0) throw std::invalid_argument("evolve: negative step count");
    validate(rules, state.size());
    if (rules.boundary.kind == BoundaryMode::Kind::OpenWindow &&
        rules.radius * t > rules.boundary.padding)
        throw std::logic_error(
            "evolve: open-window padding does not cover radius*t");
    ChainState buf(state.size());
    for (long long k = 0; k < t; ++k) {
        step_into(state, rules, buf);
        std::swap(state, buf);
    }
    return state;
}

EvolutionOutcome classify_evolution(const ChainState& state,
                                    const RuleSet& rules, long long cap) {
    validate(rules, state.size());
    if (cap < 1) throw std::invalid_argument("classify_evolution: cap < 1");
    if (rules.boundary.kind == BoundaryMode::Kind::OpenWindow &&
        rules.radius * cap > rules.boundary.padding)
        throw std::logic_error(
            "classify_evolution: open-window padding does not cover the cap");

    using Terminal = EvolutionOutcome::Terminal;
    if (state.none()) return {Terminal::CleanZero, 0, 0, 0};
    if (state.all()) return {Terminal::CleanOne, 0, 0, 0};

    ChainState tortoise = state;
    ChainState hare = state;
    ChainState buf(state.size());
    long long power = 1, lam = 0, t = 0;
    while (t < cap) {
        step_into(hare, rules, buf);
        std::swap(hare, buf);
        ++t;
        ++lam;
        if (hare.none()) return {Terminal::CleanZero, t, 0, 0};
        if (hare.all()) return {Terminal::CleanOne, t, 0, 0};
        if (hare == tortoise) {
            const long long period = lam;
            ChainState a = state;
            ChainState b = evolve(state, rules, period);
            long long entry = 0;
            while (!(a == b)) {
                step_into(a, rules, buf);
                std::swap(a, buf);
                step_into(b, rules, buf);
                std::swap(b, buf);
                ++entry;
            }
            return {Terminal::Cycle, entry + period, period, entry};
        }
        if (power == lam) {
            tortoise = hare;
            power *= 2;
            lam = 0;
        }
    }
    return {Terminal::Timeout, cap, 0, 0};
}

std::vector<ChainState> enumerate_fixed_points(int L, const RuleSet& rules) {
    validate(rules, static_cast<std::size_t>(L));
    std::vector<ChainState> found;
    ChainState y(static_cast<std::size_t>(L));
    if (L <= 24) {
        ChainState x(static_cast<std::size_t>(L));
        const std::uint64_t end = std::uint64_t{1} << L;
        for (std::uint64_t v = 0; v < end; ++v) {
            x.set_word(0, v);
            step_into(x, rules, y);
            if (x == y) found.push_back(x);
        }
    } else {
        std::unordered_set<std::string> seen;
        for (int p = 1; p <= 8; ++p) {
            for (std::uint32_t seed = 0; seed < (1u << p); ++seed) {
                ChainState x(static_cast<std::size_t>(L));
                for (int j = 0; j < L; ++j)
                    if ((seed >> (j % p)) & 1u)
                        x.set(static_cast<std::size_t>(j), true);
                if (!seen.insert(x.to_string()).second) continue;
                step_into(x, rules, y);
                if (x == y) found.push_back(x);
            }
        }
    }
    std::sort(found.begin(), found.end(),
              [](const ChainState& a, const ChainState& b) {
                  return a.to_string() < b.to_string();
              });
    return found;
}

EroderTable measure_eroder(const RuleSet& rules, int l_max) {
    if (l_max < 0) throw std::invalid_argument("measure_eroder: l_max < 0");
    EroderTable table;
    table.m = rules.family == RuleFamily::GKL ? 2 : 1;
    table.rows.push_back({0, 0});
    const int pad = rules.radius * table.m * std::max(l_max, 1);
    RuleSet open = rules;
    open.boundary = BoundaryMode::open_window(pad, false);
    for (int l = 1; l <= l_max; ++l) {
        const std::size_t Lw = static_cast<std::size_t>(l) + 2 * pad;
        ChainState x(Lw), buf(Lw);
        for (int j = 0; j < l; ++j)
            x.set(static_cast<std::size_t>(pad + j), true);
        int t_dec = -1;
        for (int t = 1; t <= table.m * l_max; ++t) {
            step_into(x, open, buf);
            std::swap(x, buf);
            if (x.none()) {
                t_dec = t;
                break;
            }
        }
        if (t_dec < 0)
            throw std::runtime_error(
                "measure_eroder: cluster of diameter " + std::to_string(l) +
                " not erased within m*l_max steps");
        table.rows.push_back({l, t_dec});
    }
    return table;
}

} // namespace cadec

#pragma once

#include <array>
#include <cstdint>
#include <vector>

#include "cadec/bitvec.hpp"

namespace cadec {

// Length-L cell configuration x. Cell value 1 marks an error. Internal
// indices are 0-based; the "paper parity" of a site is the parity of its
// 1-based index, so internal index j has paper parity of j+1.
using ChainState = BitVec;

enum class RuleFamily { TLV, GKL };

struct BoundaryMode {
    enum class Kind { Mirrored, Periodic, OpenWindow };

    Kind kind = Kind::Mirrored;
    // OpenWindow only: guaranteed causal padding width. Evolutions must keep
    // radius·steps ≤ padding; reads past the array return `background`.
    int padding = 0;
    bool background = false;

    static BoundaryMode mirrored() { return {Kind::Mirrored, 0, false}; }
    static BoundaryMode periodic() { return {Kind::Periodic, 0, false}; }
    static BoundaryMode open_window(int padding, bool background = false) {
        return {Kind::OpenWindow, padding, background};
    }
};

struct RuleSet {
    RuleFamily family = RuleFamily::TLV;
    int radius = 4; // TLV: 4 (stretched form), GKL: 3
    BoundaryMode boundary;

    static RuleSet tlv(BoundaryMode b) { return {RuleFamily::TLV, 4, b}; }
    static RuleSet gkl(BoundaryMode b) { return {RuleFamily::GKL, 3, b}; }
};

// Throws std::invalid_argument when (rules, L) is not a supported pairing:
// L < 2, radius/family mismatch, GKL with mirrored boundary, or TLV with
// mirrored boundary at odd L (the first site must be paper-odd and the last
// paper-even to rule out the non-homogeneous fixed points).
void validate(const RuleSet& rules, std::size_t L);

// Stretched two-line-voting rule. `window` holds x_{i-4..i+4} as
// window[0..8]; `paper_even` is the parity of the 1-based site index.
//   paper-even i: maj[x_{i-1}, x_{i+2}, x_{i+4}]
//   paper-odd  i: maj[x_{i+1}, x_{i-2}, x_{i-4}]
bool tlv_local_rule(const std::array<std::uint8_t, 9>& window, bool paper_even);

// Soldiers rule. `window` holds x_{i-3..i+3} as window[0..6]; `center` must
// equal window[3].
//   center 0: maj[x_i, x_{i-1}, x_{i-3}]
//   center 1: maj[x_i, x_{i+1}, x_{i+3}]
bool gkl_local_rule(const std::array<std::uint8_t, 7>& window, bool center);

// Maps a (possibly out-of-range) 1-based site index onto the chain.
// Mirrored: i<1 ↦ 1−i and i>L ↦ 2L+1−i, iterated until in range.
// Periodic: wraps modulo L. OpenWindow: returns i unchanged (reads past the
// array are the caller's background, see BoundaryMode).
long long resolve_index(long long i, long long L, const BoundaryMode& mode);

// One synchronous update of every cell.
ChainState step(const ChainState& state, const RuleSet& rules);

// Same, writing into a preallocated output (no allocation). `out` must have
// the same length as `state` and be a distinct object.
void step_into(const ChainState& state, const RuleSet& rules, ChainState& out);

// Site-by-site evaluation through the public local rules; the oracle the
// word-packed kernels are tested against.
ChainState step_reference(const ChainState& state, const RuleSet& rules);

// t-fold composition of step; evolve(s, r, 0) = s. For OpenWindow asserts
// radius·t ≤ padding.
ChainState evolve(ChainState state, const RuleSet& rules, long long t);

struct EvolutionOutcome {
    enum class Terminal { CleanZero, CleanOne, Cycle, Timeout };

    Terminal terminal = Terminal::Timeout;
    // CleanZero/CleanOne: first step at which the homogeneous state appears.
    // Cycle: entry + period (first completed loop). Timeout: cap.
    long long steps_taken = 0;
    long long period = 0; // Cycle only
    long long entry = 0;  // Cycle only
};

// Classifies the orbit of `state` with constant memory (Brent's teleporting
// two-pointer cycle detection). Homogeneous states are reported the step
// they first appear; Timeout only when `cap` steps pass without a verdict.
EvolutionOutcome classify_evolution(const ChainState& state,
                                    const RuleSet& rules, long long cap);

// Default classification cap for decode trials without a time constraint.
inline long long default_classify_cap(std::size_t L) {
    return 8 * static_cast<long long>(L) + 64;
}

// All states with step(x) = x, sorted by bit string. Exhaustive for
// L ≤ 24; beyond that, candidates are tilings of every seed of spatial
// period ≤ 8 (all known fixed points of both families have period ≤ 4),
// each verified by stepping.
std::vector<ChainState> enumerate_fixed_points(int L, const RuleSet& rules);

struct EroderTable {
    struct Row {
        int l;     // cluster diameter
        int t_dec; // first step at which the window is all-zero
    };
    std::vector<Row> rows;
    int m = 1; // eroder constant: 1 for TLV, 2 for GKL
};

// Erosion time of one contiguous l-cluster on a zero background for each
// l in 0..l_max, evolved on an open window with padding radius·m·l_max.
// Throws std::runtime_error if any cluster survives past m·l_max steps.
EroderTable measure_eroder(const RuleSet& rules, int l_max);

} // namespace cadec

#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <span>

#include "cadec/bitvec.hpp"
#include "cadec/ca.hpp"

namespace cadec {

// Length L-1; entry j is the bond between internal sites j and j+1.
using Syndrome = BitVec;
// Length L; bit j flips internal site j.
using CorrectionMask = BitVec;

// (boundary(x))_j = x_j xor x_{j+1}; identical for x and its complement.
Syndrome boundary(const ChainState& x);

// x xor delta; throws if sizes differ.
ChainState apply_mask(const ChainState& x, const CorrectionMask& delta);

// True iff strictly more ones than zeros; exact ties evaluate to 0.
bool majority(const ChainState& x);

// The minimal-weight preimage of s under boundary(); weight ties keep the
// representative whose first cell is 0.
CorrectionMask global_majority_decode(const Syndrome& s);

struct DecodeStep {
    CorrectionMask delta;
    Syndrome new_syndrome; // boundary(delta) xor old syndrome
};

// One automaton step expressed purely on syndrome data (mirrored TLV only;
// rules without a self-dual form are rejected with std::invalid_argument).
// Input length L-1 for even L >= 2.
DecodeStep syndrome_delta_step(const Syndrome& s, const RuleSet& rules);

// Scalar per-site evaluation of the same map; oracle for the packed kernel.
DecodeStep syndrome_delta_step_reference(const Syndrome& s,
                                         const RuleSet& rules);

// Per-site evaluator for windowed decoding. Receives the site index, the
// syndrome index of slice[0], and only the clipped window content.
using DLocalRule = std::function<bool(
    std::size_t site, std::size_t window_lo, std::span<const std::uint8_t>)>;

// Correction bit i depends only on syndromes with index in
// [i-D-1, i+D] clipped to [0, L-2]: the bonds touching the radius-D
// neighborhood of site i. D >= L-1 exposes the full syndrome.
CorrectionMask d_local_decode(const Syndrome& s, long long D,
                              const DLocalRule& f);

} // namespace cadec

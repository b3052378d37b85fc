#include "cadec/decode.hpp"

#include <algorithm>
#include <array>
#include <bit>
#include <stdexcept>
#include <vector>

namespace cadec {

namespace {

constexpr std::uint64_t kInternalEven = 0x5555555555555555ull; // site j even
constexpr std::uint64_t kInternalOdd = 0xaaaaaaaaaaaaaaaaull;  // site j odd

// Mirrored extension of a syndrome: the bond on each wall carries 0 and
// indices reflect about the walls at -1 and L-1.
bool syndrome_ext(const Syndrome& s, long long q) {
    const long long n = static_cast<long long>(s.size());
    while (true) {
        if (q >= 0 && q < n) return s.get(static_cast<std::size_t>(q));
        if (q == -1 || q == n) return false;
        if (q < -1)
            q = -2 - q;
        else
            q = 2 * n - q;
    }
}

// g[j] = extended syndrome at j+d for j in [0, L); g sized L, s sized L-1.
void gather_ext(const Syndrome& s, int d, BitVec& g) {
    const std::size_t W = g.word_count();
    const long long L = static_cast<long long>(g.size());
    const auto sw = [&](std::size_t w) -> std::uint64_t {
        return w < s.word_count() ? s.word(w) : 0;
    };
    if (d >= 0) {
        for (std::size_t w = 0; w < W; ++w) {
            std::uint64_t v = sw(w);
            if (d > 0) v = (v >> d) | (sw(w + 1) << (64 - d));
            g.set_word(w, v);
        }
        for (long long j = std::max<long long>(0, L - 1 - d); j < L; ++j)
            g.set(static_cast<std::size_t>(j), syndrome_ext(s, j + d));
    } else {
        const int sh = -d;
        for (std::size_t w = W; w-- > 0;) {
            std::uint64_t v = sw(w) << sh;
            if (w > 0) v |= sw(w - 1) >> (64 - sh);
            g.set_word(w, v);
        }
        for (long long j = 0; j < std::min<long long>(sh, L); ++j)
            g.set(static_cast<std::size_t>(j), syndrome_ext(s, j + d));
    }
}

struct DeltaScratch {
    // offsets -4..+3
    std::array<BitVec, 8> g;

    void resize(std::size_t n) {
        if (g[0].size() != n)
            for (auto& v : g) v = BitVec(n);
    }
};

DeltaScratch& delta_scratch(std::size_t n) {
    thread_local DeltaScratch s;
    s.resize(n);
    return s;
}

void require_delta_rules(const RuleSet& rules, std::size_t L) {
    if (rules.family != RuleFamily::TLV ||
        rules.boundary.kind != BoundaryMode::Kind::Mirrored)
        throw std::invalid_argument(
            "syndrome_delta_step: requires the mirrored self-dual rule "
            "family (TLV); no syndrome-only form exists otherwise");
    validate(rules, L);
}

} // namespace

Syndrome boundary(const ChainState& x) {
    if (x.size() < 2)
        throw std::invalid_argument("boundary: chain length must be >= 2");
    Syndrome b(x.size() - 1);
    const std::size_t Wb = b.word_count();
    for (std::size_t w = 0; w < Wb; ++w) {
        std::uint64_t hi = x.word(w) >> 1;
        if (w + 1 < x.word_count()) hi |= x.word(w + 1) << 63;
        b.set_word(w, hi ^ x.word(w));
    }
    return b;
}

ChainState apply_mask(const ChainState& x, const CorrectionMask& delta) {
    if (x.size() != delta.size())
        throw std::invalid_argument("apply_mask: size mismatch");
    return x ^ delta;
}

bool majority(const ChainState& x) { return 2 * x.count() > x.size(); }

CorrectionMask global_majority_decode(const Syndrome& s) {
    const std::size_t L = s.size() + 1;
    CorrectionMask y(L);
    std::uint64_t carry = 0;
    for (std::size_t w = 0; w < y.word_count(); ++w) {
        const std::uint64_t v = w < s.word_count() ? s.word(w) : 0;
        std::uint64_t e = v << 1; // exclusive prefix within the word
        e ^= e << 1;
        e ^= e << 2;
        e ^= e << 4;
        e ^= e << 8;
        e ^= e << 16;
        e ^= e << 32;
        y.set_word(w, e ^ (0 - carry));
        carry ^= static_cast<std::uint64_t>(std::popcount(v)) & 1u;
    }
    if (2 * y.count() > L) y = y.complement();
    return y;
}

DecodeStep syndrome_delta_step(const Syndrome& s, const RuleSet& rules) {
    const std::size_t L = s.size() + 1;
    require_delta_rules(rules, L);
    DeltaScratch& sc = delta_scratch(L);
    for (int d = -4; d <= 3; ++d)
        gather_ext(s, d, sc.g[static_cast<std::size_t>(d + 4)]);
    CorrectionMask delta(L);
    const auto maj_w = [](std::uint64_t a, std::uint64_t b, std::uint64_t c) {
        return (a & b) | (a & c) | (b & c);
    };
    for (std::size_t w = 0; w < delta.word_count(); ++w) {
        const std::uint64_t gm4 = sc.g[0].word(w), gm3 = sc.g[1].word(w),
                            gm2 = sc.g[2].word(w), gm1 = sc.g[3].word(w),
                            g0 = sc.g[4].word(w), g1 = sc.g[5].word(w),
                            g2 = sc.g[6].word(w), g3 = sc.g[7].word(w);
        // site j even = paper-odd: relative x_{i+1}, x_{i-2}, x_{i-4}
        const std::uint64_t be = gm1 ^ gm2;
        const std::uint64_t even_lane = maj_w(g0, be, be ^ gm3 ^ gm4);
        // site j odd = paper-even: relative x_{i-1}, x_{i+2}, x_{i+4}
        const std::uint64_t bo = g0 ^ g1;
        const std::uint64_t odd_lane = maj_w(gm1, bo, bo ^ g2 ^ g3);
        delta.set_word(w,
                       (even_lane & kInternalEven) | (odd_lane & kInternalOdd));
    }
    Syndrome ns = boundary(delta);
    ns ^= s;
    return {std::move(delta), std::move(ns)};
}

DecodeStep syndrome_delta_step_reference(const Syndrome& s,
                                         const RuleSet& rules) {
    const std::size_t L = s.size() + 1;
    require_delta_rules(rules, L);
    CorrectionMask delta(L);
    for (std::size_t n = 0; n < L; ++n) {
        const long long q = static_cast<long long>(n);
        // relative state anchored at 0 on site n, prefix-XOR of bonds
        std::array<std::uint8_t, 9> w{};
        std::uint8_t acc = 0;
        for (int d = 1; d <= 4; ++d) {
            acc ^= syndrome_ext(s, q - d) ? 1 : 0;
            w[static_cast<std::size_t>(4 - d)] = acc;
        }
        acc = 0;
        for (int d = 1; d <= 4; ++d) {
            acc ^= syndrome_ext(s, q + d - 1) ? 1 : 0;
            w[static_cast<std::size_t>(4 + d)] = acc;
        }
        const bool paper_even = (n % 2) == 1;
        delta.set(n, tlv_local_rule(w, paper_even));
    }
    Syndrome ns = boundary(delta);
    ns ^= s;
    return {std::move(delta), std::move(ns)};
}

CorrectionMask d_local_decode(const Syndrome& s, long long D,
                              const DLocalRule& f) {
    if (D < 0) throw std::invalid_argument("d_local_decode: D < 0");
    if (!f) throw std::invalid_argument("d_local_decode: empty rule");
    const long long L = static_cast<long long>(s.size()) + 1;
    CorrectionMask out(static_cast<std::size_t>(L));
    std::vector<std::uint8_t> buf;
    for (long long j = 0; j < L; ++j) {
        const long long lo = std::max<long long>(0, j - D - 1);
        const long long hi = std::min<long long>(L - 2, j + D);
        buf.clear();
        for (long long q = lo; q <= hi; ++q)
            buf.push_back(s.get(static_cast<std::size_t>(q)) ? 1 : 0);
        const bool bit =
            f(static_cast<std::size_t>(j), static_cast<std::size_t>(lo),
              std::span<const std::uint8_t>(buf.data(), buf.size()));
        out.set(static_cast<std::size_t>(j), bit);
    }
    return out;
}

} // namespace cadec

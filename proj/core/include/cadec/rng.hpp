#pragma once

#include <cstdint>

namespace cadec {

// SplitMix64 finalizer; bijective on 64-bit words.
constexpr std::uint64_t mix64(std::uint64_t z) {
    z += 0x9e3779b97f4a7c15ull;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
    return z ^ (z >> 31);
}

// Counter-based stream generator. Output i of a stream with key k is
// mix64(k + i·gamma), so streams with distinct keys are independent and a
// stream can be consumed sequentially without carrying state across trials.
class SplitMix {
public:
    explicit SplitMix(std::uint64_t key) : state_(key) {}

    std::uint64_t next() {
        state_ += 0x9e3779b97f4a7c15ull;
        std::uint64_t z = state_;
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
        return z ^ (z >> 31);
    }

    // Uniform double in [0, 1) with 53 random bits.
    double next_double() {
        return static_cast<double>(next() >> 11) * 0x1.0p-53;
    }

private:
    std::uint64_t state_;
};

// Bernoulli(p) draw backed by a 64-bit threshold comparison. Exact for
// p ∈ {0,1}; otherwise resolves p at 2^-64 granularity.
class Bernoulli {
public:
    explicit Bernoulli(double p) {
        if (p <= 0.0) {
            mode_ = Mode::Never;
        } else if (p >= 1.0) {
            mode_ = Mode::Always;
        } else {
            mode_ = Mode::Threshold;
            thr_ = static_cast<std::uint64_t>(
                static_cast<long double>(p) * 18446744073709551616.0L);
        }
    }

    bool operator()(SplitMix& g) const {
        switch (mode_) {
            case Mode::Never: return false;
            case Mode::Always: return true;
            default: return g.next() < thr_;
        }
    }

private:
    enum class Mode { Never, Always, Threshold };
    Mode mode_ = Mode::Never;
    std::uint64_t thr_ = 0;
};

// Stream key for one trial: trials are order-independent and parallel-safe
// because every (seed, point, trial) triple gets its own stream.
inline SplitMix make_trial_rng(std::uint64_t seed, std::uint64_t point,
                               std::uint64_t trial) {
    std::uint64_t k = mix64(seed);
    k = mix64(k ^ (point * 0xd1342543de82ef95ull + 0x63652362cd772f3bull));
    k = mix64(k ^ (trial * 0x9e3779b97f4a7c15ull + 0x2545f4914f6cdd1dull));
    return SplitMix(k);
}

} // namespace cadec

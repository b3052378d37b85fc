#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "cadec/analytics.hpp"
#include "cadec/ca.hpp"
#include "cadec/decode.hpp"
#include "cadec/rng.hpp"

namespace cadec {

struct TMaxPolicy {
    enum class Kind { Unbounded, Linear, Power, Const };
    Kind kind = Kind::Unbounded;
    double c = 1.0;      // Linear: cap = floor(c*L)
    double kappa = 1.0;  // Power: cap = floor(L^kappa), kappa in (0,1]
    long long T = 1;     // Const: cap = T

    static TMaxPolicy unbounded() { return {Kind::Unbounded, 1.0, 1.0, 1}; }
    static TMaxPolicy linear(double c) { return {Kind::Linear, c, 1.0, 1}; }
    static TMaxPolicy power(double kappa) {
        return {Kind::Power, 1.0, kappa, 1};
    }
    static TMaxPolicy constant(long long T) {
        return {Kind::Const, 1.0, 1.0, T};
    }

    // Step cap for chain length L. Unbounded resolves to 8L+64, enough for
    // detection of every recurrent trajectory class.
    long long resolve(std::size_t L) const;
    std::string label() const; // CSV tag, e.g. "unbounded", "pow:0.5"
};

enum class CorrectionMode { TLV1D, GlobalEachStep, NoCorrection };

std::string correction_mode_label(CorrectionMode mode);

struct ExperimentConfig {
    std::vector<std::size_t> L_grid;
    std::vector<double> p0_grid;
    long long trials = 1000;
    TMaxPolicy tmax;
    std::uint64_t seed = 0;
    CorrectionMode mode = CorrectionMode::TLV1D;
    long long ff_cap = 10'000'000; // T_ff hard cap (censored above)
    int histogram_bin = 10;        // t_dec histogram bin width
    int threads = 1;

    void validate_config() const; // throws std::invalid_argument
};

struct TrialOutcome {
    enum class Class { DecodedClean, LogicalFlip, ResidualCycle, TimedOut };
    Class cls = Class::TimedOut;
    long long t_dec = 0; // defined iff cls == DecodedClean
};

struct PointStats {
    std::size_t L = 0;
    double p0 = 0.0;
    long long trials = 0;

    // Decoding-trial statistics (estimate_pdec).
    long long fail_count = 0; // any outcome other than DecodedClean
    long long flip_count = 0;
    long long cycle_count = 0;
    long long timeout_count = 0;
    double p_fail = 0.0;
    double p_fail_stderr = 0.0;
    double cycle_frac = 0.0;
    double mean_tdec = 0.0;   // over clean trials; NaN if none
    double median_tdec = 0.0; // lower median; NaN if none
    int histogram_bin = 10;
    std::vector<long long> tdec_histogram; // clean trials, bin b = counts in
                                           // [b*bin, (b+1)*bin)

    // First-majority-flip statistics (estimate_tff).
    long long ff_samples = 0;  // uncensored trials
    long long ff_censored = 0; // trials that hit ff_cap
    double tff_mean = 0.0;     // over uncensored; NaN if none
    double tff_stderr = 0.0;
};

struct SweepStats {
    std::vector<PointStats> points; // L-major, p0-minor grid order
};

// L i.i.d. Bernoulli(p0) bits.
ChainState sample_bernoulli(std::size_t L, double p0, SplitMix& rng);

// Sites of a window [1-half_width, half_width]: the right half i >= 1 is
// i.i.d. Bernoulli(p0), the left half its exact mirror x_{1-i} = x_i.
// Returned sorted.
std::vector<long long> sample_mirrored_bernoulli(long long half_width,
                                                 double p0, SplitMix& rng);

// Samples a Bernoulli pattern and classifies its mirrored-TLV evolution
// under the step cap: clean zero within t_max -> DecodedClean (with t_dec),
// all-ones -> LogicalFlip, detected cycle -> ResidualCycle, else TimedOut.
TrialOutcome run_decode_trial(std::size_t L, double p0, long long t_max,
                              SplitMix& rng);

// Monte Carlo sweep of run_decode_trial over the config grid. Deterministic
// for fixed (config, seed) at any thread count.
SweepStats estimate_pdec(const ExperimentConfig& config);

// Accumulated-noise run: each step applies fresh noise, then one correction
// action per mode, and stops at the first step whose surviving state has
// majority 1. nullopt when cap steps pass without a flip.
std::optional<long long> run_ff_trial(std::size_t L, double p0,
                                      CorrectionMode mode, long long cap,
                                      SplitMix& rng);

// Monte Carlo sweep of run_ff_trial; fills the tff_* fields.
SweepStats estimate_tff(const ExperimentConfig& config);

struct SparseBoundRow {
    int level = 0;
    long long site_samples = 0;    // window sites drawn, all windows
    long long uncovered_count = 0; // of those: in x and uncovered at <= level
    double uncovered_fraction = 0.0;
    double uncovered_stderr = 0.0;
    double bound_raw = 0.0; // alpha^(l^beta); may exceed 1
    double bound_clamped = 0.0;
};

struct SparseBoundTable {
    long long half_width = 0;
    double p0 = 0.0;
    long long windows = 0;
    SparseBoundParams params;
    std::vector<SparseBoundRow> rows; // levels 1..max_level
};

// Draws mirrored windows, decomposes each, and tabulates the per-site
// uncovered fraction by level next to the analytic bound.
SparseBoundTable validate_sparse_bound(long long half_width, double p0,
                                       long long windows, int R, int m,
                                       std::uint64_t seed, int max_level);

} // namespace cadec

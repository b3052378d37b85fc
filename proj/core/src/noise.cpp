#include "cadec/noise.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <functional>
#include <limits>
#include <stdexcept>
#include <thread>

namespace cadec {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

RuleSet mirrored_tlv() { return RuleSet::tlv(BoundaryMode::mirrored()); }

double binomial_stderr(double phat, long long n) {
    return std::sqrt(phat * (1.0 - phat) / static_cast<double>(n));
}

void xor_bernoulli_into(ChainState& x, const Bernoulli& ber, SplitMix& rng) {
    const std::size_t L = x.size();
    for (std::size_t w = 0; w < x.word_count(); ++w) {
        const std::size_t nbits = std::min<std::size_t>(64, L - 64 * w);
        std::uint64_t v = 0;
        for (std::size_t b = 0; b < nbits; ++b)
            v |= static_cast<std::uint64_t>(ber(rng)) << b;
        x.set_word(w, x.word(w) ^ v);
    }
}

// Runs fn over contiguous trial ranges; worker results must be merged in
// worker order by the caller for thread-count-independent output.
void parallel_ranges(long long trials, int threads,
                     const std::function<void(int, long long, long long)>& fn) {
    const int n = std::max(1, threads);
    if (n == 1 || trials < 2) {
        fn(0, 0, trials);
        return;
    }
    const long long chunk = (trials + n - 1) / n;
    std::vector<std::thread> pool;
    for (int w = 0; w < n; ++w) {
        const long long t0 = std::min<long long>(trials, w * chunk);
        const long long t1 = std::min<long long>(trials, t0 + chunk);
        if (t0 >= t1) break;
        pool.emplace_back(fn, w, t0, t1);
    }
    for (auto& t : pool) t.join();
}

struct DecodeAccum {
    long long clean = 0, flip = 0, cycle = 0, timeout = 0;
    std::vector<long long> tdec_count; // clean trials, index = t_dec

    explicit DecodeAccum(long long cap)
        : tdec_count(static_cast<std::size_t>(cap) + 1, 0) {}

    void merge(const DecodeAccum& o) {
        clean += o.clean;
        flip += o.flip;
        cycle += o.cycle;
        timeout += o.timeout;
        for (std::size_t i = 0; i < tdec_count.size(); ++i)
            tdec_count[i] += o.tdec_count[i];
    }
};

struct FfAccum {
    long long samples = 0, censored = 0;
    long long sum = 0;
    unsigned __int128 sumsq = 0;

    void merge(const FfAccum& o) {
        samples += o.samples;
        censored += o.censored;
        sum += o.sum;
        sumsq += o.sumsq;
    }
};

void fill_mean_stderr(long long n, long long sum, unsigned __int128 sumsq,
                      double& mean, double& se) {
    if (n < 1) {
        mean = kNaN;
        se = kNaN;
        return;
    }
    mean = static_cast<double>(sum) / static_cast<double>(n);
    if (n < 2) {
        se = kNaN;
        return;
    }
    const double sq = static_cast<double>(sumsq);
    const double var =
        (sq - static_cast<double>(n) * mean * mean) / (n - 1.0);
    se = std::sqrt(std::max(var, 0.0) / static_cast<double>(n));
}

void require_even_chain(std::size_t L, const char* what) {
    if (L < 2 || (L % 2) != 0)
        throw std::invalid_argument(std::string(what) +
                                    ": requires even chain length >= 2");
}

} // namespace

long long TMaxPolicy::resolve(std::size_t L) const {
    switch (kind) {
        case Kind::Unbounded:
            return default_classify_cap(L);
        case Kind::Linear:
            return std::max<long long>(
                1, static_cast<long long>(std::floor(c * static_cast<double>(L))));
        case Kind::Power:
            return std::max<long long>(
                1, static_cast<long long>(
                       std::floor(std::pow(static_cast<double>(L), kappa))));
        case Kind::Const:
        default:
            return std::max<long long>(1, T);
    }
}

std::string TMaxPolicy::label() const {
    char buf[64];
    switch (kind) {
        case Kind::Unbounded:
            return "unbounded";
        case Kind::Linear:
            std::snprintf(buf, sizeof buf, "linear:%g", c);
            return buf;
        case Kind::Power:
            std::snprintf(buf, sizeof buf, "pow:%g", kappa);
            return buf;
        case Kind::Const:
        default:
            std::snprintf(buf, sizeof buf, "const:%lld", T);
            return buf;
    }
}

std::string correction_mode_label(CorrectionMode mode) {
    switch (mode) {
        case CorrectionMode::TLV1D:
            return "tlv1d";
        case CorrectionMode::GlobalEachStep:
            return "global";
        case CorrectionMode::NoCorrection:
        default:
            return "none";
    }
}

void ExperimentConfig::validate_config() const {
    if (L_grid.empty() || p0_grid.empty())
        throw std::invalid_argument("config: empty L or p0 grid");
    for (const std::size_t L : L_grid)
        if (L < 2) throw std::invalid_argument("config: L must be >= 2");
    for (const double p : p0_grid)
        if (!(p >= 0.0 && p <= 1.0))
            throw std::invalid_argument("config: p0 outside [0,1]");
    if (trials < 1) throw std::invalid_argument("config: trials must be >= 1");
    switch (tmax.kind) {
        case TMaxPolicy::Kind::Linear:
            if (!(tmax.c > 0.0))
                throw std::invalid_argument("config: linear cap needs c > 0");
            break;
        case TMaxPolicy::Kind::Power:
            if (!(tmax.kappa > 0.0 && tmax.kappa <= 1.0))
                throw std::invalid_argument(
                    "config: power cap needs kappa in (0,1]");
            break;
        case TMaxPolicy::Kind::Const:
            if (tmax.T < 1)
                throw std::invalid_argument("config: const cap needs T >= 1");
            break;
        default:
            break;
    }
    if (ff_cap < 1) throw std::invalid_argument("config: ff_cap must be >= 1");
    if (histogram_bin < 1)
        throw std::invalid_argument("config: histogram_bin must be >= 1");
    if (threads < 1) throw std::invalid_argument("config: threads must be >= 1");
}

ChainState sample_bernoulli(std::size_t L, double p0, SplitMix& rng) {
    if (L < 1) throw std::invalid_argument("sample_bernoulli: L < 1");
    const Bernoulli ber(p0);
    ChainState x(L);
    for (std::size_t w = 0; w < x.word_count(); ++w) {
        const std::size_t nbits = std::min<std::size_t>(64, L - 64 * w);
        std::uint64_t v = 0;
        for (std::size_t b = 0; b < nbits; ++b)
            v |= static_cast<std::uint64_t>(ber(rng)) << b;
        x.set_word(w, v);
    }
    return x;
}

std::vector<long long> sample_mirrored_bernoulli(long long half_width,
                                                 double p0, SplitMix& rng) {
    if (half_width < 1)
        throw std::invalid_argument("sample_mirrored_bernoulli: half_width < 1");
    const Bernoulli ber(p0);
    std::vector<long long> right;
    for (long long i = 1; i <= half_width; ++i)
        if (ber(rng)) right.push_back(i);
    std::vector<long long> sites;
    sites.reserve(2 * right.size());
    for (auto it = right.rbegin(); it != right.rend(); ++it)
        sites.push_back(1 - *it);
    sites.insert(sites.end(), right.begin(), right.end());
    return sites;
}

TrialOutcome run_decode_trial(std::size_t L, double p0, long long t_max,
                              SplitMix& rng) {
    require_even_chain(L, "run_decode_trial");
    const ChainState x = sample_bernoulli(L, p0, rng);
    const EvolutionOutcome eo = classify_evolution(x, mirrored_tlv(), t_max);
    TrialOutcome out;
    switch (eo.terminal) {
        case EvolutionOutcome::Terminal::CleanZero:
            out.cls = TrialOutcome::Class::DecodedClean;
            out.t_dec = eo.steps_taken;
            break;
        case EvolutionOutcome::Terminal::CleanOne:
            out.cls = TrialOutcome::Class::LogicalFlip;
            break;
        case EvolutionOutcome::Terminal::Cycle:
            out.cls = TrialOutcome::Class::ResidualCycle;
            break;
        case EvolutionOutcome::Terminal::Timeout:
        default:
            out.cls = TrialOutcome::Class::TimedOut;
            break;
    }
    return out;
}

SweepStats estimate_pdec(const ExperimentConfig& config) {
    config.validate_config();
    for (const std::size_t L : config.L_grid)
        require_even_chain(L, "estimate_pdec");

    SweepStats out;
    const std::size_t P = config.p0_grid.size();
    for (std::size_t iL = 0; iL < config.L_grid.size(); ++iL) {
        for (std::size_t ip = 0; ip < P; ++ip) {
            const std::size_t L = config.L_grid[iL];
            const double p0 = config.p0_grid[ip];
            const std::uint64_t pid = iL * P + ip;
            const long long cap = config.tmax.resolve(L);

            std::vector<DecodeAccum> acc(
                static_cast<std::size_t>(std::max(1, config.threads)),
                DecodeAccum(cap));
            parallel_ranges(
                config.trials, config.threads,
                [&](int worker, long long t0, long long t1) {
                    DecodeAccum& a = acc[static_cast<std::size_t>(worker)];
                    for (long long t = t0; t < t1; ++t) {
                        SplitMix rng = make_trial_rng(config.seed, pid,
                                                      static_cast<std::uint64_t>(t));
                        const TrialOutcome o =
                            run_decode_trial(L, p0, cap, rng);
                        switch (o.cls) {
                            case TrialOutcome::Class::DecodedClean:
                                ++a.clean;
                                ++a.tdec_count[static_cast<std::size_t>(
                                    o.t_dec)];
                                break;
                            case TrialOutcome::Class::LogicalFlip:
                                ++a.flip;
                                break;
                            case TrialOutcome::Class::ResidualCycle:
                                ++a.cycle;
                                break;
                            case TrialOutcome::Class::TimedOut:
                            default:
                                ++a.timeout;
                                break;
                        }
                    }
                });
            for (std::size_t w = 1; w < acc.size(); ++w) acc[0].merge(acc[w]);
            const DecodeAccum& a = acc[0];

            PointStats ps;
            ps.L = L;
            ps.p0 = p0;
            ps.trials = config.trials;
            ps.flip_count = a.flip;
            ps.cycle_count = a.cycle;
            ps.timeout_count = a.timeout;
            ps.fail_count = a.flip + a.cycle + a.timeout;
            ps.p_fail =
                static_cast<double>(ps.fail_count) / config.trials;
            ps.p_fail_stderr = binomial_stderr(ps.p_fail, config.trials);
            ps.cycle_frac = static_cast<double>(a.cycle) / config.trials;

            if (a.clean > 0) {
                long long weighted = 0;
                for (std::size_t t = 0; t < a.tdec_count.size(); ++t)
                    weighted += static_cast<long long>(t) * a.tdec_count[t];
                ps.mean_tdec =
                    static_cast<double>(weighted) / static_cast<double>(a.clean);
                const long long target = (a.clean - 1) / 2; // lower median
                long long cum = 0;
                for (std::size_t t = 0; t < a.tdec_count.size(); ++t) {
                    cum += a.tdec_count[t];
                    if (cum > target) {
                        ps.median_tdec = static_cast<double>(t);
                        break;
                    }
                }
            } else {
                ps.mean_tdec = kNaN;
                ps.median_tdec = kNaN;
            }

            ps.histogram_bin = config.histogram_bin;
            std::vector<long long> hist(
                a.tdec_count.size() / config.histogram_bin + 1, 0);
            for (std::size_t t = 0; t < a.tdec_count.size(); ++t)
                hist[t / config.histogram_bin] += a.tdec_count[t];
            while (!hist.empty() && hist.back() == 0) hist.pop_back();
            ps.tdec_histogram = std::move(hist);

            ps.ff_samples = 0;
            ps.ff_censored = 0;
            ps.tff_mean = kNaN;
            ps.tff_stderr = kNaN;
            out.points.push_back(std::move(ps));
        }
    }
    return out;
}

std::optional<long long> run_ff_trial(std::size_t L, double p0,
                                      CorrectionMode mode, long long cap,
                                      SplitMix& rng) {
    if (cap < 1) throw std::invalid_argument("run_ff_trial: cap < 1");
    const RuleSet rules = mirrored_tlv();
    if (mode == CorrectionMode::TLV1D)
        validate(rules, L);
    else if (L < 2)
        throw std::invalid_argument("run_ff_trial: L < 2");

    const Bernoulli ber(p0);
    ChainState x(L), buf(L);
    for (long long t = 1; t <= cap; ++t) {
        xor_bernoulli_into(x, ber, rng);
        switch (mode) {
            case CorrectionMode::TLV1D:
                step_into(x, rules, buf);
                std::swap(x, buf);
                break;
            case CorrectionMode::GlobalEachStep:
                x ^= global_majority_decode(boundary(x));
                break;
            case CorrectionMode::NoCorrection:
                break;
        }
        if (majority(x)) return t;
    }
    return std::nullopt;
}

SweepStats estimate_tff(const ExperimentConfig& config) {
    config.validate_config();
    if (config.mode == CorrectionMode::TLV1D)
        for (const std::size_t L : config.L_grid)
            require_even_chain(L, "estimate_tff");

    SweepStats out;
    const std::size_t P = config.p0_grid.size();
    for (std::size_t iL = 0; iL < config.L_grid.size(); ++iL) {
        for (std::size_t ip = 0; ip < P; ++ip) {
            const std::size_t L = config.L_grid[iL];
            const double p0 = config.p0_grid[ip];
            const std::uint64_t pid = iL * P + ip;

            std::vector<FfAccum> acc(
                static_cast<std::size_t>(std::max(1, config.threads)));
            parallel_ranges(
                config.trials, config.threads,
                [&](int worker, long long t0, long long t1) {
                    FfAccum& a = acc[static_cast<std::size_t>(worker)];
                    for (long long t = t0; t < t1; ++t) {
                        SplitMix rng = make_trial_rng(config.seed, pid,
                                                      static_cast<std::uint64_t>(t));
                        const auto tff = run_ff_trial(L, p0, config.mode,
                                                      config.ff_cap, rng);
                        if (tff) {
                            ++a.samples;
                            a.sum += *tff;
                            a.sumsq += static_cast<unsigned __int128>(*tff) *
                                       static_cast<unsigned __int128>(*tff);
                        } else {
                            ++a.censored;
                        }
                    }
                });
            for (std::size_t w = 1; w < acc.size(); ++w) acc[0].merge(acc[w]);
            const FfAccum& a = acc[0];

            PointStats ps;
            ps.L = L;
            ps.p0 = p0;
            ps.trials = config.trials;
            ps.histogram_bin = config.histogram_bin;
            ps.p_fail = kNaN;
            ps.p_fail_stderr = kNaN;
            ps.cycle_frac = kNaN;
            ps.mean_tdec = kNaN;
            ps.median_tdec = kNaN;
            ps.ff_samples = a.samples;
            ps.ff_censored = a.censored;
            fill_mean_stderr(a.samples, a.sum, a.sumsq, ps.tff_mean,
                             ps.tff_stderr);
            out.points.push_back(std::move(ps));
        }
    }
    return out;
}

SparseBoundTable validate_sparse_bound(long long half_width, double p0,
                                       long long windows, int R, int m,
                                       std::uint64_t seed, int max_level) {
    if (windows < 1)
        throw std::invalid_argument("validate_sparse_bound: windows < 1");
    if (max_level < 1)
        throw std::invalid_argument("validate_sparse_bound: max_level < 1");
    const SparseBoundParams params = sparse_params(R, m, p0);

    SparseBoundTable table;
    table.half_width = half_width;
    table.p0 = p0;
    table.windows = windows;
    table.params = params;

    std::vector<long long> uncovered(static_cast<std::size_t>(max_level) + 1,
                                     0);
    for (long long w = 0; w < windows; ++w) {
        SplitMix rng = make_trial_rng(seed, 0, static_cast<std::uint64_t>(w));
        const auto sites = sample_mirrored_bernoulli(half_width, p0, rng);
        if (sites.empty()) continue;
        const ClusterFamily fam = sparse_decompose(sites, params.k);
        for (int l = 1; l <= max_level; ++l)
            uncovered[static_cast<std::size_t>(l)] += static_cast<long long>(
                uncovered_after_level(sites, fam, l).size());
    }

    const long long site_samples = 2 * half_width * windows;
    for (int l = 1; l <= max_level; ++l) {
        SparseBoundRow row;
        row.level = l;
        row.site_samples = site_samples;
        row.uncovered_count = uncovered[static_cast<std::size_t>(l)];
        row.uncovered_fraction =
            static_cast<double>(row.uncovered_count) / site_samples;
        row.uncovered_stderr =
            binomial_stderr(row.uncovered_fraction, site_samples);
        const BoundValue bv = uncovered_site_bound(l, params);
        row.bound_raw = bv.raw;
        row.bound_clamped = bv.clamped;
        table.rows.push_back(row);
    }
    return table;
}

} // namespace cadec

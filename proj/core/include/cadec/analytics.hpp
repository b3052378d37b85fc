#pragma once

#include <cstdint>
#include <vector>

namespace cadec {

// Per-site flip probability after t rounds of rate-p0 Bernoulli noise:
// p(t) = (1 - (1-2*p0)^t) / 2.
double flip_prob(double p0, long long t);

// I_x(a,b), continued-fraction evaluation with log-space prefactors.
double reg_incomplete_beta(double x, double a, double b);

// P[Bin(L,p) >= (L+1)/2] for odd L, via the regularized incomplete beta.
double logical_fail_prob(long long L, double p);

// Same quantity via a log-space binomial tail sum (independent path).
double logical_fail_prob_sum(long long L, double p);

// Probability that global majority decoding flips a homogeneous state under
// i.i.d. rate-p noise. Equals logical_fail_prob for odd L; for even L exact
// weight-L/2 ties flip with probability 1/2 (first-cell tie rule).
double majority_flip_prob(long long L, double p);

// T = 1 / ln(1/(1-2P)) with P = logical_fail_prob(L, p0); throws
// std::domain_error when P >= 1/2.
double decay_time(long long L, double p0);

// (1 + (1-2P)^t) / 2 with P = logical_fail_prob(L, p0).
double stabilized_survival(long long L, double p0, long long t);

// Upper bound on decoding success for any D-local decoder:
// [1 + (p0/(1-p0))^(2D+1)]^(-L/(2D+1)). Requires p0 <= 1/2.
double lightcone_bound(long long L, long long D, double p0);

struct ScalingRegime {
    enum class Kind { ConstD, PowerLaw, LogPower };
    Kind kind = Kind::ConstD;
    double kappa = 0.0;

    static ScalingRegime const_d() { return {Kind::ConstD, 0.0}; }
    static ScalingRegime power_law(double kappa) {
        return {Kind::PowerLaw, kappa};
    }
    static ScalingRegime log_power(double kappa) {
        return {Kind::LogPower, kappa};
    }
};

// Limit of lightcone_bound as L grows with 2D+1 scaling per the regime:
// constant, L^kappa, or kappa*log(L). Logarithmic windows admit a critical
// rate p_c = 1/(1+e^(1/kappa)). Requires p0 <= 1/2.
double lightcone_scaling_limit(const ScalingRegime& regime, double p0);

struct SparseBoundParams {
    int R = 0;
    int m = 0;
    int k = 0;          // 2*R*m
    double alpha = 0.0; // 2k(4k+3)*sqrt(p0)
    double beta = 0.0;  // ln2 / ln(4k+3)
    double gamma = 0.0; // -ln(alpha)
    double p_tilde_c = 0.0; // [2k(4k+3)]^-2
    double a = 0.0;         // [(2Rm+1)(Rm+1)]^-1
};

SparseBoundParams sparse_params(int R, int m, double p0 = 0.0);

struct BoundValue {
    double raw = 0.0;
    double clamped = 0.0; // min(raw, 1)
};

// (4R*{t} + L) * exp(-gamma * floor({t}/m)^beta), {t} = min(t, floor(L/2R)).
BoundValue survival_bound_finite(long long L, long long t,
                                 const SparseBoundParams& params);

// (4R+1) * L * exp(-gamma * floor(L^kappa/m)^beta), 0 < kappa < 1.
BoundValue decode_failure_bound(long long L, double kappa,
                                const SparseBoundParams& params);

// Per-site uncovered-probability bound alpha^(l^beta) at level l.
BoundValue uncovered_site_bound(int level, const SparseBoundParams& params);

struct Cluster {
    int level = 0;                 // max(diameter, 1), exact at harvest time
    std::vector<long long> sites;  // sorted
};

struct ClusterFamily {
    std::vector<Cluster> clusters; // harvest order: level ascending
};

// max(max-min, 1); singletons count as diameter 1.
long long effective_diameter(const Cluster& c);

// Recursive decomposition of a finite sorted site set into pairwise
// independent clusters: level l harvests every extent-defined subset of the
// residual with effective diameter exactly l whose radius-(k*l) territory
// contains no other residual site. Terminates with every site covered.
ClusterFamily sparse_decompose(const std::vector<long long>& sites, int k);

// Every pair of clusters satisfies: at least one does not meet the other's
// territory (radius k * effective diameter around its extent).
bool check_pairwise_independence(const ClusterFamily& family, int k);

// Replays the recursion: clusters at each level must be exactly the
// independent extent subsets of the residual before that level, any site
// still uncovered must admit no independent cluster of effective diameter
// <= level containing it, and the family must cover all sites disjointly.
bool check_completeness(const std::vector<long long>& sites,
                        const ClusterFamily& family, int k);

// Sites not covered by any cluster of level <= level.
std::vector<long long> uncovered_after_level(
    const std::vector<long long>& sites, const ClusterFamily& family,
    int level);

} // namespace cadec

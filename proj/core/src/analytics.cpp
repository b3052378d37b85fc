#include "cadec/analytics.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <stdexcept>

namespace cadec {

namespace {

void require_prob(double p, const char* what) {
    if (!(p >= 0.0 && p <= 1.0))
        throw std::invalid_argument(std::string(what) +
                                    ": probability outside [0,1]");
}

double log_choose(long long n, long long k) {
    return std::lgamma(static_cast<double>(n) + 1.0) -
           std::lgamma(static_cast<double>(k) + 1.0) -
           std::lgamma(static_cast<double>(n - k) + 1.0);
}

// Continued fraction for the incomplete beta (modified Lentz).
double betacf(double a, double b, double x) {
    constexpr int kMaxIter = 500;
    constexpr double kEps = 3e-16;
    constexpr double kTiny = 1e-300;
    const double qab = a + b, qap = a + 1.0, qam = a - 1.0;
    double c = 1.0;
    double d = 1.0 - qab * x / qap;
    if (std::fabs(d) < kTiny) d = kTiny;
    d = 1.0 / d;
    double h = d;
    for (int m = 1; m <= kMaxIter; ++m) {
        const int m2 = 2 * m;
        double aa = m * (b - m) * x / ((qam + m2) * (a + m2));
        d = 1.0 + aa * d;
        if (std::fabs(d) < kTiny) d = kTiny;
        c = 1.0 + aa / c;
        if (std::fabs(c) < kTiny) c = kTiny;
        d = 1.0 / d;
        h *= d * c;
        aa = -(a + m) * (qab + m) * x / ((a + m2) * (qap + m2));
        d = 1.0 + aa * d;
        if (std::fabs(d) < kTiny) d = kTiny;
        c = 1.0 + aa / c;
        if (std::fabs(c) < kTiny) c = kTiny;
        d = 1.0 / d;
        const double del = d * c;
        h *= del;
        if (std::fabs(del - 1.0) < kEps) break;
    }
    return h;
}

void require_odd_length(long long L, const char* what) {
    if (L < 1 || (L % 2) == 0)
        throw std::invalid_argument(std::string(what) +
                                    ": requires odd L >= 1");
}

long long count_in(const std::vector<long long>& sorted, long long a,
                   long long b) {
    const auto lo = std::lower_bound(sorted.begin(), sorted.end(), a);
    const auto hi = std::upper_bound(sorted.begin(), sorted.end(), b);
    return hi - lo;
}

// A candidate cluster is residual ∩ [a, b] with a, b residual sites; it is
// independent iff its radius-(k * effective diameter) territory holds no
// other residual site.
bool extent_independent(const std::vector<long long>& res, long long a,
                        long long b, int k) {
    const long long leff = std::max<long long>(b - a, 1);
    const long long inside = count_in(res, a, b);
    if (inside < 1) return false;
    return count_in(res, a - k * leff, b + k * leff) == inside;
}

std::vector<long long> slice_sites(const std::vector<long long>& res,
                                   long long a, long long b) {
    const auto lo = std::lower_bound(res.begin(), res.end(), a);
    const auto hi = std::upper_bound(res.begin(), res.end(), b);
    return {lo, hi};
}

void remove_sites(std::vector<long long>& res,
                  const std::vector<long long>& gone) {
    std::vector<long long> out;
    out.reserve(res.size());
    std::set_difference(res.begin(), res.end(), gone.begin(), gone.end(),
                        std::back_inserter(out));
    res = std::move(out);
}

} // namespace

double flip_prob(double p0, long long t) {
    require_prob(p0, "flip_prob");
    if (t < 0) throw std::invalid_argument("flip_prob: t < 0");
    return 0.5 * (1.0 - std::pow(1.0 - 2.0 * p0, static_cast<double>(t)));
}

double reg_incomplete_beta(double x, double a, double b) {
    if (!(x >= 0.0 && x <= 1.0))
        throw std::invalid_argument("reg_incomplete_beta: x outside [0,1]");
    if (!(a > 0.0) || !(b > 0.0))
        throw std::invalid_argument("reg_incomplete_beta: a, b must be > 0");
    if (x == 0.0) return 0.0;
    if (x == 1.0) return 1.0;
    const double ln_pref = std::lgamma(a + b) - std::lgamma(a) -
                           std::lgamma(b) + a * std::log(x) +
                           b * std::log1p(-x);
    const double pref = std::exp(ln_pref);
    if (x < (a + 1.0) / (a + b + 2.0)) return pref * betacf(a, b, x) / a;
    return 1.0 - pref * betacf(b, a, 1.0 - x) / b;
}

double logical_fail_prob(long long L, double p) {
    require_odd_length(L, "logical_fail_prob");
    require_prob(p, "logical_fail_prob");
    const double half = static_cast<double>((L + 1) / 2);
    return reg_incomplete_beta(p, half, half);
}

double logical_fail_prob_sum(long long L, double p) {
    require_odd_length(L, "logical_fail_prob_sum");
    require_prob(p, "logical_fail_prob_sum");
    if (p == 0.0) return 0.0;
    if (p == 1.0) return 1.0;
    const double lp = std::log(p), lq = std::log1p(-p);
    double sum = 0.0;
    for (long long k = (L + 1) / 2; k <= L; ++k)
        sum += std::exp(log_choose(L, k) + k * lp + (L - k) * lq);
    return std::min(sum, 1.0);
}

double majority_flip_prob(long long L, double p) {
    if (L < 1) throw std::invalid_argument("majority_flip_prob: L < 1");
    require_prob(p, "majority_flip_prob");
    if (p == 0.0) return 0.0;
    if (p == 1.0) return 1.0;
    const double lp = std::log(p), lq = std::log1p(-p);
    double sum = 0.0;
    for (long long k = L / 2 + 1; k <= L; ++k)
        sum += std::exp(log_choose(L, k) + k * lp + (L - k) * lq);
    if ((L % 2) == 0) {
        const long long k = L / 2;
        sum += 0.5 * std::exp(log_choose(L, k) + k * lp + (L - k) * lq);
    }
    return std::min(sum, 1.0);
}

double decay_time(long long L, double p0) {
    const double P = logical_fail_prob(L, p0);
    if (P >= 0.5)
        throw std::domain_error(
            "decay_time: failure probability >= 1/2, no decaying regime");
    return -1.0 / std::log1p(-2.0 * P);
}

double stabilized_survival(long long L, double p0, long long t) {
    if (t < 0) throw std::invalid_argument("stabilized_survival: t < 0");
    const double P = logical_fail_prob(L, p0);
    return 0.5 * (1.0 + std::pow(1.0 - 2.0 * P, static_cast<double>(t)));
}

double lightcone_bound(long long L, long long D, double p0) {
    if (L < 0 || D < 0)
        throw std::invalid_argument("lightcone_bound: L, D must be >= 0");
    require_prob(p0, "lightcone_bound");
    if (p0 > 0.5)
        throw std::domain_error("lightcone_bound: requires p0 <= 1/2");
    const double w = 2.0 * static_cast<double>(D) + 1.0;
    const double r = p0 / (1.0 - p0);
    const double rw = std::pow(r, w);
    return std::exp(-(static_cast<double>(L) / w) * std::log1p(rw));
}

double lightcone_scaling_limit(const ScalingRegime& regime, double p0) {
    require_prob(p0, "lightcone_scaling_limit");
    if (p0 > 0.5)
        throw std::domain_error("lightcone_scaling_limit: requires p0 <= 1/2");
    switch (regime.kind) {
        case ScalingRegime::Kind::ConstD:
            return p0 > 0.0 ? 0.0 : 1.0;
        case ScalingRegime::Kind::PowerLaw: {
            if (!(regime.kappa > 0.0))
                throw std::invalid_argument(
                    "lightcone_scaling_limit: kappa must be > 0");
            if (p0 < 0.5) return 1.0;
            if (regime.kappa < 1.0) return 0.0;
            if (regime.kappa == 1.0) return 0.5;
            return 1.0;
        }
        case ScalingRegime::Kind::LogPower:
        default: {
            if (!(regime.kappa > 0.0))
                throw std::invalid_argument(
                    "lightcone_scaling_limit: kappa must be > 0");
            const double pc = 1.0 / (1.0 + std::exp(1.0 / regime.kappa));
            return p0 <= pc ? 1.0 : 0.0;
        }
    }
}

SparseBoundParams sparse_params(int R, int m, double p0) {
    if (R < 1 || m < 1)
        throw std::invalid_argument("sparse_params: R, m must be >= 1");
    require_prob(p0, "sparse_params");
    SparseBoundParams out;
    out.R = R;
    out.m = m;
    out.k = 2 * R * m;
    const double kd = static_cast<double>(out.k);
    const double d = 2.0 * kd * (4.0 * kd + 3.0);
    out.alpha = d * std::sqrt(p0);
    out.beta = std::log(2.0) / std::log(4.0 * kd + 3.0);
    out.gamma = -std::log(out.alpha);
    out.p_tilde_c = 1.0 / (d * d);
    out.a = 1.0 / ((2.0 * R * m + 1.0) * (R * m + 1.0));
    return out;
}

BoundValue survival_bound_finite(long long L, long long t,
                                 const SparseBoundParams& params) {
    if (L < 1 || t < 0)
        throw std::invalid_argument("survival_bound_finite: L >= 1, t >= 0");
    const long long tb = std::min(t, L / (2 * params.R));
    const long long n = tb / params.m;
    const double expterm =
        n == 0 ? 1.0
               : std::exp(-params.gamma *
                          std::pow(static_cast<double>(n), params.beta));
    BoundValue bv;
    bv.raw = (4.0 * params.R * static_cast<double>(tb) +
              static_cast<double>(L)) *
             expterm;
    bv.clamped = std::min(bv.raw, 1.0);
    return bv;
}

BoundValue decode_failure_bound(long long L, double kappa,
                                const SparseBoundParams& params) {
    if (L < 1) throw std::invalid_argument("decode_failure_bound: L >= 1");
    if (!(kappa > 0.0 && kappa < 1.0))
        throw std::invalid_argument(
            "decode_failure_bound: kappa must lie in (0,1)");
    const double n = std::floor(
        std::pow(static_cast<double>(L), kappa) / params.m);
    const double expterm =
        n == 0.0 ? 1.0 : std::exp(-params.gamma * std::pow(n, params.beta));
    BoundValue bv;
    bv.raw = (4.0 * params.R + 1.0) * static_cast<double>(L) * expterm;
    bv.clamped = std::min(bv.raw, 1.0);
    return bv;
}

BoundValue uncovered_site_bound(int level, const SparseBoundParams& params) {
    if (level < 1)
        throw std::invalid_argument("uncovered_site_bound: level >= 1");
    BoundValue bv;
    bv.raw = std::pow(params.alpha,
                      std::pow(static_cast<double>(level), params.beta));
    bv.clamped = std::min(bv.raw, 1.0);
    return bv;
}

long long effective_diameter(const Cluster& c) {
    if (c.sites.empty())
        throw std::invalid_argument("effective_diameter: empty cluster");
    return std::max<long long>(c.sites.back() - c.sites.front(), 1);
}

ClusterFamily sparse_decompose(const std::vector<long long>& sites, int k) {
    if (k < 1) throw std::invalid_argument("sparse_decompose: k >= 1");
    if (!std::is_sorted(sites.begin(), sites.end()) ||
        std::adjacent_find(sites.begin(), sites.end()) != sites.end())
        throw std::invalid_argument(
            "sparse_decompose: sites must be strictly increasing");

    ClusterFamily fam;
    std::vector<long long> res = sites;
    long long level_floor = 1;
    std::size_t passes = sites.size() + 1;
    while (!res.empty()) {
        if (passes-- == 0)
            throw std::logic_error("sparse_decompose: failed to terminate");
        std::set<long long> diams;
        diams.insert(1);
        for (std::size_t i = 0; i < res.size(); ++i)
            for (std::size_t j = i + 1; j < res.size(); ++j)
                diams.insert(res[j] - res[i]);

        bool harvested = false;
        for (const long long l : diams) {
            if (l < level_floor) continue;
            std::vector<std::pair<long long, long long>> extents;
            if (l == 1) {
                for (std::size_t i = 0; i < res.size(); ++i) {
                    if (extent_independent(res, res[i], res[i], k))
                        extents.emplace_back(res[i], res[i]);
                    if (i + 1 < res.size() && res[i + 1] - res[i] == 1 &&
                        extent_independent(res, res[i], res[i + 1], k))
                        extents.emplace_back(res[i], res[i + 1]);
                }
            } else {
                for (std::size_t i = 0; i < res.size(); ++i) {
                    const auto it = std::lower_bound(
                        res.begin(), res.end(), res[i] + l);
                    if (it != res.end() && *it == res[i] + l &&
                        extent_independent(res, res[i], *it, k))
                        extents.emplace_back(res[i], *it);
                }
            }
            if (extents.empty()) continue;
            std::vector<long long> gone;
            for (const auto& [a, b] : extents) {
                Cluster c;
                c.level = static_cast<int>(l);
                c.sites = slice_sites(res, a, b);
                gone.insert(gone.end(), c.sites.begin(), c.sites.end());
                fam.clusters.push_back(std::move(c));
            }
            std::sort(gone.begin(), gone.end());
            if (std::adjacent_find(gone.begin(), gone.end()) != gone.end())
                throw std::logic_error(
                    "sparse_decompose: same-level harvests overlapped");
            remove_sites(res, gone);
            level_floor = l + 1;
            harvested = true;
            break;
        }
        if (!harvested)
            throw std::logic_error(
                "sparse_decompose: no independent cluster found in a "
                "nonempty residual");
    }
    return fam;
}

bool check_pairwise_independence(const ClusterFamily& family, int k) {
    if (k < 1)
        throw std::invalid_argument("check_pairwise_independence: k >= 1");
    const auto misses_territory = [&](const Cluster& c,
                                      const Cluster& other) {
        const long long leff = effective_diameter(other);
        const long long lo = other.sites.front() - k * leff;
        const long long hi = other.sites.back() + k * leff;
        for (const long long s : c.sites)
            if (s >= lo && s <= hi) return false;
        return true;
    };
    for (std::size_t i = 0; i < family.clusters.size(); ++i)
        for (std::size_t j = i + 1; j < family.clusters.size(); ++j) {
            const Cluster& a = family.clusters[i];
            const Cluster& b = family.clusters[j];
            if (!misses_territory(a, b) && !misses_territory(b, a))
                return false;
        }
    return true;
}

bool check_completeness(const std::vector<long long>& sites,
                        const ClusterFamily& family, int k) {
    if (k < 1) throw std::invalid_argument("check_completeness: k >= 1");
    // Coverage must partition the site set.
    std::vector<long long> covered;
    for (const Cluster& c : family.clusters)
        covered.insert(covered.end(), c.sites.begin(), c.sites.end());
    std::sort(covered.begin(), covered.end());
    if (covered != sites) return false;

    // Group clusters by level, ascending (harvest order must agree).
    std::vector<std::pair<int, std::vector<const Cluster*>>> groups;
    for (const Cluster& c : family.clusters) {
        if (!groups.empty() && c.level < groups.back().first) return false;
        if (groups.empty() || c.level != groups.back().first)
            groups.push_back({c.level, {}});
        groups.back().second.push_back(&c);
    }

    std::vector<long long> res = sites;
    for (const auto& [level, clusters] : groups) {
        std::vector<long long> gone;
        for (const Cluster* c : clusters) {
            if (effective_diameter(*c) != level) return false;
            const long long a = c->sites.front(), b = c->sites.back();
            if (c->sites != slice_sites(res, a, b)) return false;
            if (!extent_independent(res, a, b, k)) return false;
            gone.insert(gone.end(), c->sites.begin(), c->sites.end());
        }
        std::sort(gone.begin(), gone.end());
        std::vector<long long> next = res;
        remove_sites(next, gone);
        // No uncovered site may admit an independent cluster of effective
        // diameter <= level containing it in the pre-level residual.
        for (const long long u : next) {
            const auto lo =
                std::lower_bound(res.begin(), res.end(), u - level);
            const auto hi = std::upper_bound(res.begin(), res.end(), u);
            for (auto ia = lo; ia != hi; ++ia) {
                for (auto ib = std::lower_bound(ia, res.end(), u);
                     ib != res.end() && *ib - *ia <= level; ++ib)
                    if (extent_independent(res, *ia, *ib, k)) return false;
            }
        }
        res = std::move(next);
    }
    return res.empty();
}

std::vector<long long> uncovered_after_level(
    const std::vector<long long>& sites, const ClusterFamily& family,
    int level) {
    std::vector<long long> gone;
    for (const Cluster& c : family.clusters)
        if (c.level <= level)
            gone.insert(gone.end(), c.sites.begin(), c.sites.end());
    std::sort(gone.begin(), gone.end());
    std::vector<long long> out = sites;
    remove_sites(out, gone);
    return out;
}

} // namespace cadec

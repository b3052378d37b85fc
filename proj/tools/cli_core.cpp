#include "cli_core.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <map>
#include <stdexcept>

#include <CLI11.hpp>
#include <json.hpp>

#include "cadec/analytics.hpp"
#include "cadec/ca.hpp"
#include "cadec/circuit.hpp"
#include "cadec/version.hpp"

namespace cadec::cli {

namespace {

using json = nlohmann::ordered_json;

std::string fmt(double v) {
    if (std::isnan(v)) return "nan";
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.10g", v);
    return buf;
}

std::vector<std::string> split(const std::string& s, char sep) {
    std::vector<std::string> out;
    std::size_t pos = 0;
    while (true) {
        const std::size_t next = s.find(sep, pos);
        out.push_back(s.substr(pos, next - pos));
        if (next == std::string::npos) break;
        pos = next + 1;
    }
    return out;
}

double parse_number(const std::string& s) {
    std::size_t used = 0;
    double v = 0;
    try {
        v = std::stod(s, &used);
    } catch (const std::exception&) {
        throw std::invalid_argument("grid: cannot parse '" + s + "'");
    }
    if (used != s.size())
        throw std::invalid_argument("grid: trailing junk in '" + s + "'");
    return v;
}

long long parse_int(const std::string& s) {
    const double v = parse_number(s);
    const long long n = static_cast<long long>(std::llround(v));
    if (static_cast<double>(n) != v)
        throw std::invalid_argument("grid: '" + s + "' is not an integer");
    return n;
}

void expand_double_range(const std::vector<std::string>& parts,
                         std::vector<double>& out) {
    const double a = parse_number(parts[0]);
    const double b = parse_number(parts[1]);
    if (b < a) throw std::invalid_argument("grid: descending range");
    if (parts.size() == 3 && parts[2] == "+") {
        if (a <= 0) throw std::invalid_argument("grid: '+' needs start > 0");
        double v = a;
        while (v < b * (1 - 1e-12)) {
            out.push_back(v);
            v *= 2;
        }
        out.push_back(b);
        return;
    }
    const double s = parts.size() == 3 ? parse_number(parts[2]) : 0.01;
    if (s <= 0) throw std::invalid_argument("grid: step must be positive");
    const long long n = static_cast<long long>(std::floor((b - a) / s + 1e-9));
    for (long long i = 0; i <= n; ++i) out.push_back(a + s * i);
}

std::string grid_part_error(const std::string& text) {
    return "grid: malformed range '" + text + "'";
}

} // namespace

std::vector<double> parse_double_grid(const std::string& text) {
    std::vector<double> out;
    for (const std::string& item : split(text, ',')) {
        if (item.empty()) throw std::invalid_argument(grid_part_error(text));
        const std::vector<std::string> parts = split(item, ':');
        if (parts.size() == 1)
            out.push_back(parse_number(parts[0]));
        else if (parts.size() == 2 || parts.size() == 3)
            expand_double_range(parts, out);
        else
            throw std::invalid_argument(grid_part_error(item));
    }
    if (out.empty()) throw std::invalid_argument("grid: empty");
    return out;
}

std::vector<long long> parse_length_grid(const std::string& text) {
    std::vector<long long> out;
    for (const std::string& item : split(text, ',')) {
        if (item.empty()) throw std::invalid_argument(grid_part_error(text));
        const std::vector<std::string> parts = split(item, ':');
        if (parts.size() == 1) {
            out.push_back(parse_int(parts[0]));
        } else if (parts.size() == 3 && parts[2] == "+") {
            const long long a = parse_int(parts[0]);
            const long long b = parse_int(parts[1]);
            if (a <= 0 || b < a)
                throw std::invalid_argument(grid_part_error(item));
            long long v = a;
            while (v < b) {
                out.push_back(v);
                if (v > b / 2) break;
                v *= 2;
            }
            out.push_back(b);
        } else if (parts.size() == 3) {
            const long long a = parse_int(parts[0]);
            const long long b = parse_int(parts[1]);
            const long long s = parse_int(parts[2]);
            if (s <= 0 || b < a)
                throw std::invalid_argument(grid_part_error(item));
            for (long long v = a; v <= b; v += s) out.push_back(v);
        } else {
            throw std::invalid_argument(
                "grid: length ranges need an explicit step (a:b:s or a:b:+)");
        }
    }
    if (out.empty()) throw std::invalid_argument("grid: empty");
    return out;
}

TMaxPolicy parse_tmax(const std::string& text) {
    if (text == "unbounded") return TMaxPolicy::unbounded();
    if (text == "linear") return TMaxPolicy::linear(1.0);
    const std::vector<std::string> parts = split(text, ':');
    if (parts.size() == 2) {
        if (parts[0] == "linear")
            return TMaxPolicy::linear(parse_number(parts[1]));
        if (parts[0] == "pow")
            return TMaxPolicy::power(parse_number(parts[1]));
        if (parts[0] == "const")
            return TMaxPolicy::constant(parse_int(parts[1]));
    }
    throw std::invalid_argument(
        "tmax: expected unbounded | linear[:c] | pow:<kappa> | const:<T>");
}

std::uint64_t default_seed() {
    const char* env = std::getenv("CADEC_SEED");
    if (!env || !*env) return 0;
    char* end = nullptr;
    const unsigned long long v = std::strtoull(env, &end, 10);
    if (!end || *end != '\0')
        throw std::invalid_argument("CADEC_SEED is not an integer");
    return static_cast<std::uint64_t>(v);
}

namespace {

// Shared per-command option state.
struct CommonOpts {
    std::uint64_t seed = 0;
    bool seed_given = false;
    int threads = 1;
    std::string out;
    bool hints = false;
};

void add_common(CLI::App& app, CommonOpts& c) {
    app.add_option("--seed", c.seed,
                   "RNG seed (default: CADEC_SEED env var, else 0)")
        ->each([&c](const std::string&) { c.seed_given = true; });
    app.add_option("--threads", c.threads, "worker threads")
        ->check(CLI::PositiveNumber);
    app.add_option("--out", c.out,
                   "write CSV here (plus <out>.manifest.json); default stdout");
    app.add_flag("--gnuplot-hints", c.hints,
                 "emit a gnuplot script (<out>.gp, or stderr)");
}

void finish_seed(CommonOpts& c) {
    if (!c.seed_given) c.seed = default_seed();
}

// Parses args (natural order). Returns true when the command should
// proceed; otherwise res.exit_code/message are final (help or usage error).
bool parse_app(CLI::App& app, std::vector<std::string> args, CmdResult& res) {
    std::reverse(args.begin(), args.end());
    try {
        app.parse(args);
    } catch (const CLI::CallForHelp&) {
        res.exit_code = 0;
        res.message = app.help();
        return false;
    } catch (const CLI::ParseError& e) {
        res.exit_code = 2;
        res.message = std::string("usage error: ") + e.what();
        return false;
    }
    return true;
}

bool write_file(const std::string& path, const std::string& content,
                CmdResult& res) {
    std::ofstream f(path, std::ios::binary | std::ios::trunc);
    if (!f || !(f << content) || !f.flush()) {
        res.exit_code = 2;
        res.message = "cannot write output file: " + path;
        return false;
    }
    return true;
}

// Writes table/manifest/hints next to --out (already stored in res).
bool emit_files(CmdResult& res, const CommonOpts& c) {
    res.out_path = c.out;
    if (c.out.empty()) return true;
    if (!write_file(c.out, res.table, res)) return false;
    if (!write_file(c.out + ".manifest.json", res.manifest, res)) return false;
    if (c.hints && !res.hints.empty() &&
        !write_file(c.out + ".gp", res.hints, res))
        return false;
    return true;
}

std::string manifest_text(const std::string& subcommand, const CommonOpts& c,
                          json config) {
    json m;
    m["subcommand"] = subcommand;
    m["version"] = version_string;
    m["csv_schema"] = csv_schema_version;
    m["seed"] = c.seed;
    m["threads"] = c.threads;
    m["config"] = std::move(config);
    m["output"] = c.out.empty() ? "stdout" : c.out;
    return m.dump(2) + "\n";
}

std::string data_source(const CommonOpts& c) {
    return c.out.empty() ? "'-'" : "'" + c.out + "'";
}

// Classifies a thrown error: config/flag problems are usage errors (2),
// anything else is an internal invariant failure (3).
template <typename Fn>
void guarded_run(CmdResult& res, Fn&& fn) {
    try {
        fn();
    } catch (const std::invalid_argument& e) {
        res.exit_code = 2;
        res.message = std::string("usage error: ") + e.what();
        res.table.clear();
        res.manifest.clear();
        res.hints.clear();
    } catch (const std::exception& e) {
        res.exit_code = 3;
        res.message = std::string("internal error: ") + e.what();
        res.table.clear();
        res.manifest.clear();
        res.hints.clear();
    }
}

RuleSet make_rules(const std::string& family, const std::string& boundary) {
    BoundaryMode b;
    if (boundary == "mirrored")
        b = BoundaryMode::mirrored();
    else if (boundary == "periodic")
        b = BoundaryMode::periodic();
    else
        throw std::invalid_argument("boundary must be mirrored|periodic");
    if (family == "tlv") return RuleSet::tlv(b);
    if (family == "gkl") return RuleSet::gkl(b);
    throw std::invalid_argument("family must be tlv|gkl");
}

} // namespace

CmdResult cmd_decode(const std::vector<std::string>& args) {
    CmdResult res;
    CLI::App app{"Decoding-failure sweep over (L, p0) grids", "cadec decode"};
    CommonOpts c;
    std::string l_grid, p0_grid, tmax = "unbounded";
    long long trials = 1'000'000;
    int bin = 10;
    app.add_option("--L-grid", l_grid, "chain lengths (a:b:s | a:b:+ | list)")
        ->required();
    app.add_option("--p0-grid", p0_grid,
                   "error probabilities (a:b[:s] | list; default step 0.01)")
        ->required();
    app.add_option("--trials", trials, "trials per grid point")
        ->check(CLI::PositiveNumber);
    app.add_option("--tmax", tmax,
                   "unbounded | linear[:c] | pow:<kappa> | const:<T>");
    app.add_option("--bin", bin, "t_dec histogram bin width")
        ->check(CLI::PositiveNumber);
    add_common(app, c);
    if (!parse_app(app, args, res)) return res;

    guarded_run(res, [&] {
        finish_seed(c);
        ExperimentConfig cfg;
        for (const long long L : parse_length_grid(l_grid)) {
            if (L < 2) throw std::invalid_argument("L grid: lengths must be >= 2");
            cfg.L_grid.push_back(static_cast<std::size_t>(L));
        }
        cfg.p0_grid = parse_double_grid(p0_grid);
        cfg.trials = trials;
        cfg.tmax = parse_tmax(tmax);
        cfg.seed = c.seed;
        cfg.threads = c.threads;
        cfg.histogram_bin = bin;
        cfg.validate_config();

        const SweepStats st = estimate_pdec(cfg);
        std::string csv =
            "L,p0,tmax_policy,trials,p_fail,p_fail_stderr,cycle_frac,"
            "mean_tdec,median_tdec\n";
        for (const PointStats& p : st.points) {
            csv += std::to_string(p.L) + ',' + fmt(p.p0) + ',' +
                   cfg.tmax.label() + ',' + std::to_string(p.trials) + ',' +
                   fmt(p.p_fail) + ',' + fmt(p.p_fail_stderr) + ',' +
                   fmt(p.cycle_frac) + ',' + fmt(p.mean_tdec) + ',' +
                   fmt(p.median_tdec) + '\n';
        }
        res.table = std::move(csv);
        res.manifest = manifest_text(
            "decode", c,
            json{{"L_grid", cfg.L_grid},
                 {"p0_grid", cfg.p0_grid},
                 {"trials", cfg.trials},
                 {"tmax", cfg.tmax.label()},
                 {"histogram_bin", cfg.histogram_bin}});
        if (c.hints)
            res.hints =
                "# decoding-failure probability vs chain length\n"
                "set datafile separator ','\n"
                "set logscale y\n"
                "set xlabel 'L'\n"
                "set ylabel 'p_fail'\n"
                "plot " + data_source(c) +
                " every ::1 using 1:5:6 with yerrorlines notitle\n";
        emit_files(res, c);
    });
    return res;
}

CmdResult cmd_ff(const std::vector<std::string>& args) {
    CmdResult res;
    CLI::App app{"Time to first majority flip under continuous noise",
                 "cadec ff"};
    CommonOpts c;
    std::string l_grid, p0_grid, mode = "tlv1d";
    long long trials = 1000, cap = 10'000'000;
    app.add_option("--L-grid", l_grid, "chain lengths")->required();
    app.add_option("--p0-grid", p0_grid, "error probabilities")->required();
    app.add_option("--mode", mode, "tlv1d | global | none");
    app.add_option("--trials", trials, "trials per grid point")
        ->check(CLI::PositiveNumber);
    app.add_option("--cap", cap, "hard step cap (censoring threshold)")
        ->check(CLI::PositiveNumber);
    add_common(app, c);
    if (!parse_app(app, args, res)) return res;

    guarded_run(res, [&] {
        finish_seed(c);
        ExperimentConfig cfg;
        for (const long long L : parse_length_grid(l_grid))
            cfg.L_grid.push_back(static_cast<std::size_t>(std::max(0ll, L)));
        cfg.p0_grid = parse_double_grid(p0_grid);
        cfg.trials = trials;
        cfg.ff_cap = cap;
        cfg.seed = c.seed;
        cfg.threads = c.threads;
        if (mode == "tlv1d")
            cfg.mode = CorrectionMode::TLV1D;
        else if (mode == "global")
            cfg.mode = CorrectionMode::GlobalEachStep;
        else if (mode == "none")
            cfg.mode = CorrectionMode::NoCorrection;
        else
            throw std::invalid_argument("mode must be tlv1d|global|none");
        cfg.validate_config();

        const SweepStats st = estimate_tff(cfg);
        std::string csv =
            "L,p0,mode,trials,cap,samples,censored,tff_mean,tff_stderr\n";
        for (const PointStats& p : st.points) {
            csv += std::to_string(p.L) + ',' + fmt(p.p0) + ',' +
                   correction_mode_label(cfg.mode) + ',' +
                   std::to_string(p.trials) + ',' + std::to_string(cap) +
                   ',' + std::to_string(p.ff_samples) + ',' +
                   std::to_string(p.ff_censored) + ',' + fmt(p.tff_mean) +
                   ',' + fmt(p.tff_stderr) + '\n';
        }
        res.table = std::move(csv);
        res.manifest = manifest_text(
            "ff", c,
            json{{"L_grid", cfg.L_grid},
                 {"p0_grid", cfg.p0_grid},
                 {"mode", correction_mode_label(cfg.mode)},
                 {"trials", cfg.trials},
                 {"cap", cfg.ff_cap}});
        if (c.hints)
            res.hints =
                "# mean time to first majority flip vs chain length\n"
                "set datafile separator ','\n"
                "set logscale y\n"
                "set xlabel 'L'\n"
                "set ylabel 'mean T_ff'\n"
                "plot " + data_source(c) +
                " every ::1 using 1:8:9 with yerrorlines notitle\n";
        emit_files(res, c);
    });
    return res;
}

CmdResult cmd_circuit(const std::vector<std::string>& args) {
    CmdResult res;
    CLI::App app{"Register-pipeline co-simulation / netlist export",
                 "cadec circuit"};
    CommonOpts c;
    long long L = 0, D_L = 0, trials = 1000, horizon = 1'000'000;
    double p0 = 0.0;
    bool emit_netlist = false;
    app.add_option("--L", L, "chain length (even)")->required();
    app.add_option("--DL", D_L, "pipeline depth");
    app.add_option("--p0", p0, "per-step error probability");
    app.add_option("--trials", trials, "independent co-simulations")
        ->check(CLI::PositiveNumber);
    app.add_option("--horizon", horizon, "noise steps per run (censoring cap)")
        ->check(CLI::PositiveNumber);
    app.add_flag("--emit-netlist", emit_netlist,
                 "print the one-row combinational netlist and exit");
    add_common(app, c);
    if (!parse_app(app, args, res)) return res;

    guarded_run(res, [&] {
        finish_seed(c);
        if (emit_netlist) {
            res.table = row_netlist(static_cast<std::size_t>(L)).to_text();
            res.manifest = manifest_text("circuit", c,
                                         json{{"emit_netlist", true},
                                              {"L", L}});
            emit_files(res, c);
            return;
        }
        if (D_L < 1)
            throw std::invalid_argument("--DL is required (>= 1)");
        const CircuitTffStats st = estimate_circuit_tff(
            static_cast<std::size_t>(L), D_L, p0, trials, horizon, c.seed,
            c.threads);
        std::string csv =
            "L,D_L,p0,trials,horizon,samples,censored,ttff_mean,ttff_stderr,"
            "per_step_fail,per_step_fail_stderr,total_logical_flips\n";
        csv += std::to_string(st.L) + ',' + std::to_string(st.D_L) + ',' +
               fmt(st.p0) + ',' + std::to_string(st.trials) + ',' +
               std::to_string(horizon) + ',' +
               std::to_string(st.samples.size()) + ',' +
               std::to_string(st.censored) + ',' + fmt(st.mean) + ',' +
               fmt(st.stderr_) + ',' + fmt(st.per_step_fail) + ',' +
               fmt(st.per_step_fail_stderr) + ',' +
               std::to_string(st.total_logical_flips) + '\n';
        res.table = std::move(csv);
        res.manifest = manifest_text("circuit", c,
                                     json{{"L", L},
                                          {"D_L", D_L},
                                          {"p0", p0},
                                          {"trials", trials},
                                          {"horizon", horizon}});
        if (c.hints)
            res.hints =
                "# single-point summary; sweep L externally and concatenate\n"
                "set datafile separator ','\n"
                "plot " + data_source(c) +
                " every ::1 using 1:8:9 with yerrorbars notitle\n";
        emit_files(res, c);
    });
    return res;
}

CmdResult cmd_bounds(const std::vector<std::string>& args) {
    CmdResult res;
    CLI::App app{"Sparse-set constants and rigorous bound evaluations",
                 "cadec bounds"};
    CommonOpts c;
    std::string preset;
    int R = 0, m = 0, levels = 0;
    double p0 = 0.0, kappa = 0.0;
    long long L = 0, t = 0;
    app.add_option("--preset", preset, "tlv (R=4, m=1)");
    app.add_option("--R", R, "decoder interaction radius");
    app.add_option("--m", m, "eroder constant");
    app.add_option("--p0", p0, "error probability entering alpha/gamma");
    app.add_option("--L", L, "chain length for bound rows");
    app.add_option("--t", t, "time budget: adds a survival bound row");
    app.add_option("--kappa", kappa,
                   "t_max exponent: adds a decode-failure bound row");
    app.add_option("--levels", levels,
                   "adds uncovered-site bound rows for l = 1..levels");
    add_common(app, c);
    if (!parse_app(app, args, res)) return res;

    guarded_run(res, [&] {
        finish_seed(c);
        if (preset == "tlv") {
            R = 4;
            m = 1;
        } else if (!preset.empty()) {
            throw std::invalid_argument("unknown preset: " + preset);
        }
        if (R < 1 || m < 1)
            throw std::invalid_argument("need --preset tlv or --R and --m");
        const SparseBoundParams sp = sparse_params(R, m, p0);
        std::string csv = "quantity,arg1,arg2,raw,clamped\n";
        const auto scalar_row = [&](const char* name, double v) {
            csv += std::string(name) + ",,," + fmt(v) + ',' + fmt(v) + '\n';
        };
        scalar_row("k", static_cast<double>(sp.k));
        scalar_row("alpha", sp.alpha);
        scalar_row("beta", sp.beta);
        scalar_row("gamma", sp.gamma);
        scalar_row("p_tilde_c", sp.p_tilde_c);
        scalar_row("a", sp.a);
        if (t > 0) {
            if (L < 2) throw std::invalid_argument("--t needs --L");
            const BoundValue b = survival_bound_finite(L, t, sp);
            csv += "survival_lb," + std::to_string(L) + ',' +
                   std::to_string(t) + ',' + fmt(b.raw) + ',' +
                   fmt(b.clamped) + '\n';
        }
        if (kappa > 0) {
            if (L < 2) throw std::invalid_argument("--kappa needs --L");
            const BoundValue b = decode_failure_bound(L, kappa, sp);
            csv += "decode_failure_ub," + std::to_string(L) + ',' +
                   fmt(kappa) + ',' + fmt(b.raw) + ',' + fmt(b.clamped) +
                   '\n';
        }
        for (int l = 1; l <= levels; ++l) {
            const BoundValue b = uncovered_site_bound(l, sp);
            csv += "uncovered_ub," + std::to_string(l) + ",," + fmt(b.raw) +
                   ',' + fmt(b.clamped) + '\n';
        }
        res.table = std::move(csv);
        res.manifest = manifest_text("bounds", c,
                                     json{{"R", R},
                                          {"m", m},
                                          {"p0", p0},
                                          {"L", L},
                                          {"t", t},
                                          {"kappa", kappa},
                                          {"levels", levels}});
        emit_files(res, c);
    });
    return res;
}

CmdResult cmd_fixed_points(const std::vector<std::string>& args) {
    CmdResult res;
    CLI::App app{"Census of invariant configurations", "cadec fixed-points"};
    CommonOpts c;
    long long L = 0;
    std::string boundary = "mirrored", family = "tlv";
    app.add_option("--L", L, "chain length")->required();
    app.add_option("--boundary", boundary, "mirrored | periodic");
    app.add_option("--family", family, "tlv | gkl");
    add_common(app, c);
    if (!parse_app(app, args, res)) return res;

    guarded_run(res, [&] {
        finish_seed(c);
        const RuleSet rules = make_rules(family, boundary);
        const std::vector<ChainState> fp =
            enumerate_fixed_points(static_cast<int>(L), rules);
        std::string csv = "L,boundary,family,index,state\n";
        for (std::size_t i = 0; i < fp.size(); ++i)
            csv += std::to_string(L) + ',' + boundary + ',' + family + ',' +
                   std::to_string(i) + ',' + fp[i].to_string() + '\n';
        res.table = std::move(csv);
        res.manifest = manifest_text("fixed-points", c,
                                     json{{"L", L},
                                          {"boundary", boundary},
                                          {"family", family},
                                          {"count", fp.size()}});
        emit_files(res, c);
    });
    return res;
}

CmdResult cmd_eroder(const std::vector<std::string>& args) {
    CmdResult res;
    CLI::App app{"Single-cluster erosion times", "cadec eroder"};
    CommonOpts c;
    int lmax = 64;
    std::string family = "tlv";
    app.add_option("--lmax", lmax, "largest cluster diameter")
        ->check(CLI::PositiveNumber);
    app.add_option("--family", family, "tlv | gkl");
    add_common(app, c);
    if (!parse_app(app, args, res)) return res;

    guarded_run(res, [&] {
        finish_seed(c);
        const RuleSet rules = make_rules(family, "periodic");
        const EroderTable et = measure_eroder(rules, lmax);
        std::string csv = "family,m,l,t_dec\n";
        for (const EroderTable::Row& row : et.rows)
            csv += family + ',' + std::to_string(et.m) + ',' +
                   std::to_string(row.l) + ',' + std::to_string(row.t_dec) +
                   '\n';
        res.table = std::move(csv);
        res.manifest = manifest_text("eroder", c,
                                     json{{"family", family},
                                          {"lmax", lmax},
                                          {"m", et.m}});
        if (c.hints)
            res.hints =
                "# erosion time vs cluster diameter\n"
                "set datafile separator ','\n"
                "set xlabel 'l'\n"
                "set ylabel 't_dec'\n"
                "plot " + data_source(c) +
                " every ::1 using 3:4 with linespoints notitle\n";
        emit_files(res, c);
    });
    return res;
}

CmdResult cmd_sparse(const std::vector<std::string>& args) {
    CmdResult res;
    CLI::App app{"Sparse-decomposition coverage vs the analytic bound",
                 "cadec sparse"};
    CommonOpts c;
    long long half_width = 128, windows = 10'000;
    double p0 = -1.0;
    int R = 4, m = 1, max_level = 8;
    app.add_option("--half-width", half_width, "window half width")
        ->check(CLI::PositiveNumber);
    app.add_option("--p0", p0, "error probability")->required();
    app.add_option("--windows", windows, "mirrored windows to sample")
        ->check(CLI::PositiveNumber);
    app.add_option("--R", R, "decoder interaction radius")
        ->check(CLI::PositiveNumber);
    app.add_option("--m", m, "eroder constant")->check(CLI::PositiveNumber);
    app.add_option("--max-level", max_level, "largest reported level")
        ->check(CLI::PositiveNumber);
    add_common(app, c);
    if (!parse_app(app, args, res)) return res;

    guarded_run(res, [&] {
        finish_seed(c);
        const SparseBoundTable tb = validate_sparse_bound(
            half_width, p0, windows, R, m, c.seed, max_level);
        std::string csv =
            "half_width,p0,windows,level,site_samples,uncovered_count,"
            "uncovered_fraction,uncovered_stderr,bound_raw,bound_clamped\n";
        for (const SparseBoundRow& row : tb.rows)
            csv += std::to_string(tb.half_width) + ',' + fmt(tb.p0) + ',' +
                   std::to_string(tb.windows) + ',' +
                   std::to_string(row.level) + ',' +
                   std::to_string(row.site_samples) + ',' +
                   std::to_string(row.uncovered_count) + ',' +
                   fmt(row.uncovered_fraction) + ',' +
                   fmt(row.uncovered_stderr) + ',' + fmt(row.bound_raw) +
                   ',' + fmt(row.bound_clamped) + '\n';
        res.table = std::move(csv);
        res.manifest = manifest_text("sparse", c,
                                     json{{"half_width", half_width},
                                          {"p0", p0},
                                          {"windows", windows},
                                          {"R", R},
                                          {"m", m},
                                          {"max_level", max_level}});
        if (c.hints)
            res.hints =
                "# uncovered-site fraction vs level, with the analytic bound\n"
                "set datafile separator ','\n"
                "set logscale y\n"
                "set xlabel 'level'\n"
                "plot " + data_source(c) +
                " every ::1 using 4:7:8 with yerrorlines title 'measured', " +
                data_source(c) +
                " every ::1 using 4:10 with lines title 'bound'\n";
        emit_files(res, c);
    });
    return res;
}

int run_cli(int argc, char** argv) {
    using Handler = CmdResult (*)(const std::vector<std::string>&);
    static const std::map<std::string, Handler> handlers = {
        {"decode", cmd_decode},     {"ff", cmd_ff},
        {"circuit", cmd_circuit},   {"bounds", cmd_bounds},
        {"fixed-points", cmd_fixed_points}, {"eroder", cmd_eroder},
        {"sparse", cmd_sparse},
    };
    const auto usage = [] {
        std::string u = "usage: cadec <subcommand> [flags]\n\nsubcommands:\n";
        u += "  decode        decoding-failure sweep over (L, p0) grids\n";
        u += "  ff            time to first majority flip, three modes\n";
        u += "  circuit       register-pipeline runs / netlist export\n";
        u += "  bounds        sparse-set constants and rigorous bounds\n";
        u += "  fixed-points  invariant-configuration census\n";
        u += "  eroder        single-cluster erosion times\n";
        u += "  sparse        decomposition coverage vs analytic bound\n";
        u += "\n'cadec <subcommand> --help' lists the flags.\n";
        return u;
    };
    if (argc < 2) {
        std::fputs(usage().c_str(), stderr);
        return 2;
    }
    const std::string name = argv[1];
    if (name == "--help" || name == "-h" || name == "help") {
        std::fputs(usage().c_str(), stdout);
        return 0;
    }
    if (name == "--version") {
        std::printf("cadec %s\n", version_string);
        return 0;
    }
    const auto it = handlers.find(name);
    if (it == handlers.end()) {
        std::fprintf(stderr, "unknown subcommand: %s\n%s", name.c_str(),
                     usage().c_str());
        return 2;
    }
    const CmdResult res =
        it->second(std::vector<std::string>(argv + 2, argv + argc));
    if (!res.message.empty())
        std::fputs((res.message + "\n").c_str(),
                   res.exit_code == 0 ? stdout : stderr);
    if (res.exit_code == 0 && res.out_path.empty()) {
        std::fputs(res.table.c_str(), stdout);
        if (!res.hints.empty()) std::fputs(res.hints.c_str(), stderr);
    }
    return res.exit_code;
}

} // namespace cadec::cli

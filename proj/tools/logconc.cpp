#include <CLI11.hpp>
#include <json.hpp>

#include <chrono>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <sstream>

#ifdef LOGCONC_HAVE_OPENSSL
#include <openssl/evp.h>
#endif

#include "logconc/bodies.hpp"
#include "logconc/io.hpp"
#include "logconc/legendre.hpp"
#include "logconc/lowmstar.hpp"
#include "logconc/meanwidth.hpp"
#include "logconc/verify.hpp"

using json = nlohmann::ordered_json;
using namespace logconc;

namespace {

constexpr const char* kVersion = "1.0.0";

// Exit codes.
constexpr int kPass = 0;
constexpr int kFail = 1;
constexpr int kUsage = 2;

json num(double v) {
    if (std::isnan(v)) return "nan";
    if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
    return v;
}

json vec_json(const Vector& x) {
    json a = json::array();
    for (Index i = 0; i < x.size(); ++i) a.push_back(num(x[i]));
    return a;
}

std::string file_digest(const std::filesystem::path& p) {
#ifdef LOGCONC_HAVE_OPENSSL
    std::ifstream in(p, std::ios::binary);
    if (!in) return "unreadable";
    std::ostringstream ss;
    ss << in.rdbuf();
    const std::string data = ss.str();
    unsigned char md[EVP_MAX_MD_SIZE];
    unsigned int len = 0;
    EVP_Digest(data.data(), data.size(), md, &len, EVP_sha256(), nullptr);
    std::ostringstream hex;
    hex << "sha256:";
    for (unsigned int i = 0; i < len; ++i) hex << std::hex << std::setw(2) << std::setfill('0') << int(md[i]);
    return hex.str();
#else
    (void)p;
    return "unavailable";
#endif
}

struct Global {
    bool json_only = false;
    bool timing = false;
    int threads = 1;
    std::string json_out;
    std::string csv;
    std::optional<std::uint64_t> seed_flag;
};

// Seed precedence: --seed, then LOGCONC_SEED, then the file or default.
std::uint64_t resolve_seed(const Global& g, std::uint64_t fallback) {
    if (g.seed_flag) return *g.seed_flag;
    if (const char* env = std::getenv("LOGCONC_SEED")) {
        try {
            std::size_t used = 0;
            const unsigned long long v = std::stoull(env, &used);
            if (used != std::string(env).size()) throw std::invalid_argument("trailing characters");
            return v;
        } catch (const std::exception&) {
            throw InputError(std::string("LOGCONC_SEED: not an unsigned integer: '") + env + "'");
        }
    }
    return fallback;
}

class Run {
public:
    Run(const Global& g, std::string command) : g_(g), command_(std::move(command)), t0_(std::chrono::steady_clock::now()) {}

    void input(const std::string& path) { inputs_[path] = file_digest(path); }
    json& meta() { return meta_; }

    json manifest(std::optional<std::uint64_t> seed) const {
        json m;
        m["command"] = command_;
        m["tool_version"] = kVersion;
        m["seed"] = seed ? json(*seed) : json(nullptr);
        m["threads"] = g_.threads;
        json d = json::object();
        for (const auto& [k, v] : inputs_) d[k] = v;
        m["input_digests"] = d;
        if (g_.timing)
            m["wall_time_s"] = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0_).count();
        return m;
    }

    void emit(json report, std::optional<std::uint64_t> seed, const std::string& table) {
        json out;
        for (auto& [k, v] : report.items()) out[k] = v;
        json meta = meta_;
        meta["manifest"] = manifest(seed);
        out["_meta"] = meta;
        if (!g_.json_only && !table.empty()) std::cout << table;
        const std::string text = out.dump(2) + "\n";
        if (!g_.json_out.empty()) {
            std::ofstream f(g_.json_out);
            if (!f) throw InputError("cannot write '" + g_.json_out + "'");
            f << text;
        } else {
            std::cout << text;
        }
    }

private:
    const Global& g_;
    std::string command_;
    std::chrono::steady_clock::time_point t0_;
    std::map<std::string, std::string> inputs_;
    json meta_ = json::object();
};

void write_csv(const std::string& path, const std::vector<std::string>& header,
               const std::vector<std::vector<std::string>>& rows) {
    std::ofstream f(path);
    if (!f) throw InputError("cannot write '" + path + "'");
    for (std::size_t i = 0; i < header.size(); ++i) f << (i ? "," : "") << header[i];
    f << '\n';
    for (const auto& r : rows) {
        for (std::size_t i = 0; i < r.size(); ++i) f << (i ? "," : "") << r[i];
        f << '\n';
    }
}

std::string fmt(double v, int prec = 10) {
    if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
    std::ostringstream ss;
    ss << std::setprecision(prec) << v;
    return ss.str();
}

json estimate_json(const EstimateReport& r) {
    json j;
    j["value"] = num(r.value.raw());
    j["std_error"] = num(r.std_error);
    j["method"] = r.method;
    j["evaluations"] = r.evaluations;
    j["divergent"] = r.divergent || r.value.is_inf();
    j["witness"] = r.witness ? vec_json(*r.witness) : json(nullptr);
    if (!r.table.empty()) {
        json t = json::array();
        for (const auto& row : r.table) t.push_back({{"eps", num(row[0])}, {"ratio", num(row[1])}, {"slope", num(row[2])}});
        j["table"] = t;
    }
    j["notes"] = r.notes;
    return j;
}

json estimate_meta() {
    return {{"value", "estimate (dimensionless)"},
            {"std_error", "one-sigma integration error estimate, same units as value"},
            {"evaluations", "integrand evaluations"},
            {"witness", "point where the integrand is +inf (divergence certificate)"},
            {"table", "per eps: eps, ratio I(eps)/int G, secant slope"}};
}

// ---- legendre ----

int cmd_legendre(const Global& g, const std::string& spec, const std::string& out, Index points, double lo, double hi) {
    Run run(g, "legendre");
    run.input(spec);
    const LogConcaveFn f = load_function(spec);
    const Potential& phi = f.phi();
    const int n = f.dim();
    if (n > 3) throw InputError("legendre: grid output is limited to n <= 3");
    const Index p = points > 0 ? points : (n == 1 ? 161 : n == 2 ? 81 : 41);
    const GridSpec slopes = phi.is_grid() ? default_slope_grid(phi.as_grid(), points) : GridSpec::cube(n, lo, hi, p);
    const SupportFn h = phi.is_grid() ? legendre_nd(phi.as_grid(), slopes) : legendre(phi);
    GridPotential grid;
    grid.spec = slopes;
    grid.values.resize(slopes.size());
    for (Index i = 0; i < slopes.size(); ++i) grid.values[i] = h(node_point(slopes, i)).raw();

    json rep;
    rep["input"] = {{"kind", phi.kind()}, {"dim", n}};
    rep["output"] = {{"path", out.empty() ? json(nullptr) : json(out)},
                     {"representation", h.kind()},
                     {"provenance", h.provenance()},
                     {"origin", vec_json(slopes.origin)},
                     {"spacing", vec_json(slopes.spacing)},
                     {"nodes", slopes.size()},
                     {"min", num(grid.values.minCoeff())},
                     {"max", num(grid.values.maxCoeff())}};
    run.meta()["output.min"] = "smallest conjugate value on the slope grid";
    run.meta()["output.max"] = "largest conjugate value on the slope grid";
    if (out.empty()) {
        write_grid(std::cout, grid);
        return kPass;
    }
    save_grid(out, grid);
    run.emit(rep, std::nullopt, "wrote " + out + " (" + std::to_string(slopes.size()) + " nodes)\n");
    return kPass;
}

// ---- meanwidth ----

int cmd_meanwidth(const Global& g, const std::string& spec, const std::string& method, bool tilde, Index samples,
                  int order) {
    Run run(g, "meanwidth");
    run.input(spec);
    const LogConcaveFn f = load_function(spec);
    GaussianMeasure m;
    m.method = parse_method(method);
    m.seed = resolve_seed(g, m.seed);
    if (samples > 0) m.samples = samples;
    m.order = order;
    const EstimateReport r = tilde ? mean_width_tilde(f, TildeConfig{}, m) : mean_width(f, m);
    json rep;
    rep["definition"] = tilde ? "tilde" : "gaussian";
    rep["function"] = {{"kind", f.phi().kind()}, {"dim", f.dim()}};
    rep.update(estimate_json(r));
    run.meta() = estimate_meta();
    std::ostringstream t;
    t << (tilde ? "M~*(f) = " : "M*(f) = ") << fmt(r.value.raw()) << "  +- " << fmt(r.std_error, 3) << "  [" << r.method
      << "]\n";
    if (tilde) {
        t << std::setw(14) << "eps" << std::setw(20) << "I(eps)/int G" << std::setw(20) << "slope" << '\n';
        for (const auto& row : r.table)
            t << std::setw(14) << fmt(row[0], 6) << std::setw(20) << fmt(row[1]) << std::setw(20) << fmt(row[2]) << '\n';
    }
    if (!g.csv.empty()) {
        std::vector<std::vector<std::string>> rows;
        for (const auto& row : r.table) rows.push_back({fmt(row[0], 17), fmt(row[1], 17), fmt(row[2], 17)});
        write_csv(g.csv, {"eps", "ratio", "slope"}, rows);
    }
    run.emit(rep, m.method == Method::MonteCarlo || (m.method == Method::Auto && f.dim() > 3) ? std::optional(m.seed)
                                                                                               : std::nullopt,
             t.str());
    return kPass;
}

// ---- bodies ----

int cmd_bodies(const Global& g, const std::string& spec, const std::string& op, Index samples) {
    Run run(g, "bodies");
    run.input(spec);
    const ConvexBody K = load_body(spec);
    BodySampling s;
    s.seed = resolve_seed(g, s.seed);
    if (samples > 0) s.samples = samples;
    json rep;
    rep["body"] = {{"kind", K.kind()}, {"dim", K.dim()}};
    std::ostringstream t;
    bool pass = true;
    const bool all = op == "all";
    if (all || op == "mean_width") {
        const EstimateReport r = mean_width_body(K, false, s);
        rep["mean_width"] = estimate_json(r);
        t << "M*(K) = " << fmt(r.value.raw()) << " [" << r.method << "]\n";
    }
    if (K.dim() >= 2 && K.dim() <= 3 && (all || op == "limit")) {
        const EstimateReport r = mean_width_body_limit(K, {0.2, 0.1, 0.05, 0.025}, s);
        rep["mean_width_limit"] = estimate_json(r);
        t << "limit M*(K) = " << fmt(r.value.raw()) << " +- " << fmt(r.std_error, 3) << '\n';
    } else if (op == "limit") {
        throw InputError("bodies --op limit needs n in {2, 3}");
    }
    if (K.dim() >= 2 && K.dim() <= 3 && (all || op == "steiner")) {
        const QuermassReport q = steiner_fit(K, {}, s);
        json jq;
        json V = json::array();
        for (double v : q.V) V.push_back(num(v));
        jq["V"] = V;
        jq["residual"] = num(q.residual);
        jq["condition"] = num(q.condition);
        json samples_j = json::array();
        for (std::size_t i = 0; i < q.radii.size(); ++i)
            samples_j.push_back({{"t", num(q.radii[i])}, {"volume", num(q.volumes[i])}, {"std_error", num(q.volume_errors[i])}});
        jq["samples"] = samples_j;
        jq["v1_rel_gap"] = num(q.v1_rel_gap);
        jq["pass"] = q.pass;
        rep["steiner"] = jq;
        pass = pass && q.pass;
        t << "Steiner:";
        for (std::size_t i = 0; i < q.V.size(); ++i) t << " V_" << i << "=" << fmt(q.V[i], 6);
        t << "  (V_1 vs |D| M*: " << fmt(100 * q.v1_rel_gap, 3) << "%)\n";
    } else if (op == "steiner") {
        throw InputError("bodies --op steiner needs n in {2, 3}");
    }
    if (const auto v = K.volume()) rep["volume"] = num(*v);
    run.meta() = {{"mean_width", "spherical mean width, length units of K"},
                  {"steiner.V", "quermassintegrals V_0..V_n (V_n = |K|, V_1 = |D| M*(K))"},
                  {"steiner.samples", "Monte Carlo volumes |K + tD| with one-sigma errors"},
                  {"volume", "exact volume of K"}};
    if (!g.csv.empty() && rep.contains("steiner")) {
        std::vector<std::vector<std::string>> rows;
        for (const auto& sj : rep["steiner"]["samples"])
            rows.push_back({sj["t"].dump(), sj["volume"].dump(), sj["std_error"].dump()});
        write_csv(g.csv, {"t", "volume", "std_error"}, rows);
    }
    run.emit(rep, s.seed, t.str());
    return pass ? kPass : kFail;
}

// ---- verify ----

int cmd_verify(const Global& g, const std::string& suite) {
    Run run(g, "verify " + suite);
    const std::uint64_t seed = resolve_seed(g, 20240601);
    std::vector<std::string> names;
    if (suite == "all") names = suite_names();
    else names.push_back(suite);
    json suites = json::array();
    std::ostringstream t;
    std::vector<std::vector<std::string>> csv_rows;
    bool pass = true;
    for (const auto& name : names) {
        const SuiteReport r = run_suite(name, seed);
        pass = pass && r.pass();
        json rows = json::array();
        t << "== " << name << (r.pass() ? "  PASS" : "  FAIL") << '\n';
        for (const auto& row : r.rows) {
            rows.push_back({{"name", row.name},
                            {"value", num(row.value)},
                            {"reference", num(row.reference)},
                            {"tolerance", num(row.tolerance)},
                            {"pass", row.pass},
                            {"detail", row.detail}});
            t << "  " << (row.pass ? "PASS " : "FAIL ") << std::left << std::setw(58) << row.name << std::right
              << std::setw(18) << fmt(row.value, 8) << std::setw(18) << fmt(row.reference, 8) << "  " << row.detail
              << '\n';
            csv_rows.push_back({name, "\"" + row.name + "\"", fmt(row.value, 17), fmt(row.reference, 17),
                                fmt(row.tolerance, 17), row.pass ? "1" : "0"});
        }
        json sj = {{"suite", name}, {"pass", r.pass()}, {"rows", rows}};
        if (g.timing) sj["seconds"] = r.seconds;
        suites.push_back(sj);
    }
    if (!g.csv.empty()) write_csv(g.csv, {"suite", "name", "value", "reference", "tolerance", "pass"}, csv_rows);
    run.meta() = {{"rows.value", "checked quantity"},
                  {"rows.reference", "target value or bound it is compared with"},
                  {"rows.tolerance", "allowed deviation (absolute unless the row name says otherwise)"}};
    run.emit({{"pass", pass}, {"suites", suites}}, seed, t.str());
    return pass ? kPass : kFail;
}

// ---- lowmstar ----

json config_json(const LowMstarConfig& c, const std::string& mode, const std::string& function) {
    return {{"eps", num(c.eps)},       {"M", num(c.M)},         {"lambda", num(c.lambda)}, {"n", c.n},
            {"k", c.subspace_dim()},   {"trials", c.trials},     {"samples", c.samples},    {"seed", c.seed},
            {"c_probe", c.c_probe},    {"mode", mode},           {"function", function}};
}

json experiment_json(const ExperimentReport& r, bool low) {
    json trials = json::array();
    for (const auto& t : r.trials) {
        json tj = {{"subspace_seed", t.subspace_seed}, {"max_c", num(t.max_c)}, {"shell_count", t.shell_count}};
        if (!t.implicit_subspace) tj["basis_error"] = num(t.basis_error);
        if (low) {
            tj["max_c_f"] = num(t.max_c_f);
            tj["f_below_h"] = t.f_below_h;
        }
        trials.push_back(tj);
    }
    json probes = json::array();
    for (std::size_t i = 0; i < r.probe_bounds.size(); ++i)
        probes.push_back({{"c_probe", num(r.config.c_probe[i])}, {"bound", num(r.probe_bounds[i])},
                          {"pass_fraction", num(r.probe_pass[i])}});
    json levels = json::array();
    for (const auto& l : r.level_sets)
        levels.push_back({{"beta", num(l.beta)}, {"inradius", num(l.inradius)}, {"circumradius", num(l.circumradius)}});
    json summary = {{"max_c", num(r.max_c)},
                    {"quantiles", {{"q05", num(r.q05)}, {"q50", num(r.q50)}, {"q95", num(r.q95)}}},
                    {"pass_fraction", num(r.pass_fraction)},
                    {"volume_ratio", num(r.volume_ratio.value)},
                    {"shell", {{"r_lo", num(r.shell_lo)}, {"r_hi", num(r.shell_hi)}, {"empty", r.empty_shell}}},
                    {"probes", probes},
                    {"beta_net", r.net},
                    {"level_sets", levels},
                    {"notes", r.notes}};
    return {{"per_trial", trials}, {"summary", summary}};
}

int cmd_lowmstar(const Global& g, const std::string& path) {
    Run run(g, "lowmstar");
    run.input(path);
    ExperimentSpec spec = load_experiment(path);
    spec.config.seed = resolve_seed(g, spec.config.seed);
    spec.config.threads = g.threads;
    json rep;
    rep["config"] = config_json(spec.config, spec.mode, spec.function);
    std::ostringstream t;
    int code = kPass;
    const ExperimentReport* er = nullptr;
    LowMstarReport low;
    ExperimentReport fv;
    if (spec.mode == "low_mstar") {
        low = low_mstar_experiment(*spec.fn, spec.config);
        er = &low.h_run;
        rep.update(experiment_json(low.h_run, true));
        rep["summary"]["low_mstar"] = {{"m_star_f", num(low.m_star_f)}, {"m_star_h", num(low.m_star_h)},
                                       {"chain_gap", num(low.chain_gap)}, {"v_h", num(low.v_h)},
                                       {"v_h_ok", low.v_h_ok},            {"max_c_f", num(low.max_c_f)},
                                       {"f_below_h", low.f_below_h},     {"pass", low.pass}};
        code = low.pass ? kPass : kFail;
        t << "M*(f) = " << fmt(low.m_star_f) << ", M*(h) = " << fmt(low.m_star_h) << ", V(h) = " << fmt(low.v_h)
          << (low.v_h_ok ? " <= sqrt(e)" : " > sqrt(e)") << ", max c for f = " << fmt(low.max_c_f) << '\n';
    } else {
        fv = finite_volume_ratio_experiment(*spec.fn, spec.config);
        er = &fv;
        rep.update(experiment_json(fv, false));
    }
    t << "V = " << fmt(er->volume_ratio.value) << ", max c = " << fmt(er->max_c) << " (q05 " << fmt(er->q05, 6)
      << ", q50 " << fmt(er->q50, 6) << ", q95 " << fmt(er->q95, 6) << "), pass fraction " << fmt(er->pass_fraction, 4)
      << '\n';
    if (!g.csv.empty()) {
        std::vector<std::vector<std::string>> rows;
        for (const auto& tr : er->trials)
            rows.push_back({std::to_string(tr.subspace_seed), fmt(tr.max_c, 17), std::to_string(tr.shell_count)});
        write_csv(g.csv, {"subspace_seed", "max_c", "shell_count"}, rows);
    }
    run.meta() = {{"per_trial.max_c", "smallest c with f <= (c . G) at every sampled shell point, (c . G)(x) = exp(-|x|^2/(2c))"},
                  {"per_trial.shell_count", "samples inside exp(-eps n) >= f >= exp(-M n)"},
                  {"summary.pass_fraction", "fraction of trials with max_c <= [c_probe V(f)]^{2/(1-lambda)}, first probe"},
                  {"summary.volume_ratio", "V(f) = (int f / int G)^{1/n}"},
                  {"summary.shell", "radial shell radii (zero for grids)"}};
    run.emit(rep, spec.config.seed, t.str());
    return code;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"logconc: mean width of log-concave functions"};
    app.set_version_flag("--version", kVersion);
    app.require_subcommand(1);
    Global g;
    app.add_flag("--json-only", g.json_only, "Suppress text tables");
    app.add_flag("--timing", g.timing, "Record wall time in the manifest");
    app.add_option("--threads", g.threads, "Worker threads (lowmstar trials)")->check(CLI::PositiveNumber);
    app.add_option("--json-out", g.json_out, "Write the JSON report to a file");
    app.add_option("--csv", g.csv, "Write a plot-ready CSV table");
    std::uint64_t seed = 0;
    auto* seed_opt = app.add_option("--seed", seed, "Random seed (overrides LOGCONC_SEED and config files)");

    std::string spec, out, method = "auto", op = "all", suite = "all";
    Index points = 0, samples = 0;
    int order = 0;
    double lo = -4.0, hi = 4.0;
    bool tilde = false;

    auto* leg = app.add_subcommand("legendre", "Conjugate a function spec onto a slope grid");
    leg->add_option("spec", spec, "Function spec file")->required()->check(CLI::ExistingFile);
    leg->add_option("-o,--out", out, "Output grid file (default: stdout)");
    leg->add_option("--points", points, "Nodes per axis of the slope grid");
    leg->add_option("--lo", lo, "Slope grid lower bound (analytic inputs)");
    leg->add_option("--hi", hi, "Slope grid upper bound (analytic inputs)");

    auto* mw = app.add_subcommand("meanwidth", "Mean width M*(f) or M~*(f)");
    mw->add_option("spec", spec, "Function spec file")->required()->check(CLI::ExistingFile);
    mw->add_option("--method", method, "auto | gh | mc | radial | exact");
    mw->add_flag("--tilde", tilde, "Use the derivative definition M~*");
    mw->add_option("--samples", samples, "Monte Carlo samples");
    mw->add_option("--order", order, "Gauss-Hermite order per axis");

    auto* bd = app.add_subcommand("bodies", "Mean width, limit path and Steiner fit of a convex body");
    bd->add_option("spec", spec, "Body spec file")->required()->check(CLI::ExistingFile);
    bd->add_option("--op", op, "mean_width | limit | steiner | all")
        ->check(CLI::IsMember({"mean_width", "limit", "steiner", "all"}));
    bd->add_option("--samples", samples, "Monte Carlo samples per volume");

    auto* vf = app.add_subcommand("verify", "Run verification suites");
    std::vector<std::string> choices = suite_names();
    choices.push_back("all");
    vf->add_option("suite", suite, "Suite name or 'all'")->check(CLI::IsMember(choices));

    auto* lm = app.add_subcommand("lowmstar", "Finite-volume-ratio / low-M* experiment");
    lm->add_option("config", spec, "Experiment config file")->required()->check(CLI::ExistingFile);

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForVersion& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return kUsage;
    }
    if (seed_opt->count()) g.seed_flag = seed;

    try {
        if (*leg) return cmd_legendre(g, spec, out, points, lo, hi);
        if (*mw) return cmd_meanwidth(g, spec, method, tilde, samples, order);
        if (*bd) return cmd_bodies(g, spec, op, samples);
        if (*vf) return cmd_verify(g, suite);
        if (*lm) return cmd_lowmstar(g, spec);
    } catch (const InputError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kUsage;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kUsage;
    }
    return kUsage;
}

#include "logconc/io.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <sstream>

#include "logconc/lowmstar.hpp"

namespace logconc {

namespace {

std::string trim(const std::string& s) {
    std::size_t a = 0, b = s.size();
    while (a < b && std::isspace(static_cast<unsigned char>(s[a]))) ++a;
    while (b > a && std::isspace(static_cast<unsigned char>(s[b - 1]))) --b;
    return s.substr(a, b - a);
}

std::string read_file(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw InputError("cannot open '" + path.string() + "'");
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

}  // namespace

ParseError::ParseError(const std::string& source, int line, const std::string& message)
    : InputError(source + ":" + std::to_string(line) + ": " + message), line_(line) {}

double parse_number(const std::string& raw) {
    const std::string s = trim(raw);
    if (s == "inf" || s == "+inf" || s == "Inf" || s == "infinity") return kInf;
    if (s.empty()) throw InputError("empty number");
    double v = 0.0;
    const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc() || ptr != s.data() + s.size()) throw InputError("not a number: '" + s + "'");
    if (std::isnan(v)) throw InputError("not a number: '" + s + "'");
    return v;
}

std::vector<double> parse_list(const std::string& s) {
    std::string t = s;
    std::replace(t.begin(), t.end(), ',', ' ');
    std::istringstream in(t);
    std::vector<double> out;
    std::string tok;
    while (in >> tok) out.push_back(parse_number(tok));
    return out;
}

KeyValueFile KeyValueFile::parse(const std::string& text, std::string source) {
    KeyValueFile kv;
    kv.source_ = std::move(source);
    std::istringstream in(text);
    std::string line;
    int no = 0;
    while (std::getline(in, line)) {
        ++no;
        if (const auto h = line.find('#'); h != std::string::npos) line.resize(h);
        line = trim(line);
        if (line.empty()) continue;
        const auto eq = line.find('=');
        if (eq == std::string::npos) throw ParseError(kv.source_, no, "expected 'key = value', got '" + line + "'");
        Entry e;
        e.key = trim(line.substr(0, eq));
        e.value = trim(line.substr(eq + 1));
        e.line = no;
        if (e.key.empty()) throw ParseError(kv.source_, no, "missing key");
        kv.entries_.push_back(std::move(e));
    }
    return kv;
}

KeyValueFile KeyValueFile::load(const std::filesystem::path& path) {
    KeyValueFile kv = parse(read_file(path), path.string());
    kv.base_dir_ = path.parent_path();
    return kv;
}

bool KeyValueFile::has(const std::string& key) const {
    return std::any_of(entries_.begin(), entries_.end(), [&](const Entry& e) { return e.key == key; });
}

int KeyValueFile::line_of(const std::string& key) const {
    for (const auto& e : entries_)
        if (e.key == key) return e.line;
    return 0;
}

void KeyValueFile::fail(const std::string& key, const std::string& message) const {
    throw ParseError(source_, line_of(key), "key '" + key + "': " + message);
}

std::vector<KeyValueFile::Entry*> KeyValueFile::all(const std::string& key) {
    std::vector<Entry*> out;
    for (auto& e : entries_)
        if (e.key == key) {
            e.used = true;
            out.push_back(&e);
        }
    return out;
}

std::optional<std::string> KeyValueFile::get(const std::string& key) {
    const auto es = all(key);
    if (es.empty()) return std::nullopt;
    if (es.size() > 1) throw ParseError(source_, es[1]->line, "key '" + key + "' given more than once");
    return es.front()->value;
}

std::string KeyValueFile::require(const std::string& key) {
    const auto v = get(key);
    if (!v) throw ParseError(source_, 0, "missing required key '" + key + "'");
    return *v;
}

double KeyValueFile::get_double(const std::string& key, double fallback) {
    const auto v = get(key);
    if (!v) return fallback;
    try {
        return parse_number(*v);
    } catch (const InputError& e) {
        fail(key, e.what());
    }
}

double KeyValueFile::require_double(const std::string& key) {
    require(key);
    return get_double(key, 0.0);
}

long long KeyValueFile::get_int(const std::string& key, long long fallback) {
    const auto v = get(key);
    if (!v) return fallback;
    long long x = 0;
    const auto [ptr, ec] = std::from_chars(v->data(), v->data() + v->size(), x);
    if (ec != std::errc() || ptr != v->data() + v->size()) fail(key, "not an integer: '" + *v + "'");
    return x;
}

Vector KeyValueFile::get_vector(const std::string& key, int dim, const Vector& fallback) {
    const auto v = get(key);
    if (!v) return fallback;
    std::vector<double> xs;
    try {
        xs = parse_list(*v);
    } catch (const InputError& e) {
        fail(key, e.what());
    }
    if (xs.size() == 1) return Vector::Constant(dim, xs[0]);
    if (static_cast<int>(xs.size()) != dim)
        fail(key, "expected " + std::to_string(dim) + " components, got " + std::to_string(xs.size()));
    return Eigen::Map<const Vector>(xs.data(), dim);
}

std::vector<double> KeyValueFile::get_list(const std::string& key, const std::vector<double>& fallback) {
    const auto v = get(key);
    if (!v) return fallback;
    try {
        return parse_list(*v);
    } catch (const InputError& e) {
        fail(key, e.what());
    }
}

void KeyValueFile::reject_unused() const {
    for (const auto& e : entries_)
        if (!e.used) throw ParseError(source_, e.line, "unknown key '" + e.key + "'");
}

// ---- grid files ----

GridPotential read_grid(std::istream& in, const std::string& source) {
    std::string line;
    int no = 0;
    auto next = [&]() -> std::string {
        while (std::getline(in, line)) {
            ++no;
            const std::string t = trim(line);
            if (!t.empty() && t[0] != '#') return t;
        }
        throw ParseError(source, no, "unexpected end of file");
    };
    const std::string header = next();
    int dim = 0;
    if (std::sscanf(header.c_str(), "lcgrid v1 dim=%d", &dim) != 1 || dim < 1)
        throw ParseError(source, no, "expected header 'lcgrid v1 dim=<n>'");
    auto field = [&](const std::string& name) {
        const std::string t = next();
        if (t.rfind(name + "=", 0) != 0) throw ParseError(source, no, "expected '" + name + "='");
        std::vector<double> xs;
        try {
            xs = parse_list(t.substr(name.size() + 1));
        } catch (const InputError& e) {
            throw ParseError(source, no, e.what());
        }
        if (static_cast<int>(xs.size()) != dim)
            throw ParseError(source, no, name + ": expected " + std::to_string(dim) + " entries");
        return xs;
    };
    GridPotential g;
    const auto o = field("origin");
    const auto s = field("spacing");
    const auto sh = field("shape");
    g.spec.origin = Eigen::Map<const Vector>(o.data(), dim);
    g.spec.spacing = Eigen::Map<const Vector>(s.data(), dim);
    for (double x : sh) {
        if (x < 1 || x != std::floor(x)) throw ParseError(source, no, "shape entries must be positive integers");
        g.spec.shape.push_back(static_cast<Index>(x));
    }
    try {
        g.spec.validate();
    } catch (const InputError& e) {
        throw ParseError(source, no, e.what());
    }
    g.values.resize(g.spec.size());
    Index count = 0;
    while (std::getline(in, line)) {
        ++no;
        if (const auto h = line.find('#'); h != std::string::npos) line.resize(h);
        std::istringstream ls(line);
        std::string tok;
        while (ls >> tok) {
            if (count >= g.values.size()) throw ParseError(source, no, "more values than shape allows");
            try {
                g.values[count++] = parse_number(tok);
            } catch (const InputError& e) {
                throw ParseError(source, no, e.what());
            }
        }
    }
    if (count != g.values.size())
        throw ParseError(source, no,
                         "expected " + std::to_string(g.values.size()) + " values, got " + std::to_string(count));
    return g;
}

GridPotential load_grid(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw InputError("cannot open '" + path.string() + "'");
    return read_grid(in, path.string());
}

void write_grid(std::ostream& out, const GridPotential& g) {
    const int n = g.spec.dim();
    auto row = [&](const char* name, auto get) {
        out << name << '=';
        for (int k = 0; k < n; ++k) out << (k ? "," : "") << get(k);
        out << '\n';
    };
    out << "lcgrid v1 dim=" << n << '\n';
    out << std::setprecision(17);
    row("origin", [&](int k) { return g.spec.origin[k]; });
    row("spacing", [&](int k) { return g.spec.spacing[k]; });
    row("shape", [&](int k) { return g.spec.shape[k]; });
    const Index last = g.spec.shape.back();
    for (Index i = 0; i < g.values.size(); ++i) {
        if (std::isinf(g.values[i])) out << "inf";
        else out << g.values[i];
        out << ((i + 1) % last == 0 ? '\n' : ' ');
    }
}

void save_grid(const std::filesystem::path& path, const GridPotential& g) {
    std::ofstream out(path);
    if (!out) throw InputError("cannot write '" + path.string() + "'");
    write_grid(out, g);
}

// ---- function specs ----

LogConcaveFn function_from_keys(KeyValueFile& kv) {
    const std::string kind = kv.require("kind");
    std::optional<LogConcaveFn> fn;
    int dim = 0;
    auto need_dim = [&] {
        const long long d = kv.get_int("dim", 0);
        if (!kv.has("dim")) kv.fail("kind", "missing required key 'dim'");
        if (d < 1) kv.fail("dim", "must be >= 1");
        return static_cast<int>(d);
    };
    if (kind == "gaussian") {
        dim = need_dim();
        const Vector center = kv.get_vector("center", dim, Vector::Zero(dim));
        if (kv.has("scale") && kv.has("variance")) kv.fail("scale", "give either 'scale' or 'variance'");
        double variance = kv.get_double("variance", 1.0);
        if (kv.has("scale")) variance = std::pow(kv.get_double("scale", 1.0), 2);
        if (!(variance > 0) || !std::isfinite(variance)) kv.fail(kv.has("scale") ? "scale" : "variance", "must be positive");
        double offset = kv.get_double("offset", 0.0);
        if (kv.has("constant")) {
            const double c = kv.get_double("constant", 1.0);
            if (!(c > 0) || !std::isfinite(c)) kv.fail("constant", "must be positive");
            offset -= std::log(c);
        }
        fn = LogConcaveFn(Potential::quadratic(center, variance, offset));
    } else if (kind == "indicator_ball") {
        dim = need_dim();
        const double r = kv.get_double("radius", 1.0);
        if (!(r >= 0) || !std::isfinite(r)) kv.fail("radius", "must be finite and >= 0");
        fn = LogConcaveFn(Potential::indicator(ConvexBody::ball(r, kv.get_vector("center", dim, Vector::Zero(dim))),
                                               kv.get_double("offset", 0.0)));
    } else if (kind == "indicator_box") {
        dim = need_dim();
        const Vector lo = kv.get_vector("lo", dim, Vector::Constant(dim, -1.0));
        const Vector hi = kv.get_vector("hi", dim, Vector::Constant(dim, 1.0));
        if ((hi.array() < lo.array()).any()) kv.fail("hi", "must be >= lo");
        fn = LogConcaveFn(Potential::indicator(ConvexBody::box(lo, hi), kv.get_double("offset", 0.0)));
    } else if (kind == "norm_cone") {
        dim = need_dim();
        const double alpha = kv.get_double("alpha", 1.0);
        if (!(alpha >= 0) || !std::isfinite(alpha)) kv.fail("alpha", "must be finite and >= 0");
        fn = LogConcaveFn(Potential::norm_cone(dim, alpha, kv.get_double("offset", 0.0)));
    } else if (kind == "radial_piecewise") {
        dim = need_dim();
        if (const auto preset = kv.get("preset")) {
            if (*preset != "counterexample") kv.fail("preset", "unknown preset '" + *preset + "'");
            fn = counterexample_potential(dim);
        } else {
            std::vector<double> knots = kv.get_list("breakpoints", {});
            if (knots.empty()) kv.fail("kind", "radial_piecewise needs 'breakpoints' or 'preset'");
            const auto coeffs = kv.get("coeffs");
            if (!coeffs) kv.fail("breakpoints", "missing 'coeffs'");
            std::vector<RadialPiece> pieces;
            std::istringstream in(*coeffs);
            std::string part;
            while (std::getline(in, part, ';')) {
                if (trim(part).empty()) continue;
                std::vector<double> abc;
                try {
                    abc = parse_list(part);
                } catch (const InputError& e) {
                    kv.fail("coeffs", e.what());
                }
                if (abc.size() != 3) kv.fail("coeffs", "each piece needs 'a,b,c'");
                pieces.push_back({abc[0], abc[1], abc[2]});
            }
            if (pieces.size() != knots.size())
                kv.fail("coeffs", "expected one piece per breakpoint (" + std::to_string(knots.size()) + ")");
            knots.push_back(kv.get_double("domain_end", kInf));
            try {
                RadialProfile psi(knots, pieces);
                if (psi.convexity_witness() >= 0) kv.fail("coeffs", "profile is not convex");
                fn = LogConcaveFn(Potential::radial(std::move(psi), dim));
            } catch (const ParseError&) {
                throw;
            } catch (const InputError& e) {
                kv.fail("breakpoints", e.what());
            }
        }
    } else if (kind == "grid_file") {
        const std::filesystem::path p = kv.base_dir() / kv.require("path");
        GridPotential g = load_grid(p);
        if (kv.has("dim") && kv.get_int("dim", 0) != g.spec.dim()) kv.fail("dim", "does not match the grid file");
        dim = g.spec.dim();
        fn = LogConcaveFn(Potential::grid(g.spec, g.values));
    } else {
        kv.fail("kind", "unknown kind '" + kind + "'");
    }

    const std::string repr = kv.get("repr").value_or(kind == "grid_file" ? "grid" : "analytic");
    if (repr == "grid" && kind != "grid_file") {
        const long long pts = kv.get_int("grid_points", dim == 1 ? 401 : dim == 2 ? 121 : 41);
        if (pts < 2) kv.fail("grid_points", "must be >= 2");
        const Vector lo = kv.get_vector("grid_lo", dim, Vector::Constant(dim, -6.0));
        const Vector hi = kv.get_vector("grid_hi", dim, Vector::Constant(dim, 6.0));
        if ((hi.array() <= lo.array()).any()) kv.fail("grid_hi", "must exceed grid_lo");
        fn = LogConcaveFn(fn->phi().to_grid(GridSpec::box(lo, hi, pts)));
    } else if (repr != "analytic" && repr != "radial" && repr != "grid") {
        kv.fail("repr", "expected analytic, radial or grid");
    }
    kv.reject_unused();
    const ConvexityReport cr = convexity_screen(fn->phi());
    if (!cr.pass) throw ParseError(kv.source(), 0, "potential fails the convexity screen: " + cr.detail);
    return *fn;
}

LogConcaveFn load_function(const std::filesystem::path& path) {
    KeyValueFile kv = KeyValueFile::load(path);
    return function_from_keys(kv);
}

LogConcaveFn function_from_text(const std::string& text, const std::string& source,
                                const std::filesystem::path& base_dir) {
    KeyValueFile kv = KeyValueFile::parse(text, source);
    kv.set_base_dir(base_dir);
    return function_from_keys(kv);
}

// ---- bodies ----

namespace {

ConvexBody body_from_keys(KeyValueFile& kv) {
    const std::string kind = kv.require("body");
    ConvexBody::Shape shape;
    if (kind == "polytope") {
        std::vector<std::vector<double>> rows;
        for (auto* e : kv.all("vertex")) {
            try {
                rows.push_back(parse_list(e->value));
            } catch (const InputError& err) {
                throw ParseError(kv.source(), e->line, err.what());
            }
            if (rows.back().size() != rows.front().size())
                throw ParseError(kv.source(), e->line, "vertex dimension differs from the first vertex");
        }
        if (rows.empty()) kv.fail("body", "polytope needs at least one 'vertex = ...' line");
        const int dim = static_cast<int>(rows.front().size());
        if (kv.has("dim") && kv.get_int("dim", dim) != dim) kv.fail("dim", "does not match the vertices");
        Matrix V(dim, static_cast<Index>(rows.size()));
        for (std::size_t j = 0; j < rows.size(); ++j)
            for (int i = 0; i < dim; ++i) V(i, static_cast<Index>(j)) = rows[j][i];
        kv.reject_unused();
        return ConvexBody::polytope(V);
    }
    const long long d = kv.get_int("dim", 0);
    if (d < 1) kv.fail(kv.has("dim") ? "dim" : "body", "needs 'dim' >= 1");
    const int dim = static_cast<int>(d);
    std::optional<ConvexBody> K;
    if (kind == "ball") {
        const double r = kv.get_double("radius", 1.0);
        if (!(r >= 0) || !std::isfinite(r)) kv.fail("radius", "must be finite and >= 0");
        K = ConvexBody::ball(r, kv.get_vector("center", dim, Vector::Zero(dim)));
    } else if (kind == "box") {
        const Vector lo = kv.get_vector("lo", dim, Vector::Constant(dim, -1.0));
        const Vector hi = kv.get_vector("hi", dim, Vector::Constant(dim, 1.0));
        if ((hi.array() < lo.array()).any()) kv.fail("hi", "must be >= lo");
        K = ConvexBody::box(lo, hi);
    } else if (kind == "segment") {
        K = ConvexBody::segment(kv.get_vector("a", dim, Vector::Zero(dim)), kv.get_vector("b", dim, Vector::Zero(dim)));
    } else {
        kv.fail("body", "unknown body '" + kind + "'");
    }
    kv.reject_unused();
    return *K;
}

}  // namespace

ConvexBody load_body(const std::filesystem::path& path) {
    KeyValueFile kv = KeyValueFile::load(path);
    return body_from_keys(kv);
}

ConvexBody body_from_text(const std::string& text, const std::string& source) {
    KeyValueFile kv = KeyValueFile::parse(text, source);
    return body_from_keys(kv);
}

// ---- experiment configs ----

namespace {

ExperimentSpec experiment_from_keys(KeyValueFile& kv) {
    ExperimentSpec spec;
    LowMstarConfig& c = spec.config;
    c.eps = kv.get_double("eps", c.eps);
    c.M = kv.get_double("M", c.M);
    c.lambda = kv.get_double("lambda", c.lambda);
    c.n = static_cast<int>(kv.get_int("n", c.n));
    c.trials = static_cast<int>(kv.get_int("trials", c.trials));
    c.samples = kv.get_int("samples", c.samples);
    const long long seed = kv.get_int("seed", static_cast<long long>(c.seed));
    if (seed < 0) kv.fail("seed", "must be >= 0");
    c.seed = static_cast<std::uint64_t>(seed);
    c.c_probe = kv.get_list("c_probe", c.c_probe);
    c.threads = static_cast<int>(kv.get_int("threads", c.threads));
    spec.mode = kv.get("mode").value_or(spec.mode);
    if (spec.mode != "finite_volume_ratio" && spec.mode != "low_mstar")
        kv.fail("mode", "expected finite_volume_ratio or low_mstar");
    spec.function = kv.get("function").value_or(spec.function);
    kv.reject_unused();
    try {
        c.validate();
    } catch (const InputError& e) {
        // Messages start with the offending key.
        const std::string msg = e.what();
        const std::string key = msg.substr(0, msg.find(' '));
        if (kv.has(key)) kv.fail(key, msg);
        throw ParseError(kv.source(), 0, msg);
    }
    if (spec.function == "counterexample") {
        spec.fn = counterexample_potential(c.n);
    } else if (spec.function == "gaussian") {
        spec.fn = LogConcaveFn::gaussian(c.n);
    } else {
        const int line = kv.line_of("function");
        try {
            spec.fn = load_function(kv.base_dir() / spec.function);
        } catch (const ParseError&) {
            throw;
        } catch (const InputError& e) {
            throw ParseError(kv.source(), line, std::string("key 'function': ") + e.what());
        }
        if (spec.fn->dim() != c.n) kv.fail("function", "dimension does not match n");
    }
    return spec;
}

}  // namespace

ExperimentSpec load_experiment(const std::filesystem::path& path) {
    KeyValueFile kv = KeyValueFile::load(path);
    return experiment_from_keys(kv);
}

ExperimentSpec experiment_from_text(const std::string& text, const std::string& source,
                                    const std::filesystem::path& base_dir) {
    KeyValueFile kv = KeyValueFile::parse(text, source);
    kv.set_base_dir(base_dir);
    return experiment_from_keys(kv);
}

}  // namespace logconc

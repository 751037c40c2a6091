#include "logconc/verify.hpp"

#include <Eigen/QR>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <functional>
#include <map>
#include <numbers>
#include <random>

#include "logconc/bodies.hpp"
#include "logconc/calculus.hpp"
#include "logconc/legendre.hpp"
#include "logconc/lowmstar.hpp"
#include "logconc/meanwidth.hpp"

namespace logconc {

bool SuiteReport::pass() const {
    return std::all_of(rows.begin(), rows.end(), [](const CheckRow& r) { return r.pass; });
}

namespace {

using Rows = std::vector<CheckRow>;

Vector vec(std::initializer_list<double> xs) {
    Vector v(static_cast<Index>(xs.size()));
    Index i = 0;
    for (double x : xs) v[i++] = x;
    return v;
}

LogConcaveFn grid_gaussian(int n) {
    const GridSpec spec = n == 1 ? GridSpec::cube(1, -8.0, 8.0, 401) : GridSpec::cube(n, -6.0, 6.0, 121);
    return LogConcaveFn(Potential::gaussian(n).to_grid(spec));
}

LogConcaveFn box(const Vector& lo, const Vector& hi, double offset = 0.0) {
    return LogConcaveFn(Potential::indicator(ConvexBody::box(lo, hi), offset));
}

LogConcaveFn ball(int n, double r) { return LogConcaveFn(Potential::indicator(ConvexBody::ball(n, r))); }

LogConcaveFn cone(int n) { return LogConcaveFn(Potential::norm_cone(n)); }

Matrix random_rotation(int n, std::mt19937_64& rng) {
    std::normal_distribution<double> nd;
    Matrix g(n, n);
    for (Index i = 0; i < g.size(); ++i) g.data()[i] = nd(rng);
    Eigen::HouseholderQR<Matrix> qr(g);
    Matrix q = qr.householderQ();
    const Matrix r = qr.matrixQR();
    for (int j = 0; j < n; ++j)
        if (r(j, j) < 0) q.col(j) *= -1.0;
    return q;
}

CheckRow row(std::string name, double value, double reference, double tol, bool pass, std::string detail = "") {
    return CheckRow{std::move(name), value, reference, tol, pass, std::move(detail)};
}

// ---- definition equality ----

Rows suite_equality(std::uint64_t) {
    std::vector<std::pair<std::string, LogConcaveFn>> fs;
    fs.emplace_back("grid gaussian n=1", grid_gaussian(1));
    fs.emplace_back("grid gaussian n=2", grid_gaussian(2));
    fs.emplace_back("box [-1,1]", box(vec({-1}), vec({1})));
    fs.emplace_back("box [-1,2]x[-0.5,0.5]", box(vec({-1, -0.5}), vec({2, 0.5})));
    fs.emplace_back("ball r=1.5 n=2", ball(2, 1.5));
    fs.emplace_back("ball r=1 n=3", ball(3, 1.0));
    fs.emplace_back("gaussian var 2 shifted", LogConcaveFn(Potential::quadratic(vec({1, -1}), 2.0, 0.3)));
    fs.emplace_back("ball * G n=3", asplund(ball(3, 1.0), LogConcaveFn::gaussian(3)));
    fs.emplace_back("0.5 . box", homothety(0.5, box(vec({-1, -1}), vec({1, 3}))));
    fs.emplace_back("e^-|x| truncated k=2 n=2", truncate(cone(2), 2.0));
    fs.emplace_back("e^-|x| truncated k=4 n=3", truncate(cone(3), 4.0));
    fs.emplace_back("counterexample n=10", counterexample_potential(10));
    Rows rows;
    for (const auto& [name, f] : fs) {
        const EqualityReport e = check_definition_equality(f);
        const bool finite = e.m_star.value.is_finite() && e.m_tilde.value.is_finite();
        rows.push_back(row(name, e.m_tilde.value.raw(), e.m_star.value.raw(), 0.02, finite && e.rel_gap <= 0.02,
                           "rel_gap " + to_string(ExtReal(e.rel_gap))));
    }
    const EqualityReport c = check_definition_equality(cone(2));
    std::string w = "witness";
    if (c.m_star.witness) w += " |w|=" + to_string(ExtReal(c.m_star.witness->norm()));
    rows.push_back(row("e^-|x| n=2 (both +inf)", c.m_tilde.value.raw(), c.m_star.value.raw(), 0.0,
                       c.both_infinite && c.m_star.witness.has_value(), w));
    return rows;
}

// ---- Urysohn ----

struct Candidate {
    std::string name;
    LogConcaveFn f;
    bool gaussian_family;
};

std::vector<Candidate> urysohn_family(std::uint64_t seed, int count) {
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    std::vector<Candidate> out;
    for (int i = 0; out.size() < static_cast<std::size_t>(count); ++i) {
        const int n = 1 + static_cast<int>(u(rng) * 3.0);
        Vector a(n);
        for (int k = 0; k < n; ++k) a[k] = 4.0 * u(rng) - 2.0;
        const double off = 3.0 * u(rng) - 1.5;
        switch (i % 6) {
            case 0:  // C e^{-|x-a|^2/2}
                out.push_back({"C G(x-a) n=" + std::to_string(n), LogConcaveFn(Potential::quadratic(a, 1.0, off)), true});
                break;
            case 1: {
                const double s = u(rng) < 0.5 ? 0.3 + 0.5 * u(rng) : 1.3 + 1.7 * u(rng);
                out.push_back({"gaussian var " + to_string(ExtReal(s)), LogConcaveFn(Potential::quadratic(a, s, off)),
                               false});
                break;
            }
            case 2: {
                Vector w(n);
                for (int k = 0; k < n; ++k) w[k] = 0.2 + 3.0 * u(rng);
                out.push_back({"box n=" + std::to_string(n), box(a - 0.5 * w, a + 0.5 * w, off), false});
                break;
            }
            case 3:
                out.push_back({"ball n=" + std::to_string(n),
                               LogConcaveFn(Potential::indicator(ConvexBody::ball(0.2 + 2.0 * u(rng), a), off)), false});
                break;
            case 4:
                out.push_back({"e^-|x| truncated n=" + std::to_string(n),
                               translate(truncate(cone(n), 1.0 + 5.0 * u(rng)), a), false});
                break;
            default: {
                const int m = 1 + static_cast<int>(u(rng) * 30.0);
                out.push_back({"counterexample n=" + std::to_string(m), counterexample_potential(m), false});
                break;
            }
        }
    }
    return out;
}

Rows suite_urysohn(std::uint64_t seed) {
    Rows rows;
    const double tol = 1e-6, tol_eq = 1e-4;
    for (const auto& c : urysohn_family(seed, 60)) {
        const UrysohnReport u = urysohn_gap(c.f, tol_eq);
        const bool ok = u.gap.raw() >= -tol && u.equality == c.gaussian_family;
        rows.push_back(row(c.name, u.gap.raw(), 0.0, tol, ok, u.equality ? "equality" : ""));
    }
    const UrysohnReport b = urysohn_gap(box(vec({-1}), vec({1})));
    rows.push_back(row("1_[-1,1] gap", b.gap.raw(), 1.0473518, 1e-4, std::abs(b.gap.raw() - 1.0473518) < 1e-4));
    return rows;
}

// ---- Santalo ----

Rows suite_santalo(std::uint64_t) {
    Rows rows;
    auto add = [&](const std::string& name, const Potential& phi, const std::optional<Vector>& center = {},
                   double spacing = 0.0) {
        const SantaloReport s = santalo_check(phi);
        bool ok = s.pass;
        std::string detail = s.method;
        if (center) {
            const double err = (s.recovered_center - *center).norm();
            ok = ok && err <= std::max(spacing, 1e-9);
            detail += " center error " + to_string(ExtReal(err));
        }
        rows.push_back(row(name, s.product, s.bound, 1e-3, ok, detail));
    };
    for (int n = 1; n <= 3; ++n) {
        const SantaloReport s = santalo_check(Potential::gaussian(n));
        rows.push_back(row("|x|^2/2 n=" + std::to_string(n) + " equality", s.product, s.bound, 1e-6,
                           std::abs(s.product / s.bound - 1.0) <= 1e-6));
    }
    add("|x-a|^2/2 a=(1,-2)", Potential::quadratic(vec({1, -2})), vec({1, -2}));
    add("box [-1,1]^2", Potential::indicator(ConvexBody::cube(2, 1.0)));
    add("box [0,3]x[-1,2]", Potential::indicator(ConvexBody::box(vec({0, -1}), vec({3, 2}))));
    add("ball r=2 n=3", Potential::indicator(ConvexBody::ball(3, 2.0)));
    add("e^-|x| n=2", Potential::norm_cone(2));
    const GridSpec g1 = GridSpec::cube(1, -8.0, 8.0, 321);
    add("grid |x-1.3|^2/2", Potential::quadratic(vec({1.3})).to_grid(g1), vec({1.3}), g1.spacing[0]);
    const GridSpec g2 = GridSpec::cube(2, -5.0, 5.0, 81);
    add("grid |x-(0.5,-1)|^2/2", Potential::quadratic(vec({0.5, -1.0})).to_grid(g2), vec({0.5, -1.0}), g2.spacing[0]);
    return rows;
}

// ---- Shannon ----

Rows suite_shannon(std::uint64_t) {
    Rows rows;
    const GridSpec d1 = GridSpec::cube(1, -12.0, 12.0, 4801);
    const auto p = [](const Vector& x) { return std::exp(-0.5 * x.squaredNorm()) / std::sqrt(2.0 * std::numbers::pi); };
    const ShannonReport a = shannon_check(p, p, d1, 1e-9);
    rows.push_back(row("q = p", a.gap, 0.0, 1e-9, a.equality));
    const ShannonReport b = shannon_check(p, [&](const Vector& x) { return 5.0 * p(x); }, d1, 1e-9);
    rows.push_back(row("q = 5p", b.gap, 0.0, 1e-9, b.equality));
    // q = e^{-h_f} for f = 1_[-1,1]: h = |x|.
    const ShannonReport c = shannon_check(p, [](const Vector& x) { return std::exp(-std::abs(x[0])); }, d1, 1e-9);
    rows.push_back(row("q = e^-h, f = 1_[-1,1]", c.gap, 0.0, 1e-9, c.gap > 1e-9 && !c.equality));
    // The rearranged chain: M* >= 1 + log 2 pi - (2/n) log int e^{-h}.
    const double m = mean_width(box(vec({-1}), vec({1}))).value.raw();
    const double rhs = 1.0 + std::log(2.0 * std::numbers::pi) - 2.0 * std::log(c.int_q);
    rows.push_back(row("chain M* >= 1 + log 2pi - 2 log int e^-h", m, rhs, 0.0, m >= rhs));
    const GridSpec d2 = GridSpec::cube(2, -9.0, 9.0, 721);
    const auto p2 = [](const Vector& x) { return std::exp(-0.5 * x.squaredNorm()) / (2.0 * std::numbers::pi); };
    const ShannonReport e = shannon_check(p2, [](const Vector& x) { return std::exp(-x.cwiseAbs().sum()); }, d2, 1e-9);
    rows.push_back(row("n=2, q = e^-|x|_1", e.gap, 0.0, 1e-9, e.gap > 0));
    return rows;
}

// ---- Prop 3.1 ----

Rows suite_properties(std::uint64_t seed) {
    Rows rows;
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    // (i) lower bound -(2/n) phi(x0) at a finite point.
    {
        bool ok = true;
        double worst = kInf;
        for (const auto& c : urysohn_family(seed, 24)) {
            const int n = c.f.dim();
            double best_phi = kInf;
            for (int t = 0; t < 50; ++t) {
                Vector x(n);
                for (int k = 0; k < n; ++k) x[k] = 6.0 * u(rng) - 3.0;
                best_phi = std::min(best_phi, c.f.phi()(x).raw());
            }
            if (!std::isfinite(best_phi)) continue;
            const double m = mean_width(c.f).value.raw();
            const double margin = m + 2.0 / n * best_phi;
            worst = std::min(worst, margin);
            ok = ok && std::isfinite(m) && margin >= -1e-9;
        }
        rows.push_back(row("(i) M* >= -(2/n) phi(x0) > -inf", worst, 0.0, 1e-9, ok));
    }
    // (ii) f(x0) >= 1 implies M* >= 0.
    {
        bool ok = true;
        double worst = kInf;
        std::vector<LogConcaveFn> fs{box(vec({-0.1, -0.1}), vec({0.1, 0.1})), ball(3, 0.05),
                                     LogConcaveFn(Potential::quadratic(vec({2.0}), 0.01, 0.0)),
                                     truncate(cone(2), 1.0)};
        for (const auto& f : fs) {
            const double m = mean_width(f).value.raw();
            worst = std::min(worst, m);
            ok = ok && m >= -1e-9;
        }
        rows.push_back(row("(ii) f(x0) >= 1 => M* >= 0", worst, 0.0, 1e-9, ok));
    }
    // (iii) linearity on exact families.
    {
        double worst = 0.0;
        bool ok = true;
        for (int t = 0; t < 20; ++t) {
            const double lambda = 0.2 + 2.0 * u(rng);
            LogConcaveFn f = LogConcaveFn::gaussian(2), g = f;
            switch (t % 4) {
                case 0:
                    f = LogConcaveFn(Potential::quadratic(vec({u(rng), -u(rng)}), 0.5 + u(rng), u(rng)));
                    g = LogConcaveFn(Potential::quadratic(vec({-u(rng), u(rng)}), 0.5 + u(rng), -u(rng)));
                    break;
                case 1:
                    f = box(vec({-u(rng), -u(rng)}), vec({u(rng), u(rng)}));
                    g = box(vec({-1.0, -u(rng)}), vec({u(rng), 2.0}));
                    break;
                case 2:
                    f = truncate(cone(3), 1.0 + 3.0 * u(rng));
                    g = ball(3, 0.5 + u(rng));
                    break;
                default:
                    f = counterexample_potential(5);
                    g = LogConcaveFn(Potential::quadratic(Vector::Zero(5), 0.5 + u(rng), 0.0));
                    break;
            }
            const EstimateReport lhs = mean_width(asplund(homothety(lambda, f), g));
            const EstimateReport mf = mean_width(f), mg = mean_width(g);
            const double sigma = std::sqrt(lhs.std_error * lhs.std_error + lambda * lambda * mf.std_error * mf.std_error +
                                           mg.std_error * mg.std_error);
            const double diff = std::abs(lhs.value.raw() - lambda * mf.value.raw() - mg.value.raw());
            worst = std::max(worst, diff);
            ok = ok && diff <= std::max(3.0 * sigma, 1e-8 * (1.0 + std::abs(lhs.value.raw())));
        }
        rows.push_back(row("(iii) M*((l.f)*g) = l M*(f) + M*(g), 20 triples", worst, 0.0, 1e-8, ok));
    }
    // (iv) rotation and translation invariance.
    {
        bool ok = true;
        double worst = 0.0;
        for (int t = 0; t < 6; ++t) {
            const Matrix U = random_rotation(2, rng);
            const Vector a = vec({4.0 * u(rng) - 2.0, 4.0 * u(rng) - 2.0});
            const LogConcaveFn f = box(vec({-1, -0.5}), vec({1.5, 0.5}));
            GaussianMeasure mc;
            mc.method = Method::MonteCarlo;
            mc.seed = seed + static_cast<std::uint64_t>(t);
            const EstimateReport base = mean_width(f, mc);
            const EstimateReport rot = mean_width(rotate(f, U), mc);
            const EstimateReport tr = mean_width(translate(f, a), mc);
            const double s1 = std::hypot(base.std_error, rot.std_error);
            const double s2 = std::hypot(base.std_error, tr.std_error);
            const double d1 = std::abs(rot.value.raw() - base.value.raw());
            const double d2 = std::abs(tr.value.raw() - base.value.raw());
            worst = std::max({worst, d1 / s1, d2 / s2});
            ok = ok && d1 <= 3.0 * s1 && d2 <= 3.0 * s2;
        }
        rows.push_back(row("(iv) rotation/translation invariance (in sigma)", worst, 0.0, 3.0, ok));
    }
    // (v) scalar law at the support-function level.
    {
        double worst = 0.0;
        for (const auto& c : urysohn_family(seed + 1, 12)) {
            const double a = std::exp(4.0 * u(rng) - 2.0);
            const double d = mean_width(scalar_mult(a, c.f)).value.raw() - mean_width(c.f).value.raw();
            worst = std::max(worst, std::abs(d - 2.0 / c.f.dim() * std::log(a)));
        }
        rows.push_back(row("(v) M*(a f) - M*(f) = (2/n) log a", worst, 0.0, 1e-9, worst <= 1e-9));
    }
    // Negative mean width: a -> 0 drives M* to -inf.
    {
        const double m = mean_width(scalar_mult(1e-30, LogConcaveFn::gaussian(2))).value.raw();
        rows.push_back(row("M*(a G) -> -inf as a -> 0 (a = 1e-30)", m, 1.0 + std::log(1e-30), 1e-9,
                           std::abs(m - 1.0 - std::log(1e-30)) <= 1e-9));
    }
    return rows;
}

// ---- monotone convergence ----

Rows suite_convergence(std::uint64_t) {
    Rows rows;
    const LogConcaveFn f = grid_gaussian(2);
    const double full = mean_width(f).value.raw();
    double prev = -kInf;
    bool mono = true;
    double m8 = 0.0;
    for (int k = 1; k <= 8; ++k) {
        const double m = mean_width(truncate(f, k)).value.raw();
        mono = mono && m >= prev - 1e-12;
        prev = m;
        m8 = m;
        rows.push_back(row("M*(f_" + std::to_string(k) + ")", m, full, 0.0, mono));
    }
    rows.push_back(row("|M*(f_8) - M*(f)| / M*(f)", std::abs(m8 - full) / std::abs(full), 0.0, 0.01,
                       std::abs(m8 - full) <= 0.01 * std::abs(full)));
    // The radial ladder of e^{-|x|^2/2} truncations.
    prev = -kInf;
    mono = true;
    for (int k = 1; k <= 8; ++k) {
        const double m = mean_width(truncate(LogConcaveFn::gaussian(3), k)).value.raw();
        mono = mono && m >= prev - 1e-12;
        prev = m;
    }
    rows.push_back(row("radial G ladder n=3, k=8", prev, 1.0, 0.01, mono && std::abs(prev - 1.0) <= 0.01));
    return rows;
}

// ---- Legendre engine ----

Rows suite_legendre(std::uint64_t seed) {
    Rows rows;
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    Index mismatches = 0;
    for (int t = 0; t < 100; ++t) {
        const Index N = 2 + static_cast<Index>(u(rng) * 511), M = 2 + static_cast<Index>(u(rng) * 511);
        Eigen::ArrayXd y(N), psi(N), s(M), out(M);
        double slope = 4.0 * u(rng) - 2.0, yv = -3.0 * u(rng), pv = 2.0 * u(rng);
        for (Index k = 0; k < N; ++k) {
            const double h = 0.01 + 0.05 * u(rng);
            y[k] = yv;
            psi[k] = pv;
            yv += h;
            pv += slope * h;
            slope += 0.2 * u(rng);
        }
        for (Index j = 0; j < M; ++j) s[j] = -5.0 + 30.0 * static_cast<double>(j) / static_cast<double>(M - 1);
        legendre_sweep<double>(y, psi, s, out);
        for (Index j = 0; j < M; ++j) {
            double best = -kInf;
            for (Index k = 0; k < N; ++k) best = std::max(best, s[j] * y[k] - psi[k]);
            if (best != out[j]) ++mismatches;
        }
    }
    rows.push_back(row("1-D sweep vs brute force, 100 grids", static_cast<double>(mismatches), 0.0, 0.0, mismatches == 0));

    const GridSpec g = GridSpec::cube(1, -4.0, 4.0, 161);
    const Potential phi = Potential::sample(g, [](const Vector& x) { return ExtReal(std::abs(x[0]) + 0.3 * x[0] * x[0]); });
    const Potential bb = biconjugate(phi);
    const Potential bbb = biconjugate(bb);
    const double idem = (bb.as_grid().values - bbb.as_grid().values).abs().maxCoeff();
    rows.push_back(row("biconjugate idempotent", idem, 0.0, 0.0, idem == 0.0));

    const SupportFn h = legendre(phi);
    double worst = kInf;
    for (int t = 0; t < 10000; ++t) {
        const Vector x = vec({8.0 * u(rng) - 4.0});
        const Vector yv = vec({6.0 * u(rng) - 3.0});
        worst = std::min(worst, phi(x).raw() + h(yv).raw() - x.dot(yv));
    }
    rows.push_back(row("Fenchel-Young phi(x) + h(y) >= <x,y>, 1e4 pairs", worst, 0.0, 1e-12, worst >= -1e-12));

    // Translation identity for whole-node shifts.
    const GridSpec g2 = GridSpec::cube(2, -3.0, 3.0, 31);
    const Potential q = Potential::quadratic(vec({0.4, -0.2})).to_grid(g2);
    const Vector a = vec({2 * g2.spacing[0], -3 * g2.spacing[1]});
    const Potential qa = translate(LogConcaveFn(q), a).phi();
    const Axes out{Eigen::VectorXd::LinSpaced(21, -2.0, 2.0), Eigen::VectorXd::LinSpaced(21, -2.0, 2.0)};
    const SupportFn h0 = legendre(q, out), h1 = legendre(qa, out);
    double terr = 0.0;
    for (Index i = 0; i < 21; ++i)
        for (Index j = 0; j < 21; ++j) {
            const Vector y = vec({out[0][i], out[1][j]});
            terr = std::max(terr, std::abs(h1(y).raw() - h0(y).raw() - y.dot(a)));
        }
    rows.push_back(row("L(phi(. - a)) = L phi + <., a>", terr, 0.0, 1e-12, terr <= 1e-12));
    return rows;
}

// ---- bodies ----

Rows suite_bodies(std::uint64_t seed) {
    Rows rows;
    BodySampling s;
    s.seed = seed;
    const ConvexBody sq = ConvexBody::cube(2, 1.0);
    const double m = mean_width_body(sq).value.raw();
    rows.push_back(row("M*(square)", m, 4.0 / std::numbers::pi, 0.01, std::abs(m / (4.0 / std::numbers::pi) - 1) <= 0.01));
    const EstimateReport lim = mean_width_body_limit(sq, {0.2, 0.1, 0.05, 0.025}, s);
    rows.push_back(row("limit path M*(square)", lim.value.raw(), m, 0.05, std::abs(lim.value.raw() / m - 1) <= 0.05));
    const EstimateReport limd = mean_width_body_limit(ConvexBody::ball(2), {0.2, 0.1, 0.05, 0.025}, s);
    rows.push_back(row("limit path M*(D)", limd.value.raw(), 1.0, 0.03, std::abs(limd.value.raw() - 1) <= 0.03));
    const QuermassReport q = steiner_fit(sq, {}, s);
    rows.push_back(row("Steiner V_2(square)", q.V[2], 4.0, 0.05, std::abs(q.V[2] / 4 - 1) <= 0.05));
    rows.push_back(row("Steiner V_1(square)", q.V[1], 4.0, 0.05, std::abs(q.V[1] / 4 - 1) <= 0.05));
    rows.push_back(row("Steiner V_0(square)", q.V[0], std::numbers::pi, 0.05, std::abs(q.V[0] / std::numbers::pi - 1) <= 0.05));
    // Functional bridge: M*(1_K) = (2/n) E|g| M*(K).
    const double mf = mean_width(LogConcaveFn(Potential::indicator(sq))).value.raw();
    const double bridge = chi_mean(2) * m;
    rows.push_back(row("M*(1_K) = (2/n) E|g| M*(K) (n=2)", mf, bridge, 1e-6, std::abs(mf - bridge) <= 1e-6));
    // Classical Urysohn on random polytopes.
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> nd;
    bool ok = true;
    double worst = kInf;
    for (int t = 0; t < 6; ++t) {
        const int n = 2 + t % 2;
        Matrix V(n, 8);
        for (Index i = 0; i < V.size(); ++i) V.data()[i] = nd(rng);
        const ConvexBody K = ConvexBody::polytope(V);
        BodySampling sm;
        sm.samples = 200000;
        sm.seed = seed + static_cast<std::uint64_t>(t);
        const double vol = K.volume() ? *K.volume() : volume_mc(K, sm).value.raw();
        const double lhs = mean_width_body(K, false, sm).value.raw();
        const double rhs = std::pow(vol / unit_ball_volume(n), 1.0 / n);
        worst = std::min(worst, lhs - rhs);
        ok = ok && lhs >= rhs;
    }
    rows.push_back(row("M*(K) >= (|K|/|D|)^{1/n}, random polytopes", worst, 0.0, 0.0, ok));
    return rows;
}

// ---- level sets ----

Rows suite_levelsets(std::uint64_t) {
    Rows rows;
    double worst = 0.0;
    for (int n : {2, 10, 100})
        for (double b : {0.1, 0.5, 1.0, 2.0}) {
            const LevelSet ls = level_set(LogConcaveFn::gaussian(n), b);
            worst = std::max(worst, std::abs(*ls.radius - std::sqrt(2.0 * b * n)));
        }
    rows.push_back(row("K_{G,beta} radius = sqrt(2 beta n)", worst, 0.0, 1e-10, worst <= 1e-10));
    std::vector<std::pair<std::string, LogConcaveFn>> fs{
        {"G n=10", LogConcaveFn::gaussian(10)},
        {"counterexample n=50", counterexample_potential(50)},
        {"2^n G n=20", scalar_mult(std::pow(2.0, 20), LogConcaveFn::gaussian(20))},
        {"G * G n=5", asplund(LogConcaveFn::gaussian(5), LogConcaveFn::gaussian(5))}};
    const std::vector<double> betas{0.05, 0.1, 0.3, 0.5, 1.0, 2.0, 4.0};
    for (const auto& [name, f] : fs) {
        bool ok = true;
        for (std::size_t i = 0; i < betas.size(); ++i)
            for (std::size_t j = i; j < betas.size(); ++j) {
                const LevelSet a = level_set(f, betas[i]), b = level_set(f, betas[j]);
                if (a.empty) continue;
                const double ra = *a.radius, rb = *b.radius;
                ok = ok && ra <= rb * (1 + 1e-12) && rb <= betas[j] / betas[i] * ra * (1 + 1e-12);
            }
        rows.push_back(row("inclusion chain " + name, 0.0, 0.0, 0.0, ok));
    }
    for (const auto& [name, f] : fs) {
        if (gaussian_domination_witness(f)) continue;
        const VolumeRatioReport v = volume_ratio(f);
        bool contains = true;
        for (double b : betas) contains = contains && *level_set(f, b).radius >= std::sqrt(2.0 * b * f.dim()) * (1 - 1e-12);
        rows.push_back(row("V(f) >= 1 and K_{f,b} contains K_{G,b}: " + name, v.value, 1.0, 0.0, v.value >= 1 - 1e-12 && contains));
    }
    const VolumeRatioReport v2 = volume_ratio(scalar_mult(std::pow(2.0, 20), LogConcaveFn::gaussian(20)));
    rows.push_back(row("V(2^n G) = 2", v2.value, 2.0, 1e-9, std::abs(v2.value - 2.0) <= 1e-9));
    const LevelSet k1 = level_set(counterexample_potential(50), 1.0);
    const double n = 50;
    const double vol_lhs = std::log(unit_ball_volume(50)) + n * std::log(*k1.radius) - n;
    const double int_f = log_integral(counterexample_potential(50));
    rows.push_back(row("log(|K_{f,1}| e^-n) <= log int f", vol_lhs, int_f, 0.0, vol_lhs <= int_f));
    return rows;
}

// ---- low M* ----

Rows suite_lowmstar(std::uint64_t seed) {
    Rows rows;
    LowMstarConfig c;
    c.n = 10000;
    c.M = 4.0;
    c.trials = 4;
    c.seed = seed;
    for (double eps : {0.5, 0.25, 0.125}) {
        c.eps = eps;
        const ExperimentReport r = finite_volume_ratio_experiment(counterexample_potential(c.n), c);
        const double sharp = counterexample_constant(eps);
        rows.push_back(row("counterexample n=1e4 eps=" + to_string(ExtReal(eps)) + " max c", r.max_c, sharp, 0.1,
                           std::abs(r.max_c / sharp - 1) <= 0.1));
    }
    std::vector<double> vs;
    for (int n : {50, 100, 200}) vs.push_back(volume_ratio(counterexample_potential(n)).value);
    const double spread = (*std::max_element(vs.begin(), vs.end()) - *std::min_element(vs.begin(), vs.end())) /
                          *std::min_element(vs.begin(), vs.end());
    rows.push_back(row("V(f) spread over n = 50, 100, 200", spread, 0.0, 0.05, spread < 0.05));

    LowMstarConfig s;
    s.n = 20;
    s.eps = 0.25;
    s.M = 4.0;
    s.trials = 16;
    s.samples = 1024;
    s.seed = seed;
    const ExperimentReport rg = finite_volume_ratio_experiment(LogConcaveFn::gaussian(20), s);
    rows.push_back(row("f = G: max c = 1", rg.max_c, 1.0, 1e-12, std::abs(rg.max_c - 1) <= 1e-12));
    const ExperimentReport rc = finite_volume_ratio_experiment(counterexample_potential(20), s);
    double lo = kInf, hi = 0.0;
    for (const auto& t : rc.trials) {
        lo = std::min(lo, t.max_c);
        hi = std::max(hi, t.max_c);
    }
    rows.push_back(row("radial subspace invariance", hi - lo, 0.0, 1e-10, hi - lo <= 1e-10));

    const double r_ball = 0.9 * s.n / (2.0 * chi_mean(s.n));
    std::vector<std::pair<std::string, LogConcaveFn>> adm{
        {"G", LogConcaveFn::gaussian(20)},
        {"1_{rD}", ball(20, r_ball)},
        {"e^{-|x|^2/(2s)}, s=0.5", LogConcaveFn(Potential::quadratic(Vector::Zero(20), 0.5, 0.0))},
        {"e^{-|x|} truncated k=2", truncate(cone(20), 2.0)}};
    for (const auto& [name, f] : adm) {
        LowMstarReport r;
        try {
            r = low_mstar_experiment(f, s);
        } catch (const InputError& e) {
            rows.push_back(row("low M* " + name, 0.0, 0.0, 0.0, false, e.what()));
            continue;
        }
        rows.push_back(row("low M* " + name + ": V(h) <= sqrt(e)", r.v_h, std::sqrt(std::exp(1.0)), 1e-3, r.v_h_ok));
        rows.push_back(row("low M* " + name + ": M*(h) = M*(f) + 1, f <= h", r.chain_gap, 0.0, 1e-3,
                           r.chain_gap <= 1e-3 && r.f_below_h));
    }
    return rows;
}

}  // namespace

const std::vector<std::string>& suite_names() {
    static const std::vector<std::string> names{"equality", "urysohn",  "santalo", "shannon",   "properties",
                                                "convergence", "legendre", "bodies",  "levelsets", "lowmstar"};
    return names;
}

SuiteReport run_suite(const std::string& name, std::uint64_t seed) {
    static const std::map<std::string, std::function<Rows(std::uint64_t)>> suites{
        {"equality", suite_equality},       {"urysohn", suite_urysohn},   {"santalo", suite_santalo},
        {"shannon", suite_shannon},         {"properties", suite_properties}, {"convergence", suite_convergence},
        {"legendre", suite_legendre},       {"bodies", suite_bodies},     {"levelsets", suite_levelsets},
        {"lowmstar", suite_lowmstar}};
    const auto it = suites.find(name);
    if (it == suites.end()) throw InputError("unknown suite '" + name + "'");
    const auto t0 = std::chrono::steady_clock::now();
    SuiteReport r;
    r.name = name;
    r.rows = it->second(seed);
    r.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    return r;
}

}  // namespace logconc

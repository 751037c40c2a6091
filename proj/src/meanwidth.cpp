#include "logconc/meanwidth.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>

#include "logconc/quadrature.hpp"

namespace logconc {

std::string to_string(Method m) {
    switch (m) {
        case Method::Auto: return "auto";
        case Method::GaussHermite: return "gauss_hermite";
        case Method::MonteCarlo: return "monte_carlo";
        case Method::Radial: return "radial";
        case Method::Exact: return "exact";
    }
    return "auto";
}

Method parse_method(const std::string& s) {
    if (s == "auto") return Method::Auto;
    if (s == "gh" || s == "gauss_hermite" || s == "quadrature") return Method::GaussHermite;
    if (s == "mc" || s == "monte_carlo") return Method::MonteCarlo;
    if (s == "radial") return Method::Radial;
    if (s == "exact") return Method::Exact;
    throw InputError("unknown method '" + s + "'");
}

namespace {

// The integrand transform: identity for E h, expm1(eps h)/eps for the tilde
// secant slopes.
struct Transform {
    bool exp = false;
    double eps = 0.0;

    double operator()(double v) const { return exp ? std::expm1(eps * v) / eps : v; }
    // t(v) * exp(log_w) without overflowing when t(v) is huge and exp(log_w) tiny.
    double weighted(double v, double log_w) const {
        if (!exp) return v * std::exp(log_w);
        const double a = eps * v;
        if (a < 700.0) return std::expm1(a) / eps * std::exp(log_w);
        return (std::exp(a + log_w) - std::exp(log_w)) / eps;
    }
    // log of an upper envelope of |t(v)|, up to an additive constant.
    double log_env(double v) const { return exp ? std::max(0.0, eps * v) : std::log1p(std::abs(v)); }
};

EstimateReport infinite_report(const std::string& method, Vector witness) {
    EstimateReport r;
    r.value = ExtReal::inf();
    r.method = method;
    r.witness = std::move(witness);
    return r;
}

EstimateReport gh_expect(const std::function<ExtReal(const Vector&)>& g, const Transform& t, int n, int order,
                         bool estimate_error) {
    auto run = [&](int m, Index& evals, std::optional<Vector>& witness) -> double {
        const QuadratureRule r = gauss_hermite(m);
        Index total = 1;
        for (int k = 0; k < n; ++k) total *= m;
        Vector x(n);
        double s = 0.0;
        for (Index flat = 0; flat < total; ++flat) {
            Index rem = flat;
            double w = 1.0;
            for (int k = n - 1; k >= 0; --k) {
                const Index i = rem % m;
                rem /= m;
                x[k] = r.nodes[i];
                w *= r.weights[i];
            }
            const ExtReal v = g(x);
            ++evals;
            if (v.is_inf()) {
                witness = x;
                return kInf;
            }
            s += w * t(v.raw());
        }
        return s;
    };
    EstimateReport rep;
    rep.method = "gauss_hermite(" + std::to_string(order) + ")";
    std::optional<Vector> witness;
    const double q = run(order, rep.evaluations, witness);
    if (std::isinf(q)) return infinite_report(rep.method, *witness);
    rep.value = ExtReal(q);
    if (estimate_error) {
        const int lower = std::max(2, (3 * order) / 4);
        const double q2 = run(lower, rep.evaluations, witness);
        if (std::isfinite(q2)) rep.std_error = std::abs(q - q2);
    }
    return rep;
}

EstimateReport mc_expect(const std::function<ExtReal(const Vector&)>& g, const Transform& t, int n,
                         const GaussianMeasure& m) {
    std::mt19937_64 rng(m.seed);
    std::normal_distribution<double> nd;
    Vector x(n);
    double mean = 0.0, m2 = 0.0;
    EstimateReport rep;
    rep.method = "monte_carlo(" + std::to_string(m.samples) + ")";
    for (Index i = 0; i < m.samples; ++i) {
        for (int k = 0; k < n; ++k) x[k] = nd(rng);
        const ExtReal v = g(x);
        ++rep.evaluations;
        if (v.is_inf()) return infinite_report(rep.method, x);
        const double y = t(v.raw());
        const double d = y - mean;
        mean += d / static_cast<double>(i + 1);
        m2 += d * (y - mean);
    }
    rep.value = ExtReal(mean);
    if (m.samples > 1) rep.std_error = std::sqrt(m2 / static_cast<double>(m.samples - 1) / static_cast<double>(m.samples));
    return rep;
}

double interval_moreau(double y, double lo, double hi, double eps) {
    if (eps == 0.0) return std::max(y * lo, y * hi);
    const double z = std::clamp(y / eps, lo, hi);
    return y * z - 0.5 * eps * z * z;
}

template <class... Ts>
struct overloaded : Ts... {
    using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

EstimateReport radial_expect(const RadialProfile& rho, int n, const Transform& t, const Vector& linear) {
    if (t.exp && linear.size() && linear.norm() > 0)
        throw InputError("exp_slope: translated radial support functions are not radial");
    if (rho.bounded_domain()) {
        Vector w = Vector::Zero(n);
        w[0] = rho.domain_end() + 1.0;
        return infinite_report("radial", w);
    }
    EstimateReport rep;
    rep.method = "radial";
    Index evals = 0;
    const double v = chi_expectation_weighted(
        [&](double r, double log_d) {
            ++evals;
            return t.weighted(rho(r).raw(), log_d);
        },
        [&](double r) { return t.log_env(rho(r).raw()); }, n, rho.knots());
    rep.evaluations = evals;
    rep.value = ExtReal(v);
    if (std::isinf(v)) rep.divergent = true;
    return rep;
}

EstimateReport box_expect(const Box& box, double eps, double offset, const Transform& t) {
    const Index n = box.lo.size();
    EstimateReport rep;
    rep.method = "separable_1d";
    if (!t.exp) {
        double s = -offset;
        for (Index k = 0; k < n; ++k) {
            const double l = box.lo[k], u = box.hi[k];
            s += normal_expectation_1d([&](double x) { return interval_moreau(x, l, u, eps); },
                                       {eps * l, eps * u, 0.0});
        }
        rep.value = ExtReal(s);
        return rep;
    }
    double log_m = -t.eps * offset;
    for (Index k = 0; k < n; ++k) {
        const double l = box.lo[k], u = box.hi[k];
        const double d = normal_expectation_1d([&](double x) { return std::expm1(t.eps * interval_moreau(x, l, u, eps)); },
                                               {eps * l, eps * u, 0.0});
        log_m += std::log1p(d);
    }
    rep.value = ExtReal(std::expm1(log_m) / t.eps);
    return rep;
}

EstimateReport quadratic_exact(const QuadraticSupport& q, int n, const Transform& t) {
    EstimateReport rep;
    rep.method = "exact";
    if (!t.exp) {
        rep.value = ExtReal(0.5 * q.curvature * n + q.offset);
        return rep;
    }
    const double a = t.eps * q.curvature;
    if (a >= 1.0) {
        rep.value = ExtReal::inf();
        rep.divergent = true;
        return rep;
    }
    const double log_m = -0.5 * n * std::log1p(-a) + t.eps * q.offset +
                         t.eps * t.eps * q.linear.squaredNorm() / (2.0 * (1.0 - a));
    rep.value = ExtReal(std::expm1(log_m) / t.eps);
    return rep;
}

EstimateReport expect(const SupportFn& h, const Transform& t, const GaussianMeasure& m) {
    const int n = h.dim();
    const bool forced = m.method == Method::GaussHermite || m.method == Method::MonteCarlo;
    if (!forced) {
        if (const auto* r = std::get_if<RadialSupport>(&h.repr())) return radial_expect(r->profile, n, t, r->linear);
        if (const auto* b = std::get_if<BodySupport>(&h.repr())) {
            if (const auto* box = std::get_if<Box>(&b->body.shape())) return box_expect(*box, b->eps, b->offset, t);
            if (const auto* ball = std::get_if<Ball>(&b->body.shape()); ball && ball->center.norm() == 0.0) {
                // sup_{r <= R} (r rho - eps r^2 / 2) as a radial profile.
                const double R = ball->radius, e = b->eps;
                RadialProfile prof = e == 0.0 || R == 0.0
                                         ? RadialProfile({0.0, kInf}, {{-b->offset, R, 0.0}})
                                         : RadialProfile({0.0, e * R, kInf},
                                                         {{-b->offset, 0.0, 0.5 / e}, {-b->offset - 0.5 * e * R * R, R, 0.0}});
                return radial_expect(prof, n, t, Vector());
            }
        }
        if (const auto* q = std::get_if<QuadraticSupport>(&h.repr());
            q && (m.method == Method::Exact || (m.method == Method::Auto && n > 3)))
            return quadratic_exact(*q, n, t);
    }
    auto g = [&h](const Vector& x) { return h(x); };
    const bool use_gh = m.method == Method::GaussHermite || (m.method != Method::MonteCarlo && n <= 3);
    if (use_gh) {
        const int order = m.order > 0 ? m.order : default_hermite_order(n);
        return gh_expect(g, t, n, order, !h.is_grid());
    }
    return mc_expect(g, t, n, m);
}

}  // namespace

EstimateReport gaussian_expectation(const std::function<ExtReal(const Vector&)>& g, int n, const GaussianMeasure& m) {
    if (n <= 0) throw InputError("gaussian_expectation: dimension must be positive");
    const Transform t;
    const bool use_gh = m.method == Method::GaussHermite || (m.method != Method::MonteCarlo && n <= 3);
    if (use_gh) {
        const int order = m.order > 0 ? m.order : default_hermite_order(n);
        return gh_expect(g, t, n, order, true);
    }
    return mc_expect(g, t, n, m);
}

EstimateReport gaussian_expectation(const SupportFn& h, const GaussianMeasure& m) { return expect(h, Transform{}, m); }

EstimateReport exp_slope(const SupportFn& H, double eps, const GaussianMeasure& m) {
    if (!(eps > 0)) throw InputError("exp_slope: eps must be positive");
    return expect(H, Transform{true, eps}, m);
}

namespace {

std::optional<Axes> measure_axes(const Potential& phi, const GaussianMeasure& m) {
    if (!phi.is_grid() || m.method == Method::MonteCarlo) return std::nullopt;
    const int n = phi.dim();
    return hermite_axes(n, m.order > 0 ? m.order : default_hermite_order(n));
}

}  // namespace

SupportFn support_for_measure(const Potential& phi, const GaussianMeasure& m) {
    return legendre(phi, measure_axes(phi, m));
}

SupportFn h_profile_for_measure(const Potential& phi, double eps, const GaussianMeasure& m) {
    return h_profile(phi, eps, measure_axes(phi, m));
}

EstimateReport mean_width(const LogConcaveFn& f, const GaussianMeasure& m) {
    const int n = f.dim();
    EstimateReport r = gaussian_expectation(support_for_measure(f.phi(), m), m);
    if (r.value.is_finite()) r.value = ExtReal(2.0 / n * r.value.raw());
    r.std_error *= 2.0 / n;
    return r;
}

TildeConfig::TildeConfig() {
    for (int j = 3; j <= 12; ++j) eps_schedule.push_back(std::ldexp(1.0, -j));
}

void TildeConfig::validate() const {
    if (eps_schedule.size() < 2) throw InputError("tilde: need at least two eps values");
    for (std::size_t i = 0; i < eps_schedule.size(); ++i) {
        if (!(eps_schedule[i] > 0)) throw InputError("tilde: eps values must be positive");
        if (i > 0 && !(eps_schedule[i] < eps_schedule[i - 1]))
            throw InputError("tilde: eps schedule must be strictly decreasing");
    }
    if (fit_points < 2 || fit_points > static_cast<int>(eps_schedule.size()))
        throw InputError("tilde: fit_points out of range");
    // The two normalizations must agree: (2 pi)^{n/2} c_n = 2 / n.
    for (int n : {1, 2, 3, 10, 100}) {
        const double lhs = 0.5 * n * std::log(2.0 * std::numbers::pi) + log_c_n(n);
        if (std::abs(lhs - std::log(2.0 / n)) > 1e-12) throw std::logic_error("tilde: c_n bookkeeping mismatch");
    }
}

double TildeConfig::log_c_n(int n) {
    return std::log(2.0 / n) - 0.5 * n * std::log(2.0 * std::numbers::pi);
}

double TildeConfig::c_n(int n) { return std::exp(log_c_n(n)); }

EstimateReport mean_width_tilde(const LogConcaveFn& f, const TildeConfig& cfg, const GaussianMeasure& m) {
    cfg.validate();
    const int n = f.dim();
    EstimateReport out;
    out.method = "tilde";
    std::vector<double> eps, slope;
    for (double e : cfg.eps_schedule) {
        const SupportFn H = h_profile_for_measure(f.phi(), e, m);
        const EstimateReport r = exp_slope(H, e, m);
        out.evaluations += r.evaluations;
        out.method = "tilde/" + r.method;
        out.std_error = std::max(out.std_error, r.std_error);
        if (r.value.is_inf()) {
            out.table.push_back({e, kInf, kInf});
            out.value = ExtReal::inf();
            out.divergent = true;
            out.notes.push_back("I(eps) = +inf at eps = " + std::to_string(e));
            continue;
        }
        const double s = r.value.raw();
        out.table.push_back({e, 1.0 + e * s, s});
        eps.push_back(e);
        slope.push_back(s);
    }
    const double last_ratio = out.table.back()[1];
    if (!out.divergent && last_ratio > cfg.divergence_factor) {
        out.divergent = true;
        out.notes.push_back("I(eps_min) / int G = " + std::to_string(last_ratio) + " does not approach 1");
    }
    if (out.divergent) {
        out.value = ExtReal::inf();
        // Witness: a point where L phi = +inf, when the representation exposes one.
        const SupportFn h = legendre(f.phi());
        if (const auto* r = std::get_if<RadialSupport>(&h.repr()); r && r->profile.bounded_domain()) {
            Vector w = Vector::Zero(n);
            w[0] = r->profile.domain_end() + 1.0;
            out.witness = w;
        }
        return out;
    }
    for (std::size_t i = 1; i < slope.size(); ++i)
        if (slope[i] > slope[i - 1] + 1e-9 * std::max(1.0, std::abs(slope[i - 1]))) {
            out.notes.push_back("secant slopes are not monotone in eps");
            break;
        }
    double s0;
    if (cfg.extrapolate) {
        const int k = cfg.fit_points;
        Eigen::MatrixXd A(k, 2);
        Eigen::VectorXd b(k);
        for (int i = 0; i < k; ++i) {
            const std::size_t j = slope.size() - k + i;
            A(i, 0) = 1.0;
            A(i, 1) = eps[j];
            b[i] = slope[j];
        }
        s0 = A.colPivHouseholderQr().solve(b)[0];
    } else {
        s0 = slope.back();
    }
    out.value = ExtReal(2.0 / n * s0);
    out.std_error *= 2.0 / n;
    return out;
}

EqualityReport check_definition_equality(const LogConcaveFn& f, const TildeConfig& cfg, const GaussianMeasure& m) {
    EqualityReport r;
    r.m_star = mean_width(f, m);
    r.m_tilde = mean_width_tilde(f, cfg, m);
    if (r.m_star.value.is_inf() || r.m_tilde.value.is_inf()) {
        r.both_infinite = r.m_star.value.is_inf() && r.m_tilde.value.is_inf();
        r.rel_gap = r.both_infinite ? 0.0 : kInf;
        return r;
    }
    const double a = r.m_star.value.raw(), b = r.m_tilde.value.raw();
    r.rel_gap = std::abs(b - a) / std::max(std::abs(a), 1e-300);
    return r;
}

double log_integral_gaussian(int n) { return 0.5 * n * std::log(2.0 * std::numbers::pi); }

namespace {

double log_integral_grid(const GridPotential& g) {
    const int n = g.spec.dim();
    for (int k = 0; k < n; ++k)
        if (g.spec.shape[k] < 2) return -kInf;
    const QuadratureRule gl = gauss_legendre(4);
    const int q = static_cast<int>(gl.nodes.size());
    int npts = 1;
    for (int k = 0; k < n; ++k) npts *= q;
    const int ncorner = 1 << n;
    // Corner weights and GL weight for every tensor point of the reference cell.
    Eigen::MatrixXd cw(npts, ncorner);
    Eigen::VectorXd gw(npts);
    for (int p = 0; p < npts; ++p) {
        int rem = p;
        std::vector<double> t(n);
        double w = 1.0;
        for (int k = n - 1; k >= 0; --k) {
            const int i = rem % q;
            rem /= q;
            t[k] = 0.5 * (gl.nodes[i] + 1.0);
            w *= 0.5 * gl.weights[i];
        }
        gw[p] = w;
        for (int c = 0; c < ncorner; ++c) {
            double cwv = 1.0;
            for (int k = 0; k < n; ++k) cwv *= ((c >> k) & 1) ? t[k] : 1.0 - t[k];
            cw(p, c) = cwv;
        }
    }
    const auto strides = g.spec.strides();
    std::vector<Index> offs(ncorner, 0);
    for (int c = 0; c < ncorner; ++c)
        for (int k = 0; k < n; ++k)
            if ((c >> k) & 1) offs[c] += strides[k];
    double vmin = kInf;
    for (Index i = 0; i < g.values.size(); ++i) vmin = std::min(vmin, g.values[i]);

    std::vector<Index> cells(n);
    for (int k = 0; k < n; ++k) cells[k] = g.spec.shape[k] - 1;
    Index ncells = 1;
    for (Index c : cells) ncells *= c;
    std::vector<Index> idx;
    Eigen::VectorXd corner(ncorner);
    double sum = 0.0;
    for (Index c = 0; c < ncells; ++c) {
        unravel(c, cells, idx);
        Index base = 0;
        for (int k = 0; k < n; ++k) base += idx[k] * strides[k];
        bool finite = true;
        for (int j = 0; j < ncorner && finite; ++j) {
            corner[j] = g.values[base + offs[j]];
            finite = std::isfinite(corner[j]);
        }
        if (!finite) continue;
        const Eigen::VectorXd phi = cw * corner;
        sum += (gw.array() * (-(phi.array() - vmin)).exp()).sum();
    }
    if (sum == 0.0) return -kInf;
    return std::log(sum) + g.spec.spacing.array().log().sum() - vmin;
}

double log_integral_body(const ConvexBody& body) {
    if (auto v = body.volume()) return *v > 0 ? std::log(*v) : -kInf;
    Vector lo, hi;
    body.bounding_box(lo, hi);
    const double box = (hi - lo).prod();
    if (!(box > 0)) return -kInf;
    std::mt19937_64 rng(7);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    const Index samples = 1000000;
    Index hit = 0;
    Vector x(body.dim());
    for (Index i = 0; i < samples; ++i) {
        for (int k = 0; k < body.dim(); ++k) x[k] = lo[k] + (hi[k] - lo[k]) * u(rng);
        if (body.contains(x)) ++hit;
    }
    return hit ? std::log(box * static_cast<double>(hit) / samples) : -kInf;
}

double log_integral_radial(const RadialProfile& psi, int n) {
    if (psi.domain_end() == 0.0) return -kInf;
    const double lr = log_integrate_radial(
        [&](double r) {
            const ExtReal v = psi(r);
            if (v.is_inf()) return -kInf;
            return -v.raw() + (n == 1 ? 0.0 : (n - 1) * std::log(r));
        },
        psi.knots());
    return log_sphere_area(n) + lr;
}

}  // namespace

double log_integral(const LogConcaveFn& f) {
    const int n = f.dim();
    return std::visit(
        overloaded{
            [&](const GridPotential& g) { return log_integral_grid(g); },
            [&](const Quadratic& q) { return -q.offset + 0.5 * n * std::log(2.0 * std::numbers::pi * q.variance); },
            [&](const IndicatorBody& b) { return log_integral_body(b.body) - b.offset; },
            [&](const RadialPotential& r) { return log_integral_radial(r.profile, n); },
        },
        f.phi().repr());
}

UrysohnReport urysohn_gap(const LogConcaveFn& f, double tol_eq, const GaussianMeasure& m) {
    const int n = f.dim();
    UrysohnReport r;
    r.log_int_f = log_integral(f);
    if (r.log_int_f == -kInf) throw InputError("urysohn_gap: int f = 0");
    if (r.log_int_f == kInf) throw InputError("urysohn_gap: int f = +inf");
    r.log_int_g = log_integral_gaussian(n);
    r.rhs = 2.0 / n * (r.log_int_f - r.log_int_g) + 1.0;
    r.m_star = mean_width(f, m).value;
    r.gap = r.m_star.is_inf() ? ExtReal::inf() : ExtReal(r.m_star.raw() - r.rhs);
    r.equality = r.gap.is_finite() && r.gap.raw() <= tol_eq;
    return r;
}

namespace {

SantaloReport finish_santalo(SantaloReport r, int n, double tol) {
    r.recovered_center = -r.x0;
    r.log_product = r.log_int_f + r.log_int_dual;
    r.product = std::exp(r.log_product);
    r.bound = std::exp(n * std::log(2.0 * std::numbers::pi));
    r.pass = r.divergent || r.log_product <= n * std::log(2.0 * std::numbers::pi) + std::log1p(tol);
    return r;
}

SantaloReport santalo_radial(const RadialProfile& psi, int n, const Vector& shift, double tol) {
    SantaloReport r;
    r.method = "radial";
    r.x0 = shift.size() ? Vector(-shift) : Vector(Vector::Zero(n));
    r.log_int_f = log_integral_radial(psi, n);
    const RadialProfile dual = psi.conjugate();
    r.log_int_dual = log_integral_radial(dual, n);
    if (std::isinf(r.log_int_dual)) r.divergent = true;
    return finish_santalo(r, n, tol);
}

SantaloReport santalo_grid(const GridPotential& g, double tol) {
    const int n = g.spec.dim();
    if (n > 2) throw InputError("santalo_check: grid potentials are limited to n <= 2");
    SantaloReport r;
    r.method = "grid";
    r.log_int_f = log_integral_grid(g);
    const double Y = 40.0;
    const double dy = n == 1 ? 0.025 : 0.1;
    const GridSpec ys = GridSpec::cube(n, -Y, Y, static_cast<Index>(std::llround(2 * Y / dy)) + 1);
    const Eigen::ArrayXd h = legendre_nd(g, ys).as_grid().values;
    // Trapezoid weights (log) and node coordinates.
    Eigen::ArrayXd logw(ys.size());
    Matrix pts(n, ys.size());
    std::vector<Index> idx;
    for (Index i = 0; i < ys.size(); ++i) {
        unravel(i, ys.shape, idx);
        double lw = 0.0;
        for (int k = 0; k < n; ++k) {
            lw += std::log(ys.spacing[k]);
            if (idx[k] == 0 || idx[k] == ys.shape[k] - 1) lw += std::log(0.5);
            pts(k, i) = ys.coord(k, idx[k]);
        }
        logw[i] = lw;
    }
    auto F = [&](const Vector& x0) {
        const Eigen::ArrayXd e = logw - h - (pts.transpose() * x0).array();
        const double mx = e.maxCoeff();
        return mx + std::log((e - mx).exp().sum());
    };
    // Start from the minimizer of phi (the dual barycenter is then near 0).
    Index imin;
    g.values.minCoeff(&imin);
    Vector x0 = -node_point(g.spec, imin);
    double best = F(x0);
    bool moved = true;
    while (moved) {
        moved = false;
        for (int k = 0; k < n; ++k)
            for (double dir : {1.0, -1.0}) {
                while (true) {
                    Vector t = x0;
                    t[k] += dir * g.spec.spacing[k];
                    const double v = F(t);
                    if (v < best - 1e-14 * std::abs(best)) {
                        best = v;
                        x0 = t;
                        moved = true;
                    } else {
                        break;
                    }
                }
            }
    }
    r.x0 = x0;
    r.log_int_dual = best;
    // Mass at the edge of the y-box means the dual integral was truncated.
    double edge = -kInf, peak = -kInf;
    for (Index i = 0; i < ys.size(); ++i) {
        const double e = -h[i] - pts.col(i).dot(x0);
        peak = std::max(peak, e);
        unravel(i, ys.shape, idx);
        for (int k = 0; k < n; ++k)
            if (idx[k] == 0 || idx[k] == ys.shape[k] - 1) edge = std::max(edge, e);
    }
    if (edge > peak - 30.0) {
        r.divergent = true;
        r.method += " (dual integral truncated at |y| = 40)";
    }
    return finish_santalo(r, n, tol);
}

}  // namespace

SantaloReport santalo_check(const Potential& phi, double tol) {
    const int n = phi.dim();
    return std::visit(
        overloaded{
            [&](const GridPotential& g) { return santalo_grid(g, tol); },
            [&](const Quadratic& q) {
                SantaloReport r;
                r.method = "exact";
                r.x0 = -q.center;
                const double l2p = std::log(2.0 * std::numbers::pi);
                r.log_int_f = -q.offset + 0.5 * n * (l2p + std::log(q.variance));
                r.log_int_dual = q.offset + 0.5 * n * (l2p - std::log(q.variance));
                return finish_santalo(r, n, tol);
            },
            [&](const IndicatorBody& b) {
                if (const auto* box = std::get_if<Box>(&b.body.shape())) {
                    SantaloReport r;
                    r.method = "exact";
                    r.x0 = -0.5 * (box->lo + box->hi);
                    const Eigen::ArrayXd w = 0.5 * (box->hi - box->lo).array();
                    if ((w <= 0).any()) throw InputError("santalo_check: int f = 0");
                    r.log_int_f = (2.0 * w).log().sum() - b.offset;
                    r.log_int_dual = (2.0 / w).log().sum() + b.offset;
                    return finish_santalo(r, n, tol);
                }
                if (const auto* ball = std::get_if<Ball>(&b.body.shape()))
                    return santalo_radial(RadialProfile::ball(ball->radius, b.offset), n, ball->center, tol);
                throw InputError("santalo_check: only box and ball indicators are supported");
            },
            [&](const RadialPotential& r) { return santalo_radial(r.profile, n, r.shift, tol); },
        },
        phi.repr());
}

ShannonReport shannon_check(const std::function<double(const Vector&)>& p, const std::function<double(const Vector&)>& q,
                            const GridSpec& domain, double tol_eq) {
    domain.validate();
    const int n = domain.dim();
    ShannonReport r;
    double plogp = 0.0, plogq = 0.0;
    bool q_zero_on_p = false;
    std::vector<Index> idx;
    for (Index i = 0; i < domain.size(); ++i) {
        unravel(i, domain.shape, idx);
        double w = 1.0;
        for (int k = 0; k < n; ++k) {
            w *= domain.spacing[k];
            if (idx[k] == 0 || idx[k] == domain.shape[k] - 1) w *= 0.5;
        }
        const Vector x = node_point(domain, i);
        const double pv = p(x), qv = q(x);
        if (pv < 0 || qv < 0) throw InputError("shannon_check: p and q must be nonnegative");
        r.mass_p += w * pv;
        r.int_q += w * qv;
        if (pv > 0) {
            plogp += w * pv * std::log(pv);
            if (qv > 0) plogq += w * pv * std::log(qv);
            else q_zero_on_p = true;
        }
    }
    if (!(r.int_q > 0)) throw InputError("shannon_check: int q = 0");
    r.lhs = -plogp;
    r.rhs = q_zero_on_p ? kInf : -plogq + std::log(r.int_q);
    r.gap = r.rhs - r.lhs;
    r.equality = std::abs(r.gap) <= tol_eq;
    return r;
}

}  // namespace logconc

#include "logconc/calculus.hpp"

#include <algorithm>
#include <cmath>

namespace logconc {

namespace {

struct RadialForm {
    RadialProfile profile;
    Vector shift;
};

std::optional<RadialForm> radial_form(const Potential& p) {
    const int n = p.dim();
    if (const auto* q = std::get_if<Quadratic>(&p.repr()))
        return RadialForm{RadialProfile::quadratic(q->variance, q->offset), q->center};
    if (const auto* b = std::get_if<IndicatorBody>(&p.repr()))
        if (const auto* ball = std::get_if<Ball>(&b->body.shape()))
            return RadialForm{RadialProfile::ball(ball->radius, b->offset), ball->center};
    if (const auto* r = std::get_if<RadialPotential>(&p.repr()))
        return RadialForm{r->profile, r->shift.size() ? r->shift : Vector::Zero(n)};
    return std::nullopt;
}

std::optional<Matrix> vertex_form(const ConvexBody& k) {
    const int n = k.dim();
    if (const auto* b = std::get_if<Box>(&k.shape())) {
        Matrix v(n, Index(1) << n);
        for (Index m = 0; m < v.cols(); ++m)
            for (int j = 0; j < n; ++j) v(j, m) = ((m >> j) & 1) ? b->hi[j] : b->lo[j];
        return v;
    }
    if (const auto* s = std::get_if<Segment>(&k.shape())) {
        Matrix v(n, 2);
        v << s->a, s->b;
        return v;
    }
    if (const auto* p = std::get_if<Polytope>(&k.shape())) return p->vertices;
    return std::nullopt;
}

std::optional<ConvexBody> minkowski_sum(const ConvexBody& a, const ConvexBody& b) {
    if (const auto* x = std::get_if<Ball>(&a.shape()))
        if (const auto* y = std::get_if<Ball>(&b.shape()))
            return ConvexBody::ball(x->radius + y->radius, x->center + y->center);
    if (const auto* x = std::get_if<Box>(&a.shape()))
        if (const auto* y = std::get_if<Box>(&b.shape())) return ConvexBody::box(x->lo + y->lo, x->hi + y->hi);
    const auto va = vertex_form(a), vb = vertex_form(b);
    if (!va || !vb) return std::nullopt;
    Matrix v(a.dim(), va->cols() * vb->cols());
    for (Index i = 0; i < va->cols(); ++i)
        for (Index j = 0; j < vb->cols(); ++j) v.col(i * vb->cols() + j) = va->col(i) + vb->col(j);
    if (a.dim() == 2 && v.cols() > 2) v = convex_hull_2d(v);
    return ConvexBody::polytope(std::move(v));
}

GridPotential as_grid(const LogConcaveFn& f, const std::optional<GridSpec>& out) {
    if (f.phi().is_grid()) return f.phi().as_grid();
    if (!out) throw InputError("asplund: analytic input without closed form needs an output grid");
    return f.phi().to_grid(*out).as_grid();
}

}  // namespace

std::optional<LogConcaveFn> asplund_closed_form(const LogConcaveFn& f, const LogConcaveFn& g) {
    if (f.dim() != g.dim()) throw InputError("asplund: dimension mismatch");
    const Potential& a = f.phi();
    const Potential& b = g.phi();
    if (const auto* qa = std::get_if<Quadratic>(&a.repr()))
        if (const auto* qb = std::get_if<Quadratic>(&b.repr()))
            return LogConcaveFn(Potential::quadratic(qa->center + qb->center, qa->variance + qb->variance,
                                                     qa->offset + qb->offset));
    if (const auto* ia = std::get_if<IndicatorBody>(&a.repr()))
        if (const auto* ib = std::get_if<IndicatorBody>(&b.repr()))
            if (auto sum = minkowski_sum(ia->body, ib->body))
                return LogConcaveFn(Potential::indicator(std::move(*sum), ia->offset + ib->offset));
    const auto ra = radial_form(a), rb = radial_form(b);
    if (ra && rb) {
        const RadialProfile prof = (ra->profile.conjugate() + rb->profile.conjugate()).conjugate();
        const Vector shift = ra->shift + rb->shift;
        RadialPotential out{prof, f.dim(), shift.norm() > 0 ? shift : Vector()};
        return LogConcaveFn(Potential(std::move(out)));
    }
    return std::nullopt;
}

GridSpec asplund_slope_grid(const GridPotential& f, const GridPotential& g) {
    const int n = f.spec.dim();
    const GridSpec sf = default_slope_grid(f), sg = default_slope_grid(g);
    GridSpec s;
    s.origin.resize(n);
    s.spacing.resize(n);
    s.shape.resize(n);
    for (int k = 0; k < n; ++k) {
        const double ds = 0.5 * std::min(f.spec.spacing[k], g.spec.spacing[k]);
        const double lo = std::min({sf.origin[k], sg.origin[k], 0.0});
        const double hi = std::max({sf.upper(k), sg.upper(k), 0.0});
        const double i0 = std::floor(lo / ds), i1 = std::ceil(hi / ds);
        s.origin[k] = i0 * ds;
        s.spacing[k] = ds;
        s.shape[k] = std::max<Index>(2, static_cast<Index>(i1 - i0) + 1);
    }
    s.validate();
    return s;
}

LogConcaveFn asplund(const LogConcaveFn& f, const LogConcaveFn& g, const std::optional<GridSpec>& out) {
    if (f.dim() != g.dim()) throw InputError("asplund: dimension mismatch");
    if (!f.phi().is_grid() && !g.phi().is_grid())
        if (auto c = asplund_closed_form(f, g)) return *c;
    const GridPotential a = as_grid(f, out);
    const GridPotential b = as_grid(g, out);
    GridSpec target;
    if (out) {
        target = *out;
    } else {
        // Box of the sum of the two boxes at the finer spacing.
        const int n = a.spec.dim();
        target.origin = a.spec.origin + b.spec.origin;
        target.spacing = a.spec.spacing.cwiseMin(b.spec.spacing);
        target.shape.resize(n);
        for (int k = 0; k < n; ++k) {
            const double width = a.spec.upper(k) - a.spec.origin[k] + b.spec.upper(k) - b.spec.origin[k];
            target.shape[k] = static_cast<Index>(std::llround(width / target.spacing[k])) + 1;
        }
    }
    if (target.dim() != f.dim()) throw InputError("asplund: output grid dimension mismatch");

    const GridSpec slopes = asplund_slope_grid(a, b);
    const Axes sax = slopes.axes();
    const SupportFn ha = legendre_nd(a, sax);
    const SupportFn hb = legendre_nd(b, sax);
    GridPotential sum{slopes, ha.as_grid().values + hb.as_grid().values};
    Eigen::ArrayXd v = legendre_nd(sum, target.axes()).as_grid().values;

    const Matrix dirs = probe_directions(f.dim());
    const Eigen::ArrayXd hk = finite_support_values(a, dirs) + finite_support_values(b, dirs);
    const double tol = 1e-9 * std::max(1.0, target.spacing.maxCoeff());
    for (Index i = 0; i < v.size(); ++i) {
        const Vector x = node_point(target, i);
        if (((dirs.transpose() * x).array() > hk + tol).any()) v[i] = kInf;
    }
    return LogConcaveFn(Potential::grid(target, std::move(v)));
}

LogConcaveFn inf_convolution_direct(const LogConcaveFn& f, const LogConcaveFn& g, const GridSpec& out) {
    if (f.dim() != g.dim() || out.dim() != f.dim()) throw InputError("inf_convolution_direct: dimension mismatch");
    if (!f.phi().is_grid()) throw InputError("inf_convolution_direct: first argument must be a grid");
    const GridPotential& a = f.phi().as_grid();
    std::vector<Vector> ys;
    std::vector<double> vs;
    for (Index i = 0; i < a.spec.size(); ++i)
        if (std::isfinite(a.values[i])) {
            ys.push_back(node_point(a.spec, i));
            vs.push_back(a.values[i]);
        }
    Eigen::ArrayXd v(out.size());
    for (Index j = 0; j < out.size(); ++j) {
        const Vector x = node_point(out, j);
        double best = kInf;
        for (std::size_t i = 0; i < ys.size(); ++i) {
            const ExtReal w = g.phi()(x - ys[i]);
            if (w.is_finite()) best = std::min(best, vs[i] + w.raw());
        }
        v[j] = best;
    }
    return LogConcaveFn(Potential::grid(out, std::move(v)));
}

namespace {

template <class... Ts>
struct overloaded : Ts... {
    using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

}  // namespace

LogConcaveFn homothety(double lambda, const LogConcaveFn& f) {
    if (!(lambda > 0) || !std::isfinite(lambda)) throw InputError("homothety: lambda must be positive");
    return LogConcaveFn(std::visit(
        overloaded{
            [&](const GridPotential& g) {
                GridSpec s = g.spec;
                s.origin *= lambda;
                s.spacing *= lambda;
                return Potential::grid(std::move(s), g.values * lambda);
            },
            [&](const Quadratic& q) {
                return Potential::quadratic(lambda * q.center, lambda * q.variance, lambda * q.offset);
            },
            [&](const IndicatorBody& b) { return Potential::indicator(b.body.scaled(lambda), lambda * b.offset); },
            [&](const RadialPotential& r) {
                RadialPotential out{r.profile.homothety(lambda), r.dim, r.shift.size() ? Vector(lambda * r.shift) : Vector()};
                return Potential(std::move(out));
            },
        },
        f.phi().repr()));
}

LogConcaveFn scalar_mult(double a, const LogConcaveFn& f) {
    if (!(a > 0) || !std::isfinite(a)) throw InputError("scalar_mult: a must be positive");
    const double d = -std::log(a);
    return LogConcaveFn(std::visit(
        overloaded{
            [&](const GridPotential& g) { return Potential::grid(g.spec, g.values + d); },
            [&](const Quadratic& q) { return Potential::quadratic(q.center, q.variance, q.offset + d); },
            [&](const IndicatorBody& b) { return Potential::indicator(b.body, b.offset + d); },
            [&](const RadialPotential& r) {
                RadialPotential out = r;
                out.profile = r.profile.shifted(d);
                return Potential(std::move(out));
            },
        },
        f.phi().repr()));
}

LogConcaveFn translate(const LogConcaveFn& f, const Vector& a) {
    if (a.size() != f.dim()) throw InputError("translate: dimension mismatch");
    return LogConcaveFn(std::visit(
        overloaded{
            [&](const GridPotential& g) {
                GridSpec s = g.spec;
                s.origin += a;
                return Potential::grid(std::move(s), g.values);
            },
            [&](const Quadratic& q) { return Potential::quadratic(q.center + a, q.variance, q.offset); },
            [&](const IndicatorBody& b) { return Potential::indicator(b.body.translated(a), b.offset); },
            [&](const RadialPotential& r) {
                RadialPotential out = r;
                out.shift = r.shift.size() ? Vector(r.shift + a) : a;
                return Potential(std::move(out));
            },
        },
        f.phi().repr()));
}

LogConcaveFn rotate(const LogConcaveFn& f, const Matrix& u) {
    const int n = f.dim();
    if (u.rows() != n || u.cols() != n) throw InputError("rotate: dimension mismatch");
    if (!(u.transpose() * u).isApprox(Matrix::Identity(n, n), 1e-10)) throw InputError("rotate: u is not orthogonal");
    const Matrix ut = u.transpose();
    // phi(u y) has center, body and shift mapped by u^T.
    return LogConcaveFn(std::visit(
        overloaded{
            [&](const GridPotential&) -> Potential { throw InputError("rotate: grid potentials are not supported"); },
            [&](const Quadratic& q) {
                return Potential::quadratic(q.center.size() ? Vector(ut * q.center) : Vector::Zero(n), q.variance,
                                            q.offset);
            },
            [&](const IndicatorBody& b) { return Potential::indicator(b.body.rotated(ut), b.offset); },
            [&](const RadialPotential& r) {
                RadialPotential out = r;
                if (r.shift.size()) out.shift = ut * r.shift;
                return Potential(std::move(out));
            },
        },
        f.phi().repr()));
}

LogConcaveFn truncate(const LogConcaveFn& f, double k, const std::optional<GridSpec>& grid) {
    if (!(k > 0) || !std::isfinite(k)) throw InputError("truncate: k must be positive");
    const double floor_v = -std::log(k);
    auto truncate_grid = [&](GridPotential g) {
        for (Index i = 0; i < g.spec.size(); ++i) {
            if (node_point(g.spec, i).norm() > k) g.values[i] = kInf;
            else if (std::isfinite(g.values[i])) g.values[i] = std::max(g.values[i], floor_v);
        }
        if (!g.values.isFinite().any()) throw InputError("truncate: no grid node inside the k-ball");
        return LogConcaveFn(Potential::grid(std::move(g.spec), std::move(g.values)));
    };
    const Potential& p = f.phi();
    if (p.is_grid()) return truncate_grid(p.as_grid());
    if (const auto* b = std::get_if<IndicatorBody>(&p.repr()))
        if (b->body.max_norm() <= k) return LogConcaveFn(Potential::indicator(b->body, std::max(b->offset, floor_v)));
    if (auto rf = radial_form(p); rf && rf->shift.norm() == 0.0)
        return LogConcaveFn(Potential::radial(rf->profile.restricted(k).max_with(floor_v), p.dim()));
    if (!grid) throw InputError("truncate: this input needs a sampling grid");
    return truncate_grid(p.to_grid(*grid).as_grid());
}

}  // namespace logconc

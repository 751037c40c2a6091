#include "logconc/legendre.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace logconc {

namespace {

template <class... Ts>
struct overloaded : Ts... {
    using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

int repr_dim(const SupportFn::Repr& r) {
    return std::visit(overloaded{
                          [](const GridSupport& g) { return static_cast<int>(g.axes.size()); },
                          [](const QuadraticSupport& q) { return static_cast<int>(q.linear.size()); },
                          [](const BodySupport& b) { return b.body.dim(); },
                          [](const RadialSupport& r) { return r.dim; },
                      },
                      r);
}

// sup_{z in [lo, hi]} (y z - eps z^2 / 2).
double interval_moreau(double y, double lo, double hi, double eps) {
    if (eps == 0.0) return std::max(y * lo, y * hi);
    const double z = std::clamp(y / eps, lo, hi);
    return y * z - 0.5 * eps * z * z;
}

double body_moreau(const BodySupport& b, const Eigen::Ref<const Vector>& y) {
    if (b.eps == 0.0) return b.body.support(y) - b.offset;
    if (const auto* box = std::get_if<Box>(&b.body.shape())) {
        double s = 0.0;
        for (Index k = 0; k < y.size(); ++k) s += interval_moreau(y[k], box->lo[k], box->hi[k], b.eps);
        return s - b.offset;
    }
    // <y,z> - eps|z|^2/2 = |y|^2/(2 eps) - (eps/2)|z - y/eps|^2, maximized at the
    // projection of y/eps onto K.
    const Vector target = y / b.eps;
    const double d = b.body.distance(target);
    return y.squaredNorm() / (2.0 * b.eps) - 0.5 * b.eps * d * d - b.offset;
}

ExtReal grid_brute_force(const GridSupport& g, const Eigen::Ref<const Vector>& y) {
    const GridPotential& src = *g.source;
    double best = -kInf;
    for (Index i = 0; i < src.spec.size(); ++i) {
        const double v = src.values[i];
        if (std::isinf(v)) continue;
        const Vector z = node_point(src.spec, i);
        best = std::max(best, y.dot(z) - v - 0.5 * g.eps * z.squaredNorm());
    }
    return ExtReal(best);
}

}  // namespace

SupportFn::SupportFn(Repr repr, std::string provenance)
    : repr_(std::move(repr)), provenance_(std::move(provenance)), dim_(repr_dim(repr_)) {
    if (dim_ <= 0) throw InputError("SupportFn: dimension must be positive");
}

std::string SupportFn::kind() const {
    return std::visit(overloaded{
                          [](const GridSupport&) { return std::string("grid"); },
                          [](const QuadraticSupport&) { return std::string("quadratic"); },
                          [](const BodySupport& b) { return "body_" + b.body.kind(); },
                          [](const RadialSupport&) { return std::string("radial"); },
                      },
                      repr_);
}

ExtReal SupportFn::operator()(const Eigen::Ref<const Vector>& y) const {
    if (y.size() != dim_) throw InputError("support function: dimension mismatch");
    return std::visit(overloaded{
                          [&](const GridSupport& g) {
                              for (int k = 0; k < dim_; ++k) {
                                  const auto& a = g.axes[k];
                                  if (y[k] < a[0] || y[k] > a[a.size() - 1]) {
                                      if (!g.source) return ExtReal::inf();
                                      return grid_brute_force(g, y);
                                  }
                              }
                              return interpolate(g.axes, g.values, y);
                          },
                          [&](const QuadraticSupport& q) {
                              return ExtReal(0.5 * q.curvature * y.squaredNorm() + q.linear.dot(y) + q.offset);
                          },
                          [&](const BodySupport& b) { return ExtReal(body_moreau(b, y)); },
                          [&](const RadialSupport& r) {
                              const ExtReal v = r.profile(y.norm());
                              if (v.is_inf() || r.linear.size() == 0) return v;
                              return v + r.linear.dot(y);
                          },
                      },
                      repr_);
}

Eigen::ArrayXd lower_envelope(const Eigen::ArrayXd& y, const Eigen::ArrayXd& psi) {
    const Index n = y.size();
    std::vector<Index> hull;
    double scale = 1.0;
    for (Index k = 0; k < n; ++k) {
        if (std::isinf(psi[k])) continue;
        scale = std::max(scale, std::abs(psi[k]));
        while (hull.size() >= 2) {
            const Index a = hull[hull.size() - 2], b = hull.back();
            // Drop b when it lies on or above the chord a -> k.
            const double cross = (y[b] - y[a]) * (psi[k] - psi[a]) - (psi[b] - psi[a]) * (y[k] - y[a]);
            if (cross <= 0.0) hull.pop_back();
            else break;
        }
        hull.push_back(k);
    }
    Eigen::ArrayXd out = Eigen::ArrayXd::Constant(n, kInf);
    if (hull.empty()) return out;
    std::size_t h = 0;
    for (Index k = hull.front(); k <= hull.back(); ++k) {
        while (h + 1 < hull.size() && hull[h + 1] < k) ++h;
        double env;
        if (k == hull[h]) {
            env = psi[k];
        } else {
            const Index a = hull[h], b = hull[h + 1];
            const double t = (y[k] - y[a]) / (y[b] - y[a]);
            env = psi[a] + t * (psi[b] - psi[a]);
        }
        out[k] = (std::isfinite(psi[k]) && std::abs(psi[k] - env) <= 1e-12 * scale) ? psi[k] : env;
    }
    return out;
}

namespace {

Eigen::ArrayXd node_coords(const GridSpec& spec, int axis) {
    Eigen::ArrayXd c(spec.shape[axis]);
    for (Index i = 0; i < c.size(); ++i) c[i] = spec.coord(axis, i);
    return c;
}

}  // namespace

SupportFn legendre_1d(const GridPotential& psi, const GridSpec& out) {
    if (psi.spec.dim() != 1 || out.dim() != 1) throw InputError("legendre_1d: one-dimensional grids only");
    if (!psi.values.isFinite().any()) throw InputError("legendre_1d: empty effective domain");
    const Eigen::ArrayXd y = node_coords(psi.spec, 0);
    const Eigen::ArrayXd s = node_coords(out, 0);
    Eigen::ArrayXd g(s.size());
    legendre_sweep<double>(y, psi.values, s, g);
    GridSupport h{Axes{s.matrix()}, std::move(g), std::make_shared<const GridPotential>(psi), 0.0};
    return SupportFn(std::move(h), "legendre_1d(grid)");
}

SupportFn legendre_nd(const GridPotential& phi, const Axes& out) {
    const int n = phi.spec.dim();
    if (static_cast<int>(out.size()) != n) throw InputError("legendre_nd: output dimension mismatch");
    if (n > 3) throw InputError("legendre_nd: grid conjugates are limited to n <= 3");
    if (!phi.values.isFinite().any()) throw InputError("legendre_nd: empty effective domain");
    for (const auto& a : out)
        for (Index i = 1; i < a.size(); ++i)
            if (!(a[i] > a[i - 1])) throw InputError("legendre_nd: output axes must be increasing");

    std::vector<Index> shape = phi.spec.shape;
    Eigen::ArrayXd cur = phi.values;
    for (int k = n - 1; k >= 0; --k) {
        const Eigen::ArrayXd y = node_coords(phi.spec, k);
        const Eigen::ArrayXd s = out[k].array();
        Index outer = 1, inner = 1;
        for (int j = 0; j < k; ++j) outer *= shape[j];
        for (int j = k + 1; j < n; ++j) inner *= shape[j];
        const Index m_in = shape[k], m_out = s.size();
        Eigen::ArrayXd next(outer * m_out * inner);
        Eigen::ArrayXd line(m_in), g(m_out);
        for (Index o = 0; o < outer; ++o)
            for (Index in = 0; in < inner; ++in) {
                for (Index i = 0; i < m_in; ++i) line[i] = cur[(o * m_in + i) * inner + in];
                if (n > 1) line = lower_envelope(y, line);
                legendre_sweep<double>(y, line, s, g);
                // Intermediate results go back into potential form -g.
                const bool last = k == 0;
                for (Index j = 0; j < m_out; ++j) next[(o * m_out + j) * inner + in] = last ? g[j] : -g[j];
            }
        cur = std::move(next);
        shape[k] = m_out;
    }
    if ((cur == -kInf).any()) throw InputError("legendre_nd: empty effective domain");
    GridSupport h{out, std::move(cur), std::make_shared<const GridPotential>(phi), 0.0};
    return SupportFn(std::move(h), "legendre_nd(grid)");
}

SupportFn legendre_nd(const GridPotential& phi, const GridSpec& out) { return legendre_nd(phi, out.axes()); }

SupportFn legendre_radial(const RadialProfile& psi, int dim) {
    return SupportFn(RadialSupport{psi.conjugate(), dim, Vector()}, "legendre_radial");
}

GridSpec default_slope_grid(const GridPotential& phi, Index points) {
    const int n = phi.spec.dim();
    const auto strides = phi.spec.strides();
    Vector lo(n), hi(n);
    std::vector<Index> shape(n);
    std::vector<Index> idx;
    for (int k = 0; k < n; ++k) {
        double smin = kInf, smax = -kInf;
        for (Index f = 0; f < phi.spec.size(); ++f) {
            unravel(f, phi.spec.shape, idx);
            if (idx[k] + 1 >= phi.spec.shape[k]) continue;
            const double a = phi.values[f], b = phi.values[f + strides[k]];
            if (std::isinf(a) || std::isinf(b)) continue;
            const double s = (b - a) / phi.spec.spacing[k];
            smin = std::min(smin, s);
            smax = std::max(smax, s);
        }
        if (!std::isfinite(smin)) smin = smax = 0.0;
        double pad = 0.1 * (smax - smin);
        if (pad == 0.0) pad = 1.0 + 0.1 * std::abs(smin);
        lo[k] = smin - pad;
        hi[k] = smax + pad;
        shape[k] = points > 0 ? points : std::max<Index>(phi.spec.shape[k], 2);
    }
    GridSpec g;
    g.origin = lo;
    g.spacing.resize(n);
    for (int k = 0; k < n; ++k) g.spacing[k] = (hi[k] - lo[k]) / static_cast<double>(shape[k] - 1);
    g.shape = shape;
    g.validate();
    return g;
}

SupportFn legendre(const Potential& phi, const std::optional<Axes>& out) {
    return std::visit(overloaded{
                          [&](const GridPotential& g) {
                              const Axes ax = out ? *out : default_slope_grid(g).axes();
                              return legendre_nd(g, ax);
                          },
                          [&](const Quadratic& q) {
                              return SupportFn(QuadraticSupport{q.variance, q.center, -q.offset},
                                               "legendre(quadratic)");
                          },
                          [&](const IndicatorBody& b) {
                              return SupportFn(BodySupport{b.body, 0.0, b.offset}, "legendre(indicator)");
                          },
                          [&](const RadialPotential& r) {
                              return SupportFn(RadialSupport{r.profile.conjugate(), r.dim, r.shift},
                                               "legendre(radial)");
                          },
                      },
                      phi.repr());
}

GridPotential support_as_potential(const GridSupport& h) {
    const int n = static_cast<int>(h.axes.size());
    GridSpec spec;
    spec.origin.resize(n);
    spec.spacing.resize(n);
    spec.shape.resize(n);
    for (int k = 0; k < n; ++k) {
        const auto& a = h.axes[k];
        const Index m = a.size();
        if (m < 2) throw InputError("support_as_potential: axes need >= 2 nodes");
        const double step = (a[m - 1] - a[0]) / static_cast<double>(m - 1);
        for (Index i = 1; i < m; ++i)
            if (std::abs(a[i] - a[i - 1] - step) > 1e-9 * std::max(1.0, std::abs(step)))
                throw InputError("support_as_potential: axes are not uniform");
        spec.origin[k] = a[0];
        spec.spacing[k] = step;
        spec.shape[k] = m;
    }
    return GridPotential{std::move(spec), h.values};
}

namespace {

// Unit directions used to test membership in a convex hull or a Minkowski sum.
Matrix probe_directions_impl(int dim) {
    if (dim == 1) {
        Matrix u(1, 2);
        u << 1.0, -1.0;
        return u;
    }
    if (dim == 2) {
        const int m = 256;
        Matrix u(2, m);
        for (int i = 0; i < m; ++i) {
            const double t = 2.0 * std::numbers::pi * i / m;
            u(0, i) = std::cos(t);
            u(1, i) = std::sin(t);
        }
        return u;
    }
    const int m = 1024;
    Matrix u(dim, m);
    u.setZero();
    const double golden = std::numbers::pi * (3.0 - std::sqrt(5.0));
    for (int i = 0; i < m; ++i) {
        const double z = 1.0 - 2.0 * (i + 0.5) / m;
        const double r = std::sqrt(1.0 - z * z);
        u(0, i) = r * std::cos(golden * i);
        u(1, i) = r * std::sin(golden * i);
        u(2, i) = z;
    }
    return u;
}

}  // namespace

Matrix probe_directions(int dim) {
    if (dim > 3) throw InputError("probe_directions: n <= 3 only");
    Matrix u = probe_directions_impl(dim);
    // Axis directions are always included so boxes are captured exactly.
    Matrix ax(dim, 2 * dim);
    ax.setZero();
    for (int k = 0; k < dim; ++k) {
        ax(k, 2 * k) = 1.0;
        ax(k, 2 * k + 1) = -1.0;
    }
    Matrix all(dim, u.cols() + ax.cols());
    all << u, ax;
    return all;
}

Eigen::ArrayXd finite_support_values(const GridPotential& g, const Matrix& dirs) {
    Eigen::ArrayXd h = Eigen::ArrayXd::Constant(dirs.cols(), -kInf);
    for (Index i = 0; i < g.spec.size(); ++i) {
        if (std::isinf(g.values[i])) continue;
        const Vector z = node_point(g.spec, i);
        h = h.max((dirs.transpose() * z).array());
    }
    return h;
}

Potential biconjugate(const Potential& phi) {
    return std::visit(overloaded{
                          [&](const GridPotential& g) -> Potential {
                              if (g.spec.dim() == 1) {
                                  return Potential::grid(g.spec, lower_envelope(node_coords(g.spec, 0), g.values));
                              }
                              const int n = g.spec.dim();
                              const SupportFn h = legendre_nd(g, default_slope_grid(g));
                              const GridPotential hp = support_as_potential(h.as_grid());
                              const SupportFn back = legendre_nd(hp, g.spec);
                              Eigen::ArrayXd v = back.as_grid().values;
                              const Matrix dirs = probe_directions(n);
                              const Eigen::ArrayXd hk = finite_support_values(g, dirs);
                              const double tol = 1e-9 * std::max(1.0, g.spec.spacing.maxCoeff());
                              double scale = 1.0;
                              for (Index i = 0; i < v.size(); ++i)
                                  if (std::isfinite(g.values[i])) scale = std::max(scale, std::abs(g.values[i]));
                              for (Index i = 0; i < v.size(); ++i) {
                                  const Vector x = node_point(g.spec, i);
                                  if (((dirs.transpose() * x).array() > hk + tol).any()) {
                                      v[i] = kInf;
                                  } else if (std::isfinite(g.values[i]) &&
                                             std::abs(g.values[i] - v[i]) <= 1e-12 * scale) {
                                      v[i] = g.values[i];
                                  }
                              }
                              return Potential::grid(g.spec, std::move(v));
                          },
                          [&](const RadialPotential& r) -> Potential {
                              RadialPotential out = r;
                              out.profile = r.profile.conjugate().conjugate();
                              return Potential(std::move(out));
                          },
                          [&](const auto&) { return phi; },
                      },
                      phi.repr());
}

SupportFn h_profile(const Potential& phi, double eps, const std::optional<Axes>& out) {
    if (!(eps > 0) || !std::isfinite(eps)) throw InputError("h_profile: eps must be positive");
    return std::visit(overloaded{
                          [&](const GridPotential& g) {
                              GridPotential pert = g;
                              for (Index i = 0; i < g.spec.size(); ++i)
                                  if (std::isfinite(pert.values[i]))
                                      pert.values[i] += 0.5 * eps * node_point(g.spec, i).squaredNorm();
                              const Axes ax = out ? *out : default_slope_grid(pert).axes();
                              SupportFn h = legendre_nd(pert, ax);
                              GridSupport gs = h.as_grid();
                              gs.source = std::make_shared<const GridPotential>(g);
                              gs.eps = eps;
                              return SupportFn(std::move(gs), "h_profile(grid)");
                          },
                          [&](const Quadratic& q) {
                              const double k = 1.0 + eps * q.variance;
                              const double off = q.offset + eps * q.center.squaredNorm() / (2.0 * k);
                              return SupportFn(QuadraticSupport{q.variance / k, q.center / k, -off},
                                               "h_profile(quadratic)");
                          },
                          [&](const IndicatorBody& b) {
                              return SupportFn(BodySupport{b.body, eps, b.offset}, "h_profile(indicator)");
                          },
                          [&](const RadialPotential& r) {
                              if (r.shift.size() && r.shift.norm() > 0)
                                  throw InputError("h_profile: translated radial potentials are not radial");
                              return SupportFn(RadialSupport{r.profile.plus_quadratic(eps).conjugate(), r.dim, Vector()},
                                               "h_profile(radial)");
                          },
                      },
                      phi.repr());
}

}  // namespace logconc

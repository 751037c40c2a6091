#include "logconc/potential.hpp"

#include <algorithm>
#include <cmath>

namespace logconc {

namespace {

template <class... Ts>
struct overloaded : Ts... {
    using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

}  // namespace

Potential::Potential(Repr repr) : repr_(std::move(repr)) {
    std::visit(overloaded{
                   [&](const GridPotential& g) {
                       g.spec.validate();
                       if (g.values.size() != g.spec.size())
                           throw InputError("grid potential: value count does not match shape");
                       if (g.values.isNaN().any()) throw InputError("grid potential: NaN value");
                       if ((g.values == -kInf).any()) throw InputError("grid potential: -inf value");
                       if (!g.values.isFinite().any()) throw InputError("grid potential: identically +inf");
                       dim_ = g.spec.dim();
                   },
                   [&](const Quadratic& q) {
                       if (q.center.size() == 0) throw InputError("quadratic: dimension must be positive");
                       if (!(q.variance > 0) || !std::isfinite(q.variance))
                           throw InputError("quadratic: variance must be positive");
                       if (!std::isfinite(q.offset) || !q.center.allFinite())
                           throw InputError("quadratic: non-finite parameter");
                       dim_ = static_cast<int>(q.center.size());
                   },
                   [&](const IndicatorBody& b) {
                       if (!std::isfinite(b.offset)) throw InputError("indicator: non-finite offset");
                       dim_ = b.body.dim();
                   },
                   [&](const RadialPotential& r) {
                       if (r.dim <= 0) throw InputError("radial: dimension must be positive");
                       if (r.shift.size() != 0 && r.shift.size() != r.dim)
                           throw InputError("radial: shift length does not match dimension");
                       dim_ = r.dim;
                   },
               },
               repr_);
}

Potential Potential::grid(GridSpec spec, Eigen::ArrayXd values) {
    return Potential(GridPotential{std::move(spec), std::move(values)});
}

Potential Potential::sample(const GridSpec& spec, const std::function<ExtReal(const Vector&)>& fn) {
    spec.validate();
    Eigen::ArrayXd v(spec.size());
    for (Index i = 0; i < spec.size(); ++i) v[i] = fn(node_point(spec, i)).raw();
    return grid(spec, std::move(v));
}

Potential Potential::quadratic(Vector center, double variance, double offset) {
    return Potential(Quadratic{std::move(center), variance, offset});
}

Potential Potential::gaussian(int dim) { return quadratic(Vector::Zero(dim)); }

Potential Potential::indicator(ConvexBody body, double offset) {
    return Potential(IndicatorBody{std::move(body), offset});
}

Potential Potential::radial(RadialProfile profile, int dim) {
    return Potential(RadialPotential{std::move(profile), dim, Vector()});
}

Potential Potential::norm_cone(int dim, double alpha, double offset) {
    return radial(RadialProfile::cone(alpha, offset), dim);
}

std::string Potential::kind() const {
    return std::visit(overloaded{
                          [](const GridPotential&) { return std::string("grid"); },
                          [](const Quadratic&) { return std::string("quadratic"); },
                          [](const IndicatorBody& b) { return "indicator_" + b.body.kind(); },
                          [](const RadialPotential&) { return std::string("radial"); },
                      },
                      repr_);
}

ExtReal Potential::operator()(const Eigen::Ref<const Vector>& x) const {
    if (x.size() != dim_) throw InputError("eval_potential: dimension mismatch");
    return std::visit(overloaded{
                          [&](const GridPotential& g) { return interpolate(g.spec, g.values, x); },
                          [&](const Quadratic& q) {
                              return ExtReal((x - q.center).squaredNorm() / (2.0 * q.variance) + q.offset);
                          },
                          [&](const IndicatorBody& b) {
                              return b.body.contains(x) ? ExtReal(b.offset) : ExtReal::inf();
                          },
                          [&](const RadialPotential& r) {
                              const double rho = r.shift.size() ? (x - r.shift).norm() : x.norm();
                              return r.profile(rho);
                          },
                      },
                      repr_);
}

Potential Potential::to_grid(const GridSpec& spec) const {
    if (spec.dim() != dim_) throw InputError("to_grid: dimension mismatch");
    return sample(spec, [this](const Vector& x) { return (*this)(x); });
}

ExtReal eval_potential(const Potential& phi, const Eigen::Ref<const Vector>& x) { return phi(x); }

namespace {

ConvexityReport screen_grid(const GridPotential& g, double tol_rel) {
    ConvexityReport rep;
    const auto& v = g.values;
    double scale = 1.0;
    for (Index i = 0; i < v.size(); ++i)
        if (std::isfinite(v[i])) scale = std::max(scale, std::abs(v[i]));
    const double tol = tol_rel * scale;
    const int n = g.spec.dim();
    const auto strides = g.spec.strides();

    std::vector<std::vector<int>> dirs;
    for (int k = 0; k < n; ++k) {
        std::vector<int> d(n, 0);
        d[k] = 1;
        dirs.push_back(d);
    }
    for (int j = 0; j < n; ++j)
        for (int k = j + 1; k < n; ++k) {
            std::vector<int> d(n, 0);
            d[j] = 1;
            d[k] = 1;
            dirs.push_back(d);
            d[k] = -1;
            dirs.push_back(d);
        }

    std::vector<Index> idx;
    for (Index flat = 0; flat < g.spec.size(); ++flat) {
        unravel(flat, g.spec.shape, idx);
        for (const auto& d : dirs) {
            bool inside = true;
            Index off = 0;
            for (int k = 0; k < n && inside; ++k) {
                const Index lo = idx[k] - d[k], hi = idx[k] + d[k];
                if (lo < 0 || hi < 0 || lo >= g.spec.shape[k] || hi >= g.spec.shape[k]) inside = false;
                off += d[k] * strides[k];
            }
            if (!inside) continue;
            const double a = v[flat - off], b = v[flat], c = v[flat + off];
            if (std::isinf(a) || std::isinf(c)) continue;
            // A gap between finite nodes means a nonconvex effective domain.
            const double second = std::isinf(b) ? -kInf : a - 2.0 * b + c;
            if (second < -tol && second < rep.worst) {
                rep.pass = false;
                rep.worst = second;
                rep.witness = {flat - off, flat, flat + off};
            }
        }
    }
    if (!rep.pass)
        rep.detail = std::isinf(rep.worst) ? "effective domain has a gap" : "negative second difference";
    return rep;
}

}  // namespace

ConvexityReport convexity_screen(const Potential& phi, double tol_rel) {
    return std::visit(overloaded{
                          [&](const GridPotential& g) { return screen_grid(g, tol_rel); },
                          [&](const RadialPotential& r) {
                              ConvexityReport rep;
                              const int k = r.profile.convexity_witness(tol_rel);
                              if (k >= 0) {
                                  rep.pass = false;
                                  rep.witness = {-1, k, -1};
                                  rep.detail = "radial profile not convex at knot " + std::to_string(k);
                              }
                              return rep;
                          },
                          [](const auto&) { return ConvexityReport{}; },
                      },
                      phi.repr());
}

}  // namespace logconc

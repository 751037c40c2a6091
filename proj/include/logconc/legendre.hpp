#ifndef LOGCONC_LEGENDRE_HPP
#define LOGCONC_LEGENDRE_HPP

#include <Eigen/Core>

#include <cmath>
#include <limits>
#include <memory>
#include <optional>
#include <string>
#include <variant>

#include "logconc/potential.hpp"

namespace logconc {

/// Discrete conjugate on a rectilinear output grid. Outside the output box
/// the value is recomputed by brute force from the source nodes.
struct GridSupport {
    Axes axes;
    Eigen::ArrayXd values;
    std::shared_ptr<const GridPotential> source;
    double eps = 0.0;  // source was phi + eps |.|^2 / 2
};

/// curvature |y|^2 / 2 + <linear, y> + offset.
struct QuadraticSupport {
    double curvature = 1.0;
    Vector linear;
    double offset = 0.0;
};

/// sup_{z in K} (<y, z> - eps |z|^2 / 2) - offset.
struct BodySupport {
    ConvexBody body;
    double eps = 0.0;
    double offset = 0.0;
};

/// rho(|y|) + <linear, y>; empty linear means zero.
struct RadialSupport {
    RadialProfile profile;
    int dim = 1;
    Vector linear;
};

/// A conjugate L(phi) (or L(phi + eps|.|^2/2)): convex, lsc, never -inf.
class SupportFn {
public:
    using Repr = std::variant<GridSupport, QuadraticSupport, BodySupport, RadialSupport>;

    SupportFn(Repr repr, std::string provenance);

    int dim() const { return dim_; }
    const Repr& repr() const { return repr_; }
    const std::string& provenance() const { return provenance_; }
    std::string kind() const;

    bool is_grid() const { return std::holds_alternative<GridSupport>(repr_); }
    bool is_radial() const { return std::holds_alternative<RadialSupport>(repr_); }
    const GridSupport& as_grid() const { return std::get<GridSupport>(repr_); }
    const RadialSupport& as_radial() const { return std::get<RadialSupport>(repr_); }

    ExtReal operator()(const Eigen::Ref<const Vector>& y) const;

private:
    Repr repr_;
    std::string provenance_;
    int dim_ = 0;
};

/// Linear-time discrete conjugate of node values psi at sorted positions y,
/// evaluated at sorted slopes s: out[j] = max_k (s[j] y[k] - psi[k]).
///
/// +inf nodes never win. For convex psi the maximizer is nondecreasing in s,
/// so one forward pointer suffices; a small window around the pointer absorbs
/// rounding ties so the result is the exact float maximum of the candidate
/// set. Returns -inf everywhere when psi is identically +inf.
template <typename Scalar>
void legendre_sweep(const Eigen::Ref<const Eigen::Array<Scalar, Eigen::Dynamic, 1>>& y,
                    const Eigen::Ref<const Eigen::Array<Scalar, Eigen::Dynamic, 1>>& psi,
                    const Eigen::Ref<const Eigen::Array<Scalar, Eigen::Dynamic, 1>>& s,
                    Eigen::Ref<Eigen::Array<Scalar, Eigen::Dynamic, 1>> out) {
    const Index n = y.size();
    Eigen::Array<Index, Eigen::Dynamic, 1> fin(n);
    Index m = 0;
    Scalar scale = 1;
    for (Index k = 0; k < n; ++k)
        if (std::isfinite(psi[k])) {
            fin[m++] = k;
            scale = std::max<Scalar>(scale, std::abs(psi[k]));
        }
    if (m == 0) {
        out.setConstant(-std::numeric_limits<Scalar>::infinity());
        return;
    }
    const Scalar ymax = std::max(std::abs(y[fin[0]]), std::abs(y[fin[m - 1]]));
    Index p = 0;
    for (Index j = 0; j < s.size(); ++j) {
        const Scalar sj = s[j];
        auto val = [&](Index i) { return sj * y[fin[i]] - psi[fin[i]]; };
        while (p + 1 < m && val(p + 1) >= val(p)) ++p;
        const Scalar delta = Scalar(1e-8) * (scale + std::abs(sj) * ymax);
        Scalar best = val(p);
        for (Index i = p + 1; i < m; ++i) {
            const Scalar v = val(i);
            if (v < best - delta) break;
            best = std::max(best, v);
        }
        for (Index i = p - 1; i >= 0; --i) {
            const Scalar v = val(i);
            if (v < best - delta) break;
            best = std::max(best, v);
        }
        out[j] = best;
    }
}

/// Lower convex envelope of (y_k, psi_k) over the finite nodes, evaluated at
/// every node. Nodes on the envelope keep their own value; nodes outside the
/// hull of the finite ones stay +inf.
Eigen::ArrayXd lower_envelope(const Eigen::ArrayXd& y, const Eigen::ArrayXd& psi);

/// 1-D grid conjugate on the slopes of `out`.
SupportFn legendre_1d(const GridPotential& psi, const GridSpec& out);

/// n-D grid conjugate by successive axis sweeps (n <= 3).
SupportFn legendre_nd(const GridPotential& phi, const Axes& out);
SupportFn legendre_nd(const GridPotential& phi, const GridSpec& out);

/// Exact conjugate of a radial potential: rho(|y|) = sup_r (r |y| - psi(r)).
SupportFn legendre_radial(const RadialProfile& psi, int dim);

/// Slope grid covering the finite-difference slopes of `phi`, padded by 10%,
/// with `points` nodes per axis (default: same count as the input).
GridSpec default_slope_grid(const GridPotential& phi, Index points = 0);

/// L(phi) in whatever representation fits. Grid inputs use `out` when given
/// and the default slope grid otherwise.
SupportFn legendre(const Potential& phi, const std::optional<Axes>& out = std::nullopt);

/// L(L phi). Grids come back on the input grid, +inf outside the convex hull
/// of the finite nodes.
Potential biconjugate(const Potential& phi);

/// H(., eps) = L(phi + eps |.|^2 / 2).
SupportFn h_profile(const Potential& phi, double eps, const std::optional<Axes>& out = std::nullopt);

/// Converts a grid support function back into a grid potential (for the
/// second conjugation of a double-conjugate pipeline). Requires uniform axes.
GridPotential support_as_potential(const GridSupport& h);

/// Unit directions (columns) for hull-membership tests in n <= 3; always
/// contains the coordinate directions.
Matrix probe_directions(int dim);

/// max over finite nodes of <z, u> for each column u of `dirs`.
Eigen::ArrayXd finite_support_values(const GridPotential& g, const Matrix& dirs);

}  // namespace logconc

#endif

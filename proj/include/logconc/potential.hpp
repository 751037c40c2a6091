#ifndef LOGCONC_POTENTIAL_HPP
#define LOGCONC_POTENTIAL_HPP

#include <Eigen/Core>

#include <array>
#include <functional>
#include <string>
#include <variant>

#include "logconc/body.hpp"
#include "logconc/ext_real.hpp"
#include "logconc/grid.hpp"
#include "logconc/radial.hpp"

namespace logconc {

/// Node values on a uniform grid; +inf outside the grid box.
struct GridPotential {
    GridSpec spec;
    Eigen::ArrayXd values;
};

/// |x - center|^2 / (2 variance) + offset.
struct Quadratic {
    Vector center;
    double variance = 1.0;
    double offset = 0.0;
};

/// offset on K, +inf outside.
struct IndicatorBody {
    ConvexBody body;
    double offset = 0.0;
};

/// psi(|x - shift|). An empty shift means no translation.
struct RadialPotential {
    RadialProfile profile;
    int dim = 1;
    Vector shift;
};

/// A convex phi: R^n -> (-inf, inf].
class Potential {
public:
    using Repr = std::variant<GridPotential, Quadratic, IndicatorBody, RadialPotential>;

    explicit Potential(Repr repr);

    static Potential grid(GridSpec spec, Eigen::ArrayXd values);
    /// Samples `fn` at every node of `spec`.
    static Potential sample(const GridSpec& spec, const std::function<ExtReal(const Vector&)>& fn);
    static Potential quadratic(Vector center, double variance = 1.0, double offset = 0.0);
    /// |x|^2 / 2, the potential of G.
    static Potential gaussian(int dim);
    static Potential indicator(ConvexBody body, double offset = 0.0);
    static Potential radial(RadialProfile profile, int dim);
    /// alpha |x| + offset.
    static Potential norm_cone(int dim, double alpha = 1.0, double offset = 0.0);

    int dim() const { return dim_; }
    const Repr& repr() const { return repr_; }
    std::string kind() const;

    bool is_grid() const { return std::holds_alternative<GridPotential>(repr_); }
    bool is_radial() const { return std::holds_alternative<RadialPotential>(repr_); }
    const GridPotential& as_grid() const { return std::get<GridPotential>(repr_); }
    const RadialPotential& as_radial() const { return std::get<RadialPotential>(repr_); }

    ExtReal operator()(const Eigen::Ref<const Vector>& x) const;

    /// Resamples onto a grid (exact node values).
    Potential to_grid(const GridSpec& spec) const;

private:
    Repr repr_;
    int dim_ = 0;
};

ExtReal eval_potential(const Potential& phi, const Eigen::Ref<const Vector>& x);

struct ConvexityReport {
    bool pass = true;
    /// Flat node indices (x - d, x, x + d) of the worst violation, or the
    /// knot index in slot 1 for radial profiles.
    std::array<Index, 3> witness{-1, -1, -1};
    double worst = 0.0;
    std::string detail;
};

/// Second-difference screen along axes and diagonals (grid) or the exact
/// piecewise check (radial). Analytic potentials pass by construction.
/// The tolerance is tol_rel * max(1, max |finite value|).
ConvexityReport convexity_screen(const Potential& phi, double tol_rel = 1e-9);

/// f = exp(-phi).
class LogConcaveFn {
public:
    explicit LogConcaveFn(Potential phi) : phi_(std::move(phi)) {}

    static LogConcaveFn gaussian(int dim) { return LogConcaveFn(Potential::gaussian(dim)); }

    const Potential& phi() const { return phi_; }
    int dim() const { return phi_.dim(); }
    double operator()(const Eigen::Ref<const Vector>& x) const { return exp_neg(phi_(x)); }

private:
    Potential phi_;
};

}  // namespace logconc

#endif

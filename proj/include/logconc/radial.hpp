#ifndef LOGCONC_RADIAL_HPP
#define LOGCONC_RADIAL_HPP

#include <optional>
#include <vector>

#include "logconc/ext_real.hpp"

namespace logconc {

/// One quadratic piece a + b r + c r^2, in absolute r.
struct RadialPiece {
    double a = 0.0;
    double b = 0.0;
    double c = 0.0;

    double operator()(double r) const { return a + r * (b + c * r); }
    double slope(double r) const { return b + 2.0 * c * r; }
};

/// A profile psi: [0, inf) -> (-inf, inf], piecewise quadratic.
///
/// knots = {0 = r_0 < r_1 < ... < r_m}; piece i lives on [r_i, r_{i+1}].
/// r_m may be +inf. When r_m is finite the profile is +inf beyond it and takes
/// the closed value at r_m. A single zero-length piece on [0, 0] encodes a
/// profile finite only at the origin.
///
/// Piecewise-quadratic profiles are closed under everything the radial path
/// needs: conjugation, sums, homothety, truncation, and the eps|x|^2/2
/// perturbation, so every radial computation stays exact.
class RadialProfile {
public:
    RadialProfile(std::vector<double> knots, std::vector<RadialPiece> pieces);

    /// r^2 / (2 variance) + offset on [0, inf).
    static RadialProfile quadratic(double variance = 1.0, double offset = 0.0);
    /// alpha r + offset on [0, inf).
    static RadialProfile cone(double alpha, double offset = 0.0);
    /// offset on [0, radius], +inf beyond.
    static RadialProfile ball(double radius, double offset = 0.0);
    /// Piecewise-linear interpolation of node values at radii 0 = r_0 < r_1 < ...
    /// The profile ends at the last finite value.
    static RadialProfile from_samples(const std::vector<double>& radii, const std::vector<double>& values);

    ExtReal operator()(double r) const;

    const std::vector<double>& knots() const { return knots_; }
    const std::vector<RadialPiece>& pieces() const { return pieces_; }
    double domain_end() const { return knots_.back(); }
    bool bounded_domain() const { return std::isfinite(knots_.back()); }

    /// Replaces psi on [0, argmin] by its minimum value. For rho >= 0 the
    /// conjugate only sees this nondecreasing hull.
    RadialProfile flattened() const;

    /// sup_{r >= 0} (r rho - psi(r)), exact. The input is flattened first.
    RadialProfile conjugate() const;

    RadialProfile operator+(const RadialProfile& other) const;
    /// psi + delta.
    RadialProfile shifted(double delta) const;
    /// psi + eps r^2 / 2.
    RadialProfile plus_quadratic(double eps) const;
    /// lambda psi(r / lambda), the potential of the lambda-homothety.
    RadialProfile homothety(double lambda) const;
    /// max(psi, level).
    RadialProfile max_with(double level) const;
    /// psi on [0, radius], +inf beyond.
    RadialProfile restricted(double radius) const;

    /// sup{ r : psi(r) <= t } for a nondecreasing profile; nullopt if psi(0) > t.
    /// Returns +inf for unbounded sublevel sets.
    std::optional<double> level_radius(double t) const;

    double min_value() const;
    double value_at_zero() const { return pieces_.front().a; }

    /// Index of the first knot violating convexity (continuity or slope
    /// monotonicity) or of a concave piece; -1 when convex within `tol`.
    int convexity_witness(double tol = 1e-9) const;

private:
    std::vector<double> knots_;
    std::vector<RadialPiece> pieces_;
};

}  // namespace logconc

#endif

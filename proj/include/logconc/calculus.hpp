#ifndef LOGCONC_CALCULUS_HPP
#define LOGCONC_CALCULUS_HPP

#include <optional>

#include "logconc/legendre.hpp"
#include "logconc/potential.hpp"

namespace logconc {

/// Closed-form Asplund product when one exists: two quadratics, two
/// indicators of Minkowski-summable bodies, or any pair of radial-type
/// potentials (quadratics, balls and radial profiles, possibly translated).
/// Returns nullopt otherwise.
std::optional<LogConcaveFn> asplund_closed_form(const LogConcaveFn& f, const LogConcaveFn& g);

/// f * g = sup_{x1 + x2 = x} f(x1) g(x2). Uses the closed form when available;
/// otherwise grids (analytic inputs are sampled on `out`) and computes the
/// potential as L(L phi_f + L phi_g) on `out`, +inf outside the Minkowski sum
/// of the supports.
LogConcaveFn asplund(const LogConcaveFn& f, const LogConcaveFn& g, const std::optional<GridSpec>& out = std::nullopt);

/// Direct infimal convolution min_y (phi_f(y) + phi_g(x - y)) over the finite
/// nodes y of grid f, at every node x of `out`. Quadratic cost; used as an
/// oracle for the conjugate route.
LogConcaveFn inf_convolution_direct(const LogConcaveFn& f, const LogConcaveFn& g, const GridSpec& out);

/// (lambda . f)(x) = f(x / lambda)^lambda.
LogConcaveFn homothety(double lambda, const LogConcaveFn& f);

/// f_a = a f.
LogConcaveFn scalar_mult(double a, const LogConcaveFn& f);

/// f(. - a). Grids shift their origin, which is exact for any a.
LogConcaveFn translate(const LogConcaveFn& f, const Vector& a);

/// f o u for an orthogonal u. Grids are not supported (the rotated support
/// is no longer a box).
LogConcaveFn rotate(const LogConcaveFn& f, const Matrix& u);

/// f_k = min(f 1_{|x| <= k}, k). Non-radial analytic inputs whose support
/// leaves the k-ball are sampled on `grid`.
LogConcaveFn truncate(const LogConcaveFn& f, double k, const std::optional<GridSpec>& grid = std::nullopt);

/// Uniform slope grid used by the conjugate route: covers both inputs' slope
/// ranges, spacing half the finer input spacing, with 0 as a node.
GridSpec asplund_slope_grid(const GridPotential& f, const GridPotential& g);

}  // namespace logconc

#endif

#ifndef LOGCONC_QUADRATURE_HPP
#define LOGCONC_QUADRATURE_HPP

#include <Eigen/Core>

#include <functional>
#include <optional>
#include <vector>

#include "logconc/grid.hpp"

namespace logconc {

struct QuadratureRule {
    Eigen::VectorXd nodes;
    Eigen::VectorXd weights;
};

/// Gauss-Legendre rule on [-1, 1] (Golub-Welsch).
QuadratureRule gauss_legendre(int m);

/// Gauss-Hermite rule for the standard normal density: sum w_i g(x_i)
/// approximates E g(X), X ~ N(0, 1). Weights sum to 1.
QuadratureRule gauss_hermite(int m);

/// Default Gauss-Hermite order per axis for tensor rules in dimension n.
int default_hermite_order(int n);

/// Tensor-product GH nodes as axes (identical per axis).
Axes hermite_axes(int n, int order);

/// log of the chi_n density at r >= 0 (the law of |X|, X ~ N(0, I_n)).
double log_chi_density(double r, int n);

/// log |S^{n-1}|.
double log_sphere_area(int n);

/// Region [lo, hi] of [0, inf) where log_f exceeds its maximum minus `drop`.
struct RadialWindow {
    double lo = 0.0;
    double hi = 0.0;
    double log_max = 0.0;
    bool empty = false;
};

/// Scans log_f outward from 0 until it has fallen `drop` below its running
/// maximum past every break. Returns nullopt if log_f has not started to
/// decay by `r_cap` (divergent integral).
std::optional<RadialWindow> find_window(const std::function<double(double)>& log_f,
                                        const std::vector<double>& breaks, double r_cap = 1e6,
                                        double drop = 60.0);

/// Composite Gauss-Legendre on [lo, hi], panels split at `breaks`.
double integrate_panels(const std::function<double(double)>& f, double lo, double hi,
                        const std::vector<double>& breaks, int order = 16);

/// log of int_0^inf exp(log_f(r)) dr; -inf for a null integrand, +inf when
/// divergent.
double log_integrate_radial(const std::function<double(double)>& log_f, const std::vector<double>& breaks);

/// E g(|X|) for X ~ N(0, I_n). `log_env` bounds log |g| from above up to an
/// additive constant and is used to size the window. +inf when divergent.
double chi_expectation(const std::function<double(double)>& g, const std::function<double(double)>& log_env,
                       int n, const std::vector<double>& breaks);

/// Same, with the integrand supplied as weighted(r, log chi_n(r)) so callers
/// can combine a large g with a tiny density in log space.
double chi_expectation_weighted(const std::function<double(double, double)>& weighted,
                                const std::function<double(double)>& log_env, int n,
                                const std::vector<double>& breaks);

/// E g(X) for X ~ N(0, 1) on a piecewise-smooth g with known breaks.
double normal_expectation_1d(const std::function<double(double)>& g, const std::vector<double>& breaks,
                             double half_width = 40.0);

}  // namespace logconc

#endif

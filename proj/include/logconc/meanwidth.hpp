#ifndef LOGCONC_MEANWIDTH_HPP
#define LOGCONC_MEANWIDTH_HPP

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "logconc/legendre.hpp"
#include "logconc/potential.hpp"

namespace logconc {

enum class Method { Auto, GaussHermite, MonteCarlo, Radial, Exact };

std::string to_string(Method m);
Method parse_method(const std::string& s);

/// How to integrate against the standard Gaussian measure gamma_n.
struct GaussianMeasure {
    Method method = Method::Auto;
    int order = 0;            // GH order per axis; 0 picks default_hermite_order(n)
    Index samples = 200000;   // Monte Carlo sample count
    std::uint64_t seed = 20240601;
};

/// A value with its error estimate and how it was obtained.
struct EstimateReport {
    ExtReal value{0.0};
    double std_error = 0.0;
    std::string method;
    Index evaluations = 0;
    std::optional<Vector> witness;  // a point where the integrand is +inf
    bool divergent = false;
    /// Tilde diagnostics: (eps, I(eps) / int G, secant slope) per row.
    std::vector<std::array<double, 3>> table;
    std::vector<std::string> notes;
};

/// E g(X), X ~ gamma_n, for an arbitrary handle. GH for n <= 3 under Auto,
/// seeded Monte Carlo otherwise. A +inf sample makes the result +inf.
EstimateReport gaussian_expectation(const std::function<ExtReal(const Vector&)>& g, int n,
                                    const GaussianMeasure& m = {});

/// E h(X) for a support function, using the representation: radial chi
/// quadrature, separable 1-D quadrature for boxes, GH or MC otherwise.
EstimateReport gaussian_expectation(const SupportFn& h, const GaussianMeasure& m = {});

/// E[expm1(eps H(X))] / eps, computed without cancellation. This is
/// (I(eps) - int G) / (eps int G) in the tilde definition.
EstimateReport exp_slope(const SupportFn& H, double eps, const GaussianMeasure& m = {});

/// L(phi) represented for integration against gamma_n: grids are conjugated
/// directly onto the GH nodes.
SupportFn support_for_measure(const Potential& phi, const GaussianMeasure& m = {});
SupportFn h_profile_for_measure(const Potential& phi, double eps, const GaussianMeasure& m = {});

/// M*(f) = (2/n) int h_f dgamma_n.
EstimateReport mean_width(const LogConcaveFn& f, const GaussianMeasure& m = {});

struct TildeConfig {
    std::vector<double> eps_schedule;
    bool extrapolate = true;       // affine fit in eps of the last `fit_points` slopes
    int fit_points = 4;
    double divergence_factor = 1.05;

    TildeConfig();
    void validate() const;
    /// c_n = 2 / (n (2 pi)^{n/2}).
    static double c_n(int n);
    static double log_c_n(int n);
};

/// M~*(f) = c_n lim (int G * (eps . f) - int G) / eps, via the closed form
/// G * (eps . f) = exp(-|x|^2/2 + eps H(x, eps)).
EstimateReport mean_width_tilde(const LogConcaveFn& f, const TildeConfig& cfg = {}, const GaussianMeasure& m = {});

struct EqualityReport {
    EstimateReport m_star;
    EstimateReport m_tilde;
    double rel_gap = 0.0;
    bool both_infinite = false;
};

EqualityReport check_definition_equality(const LogConcaveFn& f, const TildeConfig& cfg = {},
                                         const GaussianMeasure& m = {});

/// log int f. Exact for analytic inputs, radial quadrature for radial
/// profiles, per-cell Gauss-Legendre of exp(-interpolant) for grids.
double log_integral(const LogConcaveFn& f);

/// log int G = (n/2) log(2 pi).
double log_integral_gaussian(int n);

struct UrysohnReport {
    ExtReal m_star{0.0};
    double log_int_f = 0.0;
    double log_int_g = 0.0;
    double rhs = 0.0;  // (2/n) log(int f / int G) + 1
    ExtReal gap{0.0};
    bool equality = false;
};

UrysohnReport urysohn_gap(const LogConcaveFn& f, double tol_eq = 1e-4, const GaussianMeasure& m = {});

struct SantaloReport {
    Vector x0;                // translation applied: phi~ = phi(. - x0)
    Vector recovered_center;  // -x0
    double log_int_f = 0.0;
    double log_int_dual = 0.0;
    double log_product = 0.0;
    double product = 0.0;
    double bound = 0.0;  // (2 pi)^n
    bool pass = true;
    bool divergent = false;
    std::string method;
};

/// Functional Santalo: minimizes int exp(-L phi~) over translations and
/// compares the product with (2 pi)^n.
SantaloReport santalo_check(const Potential& phi, double tol = 1e-3);

struct ShannonReport {
    double lhs = 0.0;  // int p log(1/p)
    double rhs = 0.0;  // int p log(1/q) + log int q
    double gap = 0.0;
    double mass_p = 0.0;
    double int_q = 0.0;
    bool equality = false;
};

/// Shannon inequality on a box, product trapezoid rule over `domain`.
ShannonReport shannon_check(const std::function<double(const Vector&)>& p, const std::function<double(const Vector&)>& q,
                            const GridSpec& domain, double tol_eq = 1e-9);

}  // namespace logconc

#endif

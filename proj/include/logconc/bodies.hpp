#ifndef LOGCONC_BODIES_HPP
#define LOGCONC_BODIES_HPP

#include <cstdint>
#include <vector>

#include "logconc/body.hpp"
#include "logconc/meanwidth.hpp"

namespace logconc {

struct BodySampling {
    Index samples = 1000000;
    std::uint64_t seed = 20240601;
};

/// E|theta_1| for theta uniform on S^{n-1}.
double sphere_abs_coordinate_mean(int n);

/// E|X| for X ~ N(0, I_n) (mean of the chi_n law).
double chi_mean(int n);

/// M*(K) = int_{S^{n-1}} h_K d sigma. Closed forms for balls, boxes,
/// segments and polygons; uniform-sphere Monte Carlo otherwise or when
/// `force_mc` is set.
EstimateReport mean_width_body(const ConvexBody& K, bool force_mc = false, const BodySampling& s = {});

/// |K| by rejection sampling from the bounding box.
EstimateReport volume_mc(const ConvexBody& K, const BodySampling& s = {});

/// |K + tD| by rejection sampling: dist(x, K) <= t.
EstimateReport parallel_volume_mc(const ConvexBody& K, double t, const BodySampling& s = {});

/// M*(K) = lim (|D + eps K| - |D|) / (eps n |D|). The difference is sampled
/// directly on the annulus 1 <= |x| <= 1 + eps max|K| after moving K to
/// contain the origin; the secants are extrapolated affinely to eps = 0.
EstimateReport mean_width_body_limit(const ConvexBody& K, const std::vector<double>& eps_schedule = {0.2, 0.1, 0.05, 0.025},
                                     const BodySampling& s = {});

struct QuermassReport {
    /// V[i] = V_i(K), i = 0..n. V_n = |K|, V_1 = |D| M*(K), V_0 = |D|.
    std::vector<double> V;
    double residual = 0.0;  // rms of the weighted residuals, in standard errors
    double condition = 0.0;
    std::vector<double> radii;
    std::vector<double> volumes;
    std::vector<double> volume_errors;
    /// |V_1 - |D| M*(K)| / (|D| M*(K)).
    double v1_rel_gap = 0.0;
    bool pass = true;
};

/// Least-squares fit of the Steiner polynomial |K + tD| = sum C(n,i) V_{n-i} t^i.
/// An empty schedule uses 8 geometric radii in [0.1, 1] diam(K).
QuermassReport steiner_fit(const ConvexBody& K, std::vector<double> radii = {}, const BodySampling& s = {},
                           double v1_tol = 0.05);

}  // namespace logconc

#endif

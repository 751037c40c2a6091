#ifndef LOGCONC_LOWMSTAR_HPP
#define LOGCONC_LOWMSTAR_HPP

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "logconc/meanwidth.hpp"
#include "logconc/potential.hpp"

namespace logconc {

/// K_{f,beta} = { x : f(x) >= exp(-beta n) } = { phi <= beta n }.
struct LevelSet {
    double beta = 0.0;
    int dim = 0;
    bool empty = false;
    /// Radial-type f: a ball of this radius (may be +inf) around `center`.
    std::optional<double> radius;
    Vector center;
    /// Grid f: node mask over `spec`.
    std::optional<GridSpec> spec;
    Eigen::Array<bool, Eigen::Dynamic, 1> mask;
    /// Indicator f: the body itself (or empty).
    std::optional<ConvexBody> body;

    bool contains(const Eigen::Ref<const Vector>& x) const;
};

LevelSet level_set(const LogConcaveFn& f, double beta);

/// psi with phi = psi(|x|), for radial-type potentials (centered quadratics,
/// centered balls, unshifted radial profiles).
std::optional<RadialProfile> radial_form(const Potential& phi);

/// A point where f < G, or nullopt when f >= G holds. Exact for radial-type
/// and quadratic potentials, node-wise for grids.
std::optional<Vector> gaussian_domination_witness(const LogConcaveFn& f, double tol = 1e-12);

struct VolumeRatioReport {
    double value = 1.0;  // V(f) = (int f / int G)^{1/n}
    double log_value = 0.0;
    double log_int_f = 0.0;
    bool dominates_gaussian = true;
    std::string method;
};

/// Throws InputError carrying the witness when f >= G fails.
VolumeRatioReport volume_ratio(const LogConcaveFn& f);

struct Subspace {
    int n = 0;
    int k = 0;
    Matrix basis;  // n x k, orthonormal columns

    Matrix projector() const { return basis * basis.transpose(); }
};

/// Haar-distributed k-dimensional subspace: QR of an n x k Gaussian matrix
/// with the signs of R's diagonal absorbed into Q.
Subspace random_subspace(int n, int k, std::uint64_t seed);

/// The sharpness family: psi = 0 on [0, sqrt n], 2 sqrt(n) r - 2n on
/// [sqrt n, 2 sqrt n], r^2 / 2 beyond.
LogConcaveFn counterexample_potential(int n);

/// (eps + 2)^2 / (8 eps), the sharp homothety constant of the family.
double counterexample_constant(double eps);

/// eps, 2 eps, 4 eps, ..., capped at M.
std::vector<double> beta_net(double eps, double M);

struct LowMstarConfig {
    double eps = 0.25;
    double M = 4.0;
    double lambda = 0.5;
    int n = 100;
    int trials = 64;
    Index samples = 4096;
    std::uint64_t seed = 20240601;
    std::vector<double> c_probe{1.0, 2.0, 4.0};
    int threads = 1;

    int subspace_dim() const;
    /// Throws InputError naming the violated condition.
    void validate() const;
};

struct TrialResult {
    std::uint64_t subspace_seed = 0;
    double max_c = 0.0;
    Index shell_count = 0;
    bool implicit_subspace = false;
    double basis_error = 0.0;  // max |B^T B - I|
    /// low_mstar_experiment only: bound data for f on h's shell.
    double max_c_f = 0.0;
    bool f_below_h = true;
};

struct LevelSetRow {
    double beta = 0.0;
    double inradius = 0.0;
    double circumradius = 0.0;
};

struct ExperimentReport {
    LowMstarConfig config;
    int k = 0;
    VolumeRatioReport volume_ratio;
    std::vector<double> net;
    std::vector<LevelSetRow> level_sets;
    /// Radial shell radii; both zero for grids.
    double shell_lo = 0.0;
    double shell_hi = 0.0;
    bool empty_shell = false;
    std::vector<TrialResult> trials;
    double max_c = 0.0;
    double q05 = 0.0, q50 = 0.0, q95 = 0.0;
    /// [c_probe V(f)]^{2/(1 - lambda)} per probe and the fraction of trials
    /// whose max_c stays below it.
    std::vector<double> probe_bounds;
    std::vector<double> probe_pass;
    double pass_fraction = 0.0;  // for the first probe
    std::vector<std::string> notes;
};

/// Samples the shell { exp(-eps n) >= f >= exp(-M n) } inside random
/// subspaces and records the smallest c with f <= (c . G) at every sample,
/// c >= |x|^2 / (2 phi(x)).
ExperimentReport finite_volume_ratio_experiment(const LogConcaveFn& f, const LowMstarConfig& cfg);

struct LowMstarReport {
    ExperimentReport h_run;  // the experiment on h = f * G
    double m_star_f = 0.0;
    double m_star_h = 0.0;
    double chain_gap = 0.0;  // |M*(h) - M*(f) - 1|
    double v_h = 0.0;
    bool v_h_ok = true;      // V(h) <= sqrt(e) + 1e-3
    double max_c_f = 0.0;    // over all trials
    bool f_below_h = true;
    bool pass = true;
};

/// Requires f(0) = 1 and M*(f) <= 1; runs the experiment on h = f * G.
LowMstarReport low_mstar_experiment(const LogConcaveFn& f, const LowMstarConfig& cfg);

}  // namespace logconc

#endif

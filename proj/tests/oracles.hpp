#ifndef LOGCONC_TESTS_ORACLES_HPP
#define LOGCONC_TESTS_ORACLES_HPP

// Independent reference computations for the tests. Nothing here calls into
// the library's numerics; the only shared types are Eigen containers.

#include <Eigen/Core>
#include <Eigen/QR>

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <limits>
#include <numbers>
#include <random>
#include <vector>

namespace oracle {

inline constexpr double inf = std::numeric_limits<double>::infinity();

/// Seeded generator with the handful of draws the property tests need.
class Gen {
public:
    explicit Gen(std::uint64_t seed) : rng_(seed) {}

    double uniform(double a = 0.0, double b = 1.0) { return std::uniform_real_distribution<double>(a, b)(rng_); }
    double normal() { return std::normal_distribution<double>()(rng_); }
    int integer(int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(rng_); }

    Eigen::VectorXd vector(int n, double a, double b) {
        Eigen::VectorXd v(n);
        for (int i = 0; i < n; ++i) v[i] = uniform(a, b);
        return v;
    }

    /// Convex node values on sorted, irregular positions: increasing slopes.
    void convex_grid(Eigen::Index N, Eigen::ArrayXd& y, Eigen::ArrayXd& psi) {
        y.resize(N);
        psi.resize(N);
        double slope = uniform(-3.0, 3.0), yv = uniform(-3.0, 0.0), pv = uniform(-1.0, 1.0);
        for (Eigen::Index k = 0; k < N; ++k) {
            y[k] = yv;
            psi[k] = pv;
            const double h = uniform(0.01, 0.06);
            yv += h;
            pv += slope * h;
            slope += uniform(0.0, 0.3);
        }
    }

    /// Haar orthogonal matrix (QR of a Gaussian matrix with sign fix).
    Eigen::MatrixXd rotation(int n) {
        Eigen::MatrixXd g(n, n);
        for (Eigen::Index i = 0; i < g.size(); ++i) g.data()[i] = normal();
        Eigen::HouseholderQR<Eigen::MatrixXd> qr(g);
        Eigen::MatrixXd q = qr.householderQ();
        for (int j = 0; j < n; ++j)
            if (qr.matrixQR()(j, j) < 0) q.col(j) *= -1.0;
        return q;
    }

    std::mt19937_64& engine() { return rng_; }

private:
    std::mt19937_64 rng_;
};

/// max_k (s y_k - psi_k) over finite psi_k.
inline double brute_conjugate(const Eigen::ArrayXd& y, const Eigen::ArrayXd& psi, double s) {
    double best = -inf;
    for (Eigen::Index k = 0; k < y.size(); ++k)
        if (std::isfinite(psi[k])) best = std::max(best, s * y[k] - psi[k]);
    return best;
}

/// Same over points stored as columns.
inline double brute_conjugate(const Eigen::MatrixXd& pts, const Eigen::ArrayXd& psi, const Eigen::VectorXd& s) {
    double best = -inf;
    for (Eigen::Index k = 0; k < pts.cols(); ++k)
        if (std::isfinite(psi[k])) best = std::max(best, s.dot(pts.col(k)) - psi[k]);
    return best;
}

/// Lower convex envelope at every node from all pairwise chords; cubic cost.
inline Eigen::ArrayXd chord_envelope(const Eigen::ArrayXd& y, const Eigen::ArrayXd& psi) {
    const Eigen::Index n = y.size();
    Eigen::ArrayXd out = Eigen::ArrayXd::Constant(n, inf);
    for (Eigen::Index k = 0; k < n; ++k) {
        if (std::isfinite(psi[k])) out[k] = psi[k];
        for (Eigen::Index i = 0; i <= k; ++i)
            for (Eigen::Index j = k; j < n; ++j) {
                if (!std::isfinite(psi[i]) || !std::isfinite(psi[j]) || i == j) continue;
                const double t = (y[k] - y[i]) / (y[j] - y[i]);
                out[k] = std::min(out[k], (1 - t) * psi[i] + t * psi[j]);
            }
    }
    return out;
}

/// min_y (a(y) + b(x - y)) over 1-D nodes, with b evaluated exactly.
inline double inf_conv_1d(const Eigen::ArrayXd& ya, const Eigen::ArrayXd& a, const std::function<double(double)>& b,
                          double x) {
    double best = inf;
    for (Eigen::Index k = 0; k < ya.size(); ++k)
        if (std::isfinite(a[k])) best = std::min(best, a[k] + b(x - ya[k]));
    return best;
}

/// Composite Simpson on [a, b] with m (even) panels.
inline double simpson(const std::function<double(double)>& f, double a, double b, int m = 20000) {
    const double h = (b - a) / m;
    double s = f(a) + f(b);
    for (int i = 1; i < m; ++i) s += (i % 2 ? 4.0 : 2.0) * f(a + i * h);
    return s * h / 3.0;
}

/// E|X|, X ~ N(0, I_n), by Simpson on the chi density.
inline double chi_mean(int n) {
    const double c = -(0.5 * n - 1.0) * std::log(2.0) - std::lgamma(0.5 * n);
    const double hi = std::sqrt(static_cast<double>(n)) + 40.0;
    return simpson(
        [&](double r) { return r <= 0 ? 0.0 : std::exp(std::log(r) * n - 0.5 * r * r + c); }, 0.0, hi);
}

/// E g(X), X ~ N(0, 1), by Simpson on [-12, 12].
inline double normal_expectation(const std::function<double(double)>& g) {
    const double c = 1.0 / std::sqrt(2.0 * std::numbers::pi);
    return simpson([&](double x) { return g(x) * c * std::exp(-0.5 * x * x); }, -12.0, 12.0);
}

/// Mean of g over the unit sphere by seeded Monte Carlo; returns (mean, sigma).
inline std::pair<double, double> sphere_mean(const std::function<double(const Eigen::VectorXd&)>& g, int n,
                                             int samples, std::uint64_t seed) {
    Gen gen(seed);
    double mean = 0.0, m2 = 0.0;
    for (int i = 0; i < samples; ++i) {
        Eigen::VectorXd x(n);
        for (int k = 0; k < n; ++k) x[k] = gen.normal();
        const double v = g(x / x.norm());
        const double d = v - mean;
        mean += d / (i + 1);
        m2 += d * (v - mean);
    }
    return {mean, std::sqrt(m2 / (samples - 1) / samples)};
}

/// Product trapezoid integral of exp(-phi) over [lo, hi]^n, n <= 2.
inline double integral_exp_neg(const std::function<double(const Eigen::VectorXd&)>& phi, int n, double lo, double hi,
                               int m) {
    const double h = (hi - lo) / (m - 1);
    auto w = [&](int i) { return (i == 0 || i == m - 1) ? 0.5 : 1.0; };
    double s = 0.0;
    Eigen::VectorXd x(n);
    if (n == 1) {
        for (int i = 0; i < m; ++i) {
            x[0] = lo + i * h;
            const double p = phi(x);
            if (std::isfinite(p)) s += w(i) * std::exp(-p);
        }
        return s * h;
    }
    for (int i = 0; i < m; ++i)
        for (int j = 0; j < m; ++j) {
            x[0] = lo + i * h;
            x[1] = lo + j * h;
            const double p = phi(x);
            if (std::isfinite(p)) s += w(i) * w(j) * std::exp(-p);
        }
    return s * h * h;
}

}  // namespace oracle

#endif

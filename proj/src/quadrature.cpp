#include "logconc/quadrature.hpp"

#include <Eigen/Eigenvalues>

#include <algorithm>
#include <cmath>
#include <map>
#include <mutex>
#include <numbers>

#include "logconc/ext_real.hpp"

namespace logconc {

namespace {

// Golub-Welsch: eigen-decomposition of the symmetric Jacobi matrix.
QuadratureRule golub_welsch(const Eigen::VectorXd& offdiag, double mu0) {
    const Index m = offdiag.size() + 1;
    Eigen::MatrixXd J = Eigen::MatrixXd::Zero(m, m);
    for (Index k = 0; k + 1 < m; ++k) J(k, k + 1) = J(k + 1, k) = offdiag[k];
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(J);
    QuadratureRule rule;
    rule.nodes = es.eigenvalues();
    rule.weights = mu0 * es.eigenvectors().row(0).transpose().array().square().matrix();
    // Symmetrize: the rules are exactly symmetric about 0.
    for (Index i = 0; i < m / 2; ++i) {
        const Index j = m - 1 - i;
        const double x = 0.5 * (rule.nodes[j] - rule.nodes[i]);
        const double w = 0.5 * (rule.weights[i] + rule.weights[j]);
        rule.nodes[i] = -x;
        rule.nodes[j] = x;
        rule.weights[i] = rule.weights[j] = w;
    }
    if (m % 2 == 1) rule.nodes[m / 2] = 0.0;
    return rule;
}

template <class Build>
const QuadratureRule& cached(std::map<int, QuadratureRule>& cache, std::mutex& mu, int m, Build build) {
    std::lock_guard<std::mutex> lock(mu);
    auto it = cache.find(m);
    if (it == cache.end()) it = cache.emplace(m, build(m)).first;
    return it->second;
}

}  // namespace

QuadratureRule gauss_legendre(int m) {
    if (m < 1) throw InputError("gauss_legendre: order must be >= 1");
    static std::map<int, QuadratureRule> cache;
    static std::mutex mu;
    return cached(cache, mu, m, [](int k) {
        Eigen::VectorXd b(k - 1);
        for (int i = 1; i < k; ++i) b[i - 1] = i / std::sqrt(4.0 * i * i - 1.0);
        return golub_welsch(b, 2.0);
    });
}

QuadratureRule gauss_hermite(int m) {
    if (m < 1) throw InputError("gauss_hermite: order must be >= 1");
    static std::map<int, QuadratureRule> cache;
    static std::mutex mu;
    return cached(cache, mu, m, [](int k) {
        Eigen::VectorXd b(k - 1);
        for (int i = 1; i < k; ++i) b[i - 1] = std::sqrt(static_cast<double>(i));
        QuadratureRule r = golub_welsch(b, 1.0);
        r.weights /= r.weights.sum();
        return r;
    });
}

int default_hermite_order(int n) {
    switch (n) {
        case 1: return 64;
        case 2: return 40;
        case 3: return 24;
        default: return 8;
    }
}

Axes hermite_axes(int n, int order) {
    const QuadratureRule r = gauss_hermite(order);
    return Axes(static_cast<std::size_t>(n), r.nodes);
}

double log_chi_density(double r, int n) {
    if (r < 0) return -kInf;
    const double c = -(0.5 * n - 1.0) * std::log(2.0) - std::lgamma(0.5 * n);
    const double lr = n == 1 ? 0.0 : (n - 1) * std::log(r);
    return lr - 0.5 * r * r + c;
}

double log_sphere_area(int n) { return std::log(2.0) + 0.5 * n * std::log(std::numbers::pi) - std::lgamma(0.5 * n); }

std::optional<RadialWindow> find_window(const std::function<double(double)>& log_f,
                                        const std::vector<double>& breaks, double r_cap, double drop) {
    std::vector<double> bk;
    for (double b : breaks)
        if (b > 0 && std::isfinite(b)) bk.push_back(b);
    std::sort(bk.begin(), bk.end());
    const double last_break = bk.empty() ? 0.0 : bk.back();

    std::vector<double> rs, ls;
    double lmax = -kInf;
    double r = 0.0;
    std::size_t next_b = 0;
    double prev = -kInf;
    while (true) {
        const double l = log_f(r);
        rs.push_back(r);
        ls.push_back(l);
        lmax = std::max(lmax, l);
        if (r > last_break) {
            if (lmax == -kInf && r > last_break + 50.0) {
                RadialWindow w;
                w.empty = true;
                return w;
            }
            if (l < lmax - drop - 20.0 && l <= prev) break;
        }
        if (r > r_cap) return std::nullopt;
        prev = l;
        double step = 0.02 * std::max(1.0, r / 100.0);
        while (next_b < bk.size() && bk[next_b] <= r) ++next_b;
        double nr = r + step;
        if (next_b < bk.size() && bk[next_b] < nr) nr = bk[next_b];
        r = nr;
    }
    RadialWindow w;
    w.log_max = lmax;
    std::size_t first = rs.size(), last = 0;
    for (std::size_t i = 0; i < rs.size(); ++i)
        if (ls[i] > lmax - drop) {
            first = std::min(first, i);
            last = i;
        }
    w.lo = first == 0 ? 0.0 : rs[first - 1];
    w.hi = rs[std::min(last + 1, rs.size() - 1)];
    return w;
}

double integrate_panels(const std::function<double(double)>& f, double lo, double hi,
                        const std::vector<double>& breaks, int order) {
    if (!(hi > lo)) return 0.0;
    std::vector<double> pts{lo};
    for (double b : breaks)
        if (b > lo && b < hi) pts.push_back(b);
    pts.push_back(hi);
    std::sort(pts.begin(), pts.end());
    const QuadratureRule& gl = gauss_legendre(order);
    double total = 0.0;
    for (std::size_t i = 0; i + 1 < pts.size(); ++i) {
        const double a = pts[i], b = pts[i + 1];
        if (!(b > a)) continue;
        const double width = 0.25 * std::max(1.0, a / 100.0);
        const int pieces = std::max(1, static_cast<int>(std::ceil((b - a) / width)));
        const double h = (b - a) / pieces;
        for (int p = 0; p < pieces; ++p) {
            const double c = a + (p + 0.5) * h;
            double s = 0.0;
            for (Index k = 0; k < gl.nodes.size(); ++k) s += gl.weights[k] * f(c + 0.5 * h * gl.nodes[k]);
            total += 0.5 * h * s;
        }
    }
    return total;
}

double log_integrate_radial(const std::function<double(double)>& log_f, const std::vector<double>& breaks) {
    const auto w = find_window(log_f, breaks);
    if (!w) return kInf;
    if (w->empty) return -kInf;
    const double m = w->log_max;
    const double s = integrate_panels([&](double r) { return std::exp(log_f(r) - m); }, w->lo, w->hi, breaks);
    return std::log(s) + m;
}

double chi_expectation_weighted(const std::function<double(double, double)>& weighted,
                                const std::function<double(double)>& log_env, int n,
                                const std::vector<double>& breaks) {
    const auto w = find_window([&](double r) { return log_chi_density(r, n) + log_env(r); }, breaks);
    if (!w) return kInf;
    if (w->empty) return 0.0;
    return integrate_panels(
        [&](double r) {
            const double d = log_chi_density(r, n);
            return d == -kInf ? 0.0 : weighted(r, d);
        },
        w->lo, w->hi, breaks);
}

double chi_expectation(const std::function<double(double)>& g, const std::function<double(double)>& log_env,
                       int n, const std::vector<double>& breaks) {
    return chi_expectation_weighted([&](double r, double d) { return g(r) * std::exp(d); }, log_env, n, breaks);
}

double normal_expectation_1d(const std::function<double(double)>& g, const std::vector<double>& breaks,
                             double half_width) {
    const double c = 1.0 / std::sqrt(2.0 * std::numbers::pi);
    return integrate_panels([&](double x) { return g(x) * c * std::exp(-0.5 * x * x); }, -half_width, half_width,
                            breaks);
}

}  // namespace logconc

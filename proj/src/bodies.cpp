#include "logconc/bodies.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>

namespace logconc {

namespace {

template <class... Ts>
struct overloaded : Ts... {
    using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

void check_dim(const ConvexBody& K, int lo, int hi, const char* what) {
    if (K.dim() < lo || K.dim() > hi)
        throw InputError(std::string(what) + ": dimension " + std::to_string(K.dim()) + " not in [" + std::to_string(lo) +
                         ", " + std::to_string(hi) + "]");
}

Vector unit_vector(std::mt19937_64& rng, std::normal_distribution<double>& nd, int n) {
    Vector x(n);
    do {
        for (int k = 0; k < n; ++k) x[k] = nd(rng);
    } while (x.squaredNorm() == 0.0);
    return x / x.norm();
}

// A point of K, used to move K onto the origin.
Vector inner_point(const ConvexBody& K) {
    return std::visit(overloaded{[](const Ball& b) -> Vector { return b.center; },
                                 [](const Box& b) -> Vector { return 0.5 * (b.lo + b.hi); },
                                 [](const Polytope& p) -> Vector { return p.vertices.rowwise().mean(); },
                                 [](const Segment& s) -> Vector { return 0.5 * (s.a + s.b); }},
                      K.shape());
}

// Fraction estimate with binomial standard error, scaled by the box volume.
EstimateReport hit_rate(Index hits, Index total, double box_volume, const std::string& method) {
    EstimateReport r;
    const double p = static_cast<double>(hits) / static_cast<double>(total);
    r.value = ExtReal(p * box_volume);
    r.std_error = box_volume * std::sqrt(p * (1.0 - p) / static_cast<double>(total));
    r.evaluations = total;
    r.method = method;
    return r;
}

}  // namespace

double sphere_abs_coordinate_mean(int n) {
    if (n < 1) throw InputError("dimension must be >= 1");
    return std::exp(std::lgamma(0.5 * n) - std::lgamma(0.5 * (n + 1)) - 0.5 * std::log(std::numbers::pi));
}

double chi_mean(int n) {
    if (n < 1) throw InputError("dimension must be >= 1");
    return std::sqrt(2.0) * std::exp(std::lgamma(0.5 * (n + 1)) - std::lgamma(0.5 * n));
}

EstimateReport mean_width_body(const ConvexBody& K, bool force_mc, const BodySampling& s) {
    const int n = K.dim();
    EstimateReport rep;
    if (!force_mc) {
        const double e1 = sphere_abs_coordinate_mean(n);
        std::optional<double> exact = std::visit(
            overloaded{[](const Ball& b) -> std::optional<double> { return b.radius; },
                       [&](const Box& b) -> std::optional<double> { return 0.5 * (b.hi - b.lo).sum() * e1; },
                       [&](const Segment& g) -> std::optional<double> { return 0.5 * (g.b - g.a).norm() * e1; },
                       [&](const Polytope& p) -> std::optional<double> {
                           if (n == 1) return 0.5 * (p.vertices.maxCoeff() - p.vertices.minCoeff());
                           if (n != 2) return std::nullopt;
                           const Matrix h = convex_hull_2d(p.vertices);
                           double per = 0.0;
                           for (Index i = 0; i < h.cols(); ++i) per += (h.col((i + 1) % h.cols()) - h.col(i)).norm();
                           return per / (2.0 * std::numbers::pi);
                       }},
            K.shape());
        if (exact) {
            rep.value = ExtReal(*exact);
            rep.method = "exact";
            return rep;
        }
    }
    std::mt19937_64 rng(s.seed);
    std::normal_distribution<double> nd;
    double mean = 0.0, m2 = 0.0;
    for (Index i = 0; i < s.samples; ++i) {
        const double y = K.support(unit_vector(rng, nd, n));
        const double d = y - mean;
        mean += d / static_cast<double>(i + 1);
        m2 += d * (y - mean);
    }
    rep.value = ExtReal(mean);
    if (s.samples > 1)
        rep.std_error = std::sqrt(m2 / static_cast<double>(s.samples - 1) / static_cast<double>(s.samples));
    rep.evaluations = s.samples;
    rep.method = "sphere_mc(" + std::to_string(s.samples) + ")";
    return rep;
}

EstimateReport volume_mc(const ConvexBody& K, const BodySampling& s) { return parallel_volume_mc(K, 0.0, s); }

EstimateReport parallel_volume_mc(const ConvexBody& K, double t, const BodySampling& s) {
    if (t < 0) throw InputError("parallel_volume_mc: radius must be >= 0");
    const int n = K.dim();
    Vector lo, hi;
    K.bounding_box(lo, hi);
    lo.array() -= t;
    hi.array() += t;
    const double box = (hi - lo).prod();
    if (box == 0.0) {
        EstimateReport r;
        r.method = "degenerate";
        return r;
    }
    std::mt19937_64 rng(s.seed);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    // Projection-based distances of interior points are only zero up to rounding.
    const double tol = 1e-12 * std::max(1.0, (hi - lo).maxCoeff());
    Vector x(n);
    Index hits = 0;
    for (Index i = 0; i < s.samples; ++i) {
        for (int k = 0; k < n; ++k) x[k] = lo[k] + (hi[k] - lo[k]) * u(rng);
        if (K.distance(x) <= t + tol) ++hits;
    }
    return hit_rate(hits, s.samples, box, "rejection(" + std::to_string(s.samples) + ")");
}

EstimateReport mean_width_body_limit(const ConvexBody& K, const std::vector<double>& eps_schedule,
                                     const BodySampling& s) {
    check_dim(K, 2, 3, "mean_width_body_limit");
    if (eps_schedule.size() < 2) throw InputError("mean_width_body_limit: need at least two eps values");
    const int n = K.dim();
    const ConvexBody K0 = K.translated(-inner_point(K));
    const double rmax = K0.max_norm();
    const double log_d = log_unit_ball_volume(n);
    EstimateReport rep;
    rep.method = "annulus_mc";
    if (rmax == 0.0) {
        rep.value = ExtReal(0.0);
        for (double e : eps_schedule) rep.table.push_back({e, 1.0, 0.0});
        return rep;
    }
    std::vector<double> slopes, errs;
    for (std::size_t j = 0; j < eps_schedule.size(); ++j) {
        const double eps = eps_schedule[j];
        if (!(eps > 0)) throw InputError("mean_width_body_limit: eps must be positive");
        const ConvexBody Ke = K0.scaled(eps);
        const double R = 1.0 + eps * rmax;
        const double rn = std::pow(R, n);
        const double annulus = std::exp(log_d) * (rn - 1.0);
        std::mt19937_64 rng(s.seed + 7919 * j);
        std::normal_distribution<double> nd;
        std::uniform_real_distribution<double> u(0.0, 1.0);
        Index hits = 0;
        for (Index i = 0; i < s.samples; ++i) {
            const double r = std::pow(1.0 + u(rng) * (rn - 1.0), 1.0 / n);
            const Vector x = r * unit_vector(rng, nd, n);
            if (Ke.distance(x) <= 1.0) ++hits;
        }
        const EstimateReport v = hit_rate(hits, s.samples, annulus, "");
        const double scale = eps * n * std::exp(log_d);
        slopes.push_back(v.value.raw() / scale);
        errs.push_back(v.std_error / scale);
        rep.evaluations += s.samples;
        rep.table.push_back({eps, 1.0 + v.value.raw() / std::exp(log_d), slopes.back()});
    }
    // Intercept of the least-squares line through (eps_j, slope_j).
    const Index m = static_cast<Index>(slopes.size());
    Matrix A(m, 2);
    for (Index j = 0; j < m; ++j) {
        A(j, 0) = 1.0;
        A(j, 1) = eps_schedule[j];
    }
    const Matrix pinv = (A.transpose() * A).inverse() * A.transpose();
    double value = 0.0, var = 0.0;
    for (Index j = 0; j < m; ++j) {
        value += pinv(0, j) * slopes[j];
        var += pinv(0, j) * pinv(0, j) * errs[j] * errs[j];
    }
    rep.value = ExtReal(value);
    rep.std_error = std::sqrt(var);
    return rep;
}

QuermassReport steiner_fit(const ConvexBody& K, std::vector<double> radii, const BodySampling& s, double v1_tol) {
    check_dim(K, 2, 3, "steiner_fit");
    const int n = K.dim();
    if (radii.empty()) {
        const double d = K.diameter() > 0 ? K.diameter() : 1.0;
        for (int j = 0; j < 8; ++j) radii.push_back(0.1 * d * std::pow(10.0, j / 7.0));
    }
    std::vector<double> sorted = radii;
    std::sort(sorted.begin(), sorted.end());
    const auto distinct = std::unique(sorted.begin(), sorted.end()) - sorted.begin();
    if (distinct < n + 2) throw InputError("steiner_fit: ill-conditioned fit, need at least n + 2 distinct radii");
    if (sorted.front() < 0) throw InputError("steiner_fit: radii must be >= 0");

    QuermassReport rep;
    rep.radii = radii;
    const double tmax = sorted.back();
    const Index m = static_cast<Index>(radii.size());
    Matrix A(m, n + 1);
    Vector b(m);
    for (Index j = 0; j < m; ++j) {
        BodySampling sj = s;
        sj.seed = s.seed + 104729 * static_cast<std::uint64_t>(j);
        const EstimateReport v = parallel_volume_mc(K, radii[j], sj);
        rep.volumes.push_back(v.value.raw());
        rep.volume_errors.push_back(v.std_error);
        const double w = 1.0 / std::max(v.std_error, 1e-12 * std::max(1.0, v.value.raw()));
        for (int i = 0; i <= n; ++i) A(j, i) = w * std::pow(radii[j] / tmax, i);
        b[j] = w * v.value.raw();
    }
    Eigen::JacobiSVD<Matrix> svd(A);
    const Vector sv = svd.singularValues();
    rep.condition = sv[sv.size() - 1] > 0 ? sv[0] / sv[sv.size() - 1] : kInf;
    if (!(rep.condition < 1e12)) throw InputError("steiner_fit: ill-conditioned fit, radii too clustered");
    const Vector c = A.colPivHouseholderQr().solve(b);
    const Vector resid = A * c - b;
    rep.residual = std::sqrt(resid.squaredNorm() / static_cast<double>(m));
    rep.V.assign(n + 1, 0.0);
    double binom = 1.0;
    for (int i = 0; i <= n; ++i) {
        if (i > 0) binom = binom * (n - i + 1) / i;
        rep.V[n - i] = c[i] / std::pow(tmax, i) / binom;
    }
    const double target = unit_ball_volume(n) * mean_width_body(K, false, s).value.raw();
    rep.v1_rel_gap = target > 0 ? std::abs(rep.V[1] - target) / target : std::abs(rep.V[1]);
    rep.pass = rep.v1_rel_gap <= v1_tol && rep.V[0] > 0;
    return rep;
}

}  // namespace logconc

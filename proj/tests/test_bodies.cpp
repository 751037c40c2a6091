#include "doctest.h"

#include <cmath>
#include <numbers>

#include "logconc/bodies.hpp"
#include "logconc/legendre.hpp"
#include "oracles.hpp"

using namespace logconc;

namespace {

Vector v2(double a, double b) {
    Vector v(2);
    v << a, b;
    return v;
}

// Minkowski sum of two polytopes: all pairwise vertex sums.
Matrix minkowski(const Matrix& a, double lambda, const Matrix& b) {
    Matrix out(a.rows(), a.cols() * b.cols());
    for (Index i = 0; i < a.cols(); ++i)
        for (Index j = 0; j < b.cols(); ++j) out.col(i * b.cols() + j) = lambda * a.col(i) + b.col(j);
    return out;
}

}  // namespace

TEST_CASE("support of bodies") {
    CHECK(ConvexBody::ball(2).support(v2(0.6, 0.8)) == doctest::Approx(1.0));
    CHECK(ConvexBody::cube(2, 1.0).support(v2(1, 1)) == 2.0);
    CHECK(ConvexBody::ball(2.0, v2(1, 0)).support(v2(1, 0)) == doctest::Approx(3.0));
    CHECK(ConvexBody::segment(v2(0, 0), v2(1, 2)).support(v2(-1, 1)) == doctest::Approx(1.0));
}

TEST_CASE("h_{lambda K + T} = lambda h_K + h_T in random directions") {
    oracle::Gen gen(21);
    for (int t = 0; t < 10; ++t) {
        const int n = 2 + t % 2;
        Matrix a(n, 5), b(n, 4);
        for (Index i = 0; i < a.size(); ++i) a.data()[i] = gen.normal();
        for (Index i = 0; i < b.size(); ++i) b.data()[i] = gen.normal();
        const double lambda = gen.uniform(0.1, 3.0);
        const ConvexBody K = ConvexBody::polytope(a), T = ConvexBody::polytope(b);
        const ConvexBody S = ConvexBody::polytope(minkowski(a, lambda, b));
        for (int i = 0; i < 20; ++i) {
            Vector x(n);
            for (int k = 0; k < n; ++k) x[k] = gen.normal();
            CHECK(S.support(x) == doctest::Approx(lambda * K.support(x) + T.support(x)).epsilon(1e-13));
        }
    }
}

TEST_CASE("L(indicator of K) = h_K node-wise on a grid") {
    const GridSpec g = GridSpec::box(v2(-1, -0.5), v2(2, 1.5), 31);
    const GridPotential ind{g, Eigen::ArrayXd::Zero(g.size())};
    const ConvexBody K = ConvexBody::box(v2(-1, -0.5), v2(2, 1.5));
    const GridSpec out = GridSpec::cube(2, -2.0, 2.0, 11);
    const SupportFn h = legendre_nd(ind, out);
    for (Index k = 0; k < out.size(); ++k) {
        const Vector y = node_point(out, k);
        CHECK(h(y).value() == doctest::Approx(K.support(y)).epsilon(1e-13));
    }
}

TEST_CASE("sphere and chi constants against quadrature oracles") {
    for (int n : {1, 2, 3, 7, 50}) {
        CHECK(chi_mean(n) == doctest::Approx(oracle::chi_mean(n)).epsilon(1e-10));
        const double e1 = std::sqrt(2.0 / std::numbers::pi) / oracle::chi_mean(n);
        CHECK(sphere_abs_coordinate_mean(n) == doctest::Approx(e1).epsilon(1e-10));
    }
}

TEST_CASE("mean width of bodies") {
    SUBCASE("unit ball") {
        for (int n : {1, 2, 3}) CHECK(mean_width_body(ConvexBody::ball(n)).value.value() == doctest::Approx(1.0));
    }
    SUBCASE("square against (1/2pi) int (|cos| + |sin|)") {
        const double ref = oracle::simpson([](double t) { return std::abs(std::cos(t)) + std::abs(std::sin(t)); }, 0.0,
                                           2 * std::numbers::pi) /
                           (2 * std::numbers::pi);
        CHECK(ref == doctest::Approx(4.0 / std::numbers::pi).epsilon(1e-9));
        CHECK(mean_width_body(ConvexBody::cube(2, 1.0)).value.value() == doctest::Approx(ref).epsilon(1e-9));
        BodySampling s;
        s.samples = 200000;
        const EstimateReport mc = mean_width_body(ConvexBody::cube(2, 1.0), true, s);
        CHECK(std::abs(mc.value.value() - ref) <= 4.0 * mc.std_error);
    }
    SUBCASE("2-D polygon closed form matches a sphere Monte Carlo oracle") {
        Matrix p(2, 4);
        p << 0, 3, 2, -1, 0, 0, 2, 1;
        const ConvexBody K = ConvexBody::polytope(p);
        const auto [m, sd] = oracle::sphere_mean([&](const Eigen::VectorXd& u) { return K.support(u); }, 2, 200000, 5);
        CHECK(std::abs(mean_width_body(K).value.value() - m) <= 4.0 * sd);
    }
    SUBCASE("translation invariance") {
        const ConvexBody K = ConvexBody::box(v2(-1, 0), v2(2, 0.5));
        const double base = mean_width_body(K).value.value();
        CHECK(mean_width_body(K.translated(v2(3, -7))).value.value() == doctest::Approx(base).epsilon(1e-12));
        BodySampling s;
        s.samples = 200000;
        const EstimateReport a = mean_width_body(K, true, s), b = mean_width_body(K.translated(v2(3, -7)), true, s);
        CHECK(std::abs(a.value.value() - b.value.value()) <= 3.0 * std::hypot(a.std_error, b.std_error) + 1e-12);
    }
    SUBCASE("segment: |b - a| / 2 * E|theta_1|") {
        const ConvexBody K = ConvexBody::segment(Vector::Zero(3), Vector::Constant(3, 1.0));
        CHECK(mean_width_body(K).value.value() == doctest::Approx(0.5 * std::sqrt(3.0) * sphere_abs_coordinate_mean(3)));
    }
}

TEST_CASE("limit definition") {
    SUBCASE("K = D gives 1 within 3%") {
        const EstimateReport r = mean_width_body_limit(ConvexBody::ball(2));
        CHECK(r.value.value() == doctest::Approx(1.0).epsilon(0.03));
    }
    SUBCASE("K = {0} gives 0") {
        CHECK(mean_width_body_limit(ConvexBody::point(Vector::Zero(2))).value.value() == 0.0);
    }
}

TEST_CASE("volume Monte Carlo") {
    Matrix tri(2, 3);
    tri << 0, 2, 0, 0, 0, 1;
    BodySampling s;
    s.samples = 100000;
    const EstimateReport v = volume_mc(ConvexBody::polytope(tri), s);
    CHECK(std::abs(v.value.value() - 1.0) <= 4.0 * v.std_error);
    const EstimateReport p = parallel_volume_mc(ConvexBody::cube(2, 1.0), 0.5, s);
    CHECK(std::abs(p.value.value() - (4.0 + 8.0 * 0.5 + std::numbers::pi * 0.25)) <= 4.0 * p.std_error);
    const EstimateReport a = volume_mc(ConvexBody::polytope(tri), s), b = volume_mc(ConvexBody::polytope(tri), s);
    CHECK(a.value == b.value);
}

TEST_CASE("Steiner fits") {
    SUBCASE("disc: V_0 = V_1 = V_2 = pi") {
        const QuermassReport q = steiner_fit(ConvexBody::ball(2));
        for (int i = 0; i < 3; ++i) CHECK(q.V[i] == doctest::Approx(std::numbers::pi).epsilon(0.05));
        for (double v : q.volumes) CHECK(v > 0);
    }
    SUBCASE("square: |K + tD| = 4 + 8t + pi t^2") {
        const QuermassReport q = steiner_fit(ConvexBody::cube(2, 1.0));
        CHECK(q.V[2] == doctest::Approx(4.0).epsilon(0.05));
        CHECK(q.V[1] == doctest::Approx(4.0).epsilon(0.05));
        CHECK(q.V[0] == doctest::Approx(std::numbers::pi).epsilon(0.05));
        CHECK(q.V[1] == doctest::Approx(std::numbers::pi * mean_width_body(ConvexBody::cube(2, 1.0)).value.value()).epsilon(0.05));
        CHECK(q.pass);
    }
    SUBCASE("segment [0,L] x {0}: V_2 = 0") {
        const double L = 2.0;
        const QuermassReport q = steiner_fit(ConvexBody::segment(v2(0, 0), v2(L, 0)));
        CHECK(std::abs(q.V[2]) <= 0.05 * L);
        CHECK(q.V[1] == doctest::Approx(L).epsilon(0.05));
    }
    SUBCASE("too few radii are rejected") {
        CHECK_THROWS_AS(steiner_fit(ConvexBody::ball(2), {0.5, 1.0}), InputError);
    }
}

TEST_CASE("classical Urysohn on random polytopes") {
    oracle::Gen gen(8);
    for (int t = 0; t < 6; ++t) {
        const int n = 2 + t % 2;
        Matrix v(n, 7);
        for (Index i = 0; i < v.size(); ++i) v.data()[i] = gen.normal();
        const ConvexBody K = ConvexBody::polytope(v);
        BodySampling s;
        s.samples = 100000;
        s.seed = 100 + t;
        const double vol = K.volume() ? *K.volume() : volume_mc(K, s).value.value();
        CHECK(mean_width_body(K, false, s).value.value() >= std::pow(vol / unit_ball_volume(n), 1.0 / n));
    }
}

#include "doctest.h"

#include <cmath>

#include "logconc/body.hpp"
#include "logconc/lowmstar.hpp"
#include "logconc/potential.hpp"
#include "logconc/radial.hpp"
#include "oracles.hpp"

using namespace logconc;

namespace {

Vector v2(double a, double b) {
    Vector v(2);
    v << a, b;
    return v;
}

Vector v1(double a) { return Vector::Constant(1, a); }

}  // namespace

TEST_CASE("ExtReal arithmetic keeps +inf absorbing and rejects -inf") {
    const ExtReal a(2.0), inf = ExtReal::inf();
    CHECK((a + inf).is_inf());
    CHECK((a + 3.0).value() == 5.0);
    CHECK(scale(0.0, inf).is_inf());
    CHECK(min(a, inf) == a);
    CHECK(max(a, inf).is_inf());
    CHECK(exp_neg(inf) == 0.0);
    CHECK(affine_minus(1.0, inf) == -kInf);
    CHECK_THROWS_AS(ExtReal(-kInf), InputError);
    CHECK_THROWS_AS(ExtReal(std::nan("")), InputError);
    CHECK_THROWS(inf.value());
    CHECK(to_string(inf) == "inf");
}

TEST_CASE("quadratic potential at (3,4) is 12.5") {
    const Potential q = Potential::gaussian(2);
    CHECK(q(v2(3, 4)).value() == doctest::Approx(12.5).epsilon(1e-15));
}

TEST_CASE("indicator of the unit ball is +inf outside") {
    const Potential b = Potential::indicator(ConvexBody::ball(2));
    CHECK(b(v2(2, 0)).is_inf());
    CHECK(b(v2(0.5, 0.5)).value() == 0.0);
}

TEST_CASE("grid |t| interpolates within one spacing off the nodes") {
    const GridSpec g = GridSpec::cube(1, -4.0, 4.0, 81);
    const Potential p = Potential::sample(g, [](const Vector& x) { return ExtReal(std::abs(x[0])); });
    CHECK(std::abs(p(v1(0.05)).value() - 0.05) <= g.spacing[0]);
    oracle::Gen gen(11);
    for (int i = 0; i < 200; ++i) {
        const double t = gen.uniform(-4.0, 4.0);
        CHECK(std::abs(p(v1(t)).value() - std::abs(t)) <= g.spacing[0]);
    }
    CHECK(p(v1(4.5)).is_inf());
}

TEST_CASE("multilinear interpolation reproduces affine functions") {
    const GridSpec g = GridSpec::cube(2, -1.0, 2.0, 7);
    const Potential p = Potential::sample(g, [](const Vector& x) { return ExtReal(1.0 + 2.0 * x[0] - x[1]); });
    oracle::Gen gen(3);
    for (int i = 0; i < 100; ++i) {
        const Vector x = gen.vector(2, -1.0, 2.0);
        CHECK(p(x).value() == doctest::Approx(1.0 + 2.0 * x[0] - x[1]).epsilon(1e-12));
    }
}

TEST_CASE("GridSpec strides and node points") {
    const GridSpec g = GridSpec::cube(3, -1.0, 1.0, 5);
    CHECK(g.size() == 125);
    CHECK(g.strides() == std::vector<Index>{25, 5, 1});
    const Vector x = node_point(g, 25 * 1 + 5 * 2 + 4);
    CHECK(x[0] == doctest::Approx(-0.5));
    CHECK(x[1] == doctest::Approx(0.0));
    CHECK(x[2] == doctest::Approx(1.0));
}

TEST_CASE("convexity screen") {
    const GridSpec g = GridSpec::cube(1, -3.0, 3.0, 61);
    SUBCASE("t^2/2 passes") {
        CHECK(convexity_screen(Potential::gaussian(1).to_grid(g)).pass);
    }
    SUBCASE("-t^2 fails at an interior node") {
        const Potential p = Potential::sample(g, [](const Vector& x) { return ExtReal(-x[0] * x[0]); });
        const ConvexityReport r = convexity_screen(p);
        CHECK_FALSE(r.pass);
        CHECK(r.witness[1] > 0);
        CHECK(r.witness[1] < 60);
    }
    SUBCASE("the sharpness profile passes as a grid and as a radial profile") {
        const int n = 4;
        const RadialProfile psi = counterexample_potential(n).phi().as_radial().profile;
        CHECK(psi.convexity_witness() == -1);
        const GridSpec gg = GridSpec::cube(1, -8.0, 8.0, 161);
        const Potential p = Potential::sample(gg, [&](const Vector& x) { return psi(std::abs(x[0])); });
        CHECK(convexity_screen(p).pass);
    }
}

TEST_CASE("radial evaluation is rotation invariant") {
    const Potential p = counterexample_potential(9).phi();
    oracle::Gen gen(5);
    for (int t = 0; t < 20; ++t) {
        const Matrix u = gen.rotation(9);
        const Vector x = gen.vector(9, -3.0, 3.0);
        CHECK(p(u * x).raw() == doctest::Approx(p(x).raw()).epsilon(1e-12));
    }
}

TEST_CASE("f = exp(-phi) lies in [0, 1] where phi >= 0") {
    const LogConcaveFn f(Potential::norm_cone(3));
    oracle::Gen gen(8);
    for (int i = 0; i < 100; ++i) {
        const double v = f(gen.vector(3, -5.0, 5.0));
        CHECK(v >= 0.0);
        CHECK(v <= 1.0);
    }
}

TEST_CASE("radial profile conjugate of r^2/2 is itself") {
    const RadialProfile c = RadialProfile::quadratic().conjugate();
    for (double r : {0.0, 0.5, 1.0, 3.0, 10.0}) CHECK(c(r).value() == doctest::Approx(0.5 * r * r));
}

TEST_CASE("radial profile level radius and sums") {
    const RadialProfile q = RadialProfile::quadratic(2.0);
    CHECK(*q.level_radius(1.0) == doctest::Approx(2.0));
    CHECK_FALSE(RadialProfile::quadratic(1.0, 3.0).level_radius(1.0).has_value());
    const RadialProfile s = q + RadialProfile::cone(1.0);
    CHECK(s(2.0).value() == doctest::Approx(1.0 + 2.0));
    CHECK(RadialProfile::ball(1.0)(1.5).is_inf());
}

TEST_CASE("body support functions") {
    CHECK(ConvexBody::ball(3).support(Vector::Unit(3, 1)) == doctest::Approx(1.0));
    CHECK(ConvexBody::cube(2, 1.0).support(v2(1, 1)) == doctest::Approx(2.0));
    Matrix tri(2, 3);
    tri << 0, 1, 0, 0, 0, 1;
    const ConvexBody t = ConvexBody::polytope(tri);
    CHECK(t.support(v2(1, 1)) == doctest::Approx(1.0));
    CHECK(*t.volume() == doctest::Approx(0.5));
    CHECK(t.distance(v2(1, 1)) == doctest::Approx(std::sqrt(0.5)));
    CHECK(ConvexBody::segment(v2(0, 0), v2(3, 4)).diameter() == doctest::Approx(5.0));
}

TEST_CASE("unit ball volume against known values") {
    CHECK(unit_ball_volume(1) == doctest::Approx(2.0));
    CHECK(unit_ball_volume(2) == doctest::Approx(std::numbers::pi));
    CHECK(unit_ball_volume(3) == doctest::Approx(4.0 / 3.0 * std::numbers::pi));
}

TEST_CASE("min-norm point of a polytope (Wolfe)") {
    Matrix p(2, 3);
    p << 1, 2, 1, -1, 0, 1;
    const Vector z = min_norm_point(p);
    CHECK(z[0] == doctest::Approx(1.0));
    CHECK(std::abs(z[1]) < 1e-9);
}

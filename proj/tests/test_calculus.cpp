#include "doctest.h"

#include <cmath>

#include "logconc/calculus.hpp"
#include "logconc/meanwidth.hpp"
#include "oracles.hpp"

using namespace logconc;

namespace {

Vector v1(double a) { return Vector::Constant(1, a); }

Vector v2(double a, double b) {
    Vector v(2);
    v << a, b;
    return v;
}

LogConcaveFn interval(double lo, double hi) {
    return LogConcaveFn(Potential::indicator(ConvexBody::box(v1(lo), v1(hi))));
}

double phi_at(const LogConcaveFn& f, const Vector& x) { return f.phi()(x).raw(); }

}  // namespace

TEST_CASE("1_[-1,0] * 1_[0,2] = 1_[-1,2]") {
    const LogConcaveFn h = asplund(interval(-1, 0), interval(0, 2));
    for (double t = -1.5; t <= 2.5; t += 0.05) {
        const bool inside = t >= -1.0 - 1e-12 && t <= 2.0 + 1e-12;
        CHECK(h(v1(t)) == (inside ? 1.0 : 0.0));
    }
    // The conjugate route on grids agrees.
    const GridSpec gf = GridSpec::cube(1, -1.0, 0.0, 21), gg = GridSpec::cube(1, 0.0, 2.0, 41);
    const LogConcaveFn a(Potential::grid(gf, Eigen::ArrayXd::Zero(21)));
    const LogConcaveFn b(Potential::grid(gg, Eigen::ArrayXd::Zero(41)));
    const GridSpec out = GridSpec::cube(1, -1.0, 2.0, 61);
    const LogConcaveFn hg = asplund(a, b, out);
    for (Index i = 0; i < 61; ++i) CHECK(std::abs(phi_at(hg, node_point(out, i))) <= 1e-12);
}

TEST_CASE("G * G = 2 . G") {
    const LogConcaveFn g = LogConcaveFn::gaussian(3);
    const LogConcaveFn a = asplund(g, g), b = homothety(2.0, g);
    oracle::Gen gen(1);
    for (int i = 0; i < 50; ++i) {
        const Vector x = gen.vector(3, -4, 4);
        CHECK(phi_at(a, x) == doctest::Approx(x.squaredNorm() / 4.0).epsilon(1e-14));
        CHECK(phi_at(a, x) == doctest::Approx(phi_at(b, x)).epsilon(1e-14));
    }
}

TEST_CASE("(1.f) * (1.f) = 2.f on a grid Gaussian") {
    const GridSpec g = GridSpec::cube(1, -6.0, 6.0, 241);
    const LogConcaveFn f(Potential::gaussian(1).to_grid(g));
    const GridSpec out = GridSpec::cube(1, -10.0, 10.0, 401);
    const LogConcaveFn a = asplund(homothety(1.0, f), homothety(1.0, f), out);
    const LogConcaveFn b = homothety(2.0, f);
    for (double t = -9.0; t <= 9.0; t += 0.25)
        CHECK(std::abs(phi_at(a, v1(t)) - phi_at(b, v1(t))) <= 1e-6 * (1 + std::abs(phi_at(b, v1(t)))) + g.spacing[0] * g.spacing[0]);
}

TEST_CASE("G * (eps . f) = exp(-|x|^2/2 + eps H(x, eps)) for a compact grid f") {
    const GridSpec g = GridSpec::cube(1, -1.0, 1.5, 51);
    const Potential phi = Potential::sample(g, [](const Vector& x) { return ExtReal(0.3 * x[0] * x[0] + 0.2 * x[0]); });
    const LogConcaveFn f(phi);
    const double eps = 0.25;
    const SupportFn H = h_profile(phi, eps);
    // Direct sup over splits at the nodes of H's slope grid:
    // G * (eps . f)(x) = sup_z exp(-|x - eps z|^2/2 - eps phi(z)).
    const Eigen::VectorXd& xs = H.as_grid().axes[0];
    for (Index i = 0; i < xs.size(); ++i) {
        const double x = xs[i];
        double best = kInf;
        for (Index k = 0; k < g.size(); ++k) {
            const double z = g.coord(0, k);
            best = std::min(best, 0.5 * (x - eps * z) * (x - eps * z) + eps * phi.as_grid().values[k]);
        }
        const double closed = 0.5 * x * x - eps * H(v1(x)).value();
        CHECK(closed == doctest::Approx(best).epsilon(1e-12));
    }
}

TEST_CASE("homothety") {
    const LogConcaveFn f(Potential::quadratic(v2(0.5, -1.0), 1.7, 0.4));
    oracle::Gen gen(2);
    SUBCASE("lambda = 1 is the identity") {
        const LogConcaveFn h = homothety(1.0, f);
        for (int i = 0; i < 20; ++i) {
            const Vector x = gen.vector(2, -3, 3);
            CHECK(phi_at(h, x) == doctest::Approx(phi_at(f, x)).epsilon(1e-15));
        }
    }
    SUBCASE("lambda . 1_K = 1_{lambda K} for the unit box") {
        const LogConcaveFn b(Potential::indicator(ConvexBody::cube(2, 1.0)));
        const LogConcaveFn h = homothety(2.5, b);
        for (int i = 0; i < 200; ++i) {
            const Vector x = gen.vector(2, -4, 4);
            CHECK(h(x) == (x.cwiseAbs().maxCoeff() <= 2.5 ? 1.0 : 0.0));
        }
    }
    SUBCASE("composition: a . (b . f) = (ab) . f") {
        const LogConcaveFn c1 = homothety(0.7, homothety(3.0, f)), c2 = homothety(2.1, f);
        for (int i = 0; i < 20; ++i) {
            const Vector x = gen.vector(2, -3, 3);
            CHECK(phi_at(c1, x) == doctest::Approx(phi_at(c2, x)).epsilon(1e-13));
        }
        const GridSpec g = GridSpec::cube(1, -2.0, 2.0, 81);
        const LogConcaveFn fg(Potential::sample(g, [](const Vector& x) { return ExtReal(std::abs(x[0]) + 1.0); }));
        const LogConcaveFn d1 = homothety(0.5, homothety(3.0, fg)), d2 = homothety(1.5, fg);
        for (double t = -2.9; t <= 2.9; t += 0.1) CHECK(phi_at(d1, v1(t)) == doctest::Approx(phi_at(d2, v1(t))).epsilon(1e-12));
    }
}

TEST_CASE("scalar multiple shifts the support function by log a") {
    const GridSpec g = GridSpec::cube(1, -2.0, 2.0, 81);
    const LogConcaveFn f(Potential::sample(g, [](const Vector& x) { return ExtReal(x[0] * x[0] + 0.5 * x[0]); }));
    CHECK(phi_at(scalar_mult(1.0, f), v1(0.3)) == phi_at(f, v1(0.3)));
    const double a = 5.0;
    const SupportFn h = legendre(f.phi()), ha = legendre(scalar_mult(a, f).phi());
    for (double s = -3.0; s <= 3.0; s += 0.1) CHECK(ha(v1(s)).value() == doctest::Approx(h(v1(s)).value() + std::log(a)).epsilon(1e-13));
}

TEST_CASE("translation") {
    const LogConcaveFn f(Potential::indicator(ConvexBody::box(v2(-1, -0.5), v2(2, 0.5))));
    const Vector a = v2(0.7, -1.1);
    SUBCASE("a = 0 is the identity") {
        const LogConcaveFn t = translate(f, Vector::Zero(2));
        CHECK(t(v2(1.9, 0.4)) == 1.0);
        CHECK(t(v2(2.1, 0.4)) == 0.0);
    }
    SUBCASE("the conjugate gains <x, a>") {
        const SupportFn h = legendre(f.phi()), ht = legendre(translate(f, a).phi());
        oracle::Gen gen(3);
        for (int i = 0; i < 30; ++i) {
            const Vector y = gen.vector(2, -3, 3);
            CHECK(ht(y).value() == doctest::Approx(h(y).value() + y.dot(a)).epsilon(1e-13));
        }
    }
    SUBCASE("int G * (eps . f~) = int G * (eps . f)") {
        const LogConcaveFn ball(Potential::indicator(ConvexBody::ball(2, 1.3)));
        for (double eps : {0.5, 0.1}) {
            const double i0 = log_integral(asplund(LogConcaveFn::gaussian(2), homothety(eps, ball)));
            const double i1 = log_integral(asplund(LogConcaveFn::gaussian(2), homothety(eps, translate(ball, a))));
            CHECK(i1 == doctest::Approx(i0).epsilon(1e-10));
        }
    }
    SUBCASE("grid translation by an arbitrary vector is exact") {
        const GridSpec g = GridSpec::cube(2, -2.0, 2.0, 21);
        const LogConcaveFn fg(Potential::gaussian(2).to_grid(g));
        const LogConcaveFn t = translate(fg, a);
        for (Index k = 0; k < g.size(); k += 7) {
            const Vector x = node_point(g, k);
            CHECK(phi_at(t, x + a) == doctest::Approx(phi_at(fg, x)).epsilon(1e-12));
        }
    }
}

TEST_CASE("rotation preserves a radial function and moves a box") {
    oracle::Gen gen(6);
    const Matrix u = gen.rotation(2);
    const LogConcaveFn g = LogConcaveFn::gaussian(2);
    const LogConcaveFn b(Potential::indicator(ConvexBody::box(v2(0, 0), v2(2, 1))));
    const LogConcaveFn gr = rotate(g, u), br = rotate(b, u);
    for (int i = 0; i < 50; ++i) {
        const Vector x = gen.vector(2, -2, 2);
        CHECK(phi_at(gr, x) == doctest::Approx(phi_at(g, x)).epsilon(1e-13));
        CHECK(br(x) == b(u * x));
    }
}

TEST_CASE("truncation") {
    SUBCASE("f = G, k >= 1 only clips the support") {
        const LogConcaveFn t = truncate(LogConcaveFn::gaussian(2), 2.0);
        CHECK(phi_at(t, v2(1.0, 1.0)) == doctest::Approx(1.0));
        CHECK(std::isinf(phi_at(t, v2(1.5, 1.5))));
    }
    SUBCASE("f = e G, k = 1 clips values at 1 near 0") {
        const LogConcaveFn t = truncate(scalar_mult(std::exp(1.0), LogConcaveFn::gaussian(2)), 1.0);
        CHECK(t(v2(0.0, 0.0)) == doctest::Approx(1.0));
        CHECK(t(v2(0.5, 0.0)) == doctest::Approx(1.0));
        const Vector x = v2(0.6, 0.6);
        CHECK(t(x) == doctest::Approx(std::min(1.0, std::exp(1.0 - 0.5 * x.squaredNorm()))));
    }
    SUBCASE("f_1 <= f_2 <= ... <= f node-wise") {
        const GridSpec g = GridSpec::cube(2, -4.0, 4.0, 41);
        const LogConcaveFn f(Potential::sample(g, [](const Vector& x) { return ExtReal(-1.5 + 0.5 * x.squaredNorm()); }));
        for (Index k = 0; k < g.size(); ++k) {
            const Vector x = node_point(g, k);
            double prev = 0.0;
            for (int j = 1; j <= 6; ++j) {
                const double v = truncate(f, j)(x);
                CHECK(v >= prev);
                CHECK(v <= f(x) + 1e-15);
                prev = v;
            }
        }
    }
}

TEST_CASE("support-function linearity h_{(l.f)*g} = l h_f + h_g on a grid") {
    const GridSpec gf = GridSpec::cube(1, -1.0, 1.0, 41), gg = GridSpec::cube(1, -2.0, 1.0, 61);
    const LogConcaveFn f(Potential::sample(gf, [](const Vector& x) { return ExtReal(x[0] * x[0]); }));
    const LogConcaveFn g(Potential::sample(gg, [](const Vector& x) { return ExtReal(std::abs(x[0] + 0.5)); }));
    const double lambda = 1.5;
    const GridSpec out = GridSpec::cube(1, -3.5, 2.5, 241);
    const LogConcaveFn p = asplund(homothety(lambda, f), g, out);
    const SupportFn hp = legendre(p.phi()), hf = legendre(f.phi()), hg = legendre(g.phi());
    for (double s = -2.0; s <= 2.0; s += 0.1) {
        const double ref = lambda * hf(v1(s)).value() + hg(v1(s)).value();
        // h_g has kinks at s = +-1, where interpolating grid conjugates costs O(spacing).
        INFO("s = " << s);
        CHECK(std::abs(hp(v1(s)).value() - ref) <= (std::abs(std::abs(s) - 1.0) < 0.05 ? 1e-2 : 2e-3));
    }
}

TEST_CASE("conjugate-route Asplund equals the direct inf-convolution oracle") {
    oracle::Gen gen(10);
    for (int t = 0; t < 10; ++t) {
        const double c1 = gen.uniform(0.2, 2.0), c2 = gen.uniform(0.2, 2.0), b1 = gen.uniform(-1, 1), w = gen.uniform(0, 1);
        const GridSpec gf = GridSpec::cube(1, -1.0, 1.0, 81), gg = GridSpec::cube(1, -1.5, 0.5, 81);
        auto pf = [&](double x) { return c1 * x * x + b1 * x; };
        auto pg = [&](double x) { return c2 * x * x + w * std::abs(x); };
        const LogConcaveFn f(Potential::sample(gf, [&](const Vector& x) { return ExtReal(pf(x[0])); }));
        const LogConcaveFn g(Potential::sample(gg, [&](const Vector& x) { return ExtReal(pg(x[0])); }));
        const GridSpec out = GridSpec::cube(1, -2.5, 1.5, 161);
        const LogConcaveFn h = asplund(f, g, out);
        Eigen::ArrayXd ya(81), va(81);
        for (Index k = 0; k < 81; ++k) {
            ya[k] = gf.coord(0, k);
            va[k] = pf(ya[k]);
        }
        for (Index i = 0; i < 161; ++i) {
            const double x = out.coord(0, i);
            const double ref = oracle::inf_conv_1d(ya, va, [&](double z) { return z < -1.5 - 1e-12 || z > 0.5 + 1e-12 ? kInf : pg(z); }, x);
            // The exact inf-convolution of the interpolants sits below the node-split oracle
            // by at most the interpolation error of the quadratics.
            CHECK(phi_at(h, v1(x)) <= ref + 1e-9);
            CHECK(phi_at(h, v1(x)) >= ref - 0.01);
        }
    }
}

TEST_CASE("Asplund is commutative and associative") {
    const LogConcaveFn a(Potential::quadratic(v2(1, 0), 0.5, 0.1));
    const LogConcaveFn b(Potential::indicator(ConvexBody::ball(1.5, v2(0, 1))));
    const LogConcaveFn c = LogConcaveFn::gaussian(2);
    const LogConcaveFn ab = asplund(a, b), ba = asplund(b, a);
    const LogConcaveFn l = asplund(ab, c), r = asplund(a, asplund(b, c));
    oracle::Gen gen(13);
    for (int i = 0; i < 40; ++i) {
        const Vector x = gen.vector(2, -4, 4);
        CHECK(phi_at(ab, x) == doctest::Approx(phi_at(ba, x)).epsilon(1e-12));
        CHECK(phi_at(l, x) == doctest::Approx(phi_at(r, x)).epsilon(1e-10));
    }
    // Grid version.
    const GridSpec g = GridSpec::cube(1, -1.0, 1.0, 41);
    const LogConcaveFn f1(Potential::sample(g, [](const Vector& x) { return ExtReal(x[0] * x[0]); }));
    const LogConcaveFn f2(Potential::sample(g, [](const Vector& x) { return ExtReal(std::abs(x[0] - 0.3)); }));
    const GridSpec out = GridSpec::cube(1, -2.0, 2.0, 81);
    const LogConcaveFn p = asplund(f1, f2, out), q = asplund(f2, f1, out);
    for (Index i = 0; i < 81; ++i) {
        const Vector x = node_point(out, i);
        CHECK(phi_at(p, x) == doctest::Approx(phi_at(q, x)).epsilon(1e-8));
    }
}

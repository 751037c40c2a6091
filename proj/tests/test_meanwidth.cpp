#include "doctest.h"

#include <cmath>
#include <numbers>

#include "logconc/calculus.hpp"
#include "logconc/meanwidth.hpp"
#include "logconc/quadrature.hpp"
#include "oracles.hpp"

using namespace logconc;

namespace {

Vector v1(double a) { return Vector::Constant(1, a); }

Vector v2(double a, double b) {
    Vector v(2);
    v << a, b;
    return v;
}

LogConcaveFn box(const Vector& lo, const Vector& hi) { return LogConcaveFn(Potential::indicator(ConvexBody::box(lo, hi))); }

}  // namespace

TEST_CASE("quadrature rules") {
    for (int m : {1, 5, 20, 64}) {
        const QuadratureRule h = gauss_hermite(m);
        CHECK(h.weights.sum() == doctest::Approx(1.0).epsilon(1e-13));
        if (m >= 2) CHECK((h.weights.array() * h.nodes.array().square()).sum() == doctest::Approx(1.0).epsilon(1e-12));
        if (m >= 3) CHECK((h.weights.array() * h.nodes.array().pow(4)).sum() == doctest::Approx(3.0).epsilon(1e-12));
        const QuadratureRule l = gauss_legendre(m);
        CHECK(l.weights.sum() == doctest::Approx(2.0).epsilon(1e-13));
        if (m >= 2) CHECK((l.weights.array() * l.nodes.array().square()).sum() == doctest::Approx(2.0 / 3.0).epsilon(1e-13));
    }
    CHECK_THROWS_AS(gauss_hermite(0), InputError);
}

TEST_CASE("chi density and chi expectations against Simpson") {
    for (int n : {1, 2, 3, 10, 100}) {
        const double mass = oracle::simpson([&](double r) { return std::exp(log_chi_density(r, n)); }, 0.0,
                                            std::sqrt(double(n)) + 40.0);
        CHECK(mass == doctest::Approx(1.0).epsilon(1e-9));
        const double m = chi_expectation([](double r) { return r; }, [](double r) { return std::log1p(r); }, n, {});
        CHECK(m == doctest::Approx(oracle::chi_mean(n)).epsilon(1e-10));
    }
    const double e = normal_expectation_1d([](double x) { return std::abs(x); }, {0.0});
    CHECK(e == doctest::Approx(oracle::normal_expectation([](double x) { return std::abs(x); })).epsilon(1e-10));
    CHECK(e == doctest::Approx(std::sqrt(2.0 / std::numbers::pi)).epsilon(1e-12));
}

TEST_CASE("gaussian_expectation") {
    SUBCASE("g = 1 is exactly 1") {
        for (int n : {1, 2, 3}) CHECK(gaussian_expectation([](const Vector&) { return ExtReal(1.0); }, n).value.value() == doctest::Approx(1.0).epsilon(1e-13));
    }
    SUBCASE("g = x_1^2 is 1 under quadrature") {
        for (int n : {1, 2, 3}) {
            const double v = gaussian_expectation([](const Vector& x) { return ExtReal(x[0] * x[0]); }, n).value.value();
            CHECK(std::abs(v - 1.0) <= 1e-12);
        }
    }
    SUBCASE("|x| in n = 2 is sqrt(pi/2)") {
        const double ref = oracle::chi_mean(2);
        CHECK(ref == doctest::Approx(std::sqrt(std::numbers::pi / 2)).epsilon(1e-10));
        GaussianMeasure m;
        m.order = 80;
        // |x| has a kink at 0, so tensor GH converges slowly.
        const double v = gaussian_expectation([](const Vector& x) { return ExtReal(x.norm()); }, 2, m).value.value();
        CHECK(v == doctest::Approx(ref).epsilon(1e-3));
    }
    SUBCASE("Monte Carlo is within 3 sigma and seeded") {
        GaussianMeasure m;
        m.method = Method::MonteCarlo;
        m.samples = 50000;
        m.seed = 99;
        const auto g = [](const Vector& x) { return ExtReal(x.squaredNorm()); };
        const EstimateReport a = gaussian_expectation(g, 5, m), b = gaussian_expectation(g, 5, m);
        CHECK(a.value == b.value);
        CHECK(std::abs(a.value.value() - 5.0) <= 3.0 * a.std_error);
        CHECK(a.std_error > 0.0);
    }
    SUBCASE("+inf samples make the expectation +inf") {
        const EstimateReport r = gaussian_expectation([](const Vector& x) { return x[0] > 2.0 ? ExtReal::inf() : ExtReal(0.0); }, 1);
        CHECK(r.value.is_inf());
    }
}

TEST_CASE("mean width") {
    SUBCASE("G has mean width 1 in the quadrature and radial paths") {
        for (int n : {1, 2, 3}) CHECK(std::abs(mean_width(LogConcaveFn::gaussian(n)).value.value() - 1.0) <= 1e-6);
        for (int n : {10, 100, 1000}) CHECK(std::abs(mean_width(LogConcaveFn::gaussian(n)).value.value() - 1.0) <= 1e-3);
    }
    SUBCASE("e G in n = 2 has mean width 2") {
        CHECK(mean_width(scalar_mult(std::exp(1.0), LogConcaveFn::gaussian(2))).value.value() == doctest::Approx(2.0).epsilon(1e-9));
    }
    SUBCASE("e^{-|x|} has infinite mean width with a witness") {
        const EstimateReport r = mean_width(LogConcaveFn(Potential::norm_cone(2)));
        CHECK(r.value.is_inf());
        REQUIRE(r.witness.has_value());
        CHECK(legendre(Potential::norm_cone(2))(*r.witness).is_inf());
    }
    SUBCASE("1_[-1,1]^n: (2/n) sum E|x_i| = 2 sqrt(2/pi)") {
        const double ref = 2.0 * oracle::normal_expectation([](double x) { return std::abs(x); });
        for (int n : {1, 2, 3}) {
            const LogConcaveFn f(Potential::indicator(ConvexBody::cube(n, 1.0)));
            CHECK(mean_width(f).value.value() == doctest::Approx(ref).epsilon(1e-9));
        }
    }
    SUBCASE("grid Gaussian agrees with the analytic value") {
        const LogConcaveFn f(Potential::gaussian(2).to_grid(GridSpec::cube(2, -6.0, 6.0, 121)));
        CHECK(std::abs(mean_width(f).value.value() - 1.0) <= 5e-3);
    }
}

TEST_CASE("tilde mean width") {
    SUBCASE("schedule validation") {
        TildeConfig c;
        CHECK(c.eps_schedule.front() == 0.125);
        CHECK(c.eps_schedule.back() == std::ldexp(1.0, -12));
        c.eps_schedule = {0.1, 0.2};
        CHECK_THROWS_AS(c.validate(), InputError);
        CHECK(TildeConfig::c_n(1) * std::sqrt(2 * std::numbers::pi) == doctest::Approx(2.0));
    }
    SUBCASE("G gives 1 within 2%") {
        for (int n : {1, 2, 3}) CHECK(mean_width_tilde(LogConcaveFn::gaussian(n)).value.value() == doctest::Approx(1.0).epsilon(0.02));
    }
    SUBCASE("1_[-1,1]^2 matches the non-tilde value within 2%") {
        const LogConcaveFn f(Potential::indicator(ConvexBody::cube(2, 1.0)));
        CHECK(mean_width_tilde(f).value.value() == doctest::Approx(mean_width(f).value.value()).epsilon(0.02));
    }
    SUBCASE("e^{-|x|} diverges: I(eps) exceeds int G") {
        const EstimateReport r = mean_width_tilde(LogConcaveFn(Potential::norm_cone(2)));
        CHECK(r.value.is_inf());
        CHECK(r.divergent);
    }
    SUBCASE("check_definition_equality on e^{-|x|} reports both infinite") {
        const EqualityReport e = check_definition_equality(LogConcaveFn(Potential::norm_cone(1)));
        CHECK(e.both_infinite);
    }
    SUBCASE("truncation ladder: both definitions increase together") {
        const LogConcaveFn f = LogConcaveFn::gaussian(2);
        double pm = -kInf, pt = -kInf;
        for (int k = 1; k <= 5; ++k) {
            const EqualityReport e = check_definition_equality(truncate(f, k));
            CHECK(e.m_star.value.value() >= pm - 1e-12);
            CHECK(e.m_tilde.value.value() >= pt - 0.02);
            CHECK(e.rel_gap <= 0.02);
            pm = e.m_star.value.value();
            pt = e.m_tilde.value.value();
        }
    }
}

TEST_CASE("exp_slope is E expm1(eps H) / eps without cancellation") {
    const SupportFn H = h_profile(Potential::gaussian(1), 1e-6);
    // H = x^2 / (2 (1 + eps)); E[H] = 1 / (2 (1 + eps)).
    const double v = exp_slope(H, 1e-6).value.value();
    CHECK(v == doctest::Approx(0.5).epsilon(1e-5));
}

TEST_CASE("log integrals") {
    CHECK(log_integral(LogConcaveFn::gaussian(3)) == doctest::Approx(1.5 * std::log(2 * std::numbers::pi)));
    CHECK(log_integral(box(v2(-1, 0), v2(2, 0.5))) == doctest::Approx(std::log(1.5)));
    const double c1 = log_integral(LogConcaveFn(Potential::norm_cone(1)));
    CHECK(c1 == doctest::Approx(std::log(2.0)).epsilon(1e-10));
    const GridSpec g = GridSpec::cube(1, -3.0, 3.0, 301);
    const Potential p = Potential::sample(g, [](const Vector& x) { return ExtReal(std::abs(x[0]) + 0.5 * x[0] * x[0]); });
    const double ref = oracle::integral_exp_neg([&](const Eigen::VectorXd& x) { return p(x).raw(); }, 1, -3.0, 3.0, 60001);
    CHECK(std::exp(log_integral(LogConcaveFn(p))) == doctest::Approx(ref).epsilon(1e-6));
}

TEST_CASE("Urysohn gap") {
    SUBCASE("G and 3 e^{-|x - a|^2/2} are equality cases") {
        const UrysohnReport g = urysohn_gap(LogConcaveFn::gaussian(2));
        CHECK(std::abs(g.gap.value()) <= 1e-6);
        CHECK(g.equality);
        const UrysohnReport c = urysohn_gap(LogConcaveFn(Potential::quadratic(v2(1, 0), 1.0, -std::log(3.0))));
        CHECK(std::abs(c.gap.value()) <= 1e-6);
        CHECK(c.equality);
    }
    SUBCASE("1_[-1,1] against the 1-D oracle") {
        const double m = 2.0 * oracle::normal_expectation([](double x) { return std::abs(x); });
        const double rhs = 2.0 * std::log(2.0 / std::sqrt(2 * std::numbers::pi)) + 1.0;
        const UrysohnReport u = urysohn_gap(box(v1(-1), v1(1)));
        CHECK(u.m_star.value() == doctest::Approx(m).epsilon(1e-9));
        CHECK(u.rhs == doctest::Approx(rhs).epsilon(1e-12));
        CHECK(u.gap.value() == doctest::Approx(m - rhs).epsilon(1e-9));
        CHECK(u.gap.value() == doctest::Approx(1.047).epsilon(1e-3));
        CHECK_FALSE(u.equality);
    }
}

TEST_CASE("Santalo") {
    SUBCASE("|x|^2/2 attains (2 pi)^n") {
        for (int n : {1, 2, 3}) {
            const SantaloReport s = santalo_check(Potential::gaussian(n));
            CHECK(s.product == doctest::Approx(std::pow(2 * std::numbers::pi, n)).epsilon(1e-6));
        }
    }
    SUBCASE("|x - a|^2/2 recovers a") {
        const SantaloReport s = santalo_check(Potential::quadratic(v2(1.5, -0.5)));
        CHECK((s.recovered_center - v2(1.5, -0.5)).norm() <= 1e-6);
        CHECK(s.product == doctest::Approx(std::pow(2 * std::numbers::pi, 2)).epsilon(1e-6));
    }
    SUBCASE("[-1,1]^n gives 4^n") {
        for (int n : {1, 2}) {
            const SantaloReport s = santalo_check(Potential::indicator(ConvexBody::cube(n, 1.0)));
            CHECK(s.product == doctest::Approx(std::pow(4.0, n)).epsilon(1e-6));
            CHECK(s.pass);
        }
    }
    SUBCASE("the dual integral of the box matches a direct trapezoid oracle") {
        const double ref = oracle::integral_exp_neg([](const Eigen::VectorXd& y) { return y.cwiseAbs().sum(); }, 2, -30, 30, 3001);
        CHECK(ref == doctest::Approx(4.0).epsilon(1e-3));
    }
}

TEST_CASE("Shannon") {
    const GridSpec d = GridSpec::cube(1, -12.0, 12.0, 4801);
    const auto p = [](const Vector& x) { return std::exp(-0.5 * x.squaredNorm()) / std::sqrt(2 * std::numbers::pi); };
    const ShannonReport a = shannon_check(p, p, d);
    CHECK(std::abs(a.gap) <= 1e-9);
    const ShannonReport b = shannon_check(p, [&](const Vector& x) { return 5 * p(x); }, d);
    CHECK(std::abs(b.gap) <= 1e-9);
    const ShannonReport c = shannon_check(p, [](const Vector& x) { return std::exp(-std::abs(x[0])); }, d);
    CHECK(c.gap > 1e-3);
    CHECK(c.int_q == doctest::Approx(2.0 * (1.0 - std::exp(-12.0))).epsilon(1e-5));
    const double m = mean_width(box(v1(-1), v1(1))).value.value();
    CHECK(m >= 1.0 + std::log(2 * std::numbers::pi) - 2.0 * std::log(c.int_q));
}

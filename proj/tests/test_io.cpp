#include "doctest.h"

#include <cmath>
#include <filesystem>
#include <functional>
#include <sstream>
#include <string>

#include "logconc/io.hpp"
#include "logconc/meanwidth.hpp"
#include "oracles.hpp"

using namespace logconc;

namespace {

std::string message_of(const std::function<void()>& f) {
    try {
        f();
    } catch (const InputError& e) {
        return e.what();
    }
    return "";
}

bool contains(const std::string& s, const std::string& part) { return s.find(part) != std::string::npos; }

}  // namespace

TEST_CASE("numbers and lists") {
    CHECK(parse_number(" 2.5 ") == 2.5);
    CHECK(std::isinf(parse_number("inf")));
    CHECK(parse_number("-1e-3") == -1e-3);
    CHECK_THROWS_AS(parse_number("1.0x"), InputError);
    CHECK_THROWS_AS(parse_number("nan"), InputError);
    CHECK_THROWS_AS(parse_number(""), InputError);
    CHECK(parse_list("1, 2 3,inf").size() == 4);
}

TEST_CASE("key = value files") {
    KeyValueFile kv = KeyValueFile::parse("# comment\n a = 1 # trailing\n\nb= x y\nv = 1\nv = 2\n", "t.cfg");
    CHECK(kv.get_double("a", 0) == 1.0);
    CHECK(kv.get("b").value() == "x y");
    CHECK(kv.all("v").size() == 2);
    CHECK(kv.line_of("b") == 4);
    CHECK(message_of([&] { kv.get("v"); }) == "t.cfg:6: key 'v' given more than once");
    CHECK(message_of([] { KeyValueFile::parse("a = 1\nnonsense\n", "s"); }) ==
          "s:2: expected 'key = value', got 'nonsense'");
    CHECK(message_of([] { KeyValueFile::parse(" = 3\n", "s"); }) == "s:1: missing key");

    KeyValueFile extra = KeyValueFile::parse("a = 1\nbogus = 2\n", "e");
    extra.get_double("a", 0);
    CHECK(message_of([&] { extra.reject_unused(); }) == "e:2: unknown key 'bogus'");

    KeyValueFile bad = KeyValueFile::parse("n = 2.5\nx = 1,2\n", "b");
    CHECK(contains(message_of([&] { bad.get_int("n", 0); }), "b:1: key 'n'"));
    CHECK(contains(message_of([&] { bad.get_vector("x", 3, Vector::Zero(3)); }), "b:2: key 'x'"));
}

TEST_CASE("grid files round trip") {
    oracle::Gen gen(4);
    const GridSpec spec = GridSpec::box(Vector::Constant(2, -1.5), Vector::Constant(2, 2.0), 7);
    Eigen::ArrayXd vals(spec.size());
    for (Index i = 0; i < vals.size(); ++i) vals[i] = gen.uniform(-3, 3);
    vals[5] = kInf;
    const GridPotential g{spec, vals};
    std::stringstream ss;
    write_grid(ss, g);
    CHECK(ss.str().rfind("lcgrid v1 dim=2\n", 0) == 0);
    CHECK(contains(ss.str(), "inf"));
    const GridPotential back = read_grid(ss);
    CHECK(back.spec.shape == spec.shape);
    CHECK(back.spec.origin == spec.origin);
    CHECK(back.spec.spacing == spec.spacing);
    for (Index i = 0; i < vals.size(); ++i) CHECK(back.values[i] == vals[i]);

    const auto tmp = std::filesystem::temp_directory_path() / "logconc_io_test.lcgrid";
    save_grid(tmp, g);
    const GridPotential loaded = load_grid(tmp);
    for (Index i = 0; i < vals.size(); ++i) CHECK(loaded.values[i] == vals[i]);
    std::filesystem::remove(tmp);
}

TEST_CASE("malformed grid files report the line") {
    auto err = [](const std::string& text) {
        std::istringstream in(text);
        return message_of([&] { read_grid(in, "g"); });
    };
    CHECK(contains(err("lcgrid v2 dim=1\n"), "g:1: expected header"));
    CHECK(contains(err("lcgrid v1 dim=1\norigin=0\nspacing=1\nshape=3\n1 2\n"), "expected 3 values, got 2"));
    CHECK(contains(err("lcgrid v1 dim=1\norigin=0\nspacing=1\nshape=2\n1 2 3\n"), "g:5: more values"));
    CHECK(contains(err("lcgrid v1 dim=2\norigin=0\n"), "g:2: origin: expected 2 entries"));
    CHECK(contains(err("lcgrid v1 dim=1\norigin=0\nspacing=1\nshape=2\n1 oops\n"), "g:5: not a number"));
}

TEST_CASE("function specs") {
    SUBCASE("gaussian with constant and center") {
        const LogConcaveFn f = function_from_text("kind = gaussian\ndim = 2\nconstant = 3\ncenter = 1, -1\n");
        Vector a(2);
        a << 1, -1;
        CHECK(f(a) == doctest::Approx(3.0).epsilon(1e-14));
        CHECK(f(Vector::Zero(2)) == doctest::Approx(3.0 * std::exp(-1.0)).epsilon(1e-14));
    }
    SUBCASE("indicator ball and box") {
        const LogConcaveFn b = function_from_text("kind = indicator_ball\ndim = 3\nradius = 2\n");
        CHECK(b(Vector::Constant(3, 1.0)) == 1.0);
        CHECK(b(Vector::Constant(3, 1.2)) == 0.0);
        const LogConcaveFn q = function_from_text("kind = indicator_box\ndim = 2\nlo = 0, 0\nhi = 1, 2\n");
        CHECK(q(Vector::Constant(2, 0.5)) == 1.0);
        CHECK(q(Vector::Constant(2, 1.5)) == 0.0);
    }
    SUBCASE("norm cone and radial presets") {
        const LogConcaveFn c = function_from_text("kind = norm_cone\ndim = 2\n");
        CHECK(c(Vector::Constant(2, 1.0)) == doctest::Approx(std::exp(-std::sqrt(2.0))));
        const LogConcaveFn ce = function_from_text("kind = radial_piecewise\ndim = 5\npreset = counterexample\n");
        CHECK(ce.phi().is_radial());
        CHECK(ce(Vector::Zero(5)) == 1.0);
    }
    SUBCASE("radial piecewise coefficients") {
        // psi = r^2/2 on [0,1), then r - 1/2.
        const LogConcaveFn f =
            function_from_text("kind = radial_piecewise\ndim = 2\nbreakpoints = 0, 1\ncoeffs = 0,0,0.5; -0.5,1,0\n");
        Vector x(2);
        x << 3, 0;
        CHECK(f(x) == doctest::Approx(std::exp(-2.5)));
        CHECK(contains(message_of([] {
                           function_from_text("kind = radial_piecewise\ndim = 2\nbreakpoints = 0, 1\ncoeffs = 0,1,0; 0,0,0\n");
                       }),
                       "not convex"));
    }
    SUBCASE("grid representation and grid files") {
        const LogConcaveFn g = function_from_text("kind = gaussian\ndim = 1\nrepr = grid\ngrid_points = 41\n");
        CHECK(g.phi().is_grid());
        const auto dir = std::filesystem::temp_directory_path();
        save_grid(dir / "logconc_spec_test.lcgrid", g.phi().as_grid());
        const LogConcaveFn h = function_from_text("kind = grid_file\npath = logconc_spec_test.lcgrid\n", "s", dir);
        CHECK(h.phi().as_grid().values.isApprox(g.phi().as_grid().values));
        std::filesystem::remove(dir / "logconc_spec_test.lcgrid");
    }
    SUBCASE("errors name the key and line") {
        CHECK(message_of([] { function_from_text("kind = gaussian\ndim = 2\nwidth = 3\n", "f"); }) ==
              "f:3: unknown key 'width'");
        CHECK(contains(message_of([] { function_from_text("kind = gaussian\ndim = 2\nvariance = -1\n", "f"); }),
                       "f:3: key 'variance'"));
        CHECK(contains(message_of([] { function_from_text("kind = blob\ndim = 2\n", "f"); }), "f:1: key 'kind'"));
        CHECK(contains(message_of([] { function_from_text("dim = 2\n", "f"); }), "missing required key 'kind'"));
        CHECK(contains(message_of([] { function_from_text("kind = gaussian\ndim = 2\ncenter = 1, 2, 3\n", "f"); }),
                       "f:3: key 'center'"));
    }
}

TEST_CASE("body specs") {
    const ConvexBody p = body_from_text("body = polytope\nvertex = 0, 0\nvertex = 2, 0\nvertex = 0, 1\n");
    CHECK(p.dim() == 2);
    CHECK(p.volume().value() == doctest::Approx(1.0));
    const ConvexBody b = body_from_text("body = ball\ndim = 3\nradius = 2\n");
    CHECK(b.support(Vector::Unit(3, 0)) == doctest::Approx(2.0));
    const ConvexBody s = body_from_text("body = segment\ndim = 2\na = 0, 0\nb = 3, 4\n");
    CHECK(s.support(Vector::Unit(2, 1)) == doctest::Approx(4.0));
    CHECK(contains(message_of([] { body_from_text("body = polytope\nvertex = 0, 0\nvertex = 1, 1, 1\n", "k"); }),
                   "k:3:"));
    CHECK(contains(message_of([] { body_from_text("body = ball\nradius = 1\n", "k"); }), "needs 'dim'"));
    CHECK(contains(message_of([] { body_from_text("body = torus\ndim = 2\n", "k"); }), "k:1: key 'body'"));
}

TEST_CASE("experiment configs") {
    const ExperimentSpec e = experiment_from_text("eps = 0.25\nn = 100\ntrials = 2\nseed = 9\n");
    CHECK(e.config.eps == 0.25);
    CHECK(e.config.n == 100);
    CHECK(e.config.seed == 9u);
    CHECK(e.fn.has_value());
    CHECK(e.fn->dim() == 100);
    CHECK_THROWS_AS(experiment_from_text("lambda = 1.5\n"), InputError);
    CHECK(contains(message_of([] { experiment_from_text("eps = 0.1\nlambda = 1.5\n", "x"); }), "x:2: key 'lambda'"));
    CHECK(contains(message_of([] { experiment_from_text("mode = fast\n", "x"); }), "x:1: key 'mode'"));
    CHECK(contains(message_of([] { experiment_from_text("seed = -1\n", "x"); }), "x:1: key 'seed'"));
    CHECK(contains(message_of([] { experiment_from_text("n = 3\nfunction = missing.spec\n", "x"); }),
                   "x:2: key 'function'"));
}

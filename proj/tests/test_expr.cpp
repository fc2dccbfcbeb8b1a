#include <doctest.h>

#include <cmath>
#include <random>

#include "sublab/expr.hpp"
#include "sublab/fixtures.hpp"

using namespace sublab;

namespace {

// Independent oracle: central finite differences of eval, step 1e-6.
Eigen::MatrixXd fd_jacobian(const MapDefinition& map, const Eigen::VectorXd& p,
                            const ParamMap& params) {
    const int m = map.domain_dim();
    const int n = map.codomain_dim();
    Eigen::MatrixXd jac(n, m);
    for (int j = 0; j < m; ++j) {
        double h = 1e-6 * std::max(1.0, std::abs(p(j)));
        Eigen::VectorXd hi = p, lo = p;
        hi(j) += h;
        lo(j) -= h;
        jac.col(j) = (eval(map, hi, params) - eval(map, lo, params)) / (2.0 * h);
    }
    return jac;
}

const char* kRadialSource =
    "domain 4\n"
    "codomain 1\n"
    "F1 = sqrt(x1*x1 + x2*x2 + x3*x3 + x4*x4)\n";

Eigen::VectorXd vec4(double a, double b, double c, double d) {
    Eigen::VectorXd v(4);
    v << a, b, c, d;
    return v;
}

}  // namespace

TEST_CASE("parse_map reads the bundled rotation example") {
    Fixture fx = find_fixture("ex4_3");
    CHECK(fx.map.domain_dim() == 6);
    CHECK(fx.map.codomain_dim() == 4);
    REQUIRE(fx.map.params().size() == 1);
    CHECK(fx.map.params()[0] == "alpha");
}

TEST_CASE("parse_map handles the identity map") {
    MapDefinition map = parse_map("domain 1\ncodomain 1\nF1 = x1\n");
    CHECK(map.domain_dim() == 1);
    CHECK(map.codomain_dim() == 1);
    Eigen::VectorXd p(1);
    p << 3.5;
    CHECK(eval(map, p, {})(0) == 3.5);
}

TEST_CASE("parse_map rejects out-of-range variable indices") {
    CHECK_THROWS_WITH_AS(parse_map("domain 6\ncodomain 1\nF1 = x7\n"),
                         doctest::Contains("variable index exceeds domain"), ParseError);
}

TEST_CASE("parse_map reports syntax errors with line and column") {
    try {
        parse_map("domain 2\ncodomain 1\nF1 = x1 + * x2\n");
        FAIL("expected ParseError");
    } catch (const ParseError& e) {
        CHECK(e.line == 3);
        CHECK(e.col > 1);
    }
}

TEST_CASE("parse_map rejects undeclared identifiers") {
    CHECK_THROWS_WITH_AS(parse_map("domain 2\ncodomain 1\nF1 = x1 + gamma\n"),
                         doctest::Contains("undeclared identifier"), ParseError);
}

TEST_CASE("parse_map rejects component count mismatches") {
    CHECK_THROWS_AS(parse_map("domain 3\ncodomain 2\nF1 = x1\n"), ParseError);
    CHECK_THROWS_AS(parse_map("domain 3\ncodomain 1\nF1 = x1\nF2 = x2\n"), ParseError);
}

TEST_CASE("parse_map enforces component order and codomain bound") {
    CHECK_THROWS_AS(parse_map("domain 3\ncodomain 2\nF2 = x1\nF1 = x2\n"), ParseError);
    CHECK_THROWS_AS(parse_map("domain 3\ncodomain 1\nF1 = x1\nF1 = x2\n"), ParseError);
}

TEST_CASE("parse_map rejects n > m") {
    CHECK_THROWS_AS(parse_map("domain 1\ncodomain 2\nF1 = x1\nF2 = x1\n"), ParseError);
}

TEST_CASE("comments and blank lines are ignored") {
    MapDefinition map = parse_map(
        "# distance map\n\ndomain 2\ncodomain 1  # target dim\nF1 = x1 - x2 # diff\n");
    Eigen::VectorXd p(2);
    p << 5.0, 3.0;
    CHECK(eval(map, p, {})(0) == 2.0);
}

TEST_CASE("eval matches the rotation formulas at a concrete point") {
    Fixture fx = find_fixture("ex4_3");
    Eigen::VectorXd p(6);
    p << 1, 2, 3, 4, 5, 6;
    double alpha = M_PI / 6.0;
    Eigen::VectorXd v = eval(fx.map, p, {{"alpha", alpha}});
    CHECK(v(0) == doctest::Approx(1.0).epsilon(1e-15));
    CHECK(v(1) ==
          doctest::Approx(3.0 * std::sin(alpha) - 5.0 * std::cos(alpha)).epsilon(1e-15));
    CHECK(v(2) == doctest::Approx(6.0).epsilon(1e-15));
    CHECK(v(3) == doctest::Approx(2.0).epsilon(1e-15));
}

TEST_CASE("eval of a linear map at the origin vanishes") {
    Fixture fx = find_fixture("ex4_4");
    Eigen::VectorXd v = eval(fx.map, Eigen::VectorXd::Zero(8), {});
    CHECK(v.norm() == 0.0);
}

TEST_CASE("eval of the radial map reproduces hand arithmetic") {
    MapDefinition map = parse_map(kRadialSource);
    CHECK(eval(map, vec4(3, 0, 4, 0), {})(0) == doctest::Approx(5.0).epsilon(1e-15));
}

TEST_CASE("eval reports unbound parameters") {
    Fixture fx = find_fixture("ex4_3");
    Eigen::VectorXd p = Eigen::VectorXd::Ones(6);
    CHECK_THROWS_WITH_AS(eval(fx.map, p, {}), doctest::Contains("unbound parameter"),
                         EvalError);
}

TEST_CASE("domain errors carry the offending component index") {
    MapDefinition map = parse_map("domain 2\ncodomain 2\nF1 = x1\nF2 = log(x2)\n");
    Eigen::VectorXd p(2);
    p << 1.0, -1.0;
    try {
        eval(map, p, {});
        FAIL("expected EvalError");
    } catch (const EvalError& e) {
        CHECK(e.component == 2);
    }

    MapDefinition div = parse_map("domain 2\ncodomain 1\nF1 = x1/x2\n");
    p << 1.0, 0.0;
    CHECK_THROWS_WITH_AS(eval(div, p, {}), doctest::Contains("division by zero"),
                         EvalError);

    MapDefinition root = parse_map("domain 1\ncodomain 1\nF1 = sqrt(x1)\n");
    Eigen::VectorXd q(1);
    q << -4.0;
    CHECK_THROWS_AS(eval(root, q, {}), EvalError);
}

TEST_CASE("jacobian of the constant-coefficient example is its row matrix") {
    Fixture fx = find_fixture("ex4_4");
    Eigen::MatrixXd expected(4, 8);
    expected.setZero();
    expected(0, 3) = 1.0;
    expected(1, 2) = 1.0;
    expected(2, 4) = 1.0 / std::sqrt(2.0);
    expected(2, 7) = -1.0 / std::sqrt(2.0);
    expected(3, 5) = 1.0;
    std::mt19937 rng(7);
    std::uniform_real_distribution<double> dist(-2.0, 2.0);
    for (int trial = 0; trial < 5; ++trial) {
        Eigen::VectorXd p(8);
        for (int i = 0; i < 8; ++i) p(i) = dist(rng);
        CHECK((jacobian(fx.map, p, {}) - expected).norm() < 1e-14);
    }
}

TEST_CASE("jacobian of the identity map is the identity") {
    MapDefinition map = parse_map("domain 2\ncodomain 2\nF1 = x1\nF2 = x2\n");
    Eigen::VectorXd p(2);
    p << 0.3, -1.2;
    CHECK((jacobian(map, p, {}) - Eigen::MatrixXd::Identity(2, 2)).norm() == 0.0);
}

TEST_CASE("jacobian of the radial map is the unit radial row") {
    MapDefinition map = parse_map(kRadialSource);
    Eigen::MatrixXd jac = jacobian(map, vec4(1, 0, 0, 0), {});
    CHECK(jac(0, 0) == doctest::Approx(1.0).epsilon(1e-15));
    CHECK(std::abs(jac(0, 1)) < 1e-15);
    CHECK(std::abs(jac(0, 2)) < 1e-15);
    CHECK(std::abs(jac(0, 3)) < 1e-15);
    CHECK((jac - fd_jacobian(map, vec4(1, 0, 0, 0), {})).norm() < 1e-8);
}

TEST_CASE("jacobian matches central finite differences on every fixture") {
    std::mt19937 rng(42);
    std::uniform_real_distribution<double> dist(-2.0, 2.0);
    for (const Fixture& fx : builtin_corpus()) {
        int checked = 0;
        while (checked < 100) {
            Eigen::VectorXd p(fx.map.domain_dim());
            for (int i = 0; i < p.size(); ++i) p(i) = dist(rng);
            if (fx.regular_domain && !fx.regular_domain(p)) continue;
            ++checked;
            Eigen::MatrixXd exact = jacobian(fx.map, p, fx.default_params);
            Eigen::MatrixXd approx = fd_jacobian(fx.map, p, fx.default_params);
            double scale = std::max(1.0, exact.norm());
            CHECK((exact - approx).norm() / scale < 1e-6);
        }
    }
}

TEST_CASE("directional_second vanishes for affine maps") {
    Fixture fx = find_fixture("ex4_6");
    std::mt19937 rng(11);
    std::uniform_real_distribution<double> dist(-1.0, 1.0);
    Eigen::VectorXd p(10), u(10), v(10);
    for (int i = 0; i < 10; ++i) {
        p(i) = dist(rng);
        u(i) = dist(rng);
        v(i) = dist(rng);
    }
    CHECK(directional_second(fx.map, p, {}, u, v).norm() < 1e-15);
}

TEST_CASE("directional_second of the radial map matches 1-D calculus") {
    // f(t) = sqrt(1 + t^2) along e2 at (1,0,0,0): f''(0) = 1.
    MapDefinition map = parse_map(kRadialSource);
    Eigen::VectorXd value =
        directional_second(map, vec4(1, 0, 0, 0), {}, vec4(0, 1, 0, 0), vec4(0, 1, 0, 0));
    CHECK(value(0) == doctest::Approx(1.0).epsilon(1e-14));
}

TEST_CASE("directional_second is symmetric in its directions") {
    MapDefinition map = parse_map(kRadialSource);
    std::mt19937 rng(3);
    std::uniform_real_distribution<double> dist(-1.0, 1.0);
    for (int trial = 0; trial < 20; ++trial) {
        Eigen::VectorXd p(4), u(4), v(4);
        do {
            for (int i = 0; i < 4; ++i) p(i) = dist(rng);
        } while (p.norm() < 0.3);
        for (int i = 0; i < 4; ++i) {
            u(i) = dist(rng);
            v(i) = dist(rng);
        }
        Eigen::VectorXd uv = directional_second(map, p, {}, u, v);
        Eigen::VectorXd vu = directional_second(map, p, {}, v, u);
        CHECK((uv - vu).norm() < 1e-12);
    }
}

TEST_CASE("directional_second rejects zero directions") {
    MapDefinition map = parse_map(kRadialSource);
    CHECK_THROWS_AS(directional_second(map, vec4(1, 0, 0, 0), {}, Eigen::VectorXd::Zero(4),
                                       vec4(0, 1, 0, 0)),
                    EvalError);
}

TEST_CASE("evaluation is deterministic bit for bit") {
    Fixture fx = find_fixture("ex4_7");
    Eigen::VectorXd p(8);
    p << 0.1, -0.7, 1.3, 0.2, -1.9, 0.8, 0.4, -0.3;
    Eigen::VectorXd u = Eigen::VectorXd::Unit(8, 2);
    Eigen::VectorXd v = Eigen::VectorXd::Unit(8, 5);
    Eigen::VectorXd e1 = eval(fx.map, p, fx.default_params);
    Eigen::VectorXd e2 = eval(fx.map, p, fx.default_params);
    CHECK(e1 == e2);
    Eigen::MatrixXd j1 = jacobian(fx.map, p, fx.default_params);
    Eigen::MatrixXd j2 = jacobian(fx.map, p, fx.default_params);
    CHECK(j1 == j2);
    Eigen::VectorXd d1 = directional_second(fx.map, p, fx.default_params, u, v);
    Eigen::VectorXd d2 = directional_second(fx.map, p, fx.default_params, u, v);
    CHECK(d1 == d2);
}

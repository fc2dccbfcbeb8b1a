#include <doctest.h>

#include <cmath>
#include <random>

#include "sublab/fixtures.hpp"
#include "sublab/subspace.hpp"

using namespace sublab;

namespace {

Eigen::MatrixXd random_orthogonal(int n, std::mt19937& rng) {
    std::normal_distribution<double> gauss(0.0, 1.0);
    Eigen::MatrixXd A(n, n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) A(i, j) = gauss(rng);
    Eigen::HouseholderQR<Eigen::MatrixXd> qr(A);
    return qr.householderQ();
}

Eigen::VectorXd random_point(int m, std::mt19937& rng) {
    std::uniform_real_distribution<double> dist(-2.0, 2.0);
    Eigen::VectorXd p(m);
    for (int i = 0; i < m; ++i) p(i) = dist(rng);
    return p;
}

bool spans_match(const Frame& a, const Frame& b, double tol = 1e-10) {
    if (a.dim() != b.dim()) return false;
    if (a.dim() == 0) return true;
    Eigen::VectorXd cosines = principal_angles(a, b);
    return cosines.minCoeff() >= 1.0 - tol;
}

}  // namespace

TEST_CASE("standard complex structure satisfies its invariants") {
    ComplexStructure J = ComplexStructure::standard(6);
    Eigen::MatrixXd I = Eigen::MatrixXd::Identity(6, 6);
    CHECK((J.J.transpose() * J.J - I).norm() < 1e-15);
    CHECK((J.J * J.J + I).norm() < 1e-15);
    CHECK_THROWS_AS(ComplexStructure::standard(5), GeometryError);
}

TEST_CASE("from_matrix validates orthogonality and the square") {
    ComplexStructure J = ComplexStructure::standard(4);
    CHECK_NOTHROW(ComplexStructure::from_matrix(J.J));
    Eigen::MatrixXd bad = J.J;
    bad(0, 1) += 0.1;
    CHECK_THROWS_AS(ComplexStructure::from_matrix(bad), GeometryError);
    CHECK_THROWS_AS(ComplexStructure::from_matrix(Eigen::MatrixXd::Identity(4, 4)),
                    GeometryError);
}

TEST_CASE("vertical space of the rotation example matches the hand null space") {
    Fixture fx = find_fixture("ex4_3");
    double a = 0.7;
    Eigen::MatrixXd jac = jacobian(fx.map, Eigen::VectorXd::Ones(6), {{"alpha", a}});
    Frame vertical = vertical_space(jac);
    REQUIRE(vertical.dim() == 2);
    Eigen::MatrixXd expected(6, 2);
    expected.setZero();
    expected(2, 0) = std::cos(a);
    expected(4, 0) = std::sin(a);
    expected(3, 1) = 1.0;
    CHECK(spans_match(vertical, orthonormal_span(expected)));
    for (int i = 0; i < vertical.dim(); ++i)
        CHECK((jac * vertical.columns.col(i)).norm() < 1e-12);
}

TEST_CASE("vertical space of a diffeomorphism is empty") {
    MapDefinition map = parse_map("domain 2\ncodomain 2\nF1 = x1\nF2 = x2\n");
    Frame vertical = vertical_space(jacobian(map, Eigen::VectorXd::Zero(2), {}));
    CHECK(vertical.dim() == 0);
}

TEST_CASE("vertical space of the radial map is the tangent sphere") {
    MapDefinition map =
        parse_map("domain 4\ncodomain 1\nF1 = sqrt(x1*x1 + x2*x2 + x3*x3 + x4*x4)\n");
    Eigen::VectorXd p(4);
    p << 1, 0, 0, 0;
    Frame vertical = vertical_space(jacobian(map, p, {}));
    REQUIRE(vertical.dim() == 3);
    Eigen::MatrixXd expected = Eigen::MatrixXd::Zero(4, 3);
    expected(1, 0) = expected(2, 1) = expected(3, 2) = 1.0;
    CHECK(spans_match(vertical, Frame(expected)));
}

TEST_CASE("vertical space reports rank deficiency") {
    Eigen::MatrixXd jac(2, 3);
    jac << 1, 0, 0, 1, 0, 0;
    CHECK_THROWS_WITH_AS(vertical_space(jac), doctest::Contains("rank-deficient"),
                         GeometryError);
}

TEST_CASE("horizontal space complements the vertical space") {
    Fixture fx = find_fixture("ex4_4");
    Eigen::MatrixXd jac = jacobian(fx.map, Eigen::VectorXd::Zero(8), {});
    Frame vertical = vertical_space(jac);
    Frame horizontal = horizontal_space(vertical);
    REQUIRE(horizontal.dim() == 4);
    Eigen::MatrixXd expected = Eigen::MatrixXd::Zero(8, 4);
    expected(2, 0) = 1.0;
    expected(3, 1) = 1.0;
    expected(5, 2) = 1.0;
    expected(4, 3) = 1.0;
    expected(7, 3) = -1.0;
    CHECK(spans_match(horizontal, orthonormal_span(expected)));
    CHECK((vertical.columns.transpose() * horizontal.columns).norm() < 1e-14);
}

TEST_CASE("horizontal space of an empty vertical frame is everything") {
    Frame horizontal = horizontal_space(Frame::empty(2));
    CHECK(horizontal.dim() == 2);
    CHECK(horizontal.orthonormality_defect() < 1e-15);
}

TEST_CASE("horizontal space of the radial map is the radial line") {
    MapDefinition map =
        parse_map("domain 4\ncodomain 1\nF1 = sqrt(x1*x1 + x2*x2 + x3*x3 + x4*x4)\n");
    Eigen::VectorXd p(4);
    p << 1, 0, 0, 0;
    Frame horizontal = horizontal_space(vertical_space(jacobian(map, p, {})));
    REQUIRE(horizontal.dim() == 1);
    CHECK(std::abs(std::abs(horizontal.columns(0, 0)) - 1.0) < 1e-14);
}

TEST_CASE("submersion residual vanishes on the bundled examples") {
    std::mt19937 rng(5);
    for (const Fixture& fx : builtin_corpus()) {
        for (int trial = 0; trial < 5; ++trial) {
            Eigen::VectorXd p = random_point(fx.map.domain_dim(), rng);
            if (fx.regular_domain && !fx.regular_domain(p)) continue;
            Eigen::MatrixXd jac = jacobian(fx.map, p, fx.default_params);
            Frame horizontal = horizontal_space(vertical_space(jac));
            CHECK(submersion_residual(jac, horizontal) < 1e-12);
        }
    }
}

TEST_CASE("submersion residual measures the stretch of a scaling map") {
    MapDefinition map = parse_map("domain 2\ncodomain 1\nF1 = 2*x1\n");
    Eigen::MatrixXd jac = jacobian(map, Eigen::VectorXd::Zero(2), {});
    Frame horizontal = horizontal_space(vertical_space(jac));
    CHECK(submersion_residual(jac, horizontal) == doctest::Approx(3.0).epsilon(1e-14));
}

TEST_CASE("angle spectrum of ex4_6 is {1,1,1/2,1/2,1/2,1/2}") {
    Fixture fx = find_fixture("ex4_6");
    Eigen::MatrixXd jac = jacobian(fx.map, Eigen::VectorXd::Ones(10), {});
    Frame horizontal = horizontal_space(vertical_space(jac));
    AngleSpectrum spec = kaehler_angle_spectrum(horizontal, fx.standard_J());
    REQUIRE(spec.sigma_sq.size() == 6);
    CHECK(spec.sigma_sq(0) == doctest::Approx(1.0).epsilon(1e-14));
    CHECK(spec.sigma_sq(1) == doctest::Approx(1.0).epsilon(1e-14));
    for (int i = 2; i < 6; ++i)
        CHECK(spec.sigma_sq(i) == doctest::Approx(0.5).epsilon(1e-13));
}

TEST_CASE("angle spectrum of ex4_5 is {1,1,1,1,0}") {
    Fixture fx = find_fixture("ex4_5");
    Eigen::MatrixXd jac = jacobian(fx.map, Eigen::VectorXd::Ones(12), {});
    Frame horizontal = horizontal_space(vertical_space(jac));
    AngleSpectrum spec = kaehler_angle_spectrum(horizontal, fx.standard_J());
    REQUIRE(spec.sigma_sq.size() == 5);
    for (int i = 0; i < 4; ++i)
        CHECK(spec.sigma_sq(i) == doctest::Approx(1.0).epsilon(1e-14));
    CHECK(spec.sigma_sq(4) < 1e-28);
}

TEST_CASE("a J-invariant total space has all sigma^2 equal to one") {
    ComplexStructure J = ComplexStructure::standard(6);
    AngleSpectrum spec = kaehler_angle_spectrum(Frame::identity(6), J);
    for (int i = 0; i < 6; ++i)
        CHECK(spec.sigma_sq(i) == doctest::Approx(1.0).epsilon(1e-14));
    SplitResult split = split_D1_D2(spec);
    CHECK(split.D1.dim() == 6);
    CHECK(split.D2.dim() == 0);
    CHECK(!split.theta);
}

TEST_CASE("split recovers the slant angle of the rotation example") {
    Fixture fx = find_fixture("ex4_3");
    double a = 0.7;
    Eigen::MatrixXd jac = jacobian(fx.map, Eigen::VectorXd::Ones(6), {{"alpha", a}});
    Frame horizontal = horizontal_space(vertical_space(jac));
    SplitResult split = split_D1_D2(kaehler_angle_spectrum(horizontal, fx.standard_J()));
    CHECK(split.D1.dim() == 2);
    CHECK(split.D2.dim() == 2);
    REQUIRE(split.theta.has_value());
    CHECK(*split.theta == doctest::Approx(a).epsilon(1e-12));
}

TEST_CASE("split reproduces cos(theta) = |sin(alpha - beta)| for ex4_7") {
    Fixture fx = find_fixture("ex4_7");
    ParamMap params{{"alpha", 0.9}, {"beta", 0.2}};
    Eigen::MatrixXd jac = jacobian(fx.map, Eigen::VectorXd::Ones(8), params);
    Frame horizontal = horizontal_space(vertical_space(jac));
    SplitResult split = split_D1_D2(kaehler_angle_spectrum(horizontal, fx.standard_J()));
    REQUIRE(split.theta.has_value());
    CHECK(*split.theta ==
          doctest::Approx(std::acos(std::abs(std::sin(0.7)))).epsilon(1e-12));
}

TEST_CASE("principal angles: equal, orthogonal, and the ex4_4 slant span") {
    std::mt19937 rng(17);
    Eigen::MatrixXd Q = random_orthogonal(6, rng);
    Frame a(Q.leftCols(3));
    Frame b(Q.rightCols(3));
    Eigen::VectorXd self = principal_angles(a, a);
    for (int i = 0; i < self.size(); ++i) CHECK(self(i) == doctest::Approx(1.0));
    Eigen::VectorXd cross = principal_angles(a, b);
    for (int i = 0; i < cross.size(); ++i) CHECK(cross(i) < 1e-12);

    Fixture fx = find_fixture("ex4_4");
    Eigen::MatrixXd jac = jacobian(fx.map, Eigen::VectorXd::Zero(8), {});
    Frame horizontal = horizontal_space(vertical_space(jac));
    SplitResult split = split_D1_D2(kaehler_angle_spectrum(horizontal, fx.standard_J()));
    Frame expected = orthonormal_span(fx.expected_D2({}));
    CHECK(spans_match(split.D2, expected));
}

TEST_CASE("compressed J is antisymmetric on any frame") {
    std::mt19937 rng(23);
    for (int trial = 0; trial < 20; ++trial) {
        int m = 2 * (2 + static_cast<int>(rng() % 4));  // 4..10
        ComplexStructure J = ComplexStructure::standard(m);
        Eigen::MatrixXd Q = random_orthogonal(m, rng);
        int k = 1 + static_cast<int>(rng() % static_cast<unsigned>(m));
        Frame H(Q.leftCols(k));
        Eigen::MatrixXd M = H.columns.transpose() * J.J * H.columns;
        CHECK((M + M.transpose()).norm() < 1e-12);
    }
}

TEST_CASE("slant dimensions add up to the codomain dimension on the corpus") {
    std::mt19937 rng(29);
    for (const Fixture& fx : builtin_corpus()) {
        Eigen::VectorXd p;
        do {
            p = random_point(fx.map.domain_dim(), rng);
        } while (fx.regular_domain && !fx.regular_domain(p));
        Eigen::MatrixXd jac = jacobian(fx.map, p, fx.default_params);
        Frame horizontal = horizontal_space(vertical_space(jac));
        SplitResult split =
            split_D1_D2(kaehler_angle_spectrum(horizontal, fx.standard_J()));
        CHECK(split.D1.dim() + split.D2.dim() == fx.map.codomain_dim());

        // J maps the invariant part into itself.
        if (split.D1.dim() > 0) {
            Frame JD1 = orthonormal_span(fx.standard_J().J * split.D1.columns);
            CHECK(spans_match(JD1, split.D1));
        }
        // A proper slant angle forces an even slant dimension.
        if (split.theta && *split.theta < M_PI_2 - 1e-9)
            CHECK(split.D2.dim() % 2 == 0);
    }
}

TEST_CASE("split is invariant under reparameterization of the horizontal frame") {
    Fixture fx = find_fixture("ex4_6");
    Eigen::MatrixXd jac = jacobian(fx.map, Eigen::VectorXd::Ones(10), {});
    Frame horizontal = horizontal_space(vertical_space(jac));
    SplitResult base = split_D1_D2(kaehler_angle_spectrum(horizontal, fx.standard_J()));
    std::mt19937 rng(31);
    for (int trial = 0; trial < 10; ++trial) {
        Eigen::MatrixXd O = random_orthogonal(horizontal.dim(), rng);
        Frame reframed(horizontal.columns * O);
        SplitResult other =
            split_D1_D2(kaehler_angle_spectrum(reframed, fx.standard_J()));
        CHECK(spans_match(base.D1, other.D1));
        CHECK(spans_match(base.D2, other.D2));
        REQUIRE(other.theta.has_value());
        CHECK(*other.theta == doctest::Approx(*base.theta).epsilon(1e-12));
    }
}

TEST_CASE("nonzero sigma^2 clusters below one have even multiplicity") {
    std::mt19937 rng(37);
    for (const Fixture& fx : builtin_corpus()) {
        Eigen::VectorXd p;
        do {
            p = random_point(fx.map.domain_dim(), rng);
        } while (fx.regular_domain && !fx.regular_domain(p));
        Eigen::MatrixXd jac = jacobian(fx.map, p, fx.default_params);
        Frame horizontal = horizontal_space(vertical_space(jac));
        AngleSpectrum spec = kaehler_angle_spectrum(horizontal, fx.standard_J());
        int count = 0;
        for (int i = 0; i < spec.sigma_sq.size(); ++i)
            if (spec.sigma_sq(i) < 1.0 - 1e-6 && spec.sigma_sq(i) > 1e-6) ++count;
        CHECK(count % 2 == 0);
    }
}

TEST_CASE("an ill-clustered spectrum yields no angle and a flag") {
    AngleSpectrum spec;
    spec.sigma_sq = Eigen::VectorXd(3);
    spec.sigma_sq << 1.0, 0.6, 0.2;
    spec.frames = Eigen::MatrixXd::Identity(4, 3);
    SplitResult split = split_D1_D2(spec, 1e-6);
    CHECK(!split.theta);
    CHECK(split.multiple_angles);
    CHECK(split.cluster_width == doctest::Approx(0.4));
}

#include "sublab/fixtures.hpp"

#include <cmath>

namespace sublab {

namespace {

Eigen::MatrixXd columns_from(int m, const std::vector<Eigen::VectorXd>& cols) {
    Eigen::MatrixXd out(m, static_cast<long>(cols.size()));
    for (size_t i = 0; i < cols.size(); ++i) out.col(static_cast<long>(i)) = cols[i];
    return out;
}

Eigen::VectorXd unit(int m, int i) {
    Eigen::VectorXd e = Eigen::VectorXd::Zero(m);
    e(i - 1) = 1.0;
    return e;
}

// Classes for an angle with cos(theta) = c: invariant when c ~ 1,
// a right angle when c ~ 0, a proper slant otherwise.
Verdict verdict_for_cos(double c, int dim_D1) {
    const double tol = 1e-9;
    c = std::abs(c);
    if (c >= 1.0 - tol) return Verdict::VInvariant;
    if (c <= tol) return dim_D1 == 0 ? Verdict::VSlant : Verdict::VSemiInvariant;
    return dim_D1 == 0 ? Verdict::VSlant : Verdict::VSemiSlant;
}

std::optional<double> theta_for_cos(double c) {
    c = std::abs(c);
    if (c >= 1.0 - 1e-9) return std::nullopt;  // merged into the invariant part
    return std::acos(c);
}

Fixture make(std::string name, std::string description, std::string source,
             ParamMap defaults, std::string provenance) {
    Fixture f;
    f.name = std::move(name);
    f.description = std::move(description);
    f.source = std::move(source);
    f.map = parse_map(f.source);
    f.default_params = std::move(defaults);
    f.provenance = std::move(provenance);
    return f;
}

}  // namespace

std::vector<Fixture> builtin_corpus() {
    std::vector<Fixture> corpus;

    {
        Fixture f = make(
            "ex4_3", "rotation mixing two coordinate planes; slant angle alpha",
            "domain 6\n"
            "codomain 4\n"
            "param alpha\n"
            "F1 = x1\n"
            "F2 = sin(alpha)*x3 - cos(alpha)*x5\n"
            "F3 = x6\n"
            "F4 = x2\n",
            {{"alpha", 0.7}},
            "analytic: spectrum of the compressed J on the constant horizontal "
            "frame gives cos^2(theta) = cos^2(alpha); spans read off the rows");
        f.expected_theta = [](const ParamMap& p) {
            return theta_for_cos(std::cos(p.at("alpha")));
        };
        f.expected_verdict = [](const ParamMap& p) {
            return verdict_for_cos(std::cos(p.at("alpha")), 2);
        };
        f.expected_D1 = [](const ParamMap&) {
            return columns_from(6, {unit(6, 1), unit(6, 2)});
        };
        f.expected_D2 = [](const ParamMap& p) {
            double a = p.at("alpha");
            return columns_from(
                6, {unit(6, 6),
                    (std::sin(a) * unit(6, 3) - std::cos(a) * unit(6, 5)).eval()});
        };
        corpus.push_back(std::move(f));
    }

    {
        Fixture f = make(
            "ex4_4", "constant-coefficient map with a pi/4 slant part",
            "domain 8\n"
            "codomain 4\n"
            "F1 = x4\n"
            "F2 = x3\n"
            "F3 = (x5 - x8)/sqrt(2)\n"
            "F4 = x6\n",
            {}, "analytic: cos^2(theta) = 1/2 on the slant pair {(x5-x8)/sqrt2, x6}");
        f.expected_theta = [](const ParamMap&) { return std::optional<double>(M_PI / 4); };
        f.expected_verdict = [](const ParamMap&) { return Verdict::VSemiSlant; };
        f.expected_D1 = [](const ParamMap&) {
            return columns_from(8, {unit(8, 3), unit(8, 4)});
        };
        f.expected_D2 = [](const ParamMap&) {
            return columns_from(8, {unit(8, 6), (unit(8, 5) - unit(8, 8)).eval()});
        };
        corpus.push_back(std::move(f));
    }

    {
        Fixture f = make(
            "ex4_5", "five-component map with a one-dimensional right-angle part",
            "domain 12\n"
            "codomain 5\n"
            "F1 = x2\n"
            "F2 = (x5 + x6)/sqrt(2)\n"
            "F3 = (x7 + x9)/sqrt(2)\n"
            "F4 = (x8 + x10)/sqrt(2)\n"
            "F5 = x1\n",
            {}, "analytic: J maps (x5+x6)/sqrt2 out of the horizontal space, so "
                "theta = pi/2 on the single slant direction");
        f.expected_theta = [](const ParamMap&) { return std::optional<double>(M_PI / 2); };
        f.expected_verdict = [](const ParamMap&) { return Verdict::VSemiInvariant; };
        f.expected_D1 = [](const ParamMap&) {
            return columns_from(12, {unit(12, 1), unit(12, 2),
                                     (unit(12, 7) + unit(12, 9)).eval(),
                                     (unit(12, 8) + unit(12, 10)).eval()});
        };
        f.expected_D2 = [](const ParamMap&) {
            return columns_from(12, {(unit(12, 5) + unit(12, 6)).eval()});
        };
        corpus.push_back(std::move(f));
    }

    {
        Fixture f = make(
            "ex4_6", "six-component map with a four-dimensional pi/4 slant part",
            "domain 10\n"
            "codomain 6\n"
            "F1 = (x3 - x5)/sqrt(2)\n"
            "F2 = x6\n"
            "F3 = (x7 + x9)/sqrt(2)\n"
            "F4 = x8\n"
            "F5 = x1\n"
            "F6 = x2\n",
            {}, "analytic: two slant pairs, each with cos^2(theta) = 1/2");
        f.expected_theta = [](const ParamMap&) { return std::optional<double>(M_PI / 4); };
        f.expected_verdict = [](const ParamMap&) { return Verdict::VSemiSlant; };
        f.expected_D1 = [](const ParamMap&) {
            return columns_from(10, {unit(10, 1), unit(10, 2)});
        };
        f.expected_D2 = [](const ParamMap&) {
            return columns_from(10, {unit(10, 6), unit(10, 8),
                                     (unit(10, 3) - unit(10, 5)).eval(),
                                     (unit(10, 7) + unit(10, 9)).eval()});
        };
        corpus.push_back(std::move(f));
    }

    {
        Fixture f = make(
            "ex4_7", "two independent rotations; cos(theta) = |sin(alpha - beta)|",
            "domain 8\n"
            "codomain 4\n"
            "param alpha\n"
            "param beta\n"
            "F1 = x1\n"
            "F2 = cos(alpha)*x3 - sin(alpha)*x5\n"
            "F3 = x2\n"
            "F4 = sin(beta)*x4 + cos(beta)*x6\n",
            {{"alpha", 0.9}, {"beta", 0.2}},
            "analytic: the compressed J pairs the two rotated directions with "
            "coupling sin(alpha - beta)");
        f.expected_theta = [](const ParamMap& p) {
            return theta_for_cos(std::sin(p.at("alpha") - p.at("beta")));
        };
        f.expected_verdict = [](const ParamMap& p) {
            return verdict_for_cos(std::sin(p.at("alpha") - p.at("beta")), 2);
        };
        f.expected_D1 = [](const ParamMap&) {
            return columns_from(8, {unit(8, 1), unit(8, 2)});
        };
        f.expected_D2 = [](const ParamMap& p) {
            double a = p.at("alpha");
            double b = p.at("beta");
            return columns_from(
                8, {(std::cos(a) * unit(8, 3) - std::sin(a) * unit(8, 5)).eval(),
                    (std::sin(b) * unit(8, 4) + std::cos(b) * unit(8, 6)).eval()});
        };
        corpus.push_back(std::move(f));
    }

    {
        Fixture f = make("trivial_invariant",
                         "coordinate projection with a J-invariant horizontal plane",
                         "domain 4\n"
                         "codomain 2\n"
                         "F1 = x1\n"
                         "F2 = x2\n",
                         {}, "construction: J(e1) = e2 keeps the horizontal plane "
                             "invariant, so D2 is empty");
        f.expected_theta = [](const ParamMap&) { return std::optional<double>(); };
        f.expected_verdict = [](const ParamMap&) { return Verdict::VInvariant; };
        f.expected_D1 = [](const ParamMap&) {
            return columns_from(4, {unit(4, 1), unit(4, 2)});
        };
        f.expected_D2 = [](const ParamMap&) { return Eigen::MatrixXd(4, 0); };
        corpus.push_back(std::move(f));
    }

    {
        Fixture f = make(
            "radial", "distance-to-origin map with spherical fibers and nonzero T",
            "domain 4\n"
            "codomain 1\n"
            "F1 = sqrt(x1*x1 + x2*x2 + x3*x3 + x4*x4)\n",
            {}, "sphere-fiber oracle: |T_X X| = 1/r, mean curvature -(1/r) along "
                "the radial direction, theta = pi/2 since J(dr) is vertical");
        f.regular_domain = [](const Eigen::VectorXd& p) { return p.norm() > 0.25; };
        f.expected_theta = [](const ParamMap&) { return std::optional<double>(M_PI / 2); };
        f.expected_verdict = [](const ParamMap&) { return Verdict::VSlant; };
        f.expected_D1 = [](const ParamMap&) { return Eigen::MatrixXd(4, 0); };
        // D2 is the point-dependent radial line; no constant span to compare.
        f.expected_failing_checks = {"foliation-vertical", "totally-geodesic-map"};
        corpus.push_back(std::move(f));
    }

    return corpus;
}

Fixture find_fixture(const std::string& name) {
    for (auto& f : builtin_corpus())
        if (f.name == name) return f;
    throw GeometryError("unknown fixture '" + name + "'");
}

}  // namespace sublab

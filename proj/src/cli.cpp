#include "sublab/cli.hpp"

#include <cmath>
#include <fstream>
#include <iostream>
#include <sstream>

#include "sublab/fixtures.hpp"
#include "sublab/report.hpp"

namespace sublab {

namespace {

bool parse_double(const std::string& text, double& out) {
    try {
        size_t used = 0;
        out = std::stod(text, &used);
        return used == text.size();
    } catch (...) {
        return false;
    }
}

// name=value option arguments.
bool parse_binding(const std::string& arg, std::string& name, double& value) {
    auto eq = arg.find('=');
    if (eq == std::string::npos || eq == 0) return false;
    name = arg.substr(0, eq);
    return parse_double(arg.substr(eq + 1), value);
}

ComplexStructure load_J(const std::string& spec, int m) {
    if (spec == "standard") return ComplexStructure::standard(m);
    std::ifstream in(spec);
    if (!in) throw Error("cannot open J file '" + spec + "'");
    Eigen::MatrixXd J(m, m);
    for (int i = 0; i < m; ++i)
        for (int j = 0; j < m; ++j)
            if (!(in >> J(i, j)))
                throw Error("J file '" + spec + "' does not hold " + std::to_string(m) +
                            "x" + std::to_string(m) + " values");
    return ComplexStructure::from_matrix(std::move(J));
}

struct ResolvedMap {
    std::string label;
    AnalysisTask task;
};

double check_floor_note(const CheckResult& c) { return c.max_residual; }

struct SweepAxis {
    std::string name;
    double from = 0.0;
    double to = 0.0;
    double step = 0.0;
    std::vector<double> values() const {
        std::vector<double> v;
        for (double x = from; x <= to + 1e-12; x += step) v.push_back(x);
        return v;
    }
};

bool parse_sweep(const std::string& arg, SweepAxis& axis) {
    auto eq = arg.find('=');
    if (eq == std::string::npos || eq == 0) return false;
    axis.name = arg.substr(0, eq);
    std::string range = arg.substr(eq + 1);
    auto c1 = range.find(':');
    auto c2 = range.find(':', c1 == std::string::npos ? c1 : c1 + 1);
    if (c1 == std::string::npos || c2 == std::string::npos) return false;
    if (!parse_double(range.substr(0, c1), axis.from)) return false;
    if (!parse_double(range.substr(c1 + 1, c2 - c1 - 1), axis.to)) return false;
    if (!parse_double(range.substr(c2 + 1), axis.step)) return false;
    return axis.step > 0.0 && axis.to >= axis.from;
}

}  // namespace

int run_analyze(const AnalyzeOptions& options, std::ostream& out, std::ostream& err) {
    try {
        if (options.map_file.empty() == options.example.empty()) {
            err << "error: exactly one of --map or --example is required\n";
            return kExitUsage;
        }
        if (options.format != "json" && options.format != "text") {
            err << "error: unknown format '" << options.format << "'\n";
            return kExitUsage;
        }
        if (options.points != "random" && options.points != "grid") {
            err << "error: unknown sampling strategy '" << options.points << "'\n";
            return kExitUsage;
        }
        if (options.n < 1) {
            err << "error: --n must be positive\n";
            return kExitUsage;
        }

        ParamMap params;
        for (const auto& binding : options.params) {
            std::string name;
            double value;
            if (!parse_binding(binding, name, value)) {
                err << "error: malformed --param '" << binding << "' (expected name=value)\n";
                return kExitUsage;
            }
            params[name] = value;
        }

        std::string label;
        MapDefinition map;
        DomainPredicate domain;
        if (!options.example.empty()) {
            Fixture fixture = find_fixture(options.example);
            label = fixture.name;
            map = fixture.map;
            domain = fixture.regular_domain;
            for (const auto& [k, v] : fixture.default_params)
                if (!params.count(k)) params[k] = v;
        } else {
            std::ifstream in(options.map_file);
            if (!in) {
                err << "error: cannot open map file '" << options.map_file << "'\n";
                return kExitUsage;
            }
            std::stringstream buffer;
            buffer << in.rdbuf();
            label = options.map_file;
            map = parse_map(buffer.str());
        }
        map.bind_params(params);  // surface unbound/unknown parameters as usage errors

        ComplexStructure J = load_J(options.J_spec, map.domain_dim());

        std::vector<std::string> checks = options.checks;
        if (checks.empty() || (checks.size() == 1 && checks[0] == "all"))
            checks = all_check_names();
        for (const auto& name : checks) {
            const auto& known = all_check_names();
            if (std::find(known.begin(), known.end(), name) == known.end()) {
                err << "error: unknown check '" << name << "'\n";
                return kExitUsage;
            }
        }

        Tolerances tols;
        tols.rank = options.tol_rank;
        tols.cluster = options.tol_cluster;
        tols.angle = options.tol_angle;

        Sampler sampler;
        sampler.strategy = options.points == "random" ? Sampler::Strategy::Random
                                                      : Sampler::Strategy::Grid;
        sampler.count = options.n;
        sampler.seed = options.seed;

        AnalysisTask task{map, J, params, domain};
        ClassificationReport report =
            classify(task, sampler, tols, checks,
                     options.serial ? Parallelism::Serial : Parallelism::OpenMP);

        std::string rendered = options.format == "json"
                                   ? report_json(report, label, params, J.J)
                                   : report_text(report, label, params);
        if (!options.report_path.empty()) {
            std::ofstream file(options.report_path, std::ios::binary);
            if (!file) {
                err << "error: cannot write report to '" << options.report_path << "'\n";
                return kExitUsage;
            }
            file << rendered;
        } else {
            out << rendered;
        }
        return report.all_checks_pass() ? kExitPass : kExitCheckFailure;
    } catch (const ParseError& e) {
        err << "parse error: " << e.what() << "\n";
        return kExitUsage;
    } catch (const EvalError& e) {
        err << "error: " << e.what() << "\n";
        return kExitUsage;
    } catch (const Error& e) {
        err << "error: " << e.what() << "\n";
        return kExitUsage;
    }
}

namespace {

struct VerifyOutcome {
    int cells = 0;
    int failures = 0;
};

void verify_fixture_cell(const Fixture& fixture, const ParamMap& params, int n,
                         std::uint64_t seed, const std::vector<std::string>& checks,
                         std::ostream& out, VerifyOutcome& outcome) {
    ++outcome.cells;
    Sampler sampler;
    sampler.count = n;
    sampler.seed = seed;
    Tolerances tols;
    ClassificationReport report = classify(fixture.task(params), sampler, tols, checks);

    std::vector<std::string> problems;

    Verdict expected_verdict =
        fixture.expected_verdict ? fixture.expected_verdict(params) : report.verdict;
    if (report.verdict != expected_verdict)
        problems.push_back("verdict " + verdict_name(report.verdict) + " != expected " +
                           verdict_name(expected_verdict));

    if (fixture.expected_theta) {
        std::optional<double> expected = fixture.expected_theta(params);
        if (expected.has_value() != report.theta.has_value())
            problems.push_back("theta presence mismatch");
        else if (expected && std::abs(*expected - *report.theta) > 1e-9)
            problems.push_back("theta " + std::to_string(*report.theta) +
                               " != expected " + std::to_string(*expected));
    }

    const PointAnalysis* first_valid = nullptr;
    for (const auto& pa : report.points)
        if (!pa.rank_deficient && pa.error.empty()) {
            first_valid = &pa;
            break;
        }
    auto check_span = [&](const char* which, const Frame& got,
                          const std::function<Eigen::MatrixXd(const ParamMap&)>& expect) {
        if (!expect || !first_valid) return;
        Frame want = orthonormal_span(expect(params));
        if (got.dim() != want.dim()) {
            problems.push_back(std::string(which) + " dimension " +
                               std::to_string(got.dim()) + " != expected " +
                               std::to_string(want.dim()));
            return;
        }
        Eigen::VectorXd cosines = principal_angles(got, want);
        for (int i = 0; i < cosines.size(); ++i)
            if (cosines(i) < 1.0 - 1e-10) {
                problems.push_back(std::string(which) + " span mismatch (cosine " +
                                   std::to_string(cosines(i)) + ")");
                return;
            }
    };
    if (first_valid) {
        check_span("D1", first_valid->D1, fixture.expected_D1);
        check_span("D2", first_valid->D2, fixture.expected_D2);
    } else {
        problems.push_back("no valid sample points");
    }

    for (const auto& check : report.checks) {
        bool expected_to_fail =
            std::find(fixture.expected_failing_checks.begin(),
                      fixture.expected_failing_checks.end(),
                      check.name) != fixture.expected_failing_checks.end();
        if (expected_to_fail) {
            if (check.pass || check_floor_note(check) < fixture.expected_failing_floor)
                problems.push_back("check '" + check.name +
                                   "' was expected to exceed its tolerance");
        } else if (!check.pass) {
            problems.push_back("check '" + check.name + "' failed (residual " +
                               std::to_string(check.max_residual) + ")");
        }
    }

    std::ostringstream cell;
    cell << fixture.name;
    if (!params.empty()) {
        cell << " (";
        bool first = true;
        for (const auto& [k, v] : params) {
            if (!first) cell << ", ";
            cell << k << "=" << v;
            first = false;
        }
        cell << ")";
    }
    if (problems.empty()) {
        out << "[ok]   " << cell.str() << "\n";
    } else {
        ++outcome.failures;
        out << "[FAIL] " << cell.str() << "\n";
        for (const auto& p : problems) out << "       - " << p << "\n";
    }
}

}  // namespace

int run_verify(const VerifyOptions& options, std::ostream& out, std::ostream& err) {
    try {
        std::vector<Fixture> fixtures;
        if (options.example.empty()) {
            fixtures = builtin_corpus();
        } else {
            fixtures.push_back(find_fixture(options.example));
        }

        std::vector<SweepAxis> axes;
        for (const auto& s : options.sweeps) {
            SweepAxis axis;
            if (!parse_sweep(s, axis)) {
                err << "error: malformed --sweep '" << s << "' (expected name=a:b:step)\n";
                return kExitUsage;
            }
            axes.push_back(std::move(axis));
        }
        if (!axes.empty() && fixtures.size() != 1) {
            err << "error: --sweep requires --example\n";
            return kExitUsage;
        }

        VerifyOutcome outcome;
        if (axes.empty()) {
            for (const auto& fixture : fixtures)
                verify_fixture_cell(fixture, fixture.default_params, options.n,
                                    options.seed, all_check_names(), out, outcome);
        } else {
            // Sweep cells verify the angle formula and the exact-algebra
            // checks; the derivative-based suites run in the default mode.
            const std::vector<std::string> cell_checks = {"submersion", "identities",
                                                          "c-square", "j-hat", "parity"};
            const Fixture& fixture = fixtures[0];
            std::vector<size_t> idx(axes.size(), 0);
            std::vector<std::vector<double>> values;
            values.reserve(axes.size());
            for (const auto& axis : axes) values.push_back(axis.values());
            bool done = false;
            while (!done) {
                ParamMap params = fixture.default_params;
                for (size_t i = 0; i < axes.size(); ++i)
                    params[axes[i].name] = values[i][idx[i]];
                verify_fixture_cell(fixture, params, std::min(options.n, 25),
                                    options.seed, cell_checks, out, outcome);
                long d = static_cast<long>(axes.size()) - 1;
                while (d >= 0 && ++idx[static_cast<size_t>(d)] ==
                                     values[static_cast<size_t>(d)].size()) {
                    idx[static_cast<size_t>(d)] = 0;
                    --d;
                }
                if (d < 0) done = true;
            }
        }

        out << outcome.cells - outcome.failures << "/" << outcome.cells << " passed\n";
        return outcome.failures == 0 ? kExitPass : kExitCheckFailure;
    } catch (const Error& e) {
        err << "error: " << e.what() << "\n";
        return kExitUsage;
    }
}

int run_corpus(std::ostream& out) {
    for (const auto& fixture : builtin_corpus()) {
        out << fixture.name << ": " << fixture.description << "\n";
        out << "  map: R^" << fixture.map.domain_dim() << " -> R^"
            << fixture.map.codomain_dim() << "\n";
        if (!fixture.default_params.empty()) {
            out << "  params:";
            for (const auto& [k, v] : fixture.default_params) out << " " << k << "=" << v;
            out << "\n";
        }
        if (fixture.expected_verdict)
            out << "  expected verdict: "
                << verdict_name(fixture.expected_verdict(fixture.default_params)) << "\n";
        if (fixture.expected_theta) {
            auto theta = fixture.expected_theta(fixture.default_params);
            out << "  expected theta (at defaults): "
                << (theta ? std::to_string(*theta) : std::string("absent")) << "\n";
        }
        if (!fixture.expected_failing_checks.empty()) {
            out << "  expected failing checks:";
            for (const auto& c : fixture.expected_failing_checks) out << " " << c;
            out << "\n";
        }
        out << "  provenance: " << fixture.provenance << "\n";
    }
    return kExitPass;
}

}  // namespace sublab

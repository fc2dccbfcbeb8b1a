#pragma once

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "sublab/classify.hpp"

namespace sublab {

// A bundled map with its expected classification data. Expected spans may be
// parameter-dependent; the columns need not be normalized (comparisons go
// through principal angles). A null span function means "no stated span".
struct Fixture {
    std::string name;
    std::string description;
    std::string source;  // DSL text; the map is parsed from it
    MapDefinition map;
    ParamMap default_params;
    DomainPredicate regular_domain;  // null: everywhere regular

    std::function<std::optional<double>(const ParamMap&)> expected_theta;
    std::function<Verdict(const ParamMap&)> expected_verdict;
    std::function<Eigen::MatrixXd(const ParamMap&)> expected_D1;
    std::function<Eigen::MatrixXd(const ParamMap&)> expected_D2;

    // Checks that legitimately fail on this map, with the floor their
    // residuals must exceed.
    std::vector<std::string> expected_failing_checks;
    double expected_failing_floor = 1e-3;

    std::string provenance;  // where the expected values come from

    ComplexStructure standard_J() const {
        return ComplexStructure::standard(map.domain_dim());
    }
    AnalysisTask task(const ParamMap& params) const {
        return AnalysisTask{map, standard_J(), params, regular_domain};
    }
    AnalysisTask task() const { return task(default_params); }
};

// Exactly: ex4_3(alpha), ex4_4, ex4_5, ex4_6, ex4_7(alpha, beta),
// trivial_invariant, radial.
std::vector<Fixture> builtin_corpus();

// Throws GeometryError when the name is unknown.
Fixture find_fixture(const std::string& name);

}  // namespace sublab

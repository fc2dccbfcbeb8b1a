#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "sublab/oneill.hpp"

namespace sublab {

struct Tolerances {
    double rank = 1e-8;          // relative SVD cutoff for rank decisions
    double cluster = 1e-6;       // sigma^2 clustering when splitting D1 / D2
    double angle = 1e-8;         // slant-angle constancy across sample points
    double exact = 1e-10;        // identities that are plain linear algebra
    double first_order = 1e-6;   // one finite-difference derivative
    double second_order = 1e-4;  // nested finite differences
    double compat = 1e-5;        // operator-field compatibility equations
};

enum class Verdict { VInvariant, VSlant, VSemiInvariant, VSemiSlant, NotClassified };

std::string verdict_name(Verdict v);

struct PointAnalysis {
    Eigen::VectorXd point;
    Eigen::MatrixXd jacobian;
    Frame vertical;
    Frame horizontal;
    Frame D1;
    Frame D2;
    AngleSpectrum spectrum;
    std::optional<double> theta;
    double submersion = 0.0;  // isometry defect of the differential
    StructureOperators ops;
    bool rank_deficient = false;
    bool multiple_angles = false;
    double cluster_width = 0.0;
    std::string error;  // non-empty when the pipeline failed at this point
    std::map<std::string, double> residuals;  // per-check residuals at this point
};

struct Sampler {
    enum class Strategy { Random, Grid };
    Strategy strategy = Strategy::Random;
    int count = 100;
    std::uint64_t seed = 42;
};

using DomainPredicate = std::function<bool(const Eigen::VectorXd&)>;

// Points in [-2, 2]^dim intersected with the domain predicate. Deterministic
// for a fixed seed. Throws GeometryError when no valid point can be found.
std::vector<Eigen::VectorXd> sample_points(int dim, const DomainPredicate& domain,
                                           const Sampler& sampler);

struct AnalysisTask {
    MapDefinition map;
    ComplexStructure J;
    ParamMap params;
    DomainPredicate domain;  // empty: the whole cube is regular
};

struct CheckResult {
    std::string name;
    double max_residual = 0.0;
    double tolerance = 0.0;
    bool pass = true;
    bool applicable = false;
    std::string note;
};

struct ClassificationReport {
    Verdict verdict = Verdict::NotClassified;
    std::string annotation;
    std::optional<double> theta;
    int m = 0;
    int n = 0;
    int dim_vertical = 0;
    int dim_D1 = 0;
    int dim_D2 = 0;
    double theta_spread = 0.0;
    std::vector<PointAnalysis> points;
    std::vector<CheckResult> checks;
    Sampler sampling;
    Tolerances tols;
    std::string diagnostic;

    bool all_checks_pass() const;
    const CheckResult* find_check(const std::string& name) const;
};

// Full per-point pipeline: jacobian, vertical/horizontal split, submersion
// residual, angle spectrum, D1/D2 split, structure operators. A rank-deficient
// differential is flagged, not thrown.
PointAnalysis analyze_point(const MapDefinition& map, const ComplexStructure& J,
                            const ParamMap& params, const Eigen::VectorXd& point,
                            const Tolerances& tols);

// Names accepted by the --check option, in report order.
const std::vector<std::string>& all_check_names();

enum class Parallelism { Serial, OpenMP };

// Samples, analyzes every point (optionally across OpenMP threads; results are
// identical to the serial path), evaluates the selected checks, and reduces to
// a verdict. Deterministic for fixed (map, params, seed, tolerances).
ClassificationReport classify(const AnalysisTask& task, const Sampler& sampler,
                              const Tolerances& tols,
                              const std::vector<std::string>& checks,
                              Parallelism mode = Parallelism::OpenMP);

// Residual records for the individual theorem checkers; all are also folded
// into classify() when selected.
struct IntegrabilityRecord {
    bool applicable = false;
    std::string reason;
    double tensor_A_max = 0.0;       // max |A(X, Y)| over frame pairs
    double bracket_condition = 0.0;  // the projected-bracket condition
    double pair_condition = 0.0;     // the second displayed condition (D2 only)
    double frobenius = 0.0;          // direct bracket components outside the span
    double max() const;
};

IntegrabilityRecord integrability_D1(const ProjectorField& field, const PointAnalysis& at);
IntegrabilityRecord integrability_D2(const ProjectorField& field, const PointAnalysis& at);

struct FoliationRecord {
    bool vertical_applicable = false;
    bool horizontal_applicable = false;
    bool d1_applicable = false;
    bool d2_applicable = false;
    double vertical = 0.0;    // fibers totally geodesic
    double horizontal = 0.0;  // horizontal distribution totally geodesic
    double d1 = 0.0;
    double d2 = 0.0;
};

FoliationRecord foliation_checks(const ProjectorField& field, const PointAnalysis& at);

struct TotallyGeodesicRecord {
    double condition_vertical = 0.0;  // displayed condition on vertical pairs
    double condition_mixed = 0.0;     // displayed condition on mixed pairs
    double direct_vertical = 0.0;     // |second fundamental form| via dual numbers
    double direct_mixed = 0.0;
    bool consistent(double tol) const;
    double condition_max() const;
    double direct_max() const;
};

TotallyGeodesicRecord totally_geodesic_map_check(const ProjectorField& field,
                                                 const PointAnalysis& at);

struct UmbilicalRecord {
    bool applicable = false;  // false for zero-dimensional fibers
    double umbilical = 0.0;
    bool containment_applicable = false;  // only checked when fibers are umbilical
    double mean_out_of_D2 = 0.0;          // |(H_mean) orthogonal to D2|
    double mean_norm = 0.0;               // minimality when D2 is empty
};

UmbilicalRecord umbilical_fiber_report(const ProjectorField& field, const PointAnalysis& at,
                                       const Tolerances& tols);

}  // namespace sublab

#include "sublab/classify.hpp"

#include <algorithm>
#include <cmath>
#include <random>

namespace sublab {

std::string verdict_name(Verdict v) {
    switch (v) {
        case Verdict::VInvariant: return "v-invariant";
        case Verdict::VSlant: return "v-slant";
        case Verdict::VSemiInvariant: return "v-semi-invariant";
        case Verdict::VSemiSlant: return "v-semi-slant";
        case Verdict::NotClassified: return "not-classified";
    }
    return "not-classified";
}

std::vector<Eigen::VectorXd> sample_points(int dim, const DomainPredicate& domain,
                                           const Sampler& sampler) {
    std::vector<Eigen::VectorXd> points;
    points.reserve(static_cast<size_t>(sampler.count));
    auto admissible = [&](const Eigen::VectorXd& p) { return !domain || domain(p); };

    if (sampler.strategy == Sampler::Strategy::Random) {
        std::mt19937_64 rng(sampler.seed);
        // Explicit uniform mapping keeps the stream identical across platforms.
        auto uniform = [&rng]() {
            return static_cast<double>(rng() >> 11) * 0x1.0p-53;
        };
        const long cap = static_cast<long>(sampler.count) * 1000 + 1000;
        long attempts = 0;
        while (static_cast<int>(points.size()) < sampler.count && attempts < cap) {
            ++attempts;
            Eigen::VectorXd p(dim);
            for (int i = 0; i < dim; ++i) p(i) = -2.0 + 4.0 * uniform();
            if (admissible(p)) points.push_back(std::move(p));
        }
    } else {
        int per_axis = 1;
        while (std::pow(per_axis, dim) < static_cast<double>(sampler.count) &&
               per_axis < 1 << 20)
            ++per_axis;
        std::vector<int> idx(static_cast<size_t>(dim), 0);
        bool done = false;
        while (!done && static_cast<int>(points.size()) < sampler.count) {
            Eigen::VectorXd p(dim);
            for (int i = 0; i < dim; ++i)
                p(i) = -2.0 + 4.0 * (idx[static_cast<size_t>(i)] + 0.5) / per_axis;
            if (admissible(p)) points.push_back(std::move(p));
            int d = dim - 1;
            while (d >= 0 && ++idx[static_cast<size_t>(d)] == per_axis) {
                idx[static_cast<size_t>(d)] = 0;
                --d;
            }
            if (d < 0) done = true;
        }
    }

    if (points.empty())
        throw GeometryError("sampling found no points inside the regular domain");
    return points;
}

PointAnalysis analyze_point(const MapDefinition& map, const ComplexStructure& J,
                            const ParamMap& params, const Eigen::VectorXd& point,
                            const Tolerances& tols) {
    PointAnalysis pa;
    pa.point = point;
    try {
        pa.jacobian = jacobian(map, point, params);
        pa.vertical = vertical_space(pa.jacobian, tols.rank);
    } catch (const GeometryError& e) {
        pa.rank_deficient = true;
        pa.error = e.what();
        return pa;
    } catch (const EvalError& e) {
        pa.error = e.what();
        return pa;
    }
    pa.horizontal = horizontal_space(pa.vertical);
    pa.submersion = submersion_residual(pa.jacobian, pa.horizontal);
    pa.spectrum = kaehler_angle_spectrum(pa.horizontal, J);
    SplitResult split = split_D1_D2(pa.spectrum, tols.cluster);
    pa.D1 = split.D1;
    pa.D2 = split.D2;
    pa.theta = split.theta;
    pa.multiple_angles = split.multiple_angles;
    pa.cluster_width = split.cluster_width;
    pa.ops = structure_operators(pa.vertical, pa.D1, pa.D2, J, pa.theta);
    return pa;
}

namespace {

constexpr double kRightAngleTol = 1e-9;

bool theta_is_right_angle(double theta) {
    return M_PI_2 - theta < kRightAngleTol;
}

struct OpDerivatives {
    Eigen::MatrixXd DV, Dphi, Domega, DB, DC;
};

OpDerivatives op_derivatives(const ProjectorField& field, const Eigen::VectorXd& p,
                             const Eigen::MatrixXd& V, const Eigen::MatrixXd& H,
                             const Eigen::MatrixXd& J, const Eigen::VectorXd& dir,
                             double h) {
    OpDerivatives d;
    d.DV = projector_derivative(field, p, dir, h);
    const int m = static_cast<int>(V.rows());
    Eigen::MatrixXd DJ =
        field.has_varying_complex_structure()
            ? matrix_field_derivative(
                  [&field](const Eigen::VectorXd& q) { return field.J_at(q); }, p, dir, h)
            : Eigen::MatrixXd::Zero(m, m);
    Eigen::MatrixXd DH = -d.DV;
    d.Dphi = d.DV * J * V + V * DJ * V + V * J * d.DV;
    d.Domega = DH * J * V + H * DJ * V + H * J * d.DV;
    d.DB = d.DV * J * H + V * DJ * H + V * J * DH;
    d.DC = DH * J * H + H * DJ * H + H * J * DH;
    return d;
}

Eigen::MatrixXd d1_projector_field(const ProjectorField& field, const Eigen::VectorXd& q) {
    return field.operators_at(q).P;
}

Eigen::MatrixXd d2_projector_field(const ProjectorField& field, const Eigen::VectorXd& q) {
    return field.operators_at(q).Q;
}

}  // namespace

double IntegrabilityRecord::max() const {
    return std::max({tensor_A_max, bracket_condition, pair_condition, frobenius});
}

IntegrabilityRecord integrability_D1(const ProjectorField& field, const PointAnalysis& at) {
    IntegrabilityRecord rec;
    if (at.D1.dim() < 2) {
        rec.reason = "D1 has dimension < 2";
        return rec;
    }
    rec.applicable = true;
    const Eigen::VectorXd& p = at.point;
    const double h = field.fd_step(p);
    const int m = field.ambient_dim();
    const Eigen::MatrixXd I = Eigen::MatrixXd::Identity(m, m);
    const Eigen::MatrixXd& P = at.ops.P;
    const Eigen::MatrixXd& B = at.ops.B;
    const int k = at.D1.dim();

    std::vector<Eigen::MatrixXd> DP(static_cast<size_t>(k));
    for (int i = 0; i < k; ++i)
        DP[static_cast<size_t>(i)] = matrix_field_derivative(
            [&field](const Eigen::VectorXd& q) { return d1_projector_field(field, q); }, p,
            at.D1.columns.col(i), h);

    for (int i = 0; i < k; ++i) {
        for (int j = i + 1; j < k; ++j) {
            Eigen::VectorXd x = at.D1.columns.col(i);
            Eigen::VectorXd y = at.D1.columns.col(j);
            // Both orders: A need not alternate off the Riemannian case.
            rec.tensor_A_max =
                std::max({rec.tensor_A_max, tensor_A(field, p, x, y).norm(),
                          tensor_A(field, p, y, x).norm()});
            Eigen::VectorXd bracket = DP[static_cast<size_t>(i)] * y -
                                      DP[static_cast<size_t>(j)] * x;
            rec.bracket_condition = std::max(rec.bracket_condition, (B * bracket).norm());
            rec.frobenius = std::max(rec.frobenius, ((I - P) * bracket).norm());
        }
    }
    return rec;
}

IntegrabilityRecord integrability_D2(const ProjectorField& field, const PointAnalysis& at) {
    IntegrabilityRecord rec;
    if (at.D2.dim() < 2) {
        rec.reason = "D2 has dimension < 2";
        return rec;
    }
    rec.applicable = true;
    const Eigen::VectorXd& p = at.point;
    const double h = field.fd_step(p);
    const int m = field.ambient_dim();
    const Eigen::MatrixXd I = Eigen::MatrixXd::Identity(m, m);
    const Eigen::MatrixXd& P = at.ops.P;
    const Eigen::MatrixXd& Q = at.ops.Q;
    const Eigen::MatrixXd& B = at.ops.B;
    const Eigen::MatrixXd& C = at.ops.C;
    Eigen::MatrixXd V = at.vertical.dim() > 0
                            ? (at.vertical.columns * at.vertical.columns.transpose()).eval()
                            : Eigen::MatrixXd::Zero(m, m).eval();
    Eigen::MatrixXd H = I - V;
    const int k = at.D2.dim();

    std::vector<Eigen::MatrixXd> DQ(static_cast<size_t>(k));
    std::vector<Eigen::MatrixXd> DCQ(static_cast<size_t>(k));
    std::vector<Eigen::MatrixXd> AH(static_cast<size_t>(k));
    for (int i = 0; i < k; ++i) {
        Eigen::VectorXd x = at.D2.columns.col(i);
        DQ[static_cast<size_t>(i)] = matrix_field_derivative(
            [&field](const Eigen::VectorXd& q) { return d2_projector_field(field, q); }, p,
            x, h);
        DCQ[static_cast<size_t>(i)] = matrix_field_derivative(
            [&field](const Eigen::VectorXd& q) {
                StructureOperators o = field.operators_at(q);
                return (o.C * o.Q).eval();
            },
            p, x, h);
        AH[static_cast<size_t>(i)] =
            (H - V) * projector_derivative(field, p, x, h);
    }

    for (int i = 0; i < k; ++i) {
        for (int j = i + 1; j < k; ++j) {
            Eigen::VectorXd x = at.D2.columns.col(i);
            Eigen::VectorXd y = at.D2.columns.col(j);
            rec.tensor_A_max = std::max({rec.tensor_A_max,
                                         (AH[static_cast<size_t>(i)] * y).norm(),
                                         (AH[static_cast<size_t>(j)] * x).norm()});
            Eigen::VectorXd bracket = DQ[static_cast<size_t>(i)] * y -
                                      DQ[static_cast<size_t>(j)] * x;
            rec.bracket_condition =
                std::max(rec.bracket_condition, (P * (C * bracket)).norm());
            rec.frobenius = std::max(rec.frobenius, ((I - Q) * bracket).norm());

            Eigen::VectorXd pair = P * ((AH[static_cast<size_t>(i)] * (B * y) -
                                         AH[static_cast<size_t>(j)] * (B * x)) +
                                        H * (DCQ[static_cast<size_t>(i)] * y -
                                             DCQ[static_cast<size_t>(j)] * x));
            rec.pair_condition = std::max(rec.pair_condition, pair.norm());
        }
    }
    return rec;
}

FoliationRecord foliation_checks(const ProjectorField& field, const PointAnalysis& at) {
    FoliationRecord rec;
    const Eigen::VectorXd& p = at.point;
    const double h = field.fd_step(p);
    const int m = field.ambient_dim();
    const Eigen::MatrixXd I = Eigen::MatrixXd::Identity(m, m);
    Eigen::MatrixXd V = at.vertical.dim() > 0
                            ? (at.vertical.columns * at.vertical.columns.transpose()).eval()
                            : Eigen::MatrixXd::Zero(m, m).eval();
    Eigen::MatrixXd H = I - V;
    Eigen::MatrixXd J = field.J_at(p);
    const Eigen::MatrixXd& phi = at.ops.phi;
    const Eigen::MatrixXd& omega = at.ops.omega;
    const Eigen::MatrixXd& B = at.ops.B;
    const Eigen::MatrixXd& C = at.ops.C;
    const Eigen::MatrixXd& P = at.ops.P;
    const Eigen::MatrixXd& Q = at.ops.Q;

    // Fibers totally geodesic.
    if (at.vertical.dim() > 0) {
        rec.vertical_applicable = true;
        for (int i = 0; i < at.vertical.dim(); ++i) {
            Eigen::VectorXd x = at.vertical.columns.col(i);
            OpDerivatives d = op_derivatives(field, p, V, H, J, x, h);
            Eigen::MatrixXd T = (H - V) * d.DV;
            for (int j = 0; j < at.vertical.dim(); ++j) {
                Eigen::VectorXd y = at.vertical.columns.col(j);
                Eigen::VectorXd expr = omega * (V * (d.Dphi * y) + T * (omega * y)) +
                                       C * (T * (phi * y) + H * (d.Domega * y));
                rec.vertical = std::max(rec.vertical, expr.norm());
            }
        }
    }

    // Horizontal distribution totally geodesic.
    if (at.horizontal.dim() > 0) {
        rec.horizontal_applicable = true;
        for (int i = 0; i < at.horizontal.dim(); ++i) {
            Eigen::VectorXd z = at.horizontal.columns.col(i);
            OpDerivatives d = op_derivatives(field, p, V, H, J, z, h);
            Eigen::MatrixXd A = (H - V) * d.DV;
            for (int j = 0; j < at.horizontal.dim(); ++j) {
                Eigen::VectorXd w = at.horizontal.columns.col(j);
                Eigen::VectorXd expr = phi * (V * (d.DB * w) + A * (C * w)) +
                                       B * (A * (B * w) + H * (d.DC * w));
                rec.horizontal = std::max(rec.horizontal, expr.norm());
            }
        }
    }

    // D1 totally geodesic: both displayed conditions.
    if (at.D1.dim() > 0) {
        rec.d1_applicable = true;
        for (int i = 0; i < at.D1.dim(); ++i) {
            Eigen::VectorXd x = at.D1.columns.col(i);
            Eigen::MatrixXd AH = (H - V) * projector_derivative(field, p, x, h);
            Eigen::MatrixXd DJP = matrix_field_derivative(
                [&field](const Eigen::VectorXd& q) {
                    return (field.J_at(q) * d1_projector_field(field, q)).eval();
                },
                p, x, h);
            for (int j = 0; j < at.D1.dim(); ++j) {
                Eigen::VectorXd y = at.D1.columns.col(j);
                Eigen::VectorXd a_term = AH * (J * y);
                Eigen::VectorXd nabla_term = H * (DJP * y);
                Eigen::VectorXd c1 = phi * a_term + B * nabla_term;
                Eigen::VectorXd c2 = Q * (omega * a_term + C * nabla_term);
                rec.d1 = std::max({rec.d1, c1.norm(), c2.norm()});
            }
        }
    }

    // D2 totally geodesic: both displayed conditions.
    if (at.D2.dim() > 0) {
        rec.d2_applicable = true;
        for (int i = 0; i < at.D2.dim(); ++i) {
            Eigen::VectorXd x = at.D2.columns.col(i);
            Eigen::MatrixXd AH = (H - V) * projector_derivative(field, p, x, h);
            Eigen::MatrixXd DBQ = matrix_field_derivative(
                [&field](const Eigen::VectorXd& q) {
                    StructureOperators o = field.operators_at(q);
                    return (o.B * o.Q).eval();
                },
                p, x, h);
            Eigen::MatrixXd DCQ = matrix_field_derivative(
                [&field](const Eigen::VectorXd& q) {
                    StructureOperators o = field.operators_at(q);
                    return (o.C * o.Q).eval();
                },
                p, x, h);
            for (int j = 0; j < at.D2.dim(); ++j) {
                Eigen::VectorXd y = at.D2.columns.col(j);
                Eigen::VectorXd vert_part = V * (DBQ * y) + AH * (C * y);
                Eigen::VectorXd horiz_part = AH * (B * y) + H * (DCQ * y);
                Eigen::VectorXd e1 = phi * vert_part + B * horiz_part;
                Eigen::VectorXd e2 = P * (omega * vert_part + C * horiz_part);
                rec.d2 = std::max({rec.d2, e1.norm(), e2.norm()});
            }
        }
    }

    return rec;
}

bool TotallyGeodesicRecord::consistent(double tol) const {
    return (condition_max() <= tol) == (direct_max() <= tol);
}

double TotallyGeodesicRecord::condition_max() const {
    return std::max(condition_vertical, condition_mixed);
}

double TotallyGeodesicRecord::direct_max() const {
    return std::max(direct_vertical, direct_mixed);
}

TotallyGeodesicRecord totally_geodesic_map_check(const ProjectorField& field,
                                                 const PointAnalysis& at) {
    TotallyGeodesicRecord rec;
    const Eigen::VectorXd& p = at.point;
    const double h = field.fd_step(p);
    const int m = field.ambient_dim();
    const Eigen::MatrixXd I = Eigen::MatrixXd::Identity(m, m);
    Eigen::MatrixXd V = at.vertical.dim() > 0
                            ? (at.vertical.columns * at.vertical.columns.transpose()).eval()
                            : Eigen::MatrixXd::Zero(m, m).eval();
    Eigen::MatrixXd H = I - V;
    Eigen::MatrixXd J = field.J_at(p);
    const Eigen::MatrixXd& phi = at.ops.phi;
    const Eigen::MatrixXd& omega = at.ops.omega;
    const Eigen::MatrixXd& B = at.ops.B;
    const Eigen::MatrixXd& C = at.ops.C;

    for (int i = 0; i < at.vertical.dim(); ++i) {
        Eigen::VectorXd x = at.vertical.columns.col(i);
        OpDerivatives d = op_derivatives(field, p, V, H, J, x, h);
        Eigen::MatrixXd T = (H - V) * d.DV;
        for (int j = 0; j < at.vertical.dim(); ++j) {
            Eigen::VectorXd y = at.vertical.columns.col(j);
            Eigen::VectorXd expr = omega * (V * (d.Dphi * y) + T * (omega * y)) +
                                   C * (T * (phi * y) + H * (d.Domega * y));
            rec.condition_vertical = std::max(rec.condition_vertical, expr.norm());
            rec.direct_vertical =
                std::max(rec.direct_vertical,
                         directional_second(field.map(), p, field.params(), x, y).norm());
        }
        for (int j = 0; j < at.horizontal.dim(); ++j) {
            Eigen::VectorXd z = at.horizontal.columns.col(j);
            Eigen::VectorXd expr = omega * (V * (d.DB * z) + T * (C * z)) +
                                   C * (T * (B * z) + H * (d.DC * z));
            rec.condition_mixed = std::max(rec.condition_mixed, expr.norm());
            rec.direct_mixed =
                std::max(rec.direct_mixed,
                         directional_second(field.map(), p, field.params(), x, z).norm());
        }
    }
    return rec;
}

UmbilicalRecord umbilical_fiber_report(const ProjectorField& field, const PointAnalysis& at,
                                       const Tolerances& tols) {
    UmbilicalRecord rec;
    if (at.vertical.dim() == 0) return rec;
    rec.applicable = true;
    rec.umbilical = umbilical_residual(field, at.point);
    if (rec.umbilical >= tols.first_order) return rec;
    rec.containment_applicable = true;
    Eigen::VectorXd H_mean = mean_curvature(field, at.point);
    rec.mean_norm = H_mean.norm();
    if (at.D2.dim() == 0) {
        // With no slant part the mean curvature must vanish outright.
        rec.mean_out_of_D2 = rec.mean_norm;
    } else {
        rec.mean_out_of_D2 = (H_mean - at.ops.Q * H_mean).norm();
    }
    return rec;
}

namespace {

struct CheckSpec {
    const char* name;
    double Tolerances::*tol;
};

const std::vector<std::string>& check_names_impl() {
    static const std::vector<std::string> names = {
        "submersion",        "identities",          "c-square",
        "j-hat",             "parity",              "compatibility",
        "integrability-d1",  "integrability-d2",    "foliation-vertical",
        "foliation-horizontal", "foliation-d1",     "foliation-d2",
        "totally-geodesic-map", "umbilical-fibers", "mean-curvature-containment",
        "curvature"};
    return names;
}

double check_tolerance(const std::string& name, const Tolerances& t) {
    if (name == "submersion" || name == "identities" || name == "c-square" ||
        name == "j-hat")
        return t.exact;
    if (name == "parity") return 0.5;
    if (name == "compatibility") return t.compat;
    if (name == "mean-curvature-containment") return 1e-8;
    if (name == "curvature") return t.second_order;
    return t.first_order;
}

bool selected(const std::vector<std::string>& checks, const std::string& name) {
    return std::find(checks.begin(), checks.end(), name) != checks.end();
}

}  // namespace

const std::vector<std::string>& all_check_names() { return check_names_impl(); }

bool ClassificationReport::all_checks_pass() const {
    return std::all_of(checks.begin(), checks.end(),
                       [](const CheckResult& c) { return c.pass; });
}

const CheckResult* ClassificationReport::find_check(const std::string& name) const {
    for (const auto& c : checks)
        if (c.name == name) return &c;
    return nullptr;
}

ClassificationReport classify(const AnalysisTask& task, const Sampler& sampler,
                              const Tolerances& tols,
                              const std::vector<std::string>& checks, Parallelism mode) {
    for (const auto& name : checks)
        if (!selected(all_check_names(), name))
            throw GeometryError("unknown check '" + name + "'");

    ClassificationReport report;
    report.sampling = sampler;
    report.tols = tols;
    report.m = task.map.domain_dim();
    report.n = task.map.codomain_dim();

    std::vector<Eigen::VectorXd> points =
        sample_points(task.map.domain_dim(), task.domain, sampler);
    ProjectorField field(task.map, task.params, task.J, tols.rank, tols.cluster);

    auto kernel = [&](const Eigen::VectorXd& point) {
        PointAnalysis pa;
        try {
            pa = analyze_point(task.map, task.J, task.params, point, tols);
        } catch (const std::exception& e) {
            pa.point = point;
            pa.error = e.what();
            return pa;
        }
        if (pa.rank_deficient || !pa.error.empty()) return pa;
        try {
            auto& res = pa.residuals;
            if (selected(checks, "submersion")) res["submersion"] = pa.submersion;
            if (selected(checks, "identities"))
                res["identities"] = identity_residuals(pa.ops).max();
            if (selected(checks, "c-square") && !pa.multiple_angles)
                res["c-square"] = c_square_residual(pa.ops);
            if (selected(checks, "j-hat")) {
                bool defined = pa.D2.dim() == 0 ||
                               (pa.theta && !theta_is_right_angle(*pa.theta));
                if (defined) res["j-hat"] = j_hat_residual(pa.ops);
            }
            if (selected(checks, "compatibility"))
                res["compatibility"] = compatibility_residuals(field, point).max();
            if (selected(checks, "integrability-d1")) {
                IntegrabilityRecord rec = integrability_D1(field, pa);
                if (rec.applicable) res["integrability-d1"] = rec.max();
            }
            if (selected(checks, "integrability-d2")) {
                IntegrabilityRecord rec = integrability_D2(field, pa);
                if (rec.applicable) res["integrability-d2"] = rec.max();
            }
            bool want_foliation =
                selected(checks, "foliation-vertical") ||
                selected(checks, "foliation-horizontal") ||
                selected(checks, "foliation-d1") || selected(checks, "foliation-d2");
            if (want_foliation) {
                FoliationRecord rec = foliation_checks(field, pa);
                if (selected(checks, "foliation-vertical") && rec.vertical_applicable)
                    res["foliation-vertical"] = rec.vertical;
                if (selected(checks, "foliation-horizontal") && rec.horizontal_applicable)
                    res["foliation-horizontal"] = rec.horizontal;
                if (selected(checks, "foliation-d1") && rec.d1_applicable)
                    res["foliation-d1"] = rec.d1;
                if (selected(checks, "foliation-d2") && rec.d2_applicable)
                    res["foliation-d2"] = rec.d2;
            }
            if (selected(checks, "totally-geodesic-map")) {
                TotallyGeodesicRecord rec = totally_geodesic_map_check(field, pa);
                res["totally-geodesic-map"] = rec.condition_max();
                res["totally-geodesic-map-direct"] = rec.direct_max();
            }
            if (selected(checks, "umbilical-fibers") ||
                selected(checks, "mean-curvature-containment")) {
                UmbilicalRecord rec = umbilical_fiber_report(field, pa, tols);
                if (rec.applicable && selected(checks, "umbilical-fibers"))
                    res["umbilical-fibers"] = rec.umbilical;
                if (rec.containment_applicable &&
                    selected(checks, "mean-curvature-containment"))
                    res["mean-curvature-containment"] = rec.mean_out_of_D2;
            }
            if (selected(checks, "curvature")) {
                CurvatureReport rec = curvature_checks(field, point);
                double worst = -1.0;
                for (const CurvatureBalance* b :
                     {&rec.mu_plane, &rec.slant_plane, &rec.d1_plane})
                    if (b->applicable) worst = std::max(worst, b->imbalance);
                if (worst >= 0.0) res["curvature"] = worst;
            }
        } catch (const std::exception& e) {
            pa.error = e.what();
        }
        return pa;
    };

    std::vector<PointAnalysis> analyses(points.size());
    if (mode == Parallelism::OpenMP) {
#pragma omp parallel for schedule(dynamic)
        for (long i = 0; i < static_cast<long>(points.size()); ++i)
            analyses[static_cast<size_t>(i)] = kernel(points[static_cast<size_t>(i)]);
    } else {
        for (size_t i = 0; i < points.size(); ++i) analyses[i] = kernel(points[i]);
    }
    report.points = std::move(analyses);

    // Aggregate checks: max over the points where each check applied.
    for (const auto& name : all_check_names()) {
        if (!selected(checks, name) || name == "parity") continue;
        CheckResult cr;
        cr.name = name;
        cr.tolerance = check_tolerance(name, tols);
        for (const auto& pa : report.points) {
            auto it = pa.residuals.find(name);
            if (it == pa.residuals.end()) continue;
            cr.applicable = true;
            cr.max_residual = std::max(cr.max_residual, it->second);
        }
        cr.pass = !cr.applicable || cr.max_residual <= cr.tolerance;
        if (!cr.applicable) cr.note = "not applicable on this map";
        if (name == "totally-geodesic-map" && cr.applicable) {
            double direct = 0.0;
            for (const auto& pa : report.points) {
                auto it = pa.residuals.find("totally-geodesic-map-direct");
                if (it != pa.residuals.end()) direct = std::max(direct, it->second);
            }
            bool cond_zero = cr.max_residual <= cr.tolerance;
            bool direct_zero = direct <= cr.tolerance;
            if (cond_zero != direct_zero) {
                cr.pass = false;
                cr.note = "displayed conditions disagree with the direct second "
                          "fundamental form";
            }
        }
        report.checks.push_back(std::move(cr));
    }

    // Verdict reduction.
    std::vector<const PointAnalysis*> valid;
    for (const auto& pa : report.points)
        if (!pa.rank_deficient && pa.error.empty()) valid.push_back(&pa);

    if (valid.empty()) {
        report.verdict = Verdict::NotClassified;
        report.diagnostic = report.points.empty()
                                ? "no sample points"
                                : "every sampled point failed: " + report.points[0].error;
        return report;
    }

    report.dim_vertical = valid[0]->vertical.dim();
    report.dim_D1 = valid[0]->D1.dim();
    report.dim_D2 = valid[0]->D2.dim();

    bool dims_consistent = true;
    bool any_multiple = false;
    for (const auto* pa : valid) {
        dims_consistent = dims_consistent && pa->D1.dim() == report.dim_D1 &&
                          pa->D2.dim() == report.dim_D2;
        any_multiple = any_multiple || pa->multiple_angles;
    }
    if (any_multiple) {
        report.verdict = Verdict::NotClassified;
        report.diagnostic = "multiple Kaehler angles at sampled points";
    } else if (!dims_consistent) {
        report.verdict = Verdict::NotClassified;
        report.diagnostic = "distribution dimensions vary across the sample";
    } else if (report.dim_D2 == 0) {
        report.verdict = Verdict::VInvariant;
        if (report.dim_D1 >= 2)
            report.annotation =
                "D1 is the maximal J-invariant choice; smaller invariant subspaces "
                "would satisfy the decomposition as well";
    } else {
        double lo = *valid[0]->theta, hi = lo, sum = 0.0;
        for (const auto* pa : valid) {
            lo = std::min(lo, *pa->theta);
            hi = std::max(hi, *pa->theta);
            sum += *pa->theta;
        }
        report.theta_spread = hi - lo;
        if (report.theta_spread > tols.angle) {
            report.verdict = Verdict::NotClassified;
            report.diagnostic = "slant angle varies across the sample";
        } else {
            report.theta = sum / static_cast<double>(valid.size());
            bool right_angle = theta_is_right_angle(*report.theta);
            if (report.dim_D1 == 0) {
                report.verdict = Verdict::VSlant;
                if (right_angle)
                    report.annotation = "also v-semi-invariant (theta = pi/2)";
            } else if (right_angle) {
                report.verdict = Verdict::VSemiInvariant;
            } else {
                report.verdict = Verdict::VSemiSlant;
            }
        }
    }

    // Even-dimension consequence of a proper slant angle, stated checkably.
    if (selected(checks, "parity")) {
        CheckResult cr;
        cr.name = "parity";
        cr.tolerance = 0.5;
        if (report.theta && !theta_is_right_angle(*report.theta)) {
            cr.applicable = true;
            bool ok = report.n % 2 == 0 && report.dim_D2 % 2 == 0;
            cr.max_residual = ok ? 0.0 : 1.0;
            cr.pass = ok;
            if (!ok)
                cr.note = "theta < pi/2 with odd codomain or odd D2 dimension";
        } else {
            cr.note = "no proper slant angle";
            cr.pass = true;
        }
        report.checks.push_back(std::move(cr));
    }

    return report;
}

}  // namespace sublab

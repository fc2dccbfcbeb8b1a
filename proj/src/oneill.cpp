#include "sublab/oneill.hpp"

#include <algorithm>
#include <cmath>

namespace sublab {

Eigen::VectorXd vector_field_derivative(const VectorField& f, const Eigen::VectorXd& p,
                                        const Eigen::VectorXd& direction, double h) {
    const double scale = direction.norm();
    if (scale < 1e-14) {
        Eigen::VectorXd sample = f(p);
        return Eigen::VectorXd::Zero(sample.size());
    }
    Eigen::VectorXd u = direction / scale;
    auto central = [&](double step) {
        return ((f(p + step * u) - f(p - step * u)) / (2.0 * step)).eval();
    };
    Eigen::VectorXd coarse = central(h);
    Eigen::VectorXd fine = central(h / 2.0);
    return scale * (4.0 * fine - coarse) / 3.0;
}

Eigen::MatrixXd matrix_field_derivative(const MatrixField& f, const Eigen::VectorXd& p,
                                        const Eigen::VectorXd& direction, double h) {
    const double scale = direction.norm();
    if (scale < 1e-14) {
        Eigen::MatrixXd sample = f(p);
        return Eigen::MatrixXd::Zero(sample.rows(), sample.cols());
    }
    Eigen::VectorXd u = direction / scale;
    auto central = [&](double step) {
        return ((f(p + step * u) - f(p - step * u)) / (2.0 * step)).eval();
    };
    Eigen::MatrixXd coarse = central(h);
    Eigen::MatrixXd fine = central(h / 2.0);
    return scale * (4.0 * fine - coarse) / 3.0;
}

ProjectorField::ProjectorField(MapDefinition map, ParamMap params, ComplexStructure J,
                               double tol_rank, double tol_cluster)
    : map_(std::move(map)),
      params_(std::move(params)),
      J_(std::move(J)),
      tol_rank_(tol_rank),
      tol_cluster_(tol_cluster) {
    if (J_.dim() != map_.domain_dim())
        throw GeometryError("complex structure dimension does not match map domain");
}

Eigen::MatrixXd ProjectorField::jacobian_at(const Eigen::VectorXd& p) const {
    return jacobian(map_, p, params_);
}

Eigen::MatrixXd ProjectorField::vertical_projector(const Eigen::VectorXd& p) const {
    Frame v = vertical_space(jacobian_at(p), tol_rank_);
    if (v.dim() == 0) return Eigen::MatrixXd::Zero(ambient_dim(), ambient_dim());
    return v.columns * v.columns.transpose();
}

Eigen::MatrixXd ProjectorField::horizontal_projector(const Eigen::VectorXd& p) const {
    return Eigen::MatrixXd::Identity(ambient_dim(), ambient_dim()) - vertical_projector(p);
}

Eigen::MatrixXd ProjectorField::J_at(const Eigen::VectorXd& p) const {
    if (J_field_) return J_field_(p);
    return J_.J;
}

Eigen::MatrixXd ProjectorField::phi_at(const Eigen::VectorXd& p) const {
    Eigen::MatrixXd V = vertical_projector(p);
    return V * J_at(p) * V;
}

Eigen::MatrixXd ProjectorField::omega_at(const Eigen::VectorXd& p) const {
    Eigen::MatrixXd V = vertical_projector(p);
    Eigen::MatrixXd H = Eigen::MatrixXd::Identity(ambient_dim(), ambient_dim()) - V;
    return H * J_at(p) * V;
}

Eigen::MatrixXd ProjectorField::B_at(const Eigen::VectorXd& p) const {
    Eigen::MatrixXd V = vertical_projector(p);
    Eigen::MatrixXd H = Eigen::MatrixXd::Identity(ambient_dim(), ambient_dim()) - V;
    return V * J_at(p) * H;
}

Eigen::MatrixXd ProjectorField::C_at(const Eigen::VectorXd& p) const {
    Eigen::MatrixXd V = vertical_projector(p);
    Eigen::MatrixXd H = Eigen::MatrixXd::Identity(ambient_dim(), ambient_dim()) - V;
    return H * J_at(p) * H;
}

StructureOperators ProjectorField::operators_at(const Eigen::VectorXd& p) const {
    Frame vertical = vertical_space(jacobian_at(p), tol_rank_);
    Frame horizontal = horizontal_space(vertical);
    ComplexStructure Jp{J_at(p)};
    AngleSpectrum spec = kaehler_angle_spectrum(horizontal, Jp);
    SplitResult split = split_D1_D2(spec, tol_cluster_);
    return structure_operators(vertical, split.D1, split.D2, Jp, split.theta);
}

double ProjectorField::fd_step(const Eigen::VectorXd& p) const {
    return 1e-4 * std::max(1.0, p.norm());
}

Eigen::MatrixXd projector_derivative(const ProjectorField& field, const Eigen::VectorXd& p,
                                     const Eigen::VectorXd& direction, double h) {
    try {
        return matrix_field_derivative(
            [&field](const Eigen::VectorXd& q) { return field.vertical_projector(q); }, p,
            direction, h);
    } catch (const GeometryError& e) {
        throw GeometryError(std::string("projector field not smooth here: ") + e.what());
    }
}

Eigen::VectorXd tensor_T(const ProjectorField& field, const Eigen::VectorXd& p,
                         const Eigen::VectorXd& E, const Eigen::VectorXd& F) {
    Eigen::MatrixXd V = field.vertical_projector(p);
    const int m = field.ambient_dim();
    Eigen::MatrixXd H = Eigen::MatrixXd::Identity(m, m) - V;
    Eigen::VectorXd dir = V * E;
    if (dir.norm() < 1e-14) return Eigen::VectorXd::Zero(m);
    Eigen::MatrixXd DV = projector_derivative(field, p, dir, field.fd_step(p));
    return (H - V) * (DV * F);
}

Eigen::VectorXd tensor_A(const ProjectorField& field, const Eigen::VectorXd& p,
                         const Eigen::VectorXd& E, const Eigen::VectorXd& F) {
    Eigen::MatrixXd V = field.vertical_projector(p);
    const int m = field.ambient_dim();
    Eigen::MatrixXd H = Eigen::MatrixXd::Identity(m, m) - V;
    Eigen::VectorXd dir = H * E;
    if (dir.norm() < 1e-14) return Eigen::VectorXd::Zero(m);
    Eigen::MatrixXd DV = projector_derivative(field, p, dir, field.fd_step(p));
    return (H - V) * (DV * F);
}

Eigen::VectorXd hat_nabla(const ProjectorField& field, const Eigen::VectorXd& p,
                          const Eigen::VectorXd& X, const Eigen::VectorXd& Y) {
    Eigen::MatrixXd V = field.vertical_projector(p);
    Eigen::VectorXd dir = V * X;
    if (dir.norm() < 1e-14) return Eigen::VectorXd::Zero(field.ambient_dim());
    Eigen::MatrixXd DV = projector_derivative(field, p, dir, field.fd_step(p));
    return V * (DV * Y);
}

Eigen::VectorXd second_fundamental_form(const ProjectorField& field,
                                        const Eigen::VectorXd& p, const Eigen::VectorXd& X,
                                        const Eigen::VectorXd& Y) {
    return vector_field_derivative(
        [&field, &Y](const Eigen::VectorXd& q) { return (field.jacobian_at(q) * Y).eval(); },
        p, X, field.fd_step(p));
}

Eigen::VectorXd mean_curvature(const ProjectorField& field, const Eigen::VectorXd& p) {
    const int s = field.fiber_dim();
    if (s == 0) throw GeometryError("mean curvature undefined: zero-dimensional fiber");
    Frame vertical = vertical_space(field.jacobian_at(p), field.tol_rank());
    Eigen::VectorXd sum = Eigen::VectorXd::Zero(field.ambient_dim());
    for (int i = 0; i < vertical.dim(); ++i)
        sum += tensor_T(field, p, vertical.columns.col(i), vertical.columns.col(i));
    return sum / static_cast<double>(s);
}

double umbilical_residual(const ProjectorField& field, const Eigen::VectorXd& p) {
    Frame vertical = vertical_space(field.jacobian_at(p), field.tol_rank());
    if (vertical.dim() == 0)
        throw GeometryError("umbilical residual undefined: zero-dimensional fiber");
    Eigen::VectorXd H_mean = mean_curvature(field, p);
    double worst = 0.0;
    for (int i = 0; i < vertical.dim(); ++i) {
        for (int j = 0; j < vertical.dim(); ++j) {
            Eigen::VectorXd T =
                tensor_T(field, p, vertical.columns.col(i), vertical.columns.col(j));
            if (i == j) T -= H_mean;
            worst = std::max(worst, T.norm());
        }
    }
    return worst;
}

double CompatibilityResiduals::max() const {
    return std::max({vertical_a, vertical_b, horizontal_a, horizontal_b, mixed_a, mixed_b});
}

CompatibilityResiduals compatibility_residuals(const ProjectorField& field,
                                               const Eigen::VectorXd& p) {
    const int m = field.ambient_dim();
    const double h = field.fd_step(p);
    const Eigen::MatrixXd I = Eigen::MatrixXd::Identity(m, m);

    Frame vert = vertical_space(field.jacobian_at(p), field.tol_rank());
    Frame horiz = horizontal_space(vert);
    Eigen::MatrixXd V = vert.dim() > 0
                            ? (vert.columns * vert.columns.transpose()).eval()
                            : Eigen::MatrixXd::Zero(m, m).eval();
    Eigen::MatrixXd H = I - V;
    Eigen::MatrixXd J = field.J_at(p);
    Eigen::MatrixXd phi = V * J * V;
    Eigen::MatrixXd omega = H * J * V;
    Eigen::MatrixXd B = V * J * H;
    Eigen::MatrixXd C = H * J * H;

    // Derivatives of the operator fields along a frame direction, assembled
    // from DV and DJ by the product rule.
    struct OperatorDerivatives {
        Eigen::MatrixXd DV, Dphi, Domega, DB, DC;
    };
    auto derivatives_along = [&](const Eigen::VectorXd& dir) {
        OperatorDerivatives d;
        d.DV = projector_derivative(field, p, dir, h);
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
    };

    CompatibilityResiduals r;

    // Vertical pairs: the two equations splitting nabla_X (J Y).
    for (int i = 0; i < vert.dim(); ++i) {
        Eigen::VectorXd x = vert.columns.col(i);
        OperatorDerivatives d = derivatives_along(x);
        Eigen::MatrixXd TV = (H - V) * d.DV;  // tensor T with first slot x
        for (int j = 0; j < vert.dim(); ++j) {
            Eigen::VectorXd y = vert.columns.col(j);
            Eigen::VectorXd hat_xy = V * (d.DV * y);
            Eigen::VectorXd T_xy = TV * y;
            Eigen::VectorXd lhs_a = V * (d.Dphi * y) + TV * (omega * y);
            Eigen::VectorXd rhs_a = phi * hat_xy + B * T_xy;
            Eigen::VectorXd lhs_b = TV * (phi * y) + H * (d.Domega * y);
            Eigen::VectorXd rhs_b = omega * hat_xy + C * T_xy;
            r.vertical_a = std::max(r.vertical_a, (lhs_a - rhs_a).norm());
            r.vertical_b = std::max(r.vertical_b, (lhs_b - rhs_b).norm());
        }
    }

    // Horizontal pairs: constant extension of the second slot, so the ambient
    // derivative of the bare field drops out.
    for (int i = 0; i < horiz.dim(); ++i) {
        Eigen::VectorXd z = horiz.columns.col(i);
        OperatorDerivatives d = derivatives_along(z);
        Eigen::MatrixXd AH = (H - V) * d.DV;
        for (int j = 0; j < horiz.dim(); ++j) {
            Eigen::VectorXd w = horiz.columns.col(j);
            Eigen::VectorXd A_zw = AH * w;
            Eigen::VectorXd lhs_a = V * (d.DB * w) + AH * (C * w);
            Eigen::VectorXd rhs_a = phi * A_zw;
            Eigen::VectorXd lhs_b = AH * (B * w) + H * (d.DC * w);
            Eigen::VectorXd rhs_b = omega * A_zw;
            r.horizontal_a = std::max(r.horizontal_a, (lhs_a - rhs_a).norm());
            r.horizontal_b = std::max(r.horizontal_b, (lhs_b - rhs_b).norm());
        }
    }

    // Mixed pairs: vertical first slot, horizontal second slot.
    for (int i = 0; i < vert.dim(); ++i) {
        Eigen::VectorXd x = vert.columns.col(i);
        OperatorDerivatives d = derivatives_along(x);
        Eigen::MatrixXd TV = (H - V) * d.DV;
        for (int j = 0; j < horiz.dim(); ++j) {
            Eigen::VectorXd z = horiz.columns.col(j);
            Eigen::VectorXd T_xz = TV * z;
            Eigen::VectorXd lhs_a = V * (d.DB * z) + TV * (C * z);
            Eigen::VectorXd rhs_a = phi * T_xz;
            Eigen::VectorXd lhs_b = TV * (B * z) + H * (d.DC * z);
            Eigen::VectorXd rhs_b = omega * T_xz;
            r.mixed_a = std::max(r.mixed_a, (lhs_a - rhs_a).norm());
            r.mixed_b = std::max(r.mixed_b, (lhs_b - rhs_b).norm());
        }
    }

    return r;
}

namespace {

Eigen::MatrixXd mu_projector_at(const ProjectorField& field, const Eigen::VectorXd& q) {
    StructureOperators ops = field.operators_at(q);
    if (ops.mu.dim() == 0)
        return Eigen::MatrixXd::Zero(field.ambient_dim(), field.ambient_dim());
    return ops.mu.columns * ops.mu.columns.transpose();
}

double contains_defect(const Eigen::MatrixXd& projector, const Eigen::VectorXd& v) {
    return (v - projector * v).norm();
}

}  // namespace

CurvatureBalance curvature_check(const ProjectorField& field, const Eigen::VectorXd& p,
                                 CurvaturePlane plane, std::optional<Eigen::VectorXd> X) {
    CurvatureBalance out;
    StructureOperators ops = field.operators_at(p);
    const double h = field.fd_step(p);
    const double tol = 1e-6;

    switch (plane) {
        case CurvaturePlane::Mu: {
            if (ops.mu.dim() < 2) {
                out.reason = "mu has dimension < 2";
                return out;
            }
            Eigen::VectorXd x = X ? *X : Eigen::VectorXd(ops.mu.columns.col(0));
            x.normalize();
            Eigen::MatrixXd Pmu = ops.mu.columns * ops.mu.columns.transpose();
            if (contains_defect(Pmu, x) > tol)
                throw GeometryError("plane vector does not lie in mu");
            Eigen::VectorXd jx = ops.J * x;
            if (contains_defect(Pmu, jx) > tol)
                throw GeometryError("plane span{X, JX} does not lie in mu");

            Eigen::VectorXd T_xx = tensor_T(field, p, x, x);
            Eigen::VectorXd T_xjx = tensor_T(field, p, x, jx);
            Eigen::VectorXd T_jxjx = tensor_T(field, p, jx, jx);
            // Fiber sectional curvature through the Gauss equation (flat ambient).
            out.fiber_curvature = T_xx.dot(T_jxjx) - T_xjx.squaredNorm();

            // Bracket of the mu-projected extensions of X and JX.
            auto x_field = [&field, x](const Eigen::VectorXd& q) {
                return (mu_projector_at(field, q) * x).eval();
            };
            auto jx_field = [&field, x](const Eigen::VectorXd& q) {
                return (field.J_at(q) * (mu_projector_at(field, q) * x)).eval();
            };
            Eigen::VectorXd bracket = vector_field_derivative(x_field, p, jx, h) -
                                      vector_field_derivative(jx_field, p, x, h);
            double g_term = T_xx.dot(ops.J * bracket);

            double rhs = out.fiber_curvature + T_xx.squaredNorm() - T_xjx.squaredNorm() -
                         g_term;
            out.imbalance = std::abs(rhs);  // ambient K(P) = 0
            out.applicable = true;
            return out;
        }
        case CurvaturePlane::SlantPair: {
            if (ops.D2.dim() == 0) {
                out.reason = "D2 is empty";
                return out;
            }
            Eigen::VectorXd x = X ? *X : Eigen::VectorXd(ops.D2.columns.col(0));
            x.normalize();
            if (contains_defect(ops.Q, x) > tol)
                throw GeometryError("plane vector does not lie in D2");
            Eigen::VectorXd bx = ops.B * x;
            Eigen::VectorXd cx = ops.C * x;

            // (nabla_X A)(X, CX): finite difference of the tensor field with
            // constant transport of the arguments.
            auto A_field = [&field, x, cx](const Eigen::VectorXd& q) {
                return tensor_A(field, q, x, cx);
            };
            Eigen::VectorXd DA = vector_field_derivative(A_field, p, x, 10.0 * h);

            double middle = DA.dot(bx) +
                            tensor_A(field, p, x, cx).dot(tensor_T(field, p, bx, x)) -
                            tensor_A(field, p, cx, x).dot(tensor_T(field, p, bx, x)) -
                            tensor_A(field, p, x, x).dot(tensor_T(field, p, bx, cx));
            // All ambient sectional curvatures vanish on flat space, so the
            // sin^2/cos^2 terms drop and the middle block must balance alone.
            out.imbalance = std::abs(2.0 * middle);
            out.applicable = true;
            return out;
        }
        case CurvaturePlane::D1: {
            if (ops.D1.dim() < 2) {
                out.reason = "D1 has dimension < 2";
                return out;
            }
            Eigen::VectorXd x = X ? *X : Eigen::VectorXd(ops.D1.columns.col(0));
            x.normalize();
            if (contains_defect(ops.P, x) > tol)
                throw GeometryError("plane vector does not lie in D1");
            if (contains_defect(ops.P, (ops.J * x).eval()) > tol)
                throw GeometryError("plane span{X, JX} does not lie in D1");
            auto x_field = [&field, x](const Eigen::VectorXd& q) {
                StructureOperators o = field.operators_at(q);
                return (o.P * x).eval();
            };
            Eigen::VectorXd nabla_xx = vector_field_derivative(x_field, p, x, h);
            Eigen::MatrixXd V = field.vertical_projector(p);
            double term = (V * (ops.J * nabla_xx)).squaredNorm();
            // K(P) = K_*(P) - 3 |V J nabla_X X|^2 with both curvatures zero.
            out.imbalance = 3.0 * term;
            out.applicable = true;
            return out;
        }
    }
    return out;
}

CurvatureReport curvature_checks(const ProjectorField& field, const Eigen::VectorXd& p) {
    CurvatureReport report;
    report.mu_plane = curvature_check(field, p, CurvaturePlane::Mu);
    report.slant_plane = curvature_check(field, p, CurvaturePlane::SlantPair);
    report.d1_plane = curvature_check(field, p, CurvaturePlane::D1);
    return report;
}

}  // namespace sublab

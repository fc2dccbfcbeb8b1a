#include "sublab/structure.hpp"

#include <algorithm>
#include <cmath>

namespace sublab {

namespace {

double span_equality_defect(const Frame& image, const Frame& target) {
    if (image.dim() == 0 && target.dim() == 0) return 0.0;
    if (image.dim() != target.dim()) return 1.0;
    Eigen::VectorXd cosines = principal_angles(image, target);
    double worst = 0.0;
    for (int i = 0; i < cosines.size(); ++i)
        worst = std::max(worst, 1.0 - cosines(i));
    return worst;
}

}  // namespace

StructureOperators structure_operators(const Frame& vertical, const Frame& D1,
                                       const Frame& D2, const ComplexStructure& J,
                                       std::optional<double> theta) {
    const int m = J.dim();
    const double tol = 1e-8;
    auto check_orthogonal = [&](const Frame& a, const Frame& b, const char* what) {
        if (a.dim() == 0 || b.dim() == 0) return;
        if ((a.columns.transpose() * b.columns).cwiseAbs().maxCoeff() > tol)
            throw GeometryError(std::string("frames are not orthogonal: ") + what);
    };
    check_orthogonal(vertical, D1, "vertical vs D1");
    check_orthogonal(vertical, D2, "vertical vs D2");
    check_orthogonal(D1, D2, "D1 vs D2");
    if (vertical.dim() + D1.dim() + D2.dim() != m)
        throw GeometryError("vertical, D1, and D2 do not fill the ambient space");

    StructureOperators ops;
    ops.vertical = vertical;
    ops.D1 = D1;
    ops.D2 = D2;
    ops.theta = theta;
    ops.J = J.J;

    Eigen::MatrixXd horiz(m, D1.dim() + D2.dim());
    horiz << D1.columns, D2.columns;
    ops.horizontal = Frame(horiz);

    Eigen::MatrixXd Pv = vertical.dim() > 0
                             ? (vertical.columns * vertical.columns.transpose()).eval()
                             : Eigen::MatrixXd::Zero(m, m).eval();
    ops.P = D1.dim() > 0 ? (D1.columns * D1.columns.transpose()).eval()
                         : Eigen::MatrixXd::Zero(m, m).eval();
    ops.Q = D2.dim() > 0 ? (D2.columns * D2.columns.transpose()).eval()
                         : Eigen::MatrixXd::Zero(m, m).eval();
    Eigen::MatrixXd Ph = ops.P + ops.Q;

    ops.phi = Pv * J.J * Pv;
    ops.omega = Ph * J.J * Pv;
    ops.B = Pv * J.J * Ph;
    ops.C = Ph * J.J * Ph;

    Frame BD2 = orthonormal_span(ops.B * D2.columns);
    ops.mu = complement_within(BD2, vertical);
    return ops;
}

double IdentityResiduals::max() const {
    return std::max({phi_sq_plus_B_omega, C_sq_plus_omega_B, omega_phi_plus_C_omega,
                     B_C_plus_phi_B, C_D1_equals_D1, B_on_D1, C_D2_within_D2,
                     omega_ker_equals_D2, ker_splits, mu_J_invariant});
}

IdentityResiduals identity_residuals(const StructureOperators& ops) {
    const int m = ops.ambient_dim();
    const Eigen::MatrixXd I = Eigen::MatrixXd::Identity(m, m);
    const Eigen::MatrixXd& V = ops.vertical.columns;
    const Eigen::MatrixXd& H = ops.horizontal.columns;

    IdentityResiduals r;
    if (ops.vertical.dim() > 0) {
        r.phi_sq_plus_B_omega = ((ops.phi * ops.phi + ops.B * ops.omega + I) * V).norm();
        r.omega_phi_plus_C_omega = ((ops.omega * ops.phi + ops.C * ops.omega) * V).norm();
    }
    if (ops.horizontal.dim() > 0) {
        r.C_sq_plus_omega_B = ((ops.C * ops.C + ops.omega * ops.B + I) * H).norm();
        r.B_C_plus_phi_B = ((ops.B * ops.C + ops.phi * ops.B) * H).norm();
    }
    if (ops.D1.dim() > 0) {
        Frame CD1 = orthonormal_span(ops.C * ops.D1.columns);
        r.C_D1_equals_D1 = span_equality_defect(CD1, ops.D1);
        r.B_on_D1 = (ops.B * ops.D1.columns).norm();
    }
    if (ops.D2.dim() > 0) {
        r.C_D2_within_D2 = ((I - ops.Q) * ops.C * ops.D2.columns).norm();
    }

    // omega maps the vertical space onto D2: containment plus span equality.
    Frame omega_image = orthonormal_span(ops.omega * V);
    double containment =
        ops.vertical.dim() > 0 ? ((I - ops.Q) * ops.omega * V).norm() : 0.0;
    r.omega_ker_equals_D2 = containment + span_equality_defect(omega_image, ops.D2);

    // vertical = B D2 (+) mu with the two summands orthogonal.
    Frame BD2 = orthonormal_span(ops.B * ops.D2.columns);
    double dim_gap =
        std::abs(BD2.dim() + ops.mu.dim() - ops.vertical.dim()) > 0 ? 1.0 : 0.0;
    double overlap = 0.0;
    Eigen::VectorXd cross = principal_angles(BD2, ops.mu);
    for (int i = 0; i < cross.size(); ++i) overlap = std::max(overlap, cross(i));
    r.ker_splits = dim_gap + overlap;

    if (ops.mu.dim() > 0) {
        Frame Jmu = orthonormal_span(ops.J * ops.mu.columns);
        r.mu_J_invariant = span_equality_defect(Jmu, ops.mu);
    }
    return r;
}

double c_square_residual(const StructureOperators& ops) {
    if (ops.D2.dim() == 0) return 0.0;
    if (!ops.theta)
        throw GeometryError("c_square_residual requires a slant angle");
    const double c2 = std::cos(*ops.theta) * std::cos(*ops.theta);
    const int m = ops.ambient_dim();
    return ((ops.C * ops.C + c2 * Eigen::MatrixXd::Identity(m, m)) * ops.D2.columns)
        .norm();
}

Eigen::MatrixXd j_hat(const StructureOperators& ops) {
    if (ops.D2.dim() == 0) return ops.J * ops.P;
    if (!ops.theta)
        throw GeometryError("j_hat requires a slant angle");
    const double c = std::cos(*ops.theta);
    if (c < 1e-9)
        throw GeometryError("j_hat undefined at theta = pi/2");
    return ops.J * ops.P + (1.0 / c) * ops.C * ops.Q;
}

double j_hat_residual(const StructureOperators& ops) {
    if (ops.horizontal.dim() == 0) return 0.0;
    Eigen::MatrixXd Jh = j_hat(ops);
    const int m = ops.ambient_dim();
    return ((Jh * Jh + Eigen::MatrixXd::Identity(m, m)) * ops.horizontal.columns).norm();
}

}  // namespace sublab

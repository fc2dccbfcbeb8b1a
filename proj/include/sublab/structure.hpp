#pragma once

#include <Eigen/Dense>
#include <optional>

#include "sublab/subspace.hpp"

namespace sublab {

// Pointwise m x m realizations of the decomposition operators. Each operator
// is padded with zeros outside its domain subspace so that compositions and
// residuals are plain matrix algebra.
struct StructureOperators {
    Frame vertical;
    Frame horizontal;
    Frame D1;
    Frame D2;
    Frame mu;  // orthogonal complement of B D2 inside the vertical space

    Eigen::MatrixXd P;      // projector onto D1
    Eigen::MatrixXd Q;      // projector onto D2
    Eigen::MatrixXd phi;    // vertical part of J on the vertical space
    Eigen::MatrixXd omega;  // horizontal part of J on the vertical space
    Eigen::MatrixXd B;      // vertical part of J on the horizontal space
    Eigen::MatrixXd C;      // horizontal part of J on the horizontal space

    std::optional<double> theta;
    Eigen::MatrixXd J;  // the constant complex structure the operators came from

    int ambient_dim() const { return static_cast<int>(P.rows()); }
};

StructureOperators structure_operators(const Frame& vertical, const Frame& D1,
                                       const Frame& D2, const ComplexStructure& J,
                                       std::optional<double> theta);

// One residual per algebraic identity, each evaluated on the subspace where
// the identity is asserted.
struct IdentityResiduals {
    double phi_sq_plus_B_omega = 0.0;   // (phi^2 + B omega + id) on the vertical space
    double C_sq_plus_omega_B = 0.0;     // (C^2 + omega B + id) on the horizontal space
    double omega_phi_plus_C_omega = 0.0;
    double B_C_plus_phi_B = 0.0;
    double C_D1_equals_D1 = 0.0;        // principal-angle defect of C(D1) against D1
    double B_on_D1 = 0.0;               // ||B D1||
    double C_D2_within_D2 = 0.0;        // component of C(D2) outside D2
    double omega_ker_equals_D2 = 0.0;   // omega(vertical) = D2, containment + span defect
    double ker_splits = 0.0;            // vertical = B D2 (+) mu, orthogonally
    double mu_J_invariant = 0.0;        // principal-angle defect of J(mu) against mu

    double max() const;
};

IdentityResiduals identity_residuals(const StructureOperators& ops);

// ||(C^2 + cos^2(theta) I) restricted to D2||_F. Zero trivially when D2 is
// empty; throws GeometryError when D2 is nonempty but theta is absent.
double c_square_residual(const StructureOperators& ops);

// J-hat = J P + (1/cos theta) C Q on the horizontal space. When D2 is empty
// this degenerates to J P. Throws GeometryError at theta = pi/2.
Eigen::MatrixXd j_hat(const StructureOperators& ops);

// ||(j_hat^2 + id) restricted to the horizontal space||_F.
double j_hat_residual(const StructureOperators& ops);

}  // namespace sublab

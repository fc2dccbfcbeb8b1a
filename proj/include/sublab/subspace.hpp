#pragma once

#include <Eigen/Dense>
#include <optional>

#include "sublab/errors.hpp"

namespace sublab {

// k orthonormal vectors in R^m, stored as columns. k may be zero.
struct Frame {
    Eigen::MatrixXd columns;

    Frame() = default;
    explicit Frame(Eigen::MatrixXd cols) : columns(std::move(cols)) {}
    static Frame empty(int ambient_dim) { return Frame(Eigen::MatrixXd(ambient_dim, 0)); }
    static Frame identity(int ambient_dim) {
        return Frame(Eigen::MatrixXd::Identity(ambient_dim, ambient_dim));
    }

    int ambient_dim() const { return static_cast<int>(columns.rows()); }
    int dim() const { return static_cast<int>(columns.cols()); }
    // Frobenius deviation of columns^T columns from the identity.
    double orthonormality_defect() const;
};

// Constant orthogonal complex structure J on R^m with J^2 = -I.
struct ComplexStructure {
    Eigen::MatrixXd J;

    int dim() const { return static_cast<int>(J.rows()); }

    // J e_{2i-1} = e_{2i}, J e_{2i} = -e_{2i-1}.
    static ComplexStructure standard(int m);
    // Validates orthogonality and J^2 = -I within 1e-10; throws GeometryError.
    static ComplexStructure from_matrix(Eigen::MatrixXd J);
};

// Eigen-data of -(Pi_H J Pi_H)^2 on the horizontal space: sigma_sq descending
// in [0,1], eigenvectors lifted back to R^m as columns of `frames`.
struct AngleSpectrum {
    Eigen::VectorXd sigma_sq;
    Eigen::MatrixXd frames;
};

struct SplitResult {
    Frame D1;
    Frame D2;
    std::optional<double> theta;  // in (0, pi/2]; absent when D2 empty or ill-clustered
    bool multiple_angles = false;
    double cluster_width = 0.0;   // spread of the sigma^2 values assigned to D2
};

// Orthonormal basis of the null space of jac. Rank cutoff is
// tol_rank * (largest singular value). Throws GeometryError when the row rank
// falls short of the codomain dimension.
Frame vertical_space(const Eigen::MatrixXd& jac, double tol_rank = 1e-8);

// Orthonormal basis of the orthogonal complement of `vertical`.
Frame horizontal_space(const Frame& vertical);

// ||(Jac H)^T (Jac H) - I||_F; zero iff the differential is an isometry on the
// horizontal space.
double submersion_residual(const Eigen::MatrixXd& jac, const Frame& horizontal);

AngleSpectrum kaehler_angle_spectrum(const Frame& horizontal, const ComplexStructure& J);

// D1 collects eigenvectors with sigma^2 within tol_cluster of 1; the rest must
// form one cluster, whose common value gives theta = arccos(sigma).
SplitResult split_D1_D2(const AngleSpectrum& spectrum, double tol_cluster = 1e-6);

// Descending cosines of the principal angles between the two spans.
Eigen::VectorXd principal_angles(const Frame& a, const Frame& b);

// Rank-revealing orthonormalization of a column span (SVD-based).
Frame orthonormal_span(const Eigen::MatrixXd& vectors, double tol = 1e-10);

// Orthonormal basis of the part of `whole` orthogonal to `sub`.
Frame complement_within(const Frame& sub, const Frame& whole, double tol = 1e-10);

}  // namespace sublab

#include "sublab/subspace.hpp"

#include <algorithm>
#include <cmath>

namespace sublab {

double Frame::orthonormality_defect() const {
    if (dim() == 0) return 0.0;
    Eigen::MatrixXd g = columns.transpose() * columns;
    return (g - Eigen::MatrixXd::Identity(dim(), dim())).norm();
}

ComplexStructure ComplexStructure::standard(int m) {
    if (m <= 0 || m % 2 != 0)
        throw GeometryError("standard complex structure requires even dimension, got " +
                            std::to_string(m));
    Eigen::MatrixXd J = Eigen::MatrixXd::Zero(m, m);
    for (int i = 0; i < m / 2; ++i) {
        J(2 * i + 1, 2 * i) = 1.0;
        J(2 * i, 2 * i + 1) = -1.0;
    }
    return ComplexStructure{std::move(J)};
}

ComplexStructure ComplexStructure::from_matrix(Eigen::MatrixXd J) {
    if (J.rows() != J.cols()) throw GeometryError("complex structure must be square");
    const int m = static_cast<int>(J.rows());
    const Eigen::MatrixXd I = Eigen::MatrixXd::Identity(m, m);
    if ((J.transpose() * J - I).norm() > 1e-10)
        throw GeometryError("complex structure is not orthogonal");
    if ((J * J + I).norm() > 1e-10)
        throw GeometryError("complex structure does not square to -I");
    return ComplexStructure{std::move(J)};
}

Frame vertical_space(const Eigen::MatrixXd& jac, double tol_rank) {
    const int n = static_cast<int>(jac.rows());
    const int m = static_cast<int>(jac.cols());
    Eigen::JacobiSVD<Eigen::MatrixXd> svd(jac, Eigen::ComputeFullV);
    const Eigen::VectorXd& sv = svd.singularValues();
    const double cutoff = sv.size() > 0 ? tol_rank * sv(0) : 0.0;
    int rank = 0;
    for (int i = 0; i < sv.size(); ++i)
        if (sv(i) > cutoff) ++rank;
    if (rank < n)
        throw GeometryError("rank-deficient differential: rank " + std::to_string(rank) +
                            " < codomain dimension " + std::to_string(n));
    return Frame(svd.matrixV().rightCols(m - rank));
}

Frame horizontal_space(const Frame& vertical) {
    const int m = vertical.ambient_dim();
    const int k = vertical.dim();
    if (k == 0) return Frame::identity(m);
    Eigen::JacobiSVD<Eigen::MatrixXd> svd(vertical.columns.transpose(), Eigen::ComputeFullV);
    return Frame(svd.matrixV().rightCols(m - k));
}

double submersion_residual(const Eigen::MatrixXd& jac, const Frame& horizontal) {
    const int k = horizontal.dim();
    if (k == 0) return 0.0;
    Eigen::MatrixXd g = (jac * horizontal.columns).transpose() * (jac * horizontal.columns);
    return (g - Eigen::MatrixXd::Identity(k, k)).norm();
}

AngleSpectrum kaehler_angle_spectrum(const Frame& horizontal, const ComplexStructure& J) {
    const int k = horizontal.dim();
    AngleSpectrum spec;
    if (k == 0) {
        spec.sigma_sq = Eigen::VectorXd(0);
        spec.frames = Eigen::MatrixXd(horizontal.ambient_dim(), 0);
        return spec;
    }
    Eigen::MatrixXd M = horizontal.columns.transpose() * J.J * horizontal.columns;
    // The right singular vectors of M diagonalize -M^2 = M^T M; taking sigma
    // from the SVD keeps full absolute accuracy near sigma = 0, where squaring
    // first would cost half the digits.
    Eigen::JacobiSVD<Eigen::MatrixXd> svd(M, Eigen::ComputeFullV);
    spec.sigma_sq = Eigen::VectorXd(k);
    spec.frames = Eigen::MatrixXd(horizontal.ambient_dim(), k);
    for (int i = 0; i < k; ++i) {
        double s = std::clamp(svd.singularValues()(i), 0.0, 1.0);  // descending
        spec.sigma_sq(i) = s * s;
        spec.frames.col(i) = horizontal.columns * svd.matrixV().col(i);
    }
    return spec;
}

SplitResult split_D1_D2(const AngleSpectrum& spectrum, double tol_cluster) {
    const int k = static_cast<int>(spectrum.sigma_sq.size());
    const int m = static_cast<int>(spectrum.frames.rows());
    int d1 = 0;
    while (d1 < k && spectrum.sigma_sq(d1) >= 1.0 - tol_cluster) ++d1;

    SplitResult out;
    out.D1 = Frame(spectrum.frames.leftCols(d1));
    out.D2 = Frame(spectrum.frames.rightCols(k - d1));
    if (d1 == k) return out;  // D2 empty: fully invariant horizontal space

    const double hi = spectrum.sigma_sq(d1);
    const double lo = spectrum.sigma_sq(k - 1);
    out.cluster_width = hi - lo;
    if (out.cluster_width > tol_cluster) {
        out.multiple_angles = true;
        return out;
    }
    double mean = spectrum.sigma_sq.segment(d1, k - d1).mean();
    out.theta = std::acos(std::sqrt(std::clamp(mean, 0.0, 1.0)));
    return out;
}

Eigen::VectorXd principal_angles(const Frame& a, const Frame& b) {
    if (a.ambient_dim() != b.ambient_dim())
        throw GeometryError("principal angles require a common ambient space");
    const int k = std::min(a.dim(), b.dim());
    if (k == 0) return Eigen::VectorXd(0);
    Eigen::JacobiSVD<Eigen::MatrixXd> svd(a.columns.transpose() * b.columns);
    Eigen::VectorXd cosines = svd.singularValues().head(k);
    for (int i = 0; i < k; ++i) cosines(i) = std::clamp(cosines(i), 0.0, 1.0);
    return cosines;
}

Frame orthonormal_span(const Eigen::MatrixXd& vectors, double tol) {
    if (vectors.cols() == 0) return Frame::empty(static_cast<int>(vectors.rows()));
    Eigen::JacobiSVD<Eigen::MatrixXd> svd(vectors, Eigen::ComputeThinU);
    const Eigen::VectorXd& sv = svd.singularValues();
    const double cutoff = sv.size() > 0 ? std::max(tol * sv(0), tol) : 0.0;
    int rank = 0;
    for (int i = 0; i < sv.size(); ++i)
        if (sv(i) > cutoff) ++rank;
    return Frame(svd.matrixU().leftCols(rank));
}

Frame complement_within(const Frame& sub, const Frame& whole, double tol) {
    if (sub.dim() == 0) return whole;
    Eigen::MatrixXd projected =
        whole.columns - sub.columns * (sub.columns.transpose() * whole.columns);
    Frame out = orthonormal_span(projected, tol);
    // The complement has codimension sub.dim() when sub lies inside whole.
    const int expected = whole.dim() - sub.dim();
    if (out.dim() > expected) out = Frame(out.columns.leftCols(expected));
    return out;
}

}  // namespace sublab

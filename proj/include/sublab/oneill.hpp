#pragma once

#include <Eigen/Dense>
#include <functional>
#include <optional>
#include <string>

#include "sublab/expr.hpp"
#include "sublab/structure.hpp"

namespace sublab {

using VectorField = std::function<Eigen::VectorXd(const Eigen::VectorXd&)>;
using MatrixField = std::function<Eigen::MatrixXd(const Eigen::VectorXd&)>;

// Central difference along `direction` with one Richardson step: O(h^4).
Eigen::VectorXd vector_field_derivative(const VectorField& f, const Eigen::VectorXd& p,
                                        const Eigen::VectorXd& direction, double h);
Eigen::MatrixXd matrix_field_derivative(const MatrixField& f, const Eigen::VectorXd& p,
                                        const Eigen::VectorXd& direction, double h);

// The vertical/horizontal projector fields of a submersion on flat R^m, with
// the ambient connection realized as the coordinate directional derivative.
// All evaluations are pure; instances are safe to share across threads.
class ProjectorField {
  public:
    ProjectorField(MapDefinition map, ParamMap params, ComplexStructure J,
                   double tol_rank = 1e-8, double tol_cluster = 1e-6);

    int ambient_dim() const { return map_.domain_dim(); }
    int target_dim() const { return map_.codomain_dim(); }
    int fiber_dim() const { return map_.domain_dim() - map_.codomain_dim(); }
    const MapDefinition& map() const { return map_; }
    const ParamMap& params() const { return params_; }
    double tol_rank() const { return tol_rank_; }
    double tol_cluster() const { return tol_cluster_; }

    // Point-dependent almost complex structure hook; used by tests that probe
    // the parallel-J hypothesis. Default: the constant J.
    void set_complex_structure_field(MatrixField J_field) { J_field_ = std::move(J_field); }
    bool has_varying_complex_structure() const { return static_cast<bool>(J_field_); }

    Eigen::MatrixXd jacobian_at(const Eigen::VectorXd& p) const;
    Eigen::MatrixXd vertical_projector(const Eigen::VectorXd& p) const;
    Eigen::MatrixXd horizontal_projector(const Eigen::VectorXd& p) const;
    Eigen::MatrixXd J_at(const Eigen::VectorXd& p) const;
    Eigen::MatrixXd phi_at(const Eigen::VectorXd& p) const;    // V J V
    Eigen::MatrixXd omega_at(const Eigen::VectorXd& p) const;  // H J V
    Eigen::MatrixXd B_at(const Eigen::VectorXd& p) const;      // V J H
    Eigen::MatrixXd C_at(const Eigen::VectorXd& p) const;      // H J H

    // Full pointwise decomposition (vertical, D1, D2, operators, mu).
    StructureOperators operators_at(const Eigen::VectorXd& p) const;

    // 1e-4 * max(1, |p|): balances truncation against round-off for the
    // first- and second-order tolerance tiers.
    double fd_step(const Eigen::VectorXd& p) const;

  private:
    MapDefinition map_;
    ParamMap params_;
    ComplexStructure J_;
    MatrixField J_field_;
    double tol_rank_;
    double tol_cluster_;
};

// Derivative of the vertical projector field along `direction` (not
// necessarily unit). Throws GeometryError when the rank changes across the
// stencil ("projector field not smooth here").
Eigen::MatrixXd projector_derivative(const ProjectorField& field, const Eigen::VectorXd& p,
                                     const Eigen::VectorXd& direction, double h);

// O'Neill tensors with constant-vector extension of the second argument;
// tensorial, so the value depends only on E and F at p.
Eigen::VectorXd tensor_T(const ProjectorField& field, const Eigen::VectorXd& p,
                         const Eigen::VectorXd& E, const Eigen::VectorXd& F);
Eigen::VectorXd tensor_A(const ProjectorField& field, const Eigen::VectorXd& p,
                         const Eigen::VectorXd& E, const Eigen::VectorXd& F);

// Fiber connection V D_X [V(.) Y] for constant-vector extensions projected
// vertically.
Eigen::VectorXd hat_nabla(const ProjectorField& field, const Eigen::VectorXd& p,
                          const Eigen::VectorXd& X, const Eigen::VectorXd& Y);

// (nabla F_*)(X, Y) for constant extensions; equals the second directional
// derivative of the map and is cross-checked against directional_second.
Eigen::VectorXd second_fundamental_form(const ProjectorField& field,
                                        const Eigen::VectorXd& p, const Eigen::VectorXd& X,
                                        const Eigen::VectorXd& Y);

// Mean curvature vector of the fiber: (1/s) sum_i T_{e_i} e_i over an
// orthonormal vertical frame. Throws on zero-dimensional fibers.
Eigen::VectorXd mean_curvature(const ProjectorField& field, const Eigen::VectorXd& p);

// max over vertical frame pairs of |T_X Y - g(X,Y) H|.
double umbilical_residual(const ProjectorField& field, const Eigen::VectorXd& p);

// Residuals of the six compatibility equations tying the connection to the
// J-decomposition (valid for a parallel J; the point-dependent-J hook breaks
// them, which the negative-control tests rely on).
struct CompatibilityResiduals {
    double vertical_a = 0.0;
    double vertical_b = 0.0;
    double horizontal_a = 0.0;
    double horizontal_b = 0.0;
    double mixed_a = 0.0;
    double mixed_b = 0.0;
    double max() const;
};
CompatibilityResiduals compatibility_residuals(const ProjectorField& field,
                                               const Eigen::VectorXd& p);

enum class CurvaturePlane { Mu, SlantPair, D1 };

struct CurvatureBalance {
    bool applicable = false;
    std::string reason;          // why not applicable, when it is not
    double imbalance = 0.0;      // |LHS - RHS| of the holomorphic-plane formula
    double fiber_curvature = 0.0;  // Gauss-equation value (Mu case only)
};

// Balance check of the holomorphic sectional-curvature formula for the plane
// span{X, JX}. X must lie in the subspace selected by `plane` (auto-picked
// from the computed frames when absent). Flat ambient space: all ambient and
// target sectional curvatures vanish.
CurvatureBalance curvature_check(const ProjectorField& field, const Eigen::VectorXd& p,
                                 CurvaturePlane plane,
                                 std::optional<Eigen::VectorXd> X = std::nullopt);

struct CurvatureReport {
    CurvatureBalance mu_plane;
    CurvatureBalance slant_plane;
    CurvatureBalance d1_plane;
};
CurvatureReport curvature_checks(const ProjectorField& field, const Eigen::VectorXd& p);

}  // namespace sublab

#pragma once

#include <Eigen/Core>
#include <map>
#include <memory>
#include <string>
#include <vector>

#include "sublab/dual.hpp"
#include "sublab/errors.hpp"

namespace sublab {

enum class NodeKind {
    Number,
    Variable,   // index = 0-based variable slot
    Parameter,  // index = 0-based parameter slot
    Negate,
    Add,
    Sub,
    Mul,
    Div,
    Sin,
    Cos,
    Sqrt,
    Exp,
    Log,
};

struct ExprNode {
    NodeKind kind;
    double number = 0.0;
    int index = -1;
    std::shared_ptr<const ExprNode> lhs;
    std::shared_ptr<const ExprNode> rhs;
};

using ExprPtr = std::shared_ptr<const ExprNode>;

template <typename T>
T eval_node(const ExprNode& n, const std::vector<T>& vars,
            const std::vector<double>& params) {
    switch (n.kind) {
        case NodeKind::Number:
            return T(n.number);
        case NodeKind::Variable:
            return vars[static_cast<size_t>(n.index)];
        case NodeKind::Parameter:
            return T(params[static_cast<size_t>(n.index)]);
        case NodeKind::Negate:
            return -eval_node(*n.lhs, vars, params);
        case NodeKind::Add:
            return eval_node(*n.lhs, vars, params) + eval_node(*n.rhs, vars, params);
        case NodeKind::Sub:
            return eval_node(*n.lhs, vars, params) - eval_node(*n.rhs, vars, params);
        case NodeKind::Mul:
            return eval_node(*n.lhs, vars, params) * eval_node(*n.rhs, vars, params);
        case NodeKind::Div: {
            T num = eval_node(*n.lhs, vars, params);
            T den = eval_node(*n.rhs, vars, params);
            if (value_of(den) == 0.0) throw EvalError("division by zero");
            return num / den;
        }
        case NodeKind::Sin: {
            using std::sin;
            return sin(eval_node(*n.lhs, vars, params));
        }
        case NodeKind::Cos: {
            using std::cos;
            return cos(eval_node(*n.lhs, vars, params));
        }
        case NodeKind::Sqrt: {
            T a = eval_node(*n.lhs, vars, params);
            if (value_of(a) < 0.0) throw EvalError("sqrt of negative value");
            using std::sqrt;
            return sqrt(a);
        }
        case NodeKind::Exp: {
            using std::exp;
            return exp(eval_node(*n.lhs, vars, params));
        }
        case NodeKind::Log: {
            T a = eval_node(*n.lhs, vars, params);
            if (value_of(a) <= 0.0) throw EvalError("log of non-positive value");
            using std::log;
            return log(a);
        }
    }
    throw EvalError("corrupt expression node");
}

using ParamMap = std::map<std::string, double>;

// A parsed smooth map R^m -> R^n with named parameters. Expression trees are
// immutable and shared, so copies are cheap and safe across threads.
class MapDefinition {
  public:
    MapDefinition() = default;
    MapDefinition(int domain_dim, int codomain_dim, std::vector<std::string> params,
                  std::vector<ExprPtr> components);

    int domain_dim() const { return m_; }
    int codomain_dim() const { return n_; }
    const std::vector<std::string>& params() const { return params_; }
    const std::vector<ExprPtr>& components() const { return components_; }

    // Resolves a name->value binding against the declared parameter list.
    // Throws EvalError on unbound or unknown names.
    std::vector<double> bind_params(const ParamMap& values) const;

    template <typename T>
    std::vector<T> evaluate(const std::vector<T>& vars,
                            const std::vector<double>& param_values) const {
        std::vector<T> out;
        out.reserve(components_.size());
        for (size_t i = 0; i < components_.size(); ++i) {
            try {
                out.push_back(eval_node(*components_[i], vars, param_values));
            } catch (const EvalError& e) {
                throw EvalError(std::string(e.what()) + " in component " +
                                    std::to_string(i + 1),
                                static_cast<int>(i + 1));
            }
        }
        return out;
    }

  private:
    int m_ = 0;
    int n_ = 0;
    std::vector<std::string> params_;
    std::vector<ExprPtr> components_;
};

// Parses the map DSL: directives `domain`, `codomain`, `param`, followed by
// `F<k> = <expr>` lines; '#' starts a comment. Throws ParseError.
MapDefinition parse_map(const std::string& text);

Eigen::VectorXd eval(const MapDefinition& map, const Eigen::VectorXd& point,
                     const ParamMap& params);

// Row i, column j holds dF_i/dx_j; one forward-mode pass per domain direction.
Eigen::MatrixXd jacobian(const MapDefinition& map, const Eigen::VectorXd& point,
                         const ParamMap& params);

// Second directional derivative D^2 F(point)[u, v] via nested dual numbers.
Eigen::VectorXd directional_second(const MapDefinition& map, const Eigen::VectorXd& point,
                                   const ParamMap& params, const Eigen::VectorXd& u,
                                   const Eigen::VectorXd& v);

}  // namespace sublab

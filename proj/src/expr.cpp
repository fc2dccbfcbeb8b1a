#include "sublab/expr.hpp"

#include <algorithm>
#include <cctype>
#include <sstream>

namespace sublab {

MapDefinition::MapDefinition(int domain_dim, int codomain_dim,
                             std::vector<std::string> params,
                             std::vector<ExprPtr> components)
    : m_(domain_dim),
      n_(codomain_dim),
      params_(std::move(params)),
      components_(std::move(components)) {}

std::vector<double> MapDefinition::bind_params(const ParamMap& values) const {
    std::vector<double> out(params_.size());
    for (size_t i = 0; i < params_.size(); ++i) {
        auto it = values.find(params_[i]);
        if (it == values.end())
            throw EvalError("unbound parameter '" + params_[i] + "'");
        out[i] = it->second;
    }
    for (const auto& [name, _] : values) {
        if (std::find(params_.begin(), params_.end(), name) == params_.end())
            throw EvalError("unknown parameter '" + name + "'");
    }
    return out;
}

namespace {

enum class Tok { Word, Number, Plus, Minus, Star, Slash, LParen, RParen, Equals, End };

struct Token {
    Tok kind;
    std::string text;
    double number = 0.0;
    int col = 0;
};

class LineLexer {
  public:
    LineLexer(const std::string& line, int line_no) : line_(line), line_no_(line_no) {
        advance();
    }

    const Token& peek() const { return tok_; }

    Token take() {
        Token t = tok_;
        advance();
        return t;
    }

    [[noreturn]] void fail(const std::string& msg, int col) const {
        throw ParseError(msg, line_no_, col);
    }
    [[noreturn]] void fail(const std::string& msg) const { fail(msg, tok_.col); }

    int line_no() const { return line_no_; }

  private:
    void advance() {
        while (pos_ < line_.size() && (line_[pos_] == ' ' || line_[pos_] == '\t')) ++pos_;
        tok_.col = static_cast<int>(pos_) + 1;
        if (pos_ >= line_.size() || line_[pos_] == '#') {
            tok_ = {Tok::End, "", 0.0, tok_.col};
            return;
        }
        char c = line_[pos_];
        if (std::isalpha(static_cast<unsigned char>(c))) {
            size_t start = pos_;
            while (pos_ < line_.size() &&
                   (std::isalnum(static_cast<unsigned char>(line_[pos_])) ||
                    line_[pos_] == '_'))
                ++pos_;
            tok_ = {Tok::Word, line_.substr(start, pos_ - start), 0.0,
                    static_cast<int>(start) + 1};
            return;
        }
        if (std::isdigit(static_cast<unsigned char>(c))) {
            size_t start = pos_;
            while (pos_ < line_.size() && std::isdigit(static_cast<unsigned char>(line_[pos_])))
                ++pos_;
            if (pos_ < line_.size() && line_[pos_] == '.') {
                ++pos_;
                while (pos_ < line_.size() &&
                       std::isdigit(static_cast<unsigned char>(line_[pos_])))
                    ++pos_;
            }
            if (pos_ < line_.size() && (line_[pos_] == 'e' || line_[pos_] == 'E')) {
                size_t mark = pos_;
                ++pos_;
                if (pos_ < line_.size() && (line_[pos_] == '+' || line_[pos_] == '-')) ++pos_;
                if (pos_ < line_.size() && std::isdigit(static_cast<unsigned char>(line_[pos_]))) {
                    while (pos_ < line_.size() &&
                           std::isdigit(static_cast<unsigned char>(line_[pos_])))
                        ++pos_;
                } else {
                    pos_ = mark;  // 'e' belongs to something else; stop the number here
                }
            }
            std::string text = line_.substr(start, pos_ - start);
            tok_ = {Tok::Number, text, std::stod(text), static_cast<int>(start) + 1};
            return;
        }
        Tok k;
        switch (c) {
            case '+': k = Tok::Plus; break;
            case '-': k = Tok::Minus; break;
            case '*': k = Tok::Star; break;
            case '/': k = Tok::Slash; break;
            case '(': k = Tok::LParen; break;
            case ')': k = Tok::RParen; break;
            case '=': k = Tok::Equals; break;
            default:
                throw ParseError(std::string("unexpected character '") + c + "'", line_no_,
                                 static_cast<int>(pos_) + 1);
        }
        tok_ = {k, std::string(1, c), 0.0, static_cast<int>(pos_) + 1};
        ++pos_;
    }

    const std::string& line_;
    int line_no_;
    size_t pos_ = 0;
    Token tok_;
};

bool is_function_name(const std::string& s) {
    return s == "sin" || s == "cos" || s == "sqrt" || s == "exp" || s == "log";
}

bool is_identifier(const std::string& s) {
    if (s.empty() || s[0] < 'a' || s[0] > 'z') return false;
    for (char c : s)
        if (!((c >= 'a' && c <= 'z') || (c >= '0' && c <= '9') || c == '_')) return false;
    return true;
}

// x1..x<m>; leading zeros are not variable indices.
int variable_index(const std::string& s) {
    if (s.size() < 2 || s[0] != 'x') return -1;
    if (s[1] < '1' || s[1] > '9') return -1;
    for (size_t i = 1; i < s.size(); ++i)
        if (!std::isdigit(static_cast<unsigned char>(s[i]))) return -1;
    return std::stoi(s.substr(1));
}

ExprPtr make_node(NodeKind kind, ExprPtr lhs = nullptr, ExprPtr rhs = nullptr) {
    auto n = std::make_shared<ExprNode>();
    n->kind = kind;
    n->lhs = std::move(lhs);
    n->rhs = std::move(rhs);
    return n;
}

class ExprParser {
  public:
    ExprParser(LineLexer& lex, int domain_dim, const std::vector<std::string>& params)
        : lex_(lex), m_(domain_dim), params_(params) {}

    ExprPtr parse() {
        ExprPtr e = expr();
        if (lex_.peek().kind != Tok::End) lex_.fail("trailing input after expression");
        return e;
    }

  private:
    ExprPtr expr() {
        ExprPtr lhs = term();
        while (lex_.peek().kind == Tok::Plus || lex_.peek().kind == Tok::Minus) {
            Tok op = lex_.take().kind;
            ExprPtr rhs = term();
            lhs = make_node(op == Tok::Plus ? NodeKind::Add : NodeKind::Sub, lhs, rhs);
        }
        return lhs;
    }

    ExprPtr term() {
        ExprPtr lhs = factor();
        while (lex_.peek().kind == Tok::Star || lex_.peek().kind == Tok::Slash) {
            Tok op = lex_.take().kind;
            ExprPtr rhs = factor();
            lhs = make_node(op == Tok::Star ? NodeKind::Mul : NodeKind::Div, lhs, rhs);
        }
        return lhs;
    }

    ExprPtr factor() {
        if (lex_.peek().kind == Tok::Minus) {
            lex_.take();
            return make_node(NodeKind::Negate, atom());
        }
        return atom();
    }

    ExprPtr atom() {
        Token t = lex_.take();
        switch (t.kind) {
            case Tok::Number: {
                auto n = std::make_shared<ExprNode>();
                n->kind = NodeKind::Number;
                n->number = t.number;
                return n;
            }
            case Tok::LParen: {
                ExprPtr e = expr();
                if (lex_.peek().kind != Tok::RParen) lex_.fail("expected ')'");
                lex_.take();
                return e;
            }
            case Tok::Word: {
                if (is_function_name(t.text)) {
                    if (lex_.peek().kind != Tok::LParen)
                        lex_.fail("expected '(' after function '" + t.text + "'");
                    lex_.take();
                    ExprPtr arg = expr();
                    if (lex_.peek().kind != Tok::RParen) lex_.fail("expected ')'");
                    lex_.take();
                    NodeKind k = t.text == "sin"    ? NodeKind::Sin
                                 : t.text == "cos"  ? NodeKind::Cos
                                 : t.text == "sqrt" ? NodeKind::Sqrt
                                 : t.text == "exp"  ? NodeKind::Exp
                                                    : NodeKind::Log;
                    return make_node(k, arg);
                }
                int vi = variable_index(t.text);
                if (vi > 0) {
                    if (vi > m_)
                        lex_.fail("variable index exceeds domain: '" + t.text + "'", t.col);
                    auto n = std::make_shared<ExprNode>();
                    n->kind = NodeKind::Variable;
                    n->index = vi - 1;
                    return n;
                }
                auto it = std::find(params_.begin(), params_.end(), t.text);
                if (it == params_.end())
                    lex_.fail("undeclared identifier '" + t.text + "'", t.col);
                auto n = std::make_shared<ExprNode>();
                n->kind = NodeKind::Parameter;
                n->index = static_cast<int>(it - params_.begin());
                return n;
            }
            default:
                lex_.fail("expected number, identifier, or '('", t.col);
        }
    }

    LineLexer& lex_;
    int m_;
    const std::vector<std::string>& params_;
};

}  // namespace

MapDefinition parse_map(const std::string& text) {
    int domain_dim = 0;
    int codomain_dim = 0;
    bool have_domain = false;
    bool have_codomain = false;
    std::vector<std::string> params;
    std::vector<ExprPtr> components;

    std::istringstream stream(text);
    std::string line;
    int line_no = 0;
    while (std::getline(stream, line)) {
        ++line_no;
        LineLexer lex(line, line_no);
        if (lex.peek().kind == Tok::End) continue;
        if (lex.peek().kind != Tok::Word)
            lex.fail("expected 'domain', 'codomain', 'param', or 'F<k>'");
        Token head = lex.take();

        if (head.text == "domain" || head.text == "codomain") {
            if (!components.empty())
                lex.fail("'" + head.text + "' must precede component lines", head.col);
            if (lex.peek().kind != Tok::Number) lex.fail("expected a positive integer");
            Token num = lex.take();
            double v = num.number;
            if (v < 1 || v != static_cast<int>(v))
                lex.fail("expected a positive integer", num.col);
            if (lex.peek().kind != Tok::End) lex.fail("trailing input after directive");
            if (head.text == "domain") {
                if (have_domain) lex.fail("duplicate 'domain' directive", head.col);
                domain_dim = static_cast<int>(v);
                have_domain = true;
            } else {
                if (have_codomain) lex.fail("duplicate 'codomain' directive", head.col);
                codomain_dim = static_cast<int>(v);
                have_codomain = true;
            }
            continue;
        }

        if (head.text == "param") {
            if (!components.empty())
                lex.fail("'param' must precede component lines", head.col);
            if (lex.peek().kind != Tok::Word) lex.fail("expected a parameter name");
            Token name = lex.take();
            if (!is_identifier(name.text))
                lex.fail("invalid parameter name '" + name.text + "'", name.col);
            if (is_function_name(name.text) || variable_index(name.text) > 0)
                lex.fail("reserved name '" + name.text + "' cannot be a parameter",
                         name.col);
            if (std::find(params.begin(), params.end(), name.text) != params.end())
                lex.fail("duplicate parameter '" + name.text + "'", name.col);
            if (lex.peek().kind != Tok::End) lex.fail("trailing input after directive");
            params.push_back(name.text);
            continue;
        }

        if (head.text.size() >= 2 && head.text[0] == 'F') {
            bool digits = true;
            for (size_t i = 1; i < head.text.size(); ++i)
                if (!std::isdigit(static_cast<unsigned char>(head.text[i]))) digits = false;
            if (!digits) lex.fail("unknown directive '" + head.text + "'", head.col);
            if (!have_domain || !have_codomain)
                lex.fail("'domain' and 'codomain' must precede component lines", head.col);
            int k = std::stoi(head.text.substr(1));
            if (k != static_cast<int>(components.size()) + 1)
                lex.fail("component lines must appear in order; expected F" +
                             std::to_string(components.size() + 1),
                         head.col);
            if (k > codomain_dim)
                lex.fail("component index exceeds declared codomain", head.col);
            if (lex.peek().kind != Tok::Equals) lex.fail("expected '='");
            lex.take();
            ExprParser parser(lex, domain_dim, params);
            components.push_back(parser.parse());
            continue;
        }

        lex.fail("unknown directive '" + head.text + "'", head.col);
    }

    if (!have_domain) throw ParseError("missing 'domain' directive", line_no, 1);
    if (!have_codomain) throw ParseError("missing 'codomain' directive", line_no, 1);
    if (codomain_dim > domain_dim)
        throw ParseError("codomain dimension exceeds domain dimension", line_no, 1);
    if (static_cast<int>(components.size()) != codomain_dim)
        throw ParseError("codomain declares " + std::to_string(codomain_dim) +
                             " components but " + std::to_string(components.size()) +
                             " were defined",
                         line_no, 1);

    return MapDefinition(domain_dim, codomain_dim, std::move(params),
                         std::move(components));
}

Eigen::VectorXd eval(const MapDefinition& map, const Eigen::VectorXd& point,
                     const ParamMap& params) {
    if (point.size() != map.domain_dim())
        throw EvalError("point dimension does not match map domain");
    std::vector<double> par = map.bind_params(params);
    std::vector<double> vars(point.data(), point.data() + point.size());
    std::vector<double> values = map.evaluate(vars, par);
    return Eigen::Map<Eigen::VectorXd>(values.data(), static_cast<long>(values.size()));
}

Eigen::MatrixXd jacobian(const MapDefinition& map, const Eigen::VectorXd& point,
                         const ParamMap& params) {
    if (point.size() != map.domain_dim())
        throw EvalError("point dimension does not match map domain");
    std::vector<double> par = map.bind_params(params);
    const int m = map.domain_dim();
    const int n = map.codomain_dim();
    Eigen::MatrixXd jac(n, m);
    std::vector<Dual<double>> vars(static_cast<size_t>(m));
    for (int j = 0; j < m; ++j) {
        for (int i = 0; i < m; ++i) vars[static_cast<size_t>(i)] = {point(i), i == j ? 1.0 : 0.0};
        std::vector<Dual<double>> values = map.evaluate(vars, par);
        for (int i = 0; i < n; ++i) jac(i, j) = values[static_cast<size_t>(i)].dot;
    }
    return jac;
}

Eigen::VectorXd directional_second(const MapDefinition& map, const Eigen::VectorXd& point,
                                   const ParamMap& params, const Eigen::VectorXd& u,
                                   const Eigen::VectorXd& v) {
    const int m = map.domain_dim();
    if (point.size() != m || u.size() != m || v.size() != m)
        throw EvalError("point or direction dimension does not match map domain");
    if (u.norm() == 0.0 || v.norm() == 0.0)
        throw EvalError("directions must be nonzero");
    std::vector<double> par = map.bind_params(params);
    using DD = Dual<Dual<double>>;
    std::vector<DD> vars(static_cast<size_t>(m));
    for (int i = 0; i < m; ++i)
        vars[static_cast<size_t>(i)] = {{point(i), u(i)}, {v(i), 0.0}};
    std::vector<DD> values = map.evaluate(vars, par);
    Eigen::VectorXd out(map.codomain_dim());
    for (int i = 0; i < map.codomain_dim(); ++i)
        out(i) = values[static_cast<size_t>(i)].dot.dot;
    return out;
}

}  // namespace sublab

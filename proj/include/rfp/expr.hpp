#ifndef RFP_EXPR_HPP
#define RFP_EXPR_HPP

#include <cctype>
#include <cmath>
#include <cstddef>
#include <map>
#include <memory>
#include <string>

#include "rfp/errors.hpp"

namespace rfp {

/// Restricted arithmetic expressions for declaring kernels, free terms and
/// nonlinearities in problem files: literals, the variables t, s, x, the
/// operators + - * /, unary minus, and exp, sin, cos, abs, min, max.
class Expr {
  public:
    struct Env {
        double t = 0, s = 0, x = 0;
    };

    static Expr parse(const std::string& text) {
        Parser p(text);
        Expr e;
        e.root_ = std::shared_ptr<const Node>(p.parse_all().release());
        return e;
    }

    double eval(const Env& env) const {
        const double v = eval_node(*root_, env);
        if (!std::isfinite(v)) throw EvaluationError("Expr: non-finite value");
        return v;
    }

  private:
    enum class Op { Const, Var, Add, Sub, Mul, Div, Neg, Exp, Sin, Cos, Abs, Min, Max };

    struct Node {
        Op op = Op::Const;
        double value = 0.0;
        char var = 't';
        std::unique_ptr<Node> lhs, rhs;
    };

    std::shared_ptr<const Node> root_;

    static double eval_node(const Node& n, const Env& env) {
        switch (n.op) {
            case Op::Const: return n.value;
            case Op::Var:
                switch (n.var) {
                    case 't': return env.t;
                    case 's': return env.s;
                    case 'x': return env.x;
                }
                throw EvaluationError("Expr: unknown variable");
            case Op::Add: return eval_node(*n.lhs, env) + eval_node(*n.rhs, env);
            case Op::Sub: return eval_node(*n.lhs, env) - eval_node(*n.rhs, env);
            case Op::Mul: return eval_node(*n.lhs, env) * eval_node(*n.rhs, env);
            case Op::Div: return eval_node(*n.lhs, env) / eval_node(*n.rhs, env);
            case Op::Neg: return -eval_node(*n.lhs, env);
            case Op::Exp: return std::exp(eval_node(*n.lhs, env));
            case Op::Sin: return std::sin(eval_node(*n.lhs, env));
            case Op::Cos: return std::cos(eval_node(*n.lhs, env));
            case Op::Abs: return std::abs(eval_node(*n.lhs, env));
            case Op::Min: return std::min(eval_node(*n.lhs, env), eval_node(*n.rhs, env));
            case Op::Max: return std::max(eval_node(*n.lhs, env), eval_node(*n.rhs, env));
        }
        throw EvaluationError("Expr: bad node");
    }

    class Parser {
      public:
        explicit Parser(const std::string& text) : text_(text) {}

        std::unique_ptr<Node> parse_all() {
            auto root = parse_expr();
            skip_ws();
            if (pos_ != text_.size())
                throw ValidationError("Expr: trailing input at '" + text_.substr(pos_) + "'");
            return root;
        }

      private:
        const std::string& text_;
        std::size_t pos_ = 0;

        char peek() const { return pos_ < text_.size() ? text_[pos_] : '\0'; }
        char get() { return pos_ < text_.size() ? text_[pos_++] : '\0'; }
        void skip_ws() {
            while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
        }

        static std::unique_ptr<Node> binary(Op op, std::unique_ptr<Node> l,
                                            std::unique_ptr<Node> r) {
            auto n = std::make_unique<Node>();
            n->op = op;
            n->lhs = std::move(l);
            n->rhs = std::move(r);
            return n;
        }

        std::unique_ptr<Node> parse_expr() {
            auto lhs = parse_term();
            for (;;) {
                skip_ws();
                if (peek() == '+' || peek() == '-') {
                    const char op = get();
                    lhs = binary(op == '+' ? Op::Add : Op::Sub, std::move(lhs), parse_term());
                } else {
                    return lhs;
                }
            }
        }

        std::unique_ptr<Node> parse_term() {
            auto lhs = parse_factor();
            for (;;) {
                skip_ws();
                if (peek() == '*' || peek() == '/') {
                    const char op = get();
                    lhs = binary(op == '*' ? Op::Mul : Op::Div, std::move(lhs), parse_factor());
                } else {
                    return lhs;
                }
            }
        }

        std::unique_ptr<Node> parse_factor() {
            skip_ws();
            if (peek() == '-') {
                get();
                auto n = std::make_unique<Node>();
                n->op = Op::Neg;
                n->lhs = parse_factor();
                return n;
            }
            return parse_primary();
        }

        std::unique_ptr<Node> parse_primary() {
            skip_ws();
            const char c = peek();
            if (c == '(') {
                get();
                auto inner = parse_expr();
                skip_ws();
                if (get() != ')') throw ValidationError("Expr: missing ')'");
                return inner;
            }
            if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') {
                std::size_t used = 0;
                double v = 0.0;
                try {
                    v = std::stod(text_.substr(pos_), &used);
                } catch (const std::exception&) {
                    throw ValidationError("Expr: bad numeric literal");
                }
                pos_ += used;
                auto n = std::make_unique<Node>();
                n->op = Op::Const;
                n->value = v;
                return n;
            }
            if (std::isalpha(static_cast<unsigned char>(c))) {
                std::string ident;
                while (std::isalpha(static_cast<unsigned char>(peek()))) ident.push_back(get());
                static const std::map<std::string, Op> funcs = {
                    {"exp", Op::Exp}, {"sin", Op::Sin}, {"cos", Op::Cos},
                    {"abs", Op::Abs}, {"min", Op::Min}, {"max", Op::Max}};
                if (auto it = funcs.find(ident); it != funcs.end()) {
                    skip_ws();
                    if (get() != '(') throw ValidationError("Expr: expected '(' after " + ident);
                    auto n = std::make_unique<Node>();
                    n->op = it->second;
                    n->lhs = parse_expr();
                    if (it->second == Op::Min || it->second == Op::Max) {
                        skip_ws();
                        if (get() != ',') throw ValidationError("Expr: " + ident + " needs 2 args");
                        n->rhs = parse_expr();
                    }
                    skip_ws();
                    if (get() != ')') throw ValidationError("Expr: missing ')' in " + ident);
                    return n;
                }
                if (ident.size() == 1 && (ident[0] == 't' || ident[0] == 's' || ident[0] == 'x')) {
                    auto n = std::make_unique<Node>();
                    n->op = Op::Var;
                    n->var = ident[0];
                    return n;
                }
                throw ValidationError("Expr: unknown identifier '" + ident + "'");
            }
            throw ValidationError("Expr: unexpected character");
        }
    };
};

}  // namespace rfp

#endif

#pragma once

#include <cctype>
#include <cmath>
#include <cstdlib>
#include <memory>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "metjet/handle.hpp"
#include "metjet/vec.hpp"

namespace metjet {

struct ExprError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

namespace expr_detail {

enum class Op {
    Num, Var, Add, Sub, Mul, Div, Pow, Neg,
    Sin, Cos, Log, Exp, Abs, Sign, Min, Max, PowFn,
    If, Eq, Ne, Lt, Le, Gt, Ge, And, Or
};

struct Node {
    Op op = Op::Num;
    double num = 0.0;
    int var = 0;
    std::shared_ptr<const Node> a, b, c;
};

using NodeP = std::shared_ptr<const Node>;

inline NodeP leaf_num(double v) {
    auto n = std::make_shared<Node>();
    n->num = v;
    return n;
}

inline NodeP mk(Op op, NodeP a = nullptr, NodeP b = nullptr, NodeP c = nullptr) {
    auto n = std::make_shared<Node>();
    n->op = op;
    n->a = std::move(a);
    n->b = std::move(b);
    n->c = std::move(c);
    return n;
}

inline double eval_node(const Node& n, const Vec& x) {
    switch (n.op) {
        case Op::Num: return n.num;
        case Op::Var:
            return n.var <= static_cast<int>(x.size()) ? x[static_cast<std::size_t>(n.var - 1)]
                                                       : std::nan("");
        case Op::Add: return eval_node(*n.a, x) + eval_node(*n.b, x);
        case Op::Sub: return eval_node(*n.a, x) - eval_node(*n.b, x);
        case Op::Mul: return eval_node(*n.a, x) * eval_node(*n.b, x);
        case Op::Div: return eval_node(*n.a, x) / eval_node(*n.b, x);
        case Op::Pow:
        case Op::PowFn: return std::pow(eval_node(*n.a, x), eval_node(*n.b, x));
        case Op::Neg: return -eval_node(*n.a, x);
        case Op::Sin: return std::sin(eval_node(*n.a, x));
        case Op::Cos: return std::cos(eval_node(*n.a, x));
        case Op::Log: return std::log(eval_node(*n.a, x));
        case Op::Exp: return std::exp(eval_node(*n.a, x));
        case Op::Abs: return std::abs(eval_node(*n.a, x));
        case Op::Sign: {
            double v = eval_node(*n.a, x);
            return v > 0 ? 1.0 : (v < 0 ? -1.0 : 0.0);
        }
        case Op::Min: return std::fmin(eval_node(*n.a, x), eval_node(*n.b, x));
        case Op::Max: return std::fmax(eval_node(*n.a, x), eval_node(*n.b, x));
        case Op::If:
            return eval_node(*n.a, x) != 0.0 ? eval_node(*n.b, x) : eval_node(*n.c, x);
        case Op::Eq: return eval_node(*n.a, x) == eval_node(*n.b, x) ? 1.0 : 0.0;
        case Op::Ne: return eval_node(*n.a, x) != eval_node(*n.b, x) ? 1.0 : 0.0;
        case Op::Lt: return eval_node(*n.a, x) < eval_node(*n.b, x) ? 1.0 : 0.0;
        case Op::Le: return eval_node(*n.a, x) <= eval_node(*n.b, x) ? 1.0 : 0.0;
        case Op::Gt: return eval_node(*n.a, x) > eval_node(*n.b, x) ? 1.0 : 0.0;
        case Op::Ge: return eval_node(*n.a, x) >= eval_node(*n.b, x) ? 1.0 : 0.0;
        case Op::And:
            return (eval_node(*n.a, x) != 0.0 && eval_node(*n.b, x) != 0.0) ? 1.0 : 0.0;
        case Op::Or:
            return (eval_node(*n.a, x) != 0.0 || eval_node(*n.b, x) != 0.0) ? 1.0 : 0.0;
    }
    return std::nan("");
}

struct Parser {
    const std::string& src;
    std::size_t pos = 0;
    int max_var = 0;

    explicit Parser(const std::string& s) : src(s) {}

    void skip_ws() {
        while (pos < src.size() && std::isspace(static_cast<unsigned char>(src[pos]))) ++pos;
    }
    bool eat(char c) {
        skip_ws();
        if (pos < src.size() && src[pos] == c) {
            ++pos;
            return true;
        }
        return false;
    }
    bool eat_str(const char* s) {
        skip_ws();
        std::size_t n = std::string(s).size();
        if (src.compare(pos, n, s) == 0) {
            pos += n;
            return true;
        }
        return false;
    }
    [[noreturn]] void fail(const std::string& what) const {
        throw ExprError("parse error at position " + std::to_string(pos) + ": " + what);
    }
    std::string peek_word() {
        skip_ws();
        std::size_t p = pos;
        std::string w;
        while (p < src.size() && (std::isalnum(static_cast<unsigned char>(src[p])) || src[p] == '_'))
            w += src[p++];
        return w;
    }
    std::string take_word() {
        std::string w = peek_word();
        pos += w.size();
        return w;
    }

    NodeP parse_expr() { return parse_if(); }

    NodeP parse_if() {
        if (peek_word() == "if") {
            take_word();
            NodeP cond = parse_or();
            if (peek_word() != "then") fail("expected 'then'");
            take_word();
            NodeP t = parse_expr();
            if (peek_word() != "else") fail("expected 'else'");
            take_word();
            NodeP f = parse_expr();
            return mk(Op::If, cond, t, f);
        }
        return parse_or();
    }

    NodeP parse_or() {
        NodeP lhs = parse_and();
        while (peek_word() == "or") {
            take_word();
            lhs = mk(Op::Or, lhs, parse_and());
        }
        return lhs;
    }

    NodeP parse_and() {
        NodeP lhs = parse_cmp();
        while (peek_word() == "and") {
            take_word();
            lhs = mk(Op::And, lhs, parse_cmp());
        }
        return lhs;
    }

    NodeP parse_cmp() {
        NodeP lhs = parse_add();
        skip_ws();
        if (eat_str("==")) return mk(Op::Eq, lhs, parse_add());
        if (eat_str("!=")) return mk(Op::Ne, lhs, parse_add());
        if (eat_str("<=")) return mk(Op::Le, lhs, parse_add());
        if (eat_str(">=")) return mk(Op::Ge, lhs, parse_add());
        if (eat_str("<")) return mk(Op::Lt, lhs, parse_add());
        if (eat_str(">")) return mk(Op::Gt, lhs, parse_add());
        return lhs;
    }

    NodeP parse_add() {
        NodeP lhs = parse_mul();
        for (;;) {
            skip_ws();
            if (eat('+'))
                lhs = mk(Op::Add, lhs, parse_mul());
            else if (eat('-'))
                lhs = mk(Op::Sub, lhs, parse_mul());
            else
                return lhs;
        }
    }

    NodeP parse_mul() {
        NodeP lhs = parse_unary();
        for (;;) {
            skip_ws();
            if (eat('*'))
                lhs = mk(Op::Mul, lhs, parse_unary());
            else if (eat('/'))
                lhs = mk(Op::Div, lhs, parse_unary());
            else
                return lhs;
        }
    }

    NodeP parse_unary() {
        skip_ws();
        if (eat('-')) return mk(Op::Neg, parse_unary());
        if (eat('+')) return parse_unary();
        return parse_pow();
    }

    NodeP parse_pow() {
        NodeP base = parse_primary();
        skip_ws();
        if (eat('^')) return mk(Op::Pow, base, parse_unary());
        return base;
    }

    NodeP parse_primary() {
        skip_ws();
        if (pos >= src.size()) fail("unexpected end of expression");
        char c = src[pos];
        if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') {
            char* end = nullptr;
            double v = std::strtod(src.c_str() + pos, &end);
            if (end == src.c_str() + pos) fail("bad number");
            pos = static_cast<std::size_t>(end - src.c_str());
            return leaf_num(v);
        }
        if (eat('(')) {
            NodeP e = parse_expr();
            if (!eat(')')) fail("expected ')'");
            return e;
        }
        std::string w = take_word();
        if (w.empty()) fail(std::string("unexpected character '") + c + "'");
        if (w == "pi") return leaf_num(3.14159265358979323846);
        if (w == "e") return leaf_num(2.71828182845904523536);
        if (w.size() >= 2 && w[0] == 'x') {
            bool digits = true;
            for (std::size_t i = 1; i < w.size(); ++i)
                digits = digits && std::isdigit(static_cast<unsigned char>(w[i]));
            if (digits) {
                int idx = std::atoi(w.c_str() + 1);
                if (idx < 1) fail("variable index must start at 1");
                auto n = std::make_shared<Node>();
                n->op = Op::Var;
                n->var = idx;
                max_var = std::max(max_var, idx);
                return n;
            }
        }
        auto one_arg = [&](Op op) {
            if (!eat('(')) fail("expected '(' after " + w);
            NodeP a = parse_expr();
            if (!eat(')')) fail("expected ')'");
            return mk(op, a);
        };
        auto two_arg = [&](Op op) {
            if (!eat('(')) fail("expected '(' after " + w);
            NodeP a = parse_expr();
            if (!eat(',')) fail("expected ','");
            NodeP b = parse_expr();
            if (!eat(')')) fail("expected ')'");
            return mk(op, a, b);
        };
        if (w == "sin") return one_arg(Op::Sin);
        if (w == "cos") return one_arg(Op::Cos);
        if (w == "log") return one_arg(Op::Log);
        if (w == "exp") return one_arg(Op::Exp);
        if (w == "abs") return one_arg(Op::Abs);
        if (w == "sign") return one_arg(Op::Sign);
        if (w == "min") return two_arg(Op::Min);
        if (w == "max") return two_arg(Op::Max);
        if (w == "pow") return two_arg(Op::PowFn);
        fail("unknown identifier '" + w + "'");
    }
};

}  // namespace expr_detail

// Arithmetic expression over x1..xn with the usual transcendental
// functions, comparisons and if/then/else guards; singular points are
// covered by explicit value overrides.
class ExprFunction {
  public:
    static ExprFunction parse(const std::string& source, int dim = 0) {
        expr_detail::Parser p(source);
        ExprFunction f;
        f.root_ = p.parse_expr();
        p.skip_ws();
        if (p.pos != source.size()) p.fail("trailing input");
        f.dim_ = std::max(dim, std::max(p.max_var, 1));
        f.source_ = source;
        return f;
    }

    double eval(const Vec& x) const {
        for (const auto& [pt, val] : overrides_)
            if (pt == x) return val;
        return expr_detail::eval_node(*root_, x);
    }

    void add_override(Vec point, double value) {
        if (point.size() != static_cast<std::size_t>(dim_))
            throw std::invalid_argument("override dimension mismatch");
        overrides_.emplace_back(std::move(point), value);
    }

    int dim() const { return dim_; }
    const std::string& source() const { return source_; }

    FunctionHandle to_handle() const {
        ExprFunction self = *this;
        FunctionHandle h;
        h.dim_in = dim_;
        h.dim_out = 1;
        h.label = source_;
        h.eval = [self](const Vec& x) { return vec1(self.eval(x)); };
        h.in_domain = [self](const Vec& x) { return std::isfinite(self.eval(x)); };
        return h;
    }

  private:
    expr_detail::NodeP root_;
    int dim_ = 1;
    std::string source_;
    std::vector<std::pair<Vec, double>> overrides_;
};

}  // namespace metjet

#pragma once

#include <charconv>
#include <cmath>
#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "gridcarve/errors.hpp"

namespace gridcarve {

// Closed-form scalar expressions in the variables x, y, t.
//
// Grammar (^ binds tightest and is right-associative; unary minus binds
// tighter than ^, so -x^2 parses as (-x)^2):
//
//   expr   := term (('+'|'-') term)*
//   term   := factor (('*'|'/') factor)*
//   factor := unary ('^' factor)?
//   unary  := '-'? atom
//   atom   := number | 'pi' | 'x' | 'y' | 't' | func '(' expr ')' | '(' expr ')'
//   func   := 'sin' | 'cos' | 'exp' | 'sqrt' | 'abs'
//
// Only x, y, t are bound; any other identifier is a parse error. An Expr is
// immutable after parse and safe to evaluate concurrently.
class Expr {
public:
    static Expr parse(std::string_view src) {
        if (src.empty())
            throw ParseError("empty expression", 0);
        Parser p{src, 0};
        Expr e;
        e.root_ = e.parse_expr(p);
        p.skip_ws();
        if (p.pos != src.size())
            throw ParseError("unexpected trailing input '" + std::string(src.substr(p.pos)) + "'",
                             p.pos);
        return e;
    }

    // IEEE-double evaluation; throws EvalError on division by zero, sqrt of
    // a negative, or any non-finite result.
    double eval(double x, double y, double t = 0.0) const {
        double v = eval_node(root_, x, y, t);
        if (!std::isfinite(v))
            throw EvalError("expression evaluated to a non-finite value");
        return v;
    }

    // Round-trips: parse(str()) rebuilds an identical tree.
    std::string str() const {
        std::string out;
        print_node(root_, out);
        return out;
    }

    bool operator==(const Expr& o) const {
        return nodes_ == o.nodes_ && root_ == o.root_;
    }

private:
    enum class Op : std::uint8_t {
        Num, Var, Neg, Add, Sub, Mul, Div, Pow, Sin, Cos, Exp, Sqrt, Abs
    };

    struct Node {
        Op op;
        double num = 0.0; // Num payload
        int a = -1;       // child / Var index (0=x, 1=y, 2=t)
        int b = -1;
        bool operator==(const Node&) const = default;
    };

    std::vector<Node> nodes_;
    int root_ = -1;

    struct Parser {
        std::string_view src;
        std::size_t pos;

        void skip_ws() {
            while (pos < src.size() && (src[pos] == ' ' || src[pos] == '\t'))
                ++pos;
        }
        char peek() {
            skip_ws();
            return pos < src.size() ? src[pos] : '\0';
        }
        bool accept(char c) {
            if (peek() == c) {
                ++pos;
                return true;
            }
            return false;
        }
        void expect(char c) {
            if (!accept(c))
                throw ParseError(std::string("expected '") + c + "'", pos);
        }
    };

    int add(Node n) {
        nodes_.push_back(n);
        return static_cast<int>(nodes_.size()) - 1;
    }

    int parse_expr(Parser& p) {
        int lhs = parse_term(p);
        for (;;) {
            if (p.accept('+'))
                lhs = add({Op::Add, 0, lhs, parse_term(p)});
            else if (p.accept('-'))
                lhs = add({Op::Sub, 0, lhs, parse_term(p)});
            else
                return lhs;
        }
    }

    int parse_term(Parser& p) {
        int lhs = parse_factor(p);
        for (;;) {
            if (p.accept('*'))
                lhs = add({Op::Mul, 0, lhs, parse_factor(p)});
            else if (p.accept('/'))
                lhs = add({Op::Div, 0, lhs, parse_factor(p)});
            else
                return lhs;
        }
    }

    int parse_factor(Parser& p) {
        int base = parse_unary(p);
        if (p.accept('^'))
            return add({Op::Pow, 0, base, parse_factor(p)}); // right-assoc
        return base;
    }

    int parse_unary(Parser& p) {
        if (p.accept('-'))
            return add({Op::Neg, 0, parse_atom(p), -1});
        return parse_atom(p);
    }

    int parse_atom(Parser& p) {
        char c = p.peek();
        if (c == '(') {
            ++p.pos;
            int e = parse_expr(p);
            p.expect(')');
            return e;
        }
        if ((c >= '0' && c <= '9') || c == '.')
            return parse_number(p);
        if ((c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') || c == '_')
            return parse_identifier(p);
        throw ParseError(c == '\0' ? "unexpected end of input"
                                   : std::string("unexpected character '") + c + "'",
                         p.pos);
    }

    int parse_number(Parser& p) {
        double v = 0.0;
        const char* first = p.src.data() + p.pos;
        const char* last = p.src.data() + p.src.size();
        auto [ptr, ec] = std::from_chars(first, last, v);
        if (ec != std::errc{})
            throw ParseError("invalid number", p.pos);
        p.pos += static_cast<std::size_t>(ptr - first);
        return add({Op::Num, v, -1, -1});
    }

    int parse_identifier(Parser& p) {
        std::size_t start = p.pos;
        auto is_ident = [](char c) {
            return (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') ||
                   (c >= '0' && c <= '9') || c == '_';
        };
        while (p.pos < p.src.size() && is_ident(p.src[p.pos]))
            ++p.pos;
        std::string_view name = p.src.substr(start, p.pos - start);

        if (name == "x") return add({Op::Var, 0, 0, -1});
        if (name == "y") return add({Op::Var, 0, 1, -1});
        if (name == "t") return add({Op::Var, 0, 2, -1});
        if (name == "pi") return add({Op::Num, 3.14159265358979323846, -1, -1});

        Op fn;
        if (name == "sin") fn = Op::Sin;
        else if (name == "cos") fn = Op::Cos;
        else if (name == "exp") fn = Op::Exp;
        else if (name == "sqrt") fn = Op::Sqrt;
        else if (name == "abs") fn = Op::Abs;
        else
            throw ParseError("unknown identifier '" + std::string(name) + "'", start);

        p.expect('(');
        int arg = parse_expr(p);
        p.expect(')');
        return add({fn, 0, arg, -1});
    }

    double eval_node(int i, double x, double y, double t) const {
        const Node& n = nodes_[static_cast<std::size_t>(i)];
        switch (n.op) {
        case Op::Num: return n.num;
        case Op::Var: return n.a == 0 ? x : n.a == 1 ? y : t;
        case Op::Neg: return -eval_node(n.a, x, y, t);
        case Op::Add: return eval_node(n.a, x, y, t) + eval_node(n.b, x, y, t);
        case Op::Sub: return eval_node(n.a, x, y, t) - eval_node(n.b, x, y, t);
        case Op::Mul: return eval_node(n.a, x, y, t) * eval_node(n.b, x, y, t);
        case Op::Div: {
            double d = eval_node(n.b, x, y, t);
            if (d == 0.0)
                throw EvalError("division by zero");
            return eval_node(n.a, x, y, t) / d;
        }
        case Op::Pow: return std::pow(eval_node(n.a, x, y, t), eval_node(n.b, x, y, t));
        case Op::Sin: return std::sin(eval_node(n.a, x, y, t));
        case Op::Cos: return std::cos(eval_node(n.a, x, y, t));
        case Op::Exp: return std::exp(eval_node(n.a, x, y, t));
        case Op::Sqrt: {
            double v = eval_node(n.a, x, y, t);
            if (v < 0.0)
                throw EvalError("sqrt of a negative value");
            return std::sqrt(v);
        }
        case Op::Abs: return std::abs(eval_node(n.a, x, y, t));
        }
        throw EvalError("corrupt expression node");
    }

    // Precedence for printing: 1 = +/-, 2 = * and /, 3 = ^, 4 = atoms.
    static int prec(Op op) {
        switch (op) {
        case Op::Add: case Op::Sub: return 1;
        case Op::Mul: case Op::Div: return 2;
        case Op::Pow: return 3;
        default: return 4;
        }
    }

    void print_node(int i, std::string& out) const {
        const Node& n = nodes_[static_cast<std::size_t>(i)];
        auto child = [&](int c, bool parens) {
            if (parens) out += '(';
            print_node(c, out);
            if (parens) out += ')';
        };
        switch (n.op) {
        case Op::Num: {
            char buf[32];
            std::snprintf(buf, sizeof buf, "%.17g", n.num);
            out += buf;
            return;
        }
        case Op::Var: out += (n.a == 0 ? "x" : n.a == 1 ? "y" : "t"); return;
        case Op::Neg:
            out += '-';
            // parenthesize anything that is not an atom, so -(x^2) does not
            // come back as (-x)^2
            child(n.a, prec(nodes_[static_cast<std::size_t>(n.a)].op) < 4);
            return;
        case Op::Add: case Op::Sub: case Op::Mul: case Op::Div: {
            int pr = prec(n.op);
            child(n.a, prec(nodes_[static_cast<std::size_t>(n.a)].op) < pr);
            out += (n.op == Op::Add ? "+" : n.op == Op::Sub ? "-"
                    : n.op == Op::Mul ? "*" : "/");
            // left-assoc: equal precedence on the right needs parens to
            // rebuild the same tree
            child(n.b, prec(nodes_[static_cast<std::size_t>(n.b)].op) <= pr);
            return;
        }
        case Op::Pow: {
            Op lop = nodes_[static_cast<std::size_t>(n.a)].op;
            child(n.a, prec(lop) <= 3 && lop != Op::Neg);
            out += '^';
            child(n.b, prec(nodes_[static_cast<std::size_t>(n.b)].op) < 3);
            return;
        }
        case Op::Sin: out += "sin"; break;
        case Op::Cos: out += "cos"; break;
        case Op::Exp: out += "exp"; break;
        case Op::Sqrt: out += "sqrt"; break;
        case Op::Abs: out += "abs"; break;
        }
        out += '(';
        print_node(n.a, out);
        out += ')';
    }
};

} // namespace gridcarve

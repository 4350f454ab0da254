#pragma once

#include "tfpp/errors.hpp"

#include <cctype>
#include <cmath>
#include <cstdlib>
#include <functional>
#include <memory>
#include <numbers>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

namespace tfpp {

/// Arithmetic expression over the variables x and t.
///
/// Grammar, loosest binding first:
///   sum     := product (('+' | '-') product)*
///   product := unary (('*' | '/') unary)*
///   unary   := ('-' | '+') unary | power
///   power   := primary ('^' unary)?          right-associative
///   primary := number | 'pi' | 'x' | 't' | name '(' args ')' | '(' sum ')'
/// with functions sqrt, sin, cos, exp, abs (one argument) and pow (two).
class Expr {
public:
    static Expr parse(std::string_view src) {
        Parser p(src);
        Expr e;
        e.source_ = std::string(src);
        auto nodes = std::make_shared<std::vector<Node>>();
        p.nodes = nodes.get();
        e.root_ = p.parse_all();
        e.uses_x_ = p.saw_x;
        e.uses_t_ = p.saw_t;
        e.nodes_ = std::move(nodes);
        return e;
    }

    double eval(double x, double t) const { return eval_node(root_, x, t); }
    double operator()(double x, double t) const { return eval(x, t); }

    const std::string& source() const noexcept { return source_; }
    bool uses_x() const noexcept { return uses_x_; }
    bool uses_t() const noexcept { return uses_t_; }

    /// Binds t (x is set to 0).
    std::function<double(double)> of_t() const {
        return [e = *this](double t) { return e.eval(0.0, t); };
    }
    /// Binds x (t is set to 0).
    std::function<double(double)> of_x() const {
        return [e = *this](double x) { return e.eval(x, 0.0); };
    }

private:
    enum class Op { num, var_x, var_t, neg, add, sub, mul, div, pow, sqrt, sin, cos, exp, abs };

    struct Node {
        Op op;
        double value = 0.0;
        int a = -1;
        int b = -1;
        std::size_t pos = 0; // 1-based
    };

    struct Parser {
        std::string_view s;
        std::size_t i = 0;
        std::vector<Node>* nodes = nullptr;
        bool saw_x = false;
        bool saw_t = false;

        explicit Parser(std::string_view src) : s(src) {}

        int add(Node n) {
            nodes->push_back(n);
            return static_cast<int>(nodes->size() - 1);
        }

        void skip() {
            while (i < s.size() && std::isspace(static_cast<unsigned char>(s[i]))) {
                ++i;
            }
        }

        char peek() {
            skip();
            return i < s.size() ? s[i] : '\0';
        }

        [[noreturn]] void fail(const std::string& msg, std::vector<std::string> expected) {
            skip();
            const std::size_t pos = i + 1;
            std::ostringstream os;
            os << "syntax error at position " << pos << ": " << msg;
            if (!expected.empty()) {
                os << " (expected ";
                for (std::size_t k = 0; k < expected.size(); ++k) {
                    os << (k ? ", " : "") << expected[k];
                }
                os << ")";
            }
            throw ParseError(os.str(), pos, std::move(expected));
        }

        int parse_all() {
            if (peek() == '\0') {
                fail("empty expression", {"number", "identifier", "("});
            }
            const int root = sum();
            if (peek() != '\0') {
                fail(std::string("unexpected '") + s[i] + "'", {"operator", "end of input"});
            }
            return root;
        }

        int sum() {
            int lhs = product();
            for (;;) {
                const char c = peek();
                if (c != '+' && c != '-') {
                    return lhs;
                }
                const std::size_t pos = ++i;
                const int rhs = product();
                lhs = add({c == '+' ? Op::add : Op::sub, 0.0, lhs, rhs, pos});
            }
        }

        int product() {
            int lhs = unary();
            for (;;) {
                const char c = peek();
                if (c != '*' && c != '/') {
                    return lhs;
                }
                const std::size_t pos = ++i;
                const int rhs = unary();
                lhs = add({c == '*' ? Op::mul : Op::div, 0.0, lhs, rhs, pos});
            }
        }

        int unary() {
            const char c = peek();
            if (c == '-' || c == '+') {
                const std::size_t pos = ++i;
                const int arg = unary();
                return c == '-' ? add({Op::neg, 0.0, arg, -1, pos}) : arg;
            }
            return power();
        }

        int power() {
            const int base = primary();
            if (peek() == '^') {
                const std::size_t pos = ++i;
                const int exponent = unary();
                return add({Op::pow, 0.0, base, exponent, pos});
            }
            return base;
        }

        int primary() {
            const char c = peek();
            const std::size_t pos = i + 1;
            if (c == '(') {
                ++i;
                const int inner = sum();
                expect(')');
                return inner;
            }
            if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') {
                return number();
            }
            if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
                std::size_t j = i;
                while (j < s.size() && (std::isalnum(static_cast<unsigned char>(s[j])) || s[j] == '_')) {
                    ++j;
                }
                const std::string name(s.substr(i, j - i));
                if (name == "x") {
                    i = j;
                    saw_x = true;
                    return add({Op::var_x, 0.0, -1, -1, pos});
                }
                if (name == "t") {
                    i = j;
                    saw_t = true;
                    return add({Op::var_t, 0.0, -1, -1, pos});
                }
                if (name == "pi") {
                    i = j;
                    return add({Op::num, std::numbers::pi, -1, -1, pos});
                }
                Op op;
                int arity = 1;
                if (name == "sqrt") {
                    op = Op::sqrt;
                } else if (name == "sin") {
                    op = Op::sin;
                } else if (name == "cos") {
                    op = Op::cos;
                } else if (name == "exp") {
                    op = Op::exp;
                } else if (name == "abs") {
                    op = Op::abs;
                } else if (name == "pow") {
                    op = Op::pow;
                    arity = 2;
                } else {
                    fail("unknown identifier '" + name + "'",
                         {"x", "t", "pi", "sqrt", "sin", "cos", "exp", "abs", "pow"});
                }
                i = j;
                expect('(');
                const int a = sum();
                int b = -1;
                if (arity == 2) {
                    expect(',');
                    b = sum();
                }
                expect(')');
                return add({op, 0.0, a, b, pos});
            }
            if (c == '\0') {
                fail("unexpected end of input", {"number", "identifier", "("});
            }
            fail(std::string("unexpected '") + c + "'", {"number", "identifier", "("});
        }

        int number() {
            const std::size_t pos = i + 1;
            const std::string rest(s.substr(i));
            char* end = nullptr;
            const double v = std::strtod(rest.c_str(), &end);
            if (end == rest.c_str()) {
                fail("malformed number", {"number"});
            }
            i += static_cast<std::size_t>(end - rest.c_str());
            return add({Op::num, v, -1, -1, pos});
        }

        void expect(char c) {
            if (peek() != c) {
                if (c == ')') {
                    fail(peek() == '\0' ? "missing ')'" : std::string("unexpected '") + s[i] + "'",
                         {")", "operator"});
                }
                fail(std::string("missing '") + c + "'", {std::string(1, c)});
            }
            ++i;
        }
    };

    [[noreturn]] void eval_fail(const std::string& msg, std::size_t pos) const {
        std::ostringstream os;
        os << "evaluation error at position " << pos << " of '" << source_ << "': " << msg;
        throw EvalError(os.str(), pos);
    }

    double checked(double v, const Node& n) const {
        if (!std::isfinite(v)) {
            eval_fail("result is not finite", n.pos);
        }
        return v;
    }

    double eval_node(int id, double x, double t) const {
        const Node& n = (*nodes_)[static_cast<std::size_t>(id)];
        switch (n.op) {
        case Op::num:
            return n.value;
        case Op::var_x:
            return x;
        case Op::var_t:
            return t;
        case Op::neg:
            return -eval_node(n.a, x, t);
        case Op::add:
            return checked(eval_node(n.a, x, t) + eval_node(n.b, x, t), n);
        case Op::sub:
            return checked(eval_node(n.a, x, t) - eval_node(n.b, x, t), n);
        case Op::mul:
            return checked(eval_node(n.a, x, t) * eval_node(n.b, x, t), n);
        case Op::div: {
            const double den = eval_node(n.b, x, t);
            if (den == 0.0) {
                eval_fail("division by zero", n.pos);
            }
            return checked(eval_node(n.a, x, t) / den, n);
        }
        case Op::pow: {
            const double b = eval_node(n.a, x, t);
            const double e = eval_node(n.b, x, t);
            if (b < 0.0 && e != std::floor(e)) {
                eval_fail("negative base with non-integer exponent", n.pos);
            }
            if (b == 0.0 && e < 0.0) {
                eval_fail("zero raised to a negative power", n.pos);
            }
            return checked(std::pow(b, e), n);
        }
        case Op::sqrt: {
            const double v = eval_node(n.a, x, t);
            if (v < 0.0) {
                eval_fail("sqrt of a negative number", n.pos);
            }
            return std::sqrt(v);
        }
        case Op::sin:
            return std::sin(eval_node(n.a, x, t));
        case Op::cos:
            return std::cos(eval_node(n.a, x, t));
        case Op::exp:
            return checked(std::exp(eval_node(n.a, x, t)), n);
        case Op::abs:
            return std::abs(eval_node(n.a, x, t));
        }
        return 0.0;
    }

    std::string source_;
    std::shared_ptr<const std::vector<Node>> nodes_;
    int root_ = -1;
    bool uses_x_ = false;
    bool uses_t_ = false;
};

inline Expr parse_expr(std::string_view src) {
    return Expr::parse(src);
}

} // namespace tfpp

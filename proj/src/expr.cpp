#include "loewner/expr.hpp"

#include <cctype>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <cstring>

namespace loewner {

ExprPtr Expr::constant(double c) {
    auto e = std::make_shared<Expr>();
    e->kind = Kind::Const;
    e->value = c;
    return e;
}

ExprPtr Expr::variable() {
    auto e = std::make_shared<Expr>();
    e->kind = Kind::Var;
    return e;
}

ExprPtr Expr::binary(Kind k, ExprPtr a, ExprPtr b) {
    auto e = std::make_shared<Expr>();
    e->kind = k;
    e->lhs = std::move(a);
    e->rhs = std::move(b);
    return e;
}

ExprPtr Expr::unary(Kind k, ExprPtr a) {
    auto e = std::make_shared<Expr>();
    e->kind = k;
    e->lhs = std::move(a);
    return e;
}

ExprPtr Expr::power(ExprPtr base, double exponent) {
    auto e = std::make_shared<Expr>();
    e->kind = Kind::Pow;
    e->value = exponent;
    e->lhs = std::move(base);
    return e;
}

DomainInterval::DomainInterval(double lo_, double hi_) : lo(lo_), hi(hi_) {
    if (!(lo > 0.0)) throw DomainError("domain interval must have lo > 0");
    if (!(lo < hi)) throw DomainError("domain interval must have lo < hi");
}

// ---------------------------------------------------------------------------
// Parser: recursive descent over the grammar
//   expr   := term (("+"|"-") term)*
//   term   := factor (("*"|"/") factor)*
//   factor := "-" factor | atom ("^" number)?
//   atom   := number | "t" | "(" expr ")" | ("exp"|"log"|"sqrt") "(" expr ")"
// Whitespace is insignificant; "^" admits only a numeric literal exponent
// (an optional sign is allowed there, where it is unambiguous).

namespace {

class Parser {
public:
    explicit Parser(const std::string& text) : s_(text) {}

    ExprPtr run() {
        ExprPtr e = expr();
        skip_ws();
        if (pos_ != s_.size())
            fail("unexpected trailing input", pos_);
        return e;
    }

private:
    const std::string& s_;
    std::size_t pos_ = 0;

    [[noreturn]] void fail(const std::string& what, std::size_t at) const {
        throw ParseError(what + " at byte " + std::to_string(at), at);
    }

    void skip_ws() {
        while (pos_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[pos_]))) ++pos_;
    }

    bool peek_is(char c) {
        skip_ws();
        return pos_ < s_.size() && s_[pos_] == c;
    }

    bool accept(char c) {
        if (peek_is(c)) { ++pos_; return true; }
        return false;
    }

    void expect(char c) {
        skip_ws();
        if (pos_ >= s_.size() || s_[pos_] != c)
            fail(std::string("expected '") + c + "'", pos_);
        ++pos_;
    }

    bool number_starts_here() const {
        if (pos_ >= s_.size()) return false;
        char c = s_[pos_];
        return std::isdigit(static_cast<unsigned char>(c)) ||
               (c == '.' && pos_ + 1 < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_ + 1])));
    }

    double number() {
        skip_ws();
        std::size_t start = pos_;
        if (!number_starts_here())
            fail("expected number", pos_);
        std::size_t p = pos_;
        while (p < s_.size() && std::isdigit(static_cast<unsigned char>(s_[p]))) ++p;
        if (p < s_.size() && s_[p] == '.') {
            ++p;
            while (p < s_.size() && std::isdigit(static_cast<unsigned char>(s_[p]))) ++p;
        }
        if (p < s_.size() && (s_[p] == 'e' || s_[p] == 'E')) {
            std::size_t q = p + 1;
            if (q < s_.size() && (s_[q] == '+' || s_[q] == '-')) ++q;
            if (q < s_.size() && std::isdigit(static_cast<unsigned char>(s_[q]))) {
                ++q;
                while (q < s_.size() && std::isdigit(static_cast<unsigned char>(s_[q]))) ++q;
                p = q;
            }
        }
        double out = 0.0;
        auto res = std::from_chars(s_.data() + start, s_.data() + p, out);
        if (res.ec != std::errc())
            fail("malformed number", start);
        pos_ = p;
        return out;
    }

    std::string identifier() {
        std::size_t start = pos_;
        while (pos_ < s_.size() &&
               (std::isalnum(static_cast<unsigned char>(s_[pos_])) || s_[pos_] == '_'))
            ++pos_;
        return s_.substr(start, pos_ - start);
    }

    ExprPtr expr() {
        ExprPtr e = term();
        for (;;) {
            if (accept('+')) e = Expr::binary(Expr::Kind::Add, e, term());
            else if (accept('-')) e = Expr::binary(Expr::Kind::Sub, e, term());
            else return e;
        }
    }

    ExprPtr term() {
        ExprPtr e = factor();
        for (;;) {
            if (accept('*')) e = Expr::binary(Expr::Kind::Mul, e, factor());
            else if (accept('/')) e = Expr::binary(Expr::Kind::Div, e, factor());
            else return e;
        }
    }

    ExprPtr factor() {
        if (accept('-'))
            return Expr::unary(Expr::Kind::Neg, factor());
        ExprPtr base = atom();
        if (accept('^'))
            return Expr::power(std::move(base), exponent());
        return base;
    }

    // The exponent must be a numeric literal; "t^t" is rejected as a
    // non-constant exponent rather than a generic syntax error.
    double exponent() {
        skip_ws();
        std::size_t at = pos_;
        double sign = 1.0;
        if (pos_ < s_.size() && (s_[pos_] == '-' || s_[pos_] == '+')) {
            if (s_[pos_] == '-') sign = -1.0;
            ++pos_;
            skip_ws();
        }
        if (number_starts_here())
            return sign * number();
        if (pos_ < s_.size() &&
            (std::isalpha(static_cast<unsigned char>(s_[pos_])) || s_[pos_] == '(' || s_[pos_] == '_'))
            fail("non-constant exponent", at);
        fail("expected numeric exponent", at);
    }

    ExprPtr atom() {
        skip_ws();
        if (pos_ >= s_.size())
            fail("unexpected end of input", pos_);
        if (number_starts_here())
            return Expr::constant(number());
        if (accept('(')) {
            ExprPtr e = expr();
            expect(')');
            return e;
        }
        char c = s_[pos_];
        if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
            std::size_t at = pos_;
            std::string id = identifier();
            if (id == "t")
                return Expr::variable();
            Expr::Kind k;
            if (id == "exp") k = Expr::Kind::Exp;
            else if (id == "log") k = Expr::Kind::Log;
            else if (id == "sqrt") k = Expr::Kind::Sqrt;
            else fail("unknown identifier '" + id + "'", at);
            expect('(');
            ExprPtr arg = expr();
            expect(')');
            return Expr::unary(k, arg);
        }
        fail(std::string("unexpected character '") + c + "'", pos_);
    }
};

// Scalar/dual evaluation share this walker so both follow the exact same
// arithmetic path.
template <class T> struct Ops;

template <> struct Ops<double> {
    static double value_of(double x) { return x; }
    static double make_const(double c) { return c; }
    static double exp(double x) { return std::exp(x); }
    static double log(double x) { return std::log(x); }
    static double sqrt(double x) { return std::sqrt(x); }
    static double pow(double x, double p) { return std::pow(x, p); }
    static bool finite(double x) { return std::isfinite(x); }
};

template <> struct Ops<Dual> {
    static double value_of(Dual x) { return x.val; }
    static Dual make_const(double c) { return Dual::constant(c); }
    static Dual exp(Dual x) { return loewner::exp(x); }
    static Dual log(Dual x) { return loewner::log(x); }
    static Dual sqrt(Dual x) { return loewner::sqrt(x); }
    static Dual pow(Dual x, double p) { return pow_const(x, p); }
    static bool finite(Dual x) { return std::isfinite(x.val) && std::isfinite(x.der); }
};

[[noreturn]] void domain_fail(const char* what, double at) {
    char buf[128];
    std::snprintf(buf, sizeof(buf), "%s (operand %.17g)", what, at);
    throw DomainError(buf);
}

template <class T>
T eval_node(const Expr& e, T t) {
    using O = Ops<T>;
    switch (e.kind) {
    case Expr::Kind::Const: return O::make_const(e.value);
    case Expr::Kind::Var:   return t;
    case Expr::Kind::Add:   return eval_node(*e.lhs, t) + eval_node(*e.rhs, t);
    case Expr::Kind::Sub:   return eval_node(*e.lhs, t) - eval_node(*e.rhs, t);
    case Expr::Kind::Mul:   return eval_node(*e.lhs, t) * eval_node(*e.rhs, t);
    case Expr::Kind::Div: {
        T num = eval_node(*e.lhs, t);
        T den = eval_node(*e.rhs, t);
        if (std::fabs(O::value_of(den)) < Tol::divisor_min)
            domain_fail("division by near-zero value", O::value_of(den));
        return num / den;
    }
    case Expr::Kind::Pow: {
        T base = eval_node(*e.lhs, t);
        double b = O::value_of(base);
        double p = e.value;
        if (b < 0.0 && p != std::floor(p))
            domain_fail("negative base with non-integer exponent", b);
        if (b == 0.0 && p < 0.0)
            domain_fail("zero base with negative exponent", b);
        T r = O::pow(base, p);
        if (!O::finite(r)) domain_fail("non-finite power result", b);
        return r;
    }
    case Expr::Kind::Neg:   return -eval_node(*e.lhs, t);
    case Expr::Kind::Exp: {
        T a = eval_node(*e.lhs, t);
        T r = O::exp(a);
        if (!O::finite(r)) domain_fail("exp overflow", O::value_of(a));
        return r;
    }
    case Expr::Kind::Log: {
        T a = eval_node(*e.lhs, t);
        if (!(O::value_of(a) > 0.0))
            domain_fail("log of non-positive value", O::value_of(a));
        return O::log(a);
    }
    case Expr::Kind::Sqrt: {
        T a = eval_node(*e.lhs, t);
        if (O::value_of(a) < 0.0)
            domain_fail("sqrt of negative value", O::value_of(a));
        return O::sqrt(a);
    }
    }
    throw DomainError("corrupt expression node");
}

void print_node(const Expr& e, std::string& out) {
    auto num = [&out](double v) {
        char buf[40];
        std::snprintf(buf, sizeof(buf), "%.17g", v);
        out += buf;
    };
    switch (e.kind) {
    case Expr::Kind::Const: num(e.value); return;
    case Expr::Kind::Var:   out += 't'; return;
    case Expr::Kind::Add:
    case Expr::Kind::Sub:
    case Expr::Kind::Mul:
    case Expr::Kind::Div: {
        char op = e.kind == Expr::Kind::Add ? '+'
                : e.kind == Expr::Kind::Sub ? '-'
                : e.kind == Expr::Kind::Mul ? '*' : '/';
        out += '(';
        print_node(*e.lhs, out);
        out += op;
        print_node(*e.rhs, out);
        out += ')';
        return;
    }
    case Expr::Kind::Pow:
        out += '(';
        print_node(*e.lhs, out);
        out += '^';
        num(e.value);
        out += ')';
        return;
    case Expr::Kind::Neg:
        out += "(-";
        print_node(*e.lhs, out);
        out += ')';
        return;
    case Expr::Kind::Exp: out += "exp("; print_node(*e.lhs, out); out += ')'; return;
    case Expr::Kind::Log: out += "log("; print_node(*e.lhs, out); out += ')'; return;
    case Expr::Kind::Sqrt: out += "sqrt("; print_node(*e.lhs, out); out += ')'; return;
    }
}

} // namespace

ScalarFunction ScalarFunction::parse(const std::string& text) {
    Parser p(text);
    return ScalarFunction(p.run(), text);
}

double ScalarFunction::eval(double t) const {
    double r = eval_node<double>(*ast_, t);
    if (!std::isfinite(r)) throw DomainError("non-finite result");
    return r;
}

std::pair<double, double> ScalarFunction::eval_dual(double t) const {
    Dual r = eval_node<Dual>(*ast_, Dual::variable(t));
    if (!std::isfinite(r.val) || !std::isfinite(r.der))
        throw DomainError("non-finite dual result");
    return {r.val, r.der};
}

ScalarFunction ScalarFunction::companion() const {
    ExprPtr g = Expr::binary(Expr::Kind::Div, Expr::variable(), ast_);
    return ScalarFunction(std::move(g), "t/(" + source_ + ")");
}

ScalarFunction ScalarFunction::sqrt_of() const {
    ExprPtr s = Expr::unary(Expr::Kind::Sqrt, ast_);
    return ScalarFunction(std::move(s), "sqrt(" + source_ + ")");
}

std::string ScalarFunction::print() const {
    std::string out;
    print_node(*ast_, out);
    return out;
}

} // namespace loewner

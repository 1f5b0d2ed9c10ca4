#pragma once

#include <cstddef>
#include <memory>
#include <stdexcept>
#include <string>
#include <utility>

#include "loewner/dual.hpp"
#include "loewner/tolerances.hpp"

namespace loewner {

// Raised when text does not conform to the expression grammar.
struct ParseError : std::runtime_error {
    std::size_t offset;
    ParseError(std::string msg, std::size_t off)
        : std::runtime_error(std::move(msg)), offset(off) {}
};

// Raised when an evaluation leaves the function's domain (log/sqrt of a
// non-positive value, near-zero divisor, non-finite result, ...).
struct DomainError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct Expr;
using ExprPtr = std::shared_ptr<const Expr>;

struct Expr {
    enum class Kind { Const, Var, Add, Sub, Mul, Div, Pow, Neg, Exp, Log, Sqrt };

    Kind kind;
    double value = 0.0;    // Const payload, or the exponent for Pow
    ExprPtr lhs, rhs;      // children; unary nodes use lhs only

    static ExprPtr constant(double c);
    static ExprPtr variable();
    static ExprPtr binary(Kind k, ExprPtr a, ExprPtr b);
    static ExprPtr unary(Kind k, ExprPtr a);
    static ExprPtr power(ExprPtr base, double exponent);
};

// The interval a function is evaluated on; open at both ends, lo > 0.
struct DomainInterval {
    double lo = Tol::domain_lo;
    double hi = Tol::domain_hi;

    DomainInterval() = default;
    DomainInterval(double lo_, double hi_);
    bool contains(double t) const { return t > lo && t < hi; }
};

// An immutable parsed function of one variable t. Safe to share across
// threads; evaluation carries no state.
class ScalarFunction {
public:
    ScalarFunction() = default;
    ScalarFunction(ExprPtr ast, std::string source) : ast_(std::move(ast)), source_(std::move(source)) {}

    static ScalarFunction parse(const std::string& text);

    double eval(double t) const;
    // (value, derivative) via forward-mode dual arithmetic; the value
    // component follows the same arithmetic path as eval().
    std::pair<double, double> eval_dual(double t) const;

    // g(t) = t / f(t), built symbolically as a quotient AST.
    ScalarFunction companion() const;
    // t |-> sqrt(f(t)); used for the f(A)^{1/2} spectral-calculus leg.
    ScalarFunction sqrt_of() const;

    const std::string& source() const { return source_; }
    std::string print() const; // fully parenthesized; re-parses to an equivalent AST
    const ExprPtr& ast() const { return ast_; }
    bool valid() const { return ast_ != nullptr; }

private:
    ExprPtr ast_;
    std::string source_;
};

} // namespace loewner

#pragma once

#include <memory>
#include <stdexcept>
#include <string>
#include <string_view>

namespace cznd::texpr {

struct ParseError : std::runtime_error {
    ParseError(std::size_t offset, const std::string& what)
        : std::runtime_error("parse error at offset " + std::to_string(offset) +
                             ": " + what),
          offset(offset) {}
    std::size_t offset;
};

struct EvalError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

enum class Kind { Constant, Time, Neg, Add, Sub, Mul, Div, Pow, Sin, Cos };

struct Node;
using Expr = std::shared_ptr<const Node>;

/// Immutable AST node for scalar expressions in the time variable `t`.
struct Node {
    Kind kind;
    double value = 0.0;   // Constant
    int exponent = 0;     // Pow, >= 1
    Expr a, b;
};

Expr constant(double v);
Expr time_var();
Expr neg(Expr e);
Expr add(Expr a, Expr b);
Expr sub(Expr a, Expr b);
Expr mul(Expr a, Expr b);
Expr div(Expr a, Expr b);
Expr pow(Expr base, int exponent);
Expr sin(Expr e);
Expr cos(Expr e);

/// Grammar: unary minus > `^` (right-assoc, integer exponent >= 1) > `*` `/`
/// > `+` `-`; parentheses; identifiers `t`, `sin`, `cos`, `pi`; decimal
/// literals; whitespace insignificant.
Expr parse(std::string_view text);

double eval(const Expr& e, double t);

/// d/dt by the chain rule; the result is unsimplified but exact.
Expr differentiate(const Expr& e);

/// Canonical fully-parenthesized printer; parse(to_string(e)) evaluates
/// identically to e.
std::string to_string(const Expr& e);

}  // namespace cznd::texpr

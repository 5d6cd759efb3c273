#include "cznd/texpr.hpp"

#include <cctype>
#include <cmath>
#include <cstdlib>

namespace cznd::texpr {

namespace {
Expr node(Kind k, Expr a = nullptr, Expr b = nullptr) {
    auto n = std::make_shared<Node>();
    n->kind = k;
    n->a = std::move(a);
    n->b = std::move(b);
    return n;
}
}  // namespace

Expr constant(double v) {
    auto n = std::make_shared<Node>();
    n->kind = Kind::Constant;
    n->value = v;
    return n;
}

Expr time_var() { return node(Kind::Time); }
Expr neg(Expr e) { return node(Kind::Neg, std::move(e)); }
Expr add(Expr a, Expr b) { return node(Kind::Add, std::move(a), std::move(b)); }
Expr sub(Expr a, Expr b) { return node(Kind::Sub, std::move(a), std::move(b)); }
Expr mul(Expr a, Expr b) { return node(Kind::Mul, std::move(a), std::move(b)); }
Expr div(Expr a, Expr b) { return node(Kind::Div, std::move(a), std::move(b)); }

Expr pow(Expr base, int exponent) {
    if (exponent < 1) throw std::invalid_argument("pow: exponent must be >= 1");
    auto n = std::make_shared<Node>();
    n->kind = Kind::Pow;
    n->a = std::move(base);
    n->exponent = exponent;
    return n;
}

Expr sin(Expr e) { return node(Kind::Sin, std::move(e)); }
Expr cos(Expr e) { return node(Kind::Cos, std::move(e)); }

namespace {

class Parser {
public:
    explicit Parser(std::string_view text) : text_(text) {}

    Expr run() {
        Expr e = expression();
        skip_ws();
        if (pos_ != text_.size())
            throw ParseError(pos_, "unexpected trailing input");
        return e;
    }

private:
    std::string_view text_;
    std::size_t pos_ = 0;

    void skip_ws() {
        while (pos_ < text_.size() &&
               std::isspace(static_cast<unsigned char>(text_[pos_])))
            ++pos_;
    }

    bool eat(char c) {
        skip_ws();
        if (pos_ < text_.size() && text_[pos_] == c) {
            ++pos_;
            return true;
        }
        return false;
    }

    char peek() {
        skip_ws();
        return pos_ < text_.size() ? text_[pos_] : '\0';
    }

    Expr expression() {
        Expr lhs = term();
        for (;;) {
            if (eat('+'))
                lhs = add(lhs, term());
            else if (eat('-'))
                lhs = sub(lhs, term());
            else
                return lhs;
        }
    }

    Expr term() {
        Expr lhs = unary();
        for (;;) {
            if (eat('*'))
                lhs = mul(lhs, unary());
            else if (eat('/'))
                lhs = div(lhs, unary());
            else
                return lhs;
        }
    }

    Expr unary() {
        if (eat('-')) return neg(unary());
        return power();
    }

    Expr power() {
        Expr base = primary();
        if (eat('^')) return pow(base, exponent_literal());
        return base;
    }

    int exponent_literal() {
        skip_ws();
        // Right-assoc notation like 2^3^2 never arises with integer-only
        // exponents applied to a parsed base, so a plain literal suffices.
        std::size_t start = pos_;
        while (pos_ < text_.size() &&
               std::isdigit(static_cast<unsigned char>(text_[pos_])))
            ++pos_;
        if (pos_ == start)
            throw ParseError(start, "expected integer exponent after '^'");
        int v = std::atoi(std::string(text_.substr(start, pos_ - start)).c_str());
        if (v < 1) throw ParseError(start, "exponent must be >= 1");
        return v;
    }

    Expr primary() {
        skip_ws();
        if (pos_ >= text_.size())
            throw ParseError(pos_, "expected operand, found end of input");
        char c = text_[pos_];
        if (c == '(') {
            ++pos_;
            Expr e = expression();
            if (!eat(')')) throw ParseError(pos_, "expected ')'");
            return e;
        }
        if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') return number();
        if (std::isalpha(static_cast<unsigned char>(c))) return identifier();
        throw ParseError(pos_, std::string("unexpected character '") + c + "'");
    }

    Expr number() {
        std::size_t start = pos_;
        while (pos_ < text_.size() &&
               (std::isdigit(static_cast<unsigned char>(text_[pos_])) ||
                text_[pos_] == '.'))
            ++pos_;
        std::string lit(text_.substr(start, pos_ - start));
        char* end = nullptr;
        double v = std::strtod(lit.c_str(), &end);
        if (end != lit.c_str() + lit.size())
            throw ParseError(start, "malformed number '" + lit + "'");
        return constant(v);
    }

    Expr identifier() {
        std::size_t start = pos_;
        while (pos_ < text_.size() &&
               std::isalpha(static_cast<unsigned char>(text_[pos_])))
            ++pos_;
        std::string_view id = text_.substr(start, pos_ - start);
        if (id == "t") return time_var();
        if (id == "pi") return constant(M_PI);
        if (id == "sin" || id == "cos") {
            if (!eat('('))
                throw ParseError(pos_, "expected '(' after '" + std::string(id) + "'");
            Expr arg = expression();
            if (!eat(')')) throw ParseError(pos_, "expected ')'");
            return id == "sin" ? sin(arg) : cos(arg);
        }
        throw ParseError(start, "unknown identifier '" + std::string(id) + "'");
    }
};

}  // namespace

Expr parse(std::string_view text) { return Parser(text).run(); }

double eval(const Expr& e, double t) {
    switch (e->kind) {
        case Kind::Constant: return e->value;
        case Kind::Time: return t;
        case Kind::Neg: return -eval(e->a, t);
        case Kind::Add: return eval(e->a, t) + eval(e->b, t);
        case Kind::Sub: return eval(e->a, t) - eval(e->b, t);
        case Kind::Mul: return eval(e->a, t) * eval(e->b, t);
        case Kind::Div: {
            double den = eval(e->b, t);
            if (den == 0.0) throw EvalError("division by zero at t=" + std::to_string(t));
            return eval(e->a, t) / den;
        }
        case Kind::Pow: return std::pow(eval(e->a, t), e->exponent);
        case Kind::Sin: return std::sin(eval(e->a, t));
        case Kind::Cos: return std::cos(eval(e->a, t));
    }
    throw EvalError("corrupt expression node");
}

Expr differentiate(const Expr& e) {
    switch (e->kind) {
        case Kind::Constant: return constant(0.0);
        case Kind::Time: return constant(1.0);
        case Kind::Neg: return neg(differentiate(e->a));
        case Kind::Add: return add(differentiate(e->a), differentiate(e->b));
        case Kind::Sub: return sub(differentiate(e->a), differentiate(e->b));
        case Kind::Mul:
            return add(mul(differentiate(e->a), e->b), mul(e->a, differentiate(e->b)));
        case Kind::Div:
            // (a/b)' = a'/b - a*b'/b^2
            return sub(div(differentiate(e->a), e->b),
                       div(mul(e->a, differentiate(e->b)), pow(e->b, 2)));
        case Kind::Pow: {
            Expr inner = differentiate(e->a);
            Expr scaled = mul(constant(static_cast<double>(e->exponent)),
                              e->exponent == 1 ? constant(1.0) : pow(e->a, e->exponent - 1));
            if (e->exponent == 1) return mul(constant(1.0), inner);
            return mul(scaled, inner);
        }
        case Kind::Sin: return mul(cos(e->a), differentiate(e->a));
        case Kind::Cos: return mul(neg(sin(e->a)), differentiate(e->a));
    }
    throw EvalError("corrupt expression node");
}

std::string to_string(const Expr& e) {
    switch (e->kind) {
        case Kind::Constant: {
            char buf[64];
            std::snprintf(buf, sizeof buf, "%.17g", e->value);
            std::string s(buf);
            if (e->value < 0) return "(" + s + ")";
            return s;
        }
        case Kind::Time: return "t";
        case Kind::Neg: return "(-" + to_string(e->a) + ")";
        case Kind::Add: return "(" + to_string(e->a) + "+" + to_string(e->b) + ")";
        case Kind::Sub: return "(" + to_string(e->a) + "-" + to_string(e->b) + ")";
        case Kind::Mul: return "(" + to_string(e->a) + "*" + to_string(e->b) + ")";
        case Kind::Div: return "(" + to_string(e->a) + "/" + to_string(e->b) + ")";
        case Kind::Pow:
            return "(" + to_string(e->a) + "^" + std::to_string(e->exponent) + ")";
        case Kind::Sin: return "sin(" + to_string(e->a) + ")";
        case Kind::Cos: return "cos(" + to_string(e->a) + ")";
    }
    return "?";
}

}  // namespace cznd::texpr

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <string>
#include <vector>

#include "cznd/harness.hpp"
#include "cznd/texpr.hpp"

using namespace cznd::texpr;
using cznd::SplitMix64;

TEST_CASE("literals, variables and constants") {
    CHECK(eval(parse("42"), 0.0) == doctest::Approx(42.0));
    CHECK(eval(parse("3.25"), 0.0) == doctest::Approx(3.25));
    CHECK(eval(parse("t"), 1.5) == doctest::Approx(1.5));
    CHECK(eval(parse("pi"), 0.0) == doctest::Approx(M_PI));
}

TEST_CASE("operator precedence and associativity") {
    CHECK(eval(parse("2+3*4"), 0.0) == doctest::Approx(14.0));
    CHECK(eval(parse("(2+3)*4"), 0.0) == doctest::Approx(20.0));
    CHECK(eval(parse("2-3-4"), 0.0) == doctest::Approx(-5.0));
    CHECK(eval(parse("12/3/2"), 0.0) == doctest::Approx(2.0));
    CHECK(eval(parse("-t^2"), 3.0) == doctest::Approx(-9.0));
    CHECK(eval(parse("2*t^3"), 2.0) == doctest::Approx(16.0));
    CHECK(eval(parse("-2^2"), 0.0) == doctest::Approx(-4.0));
    CHECK(eval(parse("  1 +   2 * t "), 4.0) == doctest::Approx(9.0));
}

TEST_CASE("trigonometric functions and composition") {
    CHECK(eval(parse("sin(t)"), M_PI / 2) == doctest::Approx(1.0));
    CHECK(eval(parse("cos(2*t)"), M_PI / 2) == doctest::Approx(-1.0));
    CHECK(eval(parse("sin(t)^2+cos(t)^2"), 0.7) == doctest::Approx(1.0));
    CHECK(eval(parse("sin(cos(t))"), 0.3) == doctest::Approx(std::sin(std::cos(0.3))));
}

TEST_CASE("parse errors carry byte offsets") {
    auto offset_of = [](const std::string& text) -> std::size_t {
        try {
            parse(text);
        } catch (const ParseError& e) {
            return e.offset;
        }
        return static_cast<std::size_t>(-1);
    };
    CHECK(offset_of("2+") == 2);
    CHECK(offset_of("2*(3+4") == 6);
    CHECK(offset_of("sin t") == 4);        // missing '('
    CHECK(offset_of("t^0") == 2);          // exponent must be >= 1
    CHECK(offset_of("t^-2") == 2);         // negative exponent rejected
    CHECK(offset_of("2 @ 3") == 2);
    CHECK(offset_of("foo(t)") != static_cast<std::size_t>(-1));
    CHECK_THROWS_AS(parse(""), ParseError);
    CHECK_THROWS_AS(parse("2 3"), ParseError);  // trailing junk
}

TEST_CASE("division by zero raises EvalError") {
    Expr e = parse("1/t");
    CHECK_THROWS_AS(eval(e, 0.0), EvalError);
    CHECK(eval(e, 2.0) == doctest::Approx(0.5));
}

TEST_CASE("derivatives of the building blocks") {
    auto d = [](const std::string& s, double t) {
        return eval(differentiate(parse(s)), t);
    };
    CHECK(d("7", 1.0) == doctest::Approx(0.0));
    CHECK(d("t", 5.0) == doctest::Approx(1.0));
    CHECK(d("t^3", 2.0) == doctest::Approx(12.0));
    CHECK(d("sin(t)", 0.4) == doctest::Approx(std::cos(0.4)));
    CHECK(d("cos(t)", 0.4) == doctest::Approx(-std::sin(0.4)));
    CHECK(d("sin(2*t)", 0.9) == doctest::Approx(2.0 * std::cos(1.8)));
    CHECK(d("t*sin(t)", 1.1) ==
          doctest::Approx(std::sin(1.1) + 1.1 * std::cos(1.1)));
    CHECK(d("1/t", 2.0) == doctest::Approx(-0.25));
    CHECK(d("sin(t)/t", 1.3) ==
          doctest::Approx((1.3 * std::cos(1.3) - std::sin(1.3)) / (1.3 * 1.3)));
    CHECK(d("-t^2", 3.0) == doctest::Approx(-6.0));
    CHECK(d("cos(t^2)", 0.8) == doctest::Approx(-std::sin(0.64) * 1.6));
}

namespace {

// Bounded-depth random expression over safe constructions (no division, to
// keep finite-difference checks away from poles).
Expr random_expr(SplitMix64& rng, int depth) {
    const std::uint64_t pick = rng.next() % (depth <= 0 ? 3 : 8);
    switch (pick) {
        case 0: return constant(rng.next_symmetric(3.0));
        case 1:
        case 2: return time_var();
        case 3: return add(random_expr(rng, depth - 1), random_expr(rng, depth - 1));
        case 4: return sub(random_expr(rng, depth - 1), random_expr(rng, depth - 1));
        case 5: return mul(random_expr(rng, depth - 1), random_expr(rng, depth - 1));
        case 6:
            return (rng.next() % 2) ? sin(random_expr(rng, depth - 1))
                                    : cos(random_expr(rng, depth - 1));
        default: return pow(random_expr(rng, depth - 1), 1 + int(rng.next() % 3));
    }
}

}  // namespace

TEST_CASE("symbolic derivative matches central finite differences") {
    SplitMix64 rng(99);
    int checked = 0;
    for (int trial = 0; trial < 200; ++trial) {
        Expr e = random_expr(rng, 3);
        Expr de = differentiate(e);
        const double t = rng.next_symmetric(2.0);
        const double h = 1e-6;
        double fp, fm, sym;
        fp = eval(e, t + h);
        fm = eval(e, t - h);
        sym = eval(de, t);
        if (!std::isfinite(fp) || !std::isfinite(fm) || !std::isfinite(sym)) continue;
        const double fd = (fp - fm) / (2.0 * h);
        const double scale = std::max({1.0, std::abs(sym), std::abs(fd)});
        if (scale > 1e6) continue;  // cancellation-dominated, skip
        CHECK(std::abs(sym - fd) / scale < 1e-5);
        ++checked;
    }
    CHECK(checked > 150);
}

TEST_CASE("to_string round-trips through parse") {
    SplitMix64 rng(123);
    std::vector<std::string> fixed = {
        "6+sin(t)", "2*cos(t)^2-2*cos(t)*sin(t)+6*sin(t)", "-2*sin(2*t)-6*cos(t)+2",
        "1/(t+3)", "pi*t"};
    for (const std::string& s : fixed) {
        Expr e = parse(s);
        Expr back = parse(to_string(e));
        for (int i = 0; i < 10; ++i) {
            const double t = rng.next_symmetric(2.0);
            CHECK(eval(back, t) == doctest::Approx(eval(e, t)).epsilon(1e-14));
        }
    }
    for (int trial = 0; trial < 50; ++trial) {
        Expr e = random_expr(rng, 3);
        Expr back = parse(to_string(e));
        const double t = rng.next_symmetric(2.0);
        const double a = eval(e, t), b = eval(back, t);
        if (std::isfinite(a))
            CHECK(b == doctest::Approx(a).epsilon(1e-14));
    }
}

#include <doctest.h>

#include <cmath>
#include <random>

#include "planesym/expr.hpp"
#include "planesym/zerotest.hpp"

using namespace planesym;

namespace {

Point pt(double t, double x, double y = 0, double z = 0) { return Point{t, x, y, z}; }

// central finite difference, the independent derivative oracle
double fd_derivative(const Expr& e, Coord v, Point p, const ParamBindings& params = {}) {
    const double h = 1e-5;
    Point lo = p, hi = p;
    switch (v) {
        case Coord::T: lo.t -= h; hi.t += h; break;
        case Coord::X: lo.x -= h; hi.x += h; break;
        case Coord::Y: lo.y -= h; hi.y += h; break;
        case Coord::Z: lo.z -= h; hi.z += h; break;
    }
    return (evaluate(e, hi, params) - evaluate(e, lo, params)) / (2 * h);
}

}  // namespace

TEST_CASE("parse builds the grammar-shaped tree") {
    Expr e = parse("2*t + x^2");
    REQUIRE(e.kind() == ExprKind::Sum);
    REQUIRE(e.children().size() == 2);
    const Expr& prod = e.children()[0];
    CHECK(prod.kind() == ExprKind::Product);
    CHECK(prod.children()[0].is_literal(2));
    CHECK(prod.children()[1].kind() == ExprKind::Variable);
    const Expr& pow = e.children()[1];
    CHECK(pow.kind() == ExprKind::Power);
    CHECK(pow.children()[0].variable() == Coord::X);
    CHECK(pow.children()[1].is_literal(2));
}

TEST_CASE("parse handles precedence and associativity") {
    // ^ right-associative: 2^3^2 = 2^9 = 512
    CHECK(evaluate(parse("2^3^2"), pt(0, 0)) == 512.0);
    // unary minus binds below ^: -2^2 = -(2^2)
    CHECK(evaluate(parse("-2^2"), pt(0, 0)) == -4.0);
    // * and / left fold
    CHECK(evaluate(parse("8/2/2"), pt(0, 0)) == 2.0);
    CHECK(evaluate(parse("ln((t+1)^2)"), pt(0, 5)) == 0.0);
    CHECK(evaluate(parse("1 + 2 * 3"), pt(0, 0)) == 7.0);
}

TEST_CASE("parse errors carry byte offsets") {
    CHECK_THROWS_AS(parse("exp(2*t"), ParseError);
    try {
        parse("exp(2*t");
    } catch (const ParseError& pe) {
        CHECK(pe.offset() == 7);
    }
    CHECK_THROWS_AS(parse("2*q"), ParseError);       // unknown identifier
    CHECK_THROWS_AS(parse("2*(t"), ParseError);      // unbalanced
    CHECK_THROWS_AS(parse("sin 3"), ParseError);     // function needs parens
    CHECK_NOTHROW(parse("2*a", {"a"}));              // declared parameter
    CHECK(evaluate(parse("t # trailing comment"), pt(3, 0)) == 3.0);
}

TEST_CASE("evaluate reports domain errors instead of NaN") {
    CHECK(evaluate(parse("(t+2*x)^2"), pt(1, 1)) == 9.0);
    CHECK(evaluate(parse("exp(2*t)"), pt(0, 0)) == 1.0);
    CHECK_THROWS_AS(evaluate(parse("1/t"), pt(0, 0)), EvalError);
    CHECK_THROWS_AS(evaluate(parse("ln(t)"), pt(-1, 0)), EvalError);
    CHECK_THROWS_AS(evaluate(parse("sqrt(t)"), pt(-1, 0)), EvalError);
    CHECK_THROWS_AS(evaluate(parse("a+t", {"a"}), pt(0, 0)), EvalError);  // unbound parameter
}

TEST_CASE("simplify removes identity and absorbing operands") {
    CHECK(simplify(parse("0*x + t")).kind() == ExprKind::Variable);
    CHECK(simplify(parse("t^1 * exp(0)")).kind() == ExprKind::Variable);
    CHECK(simplify(parse("t^0")).is_literal(1));
    CHECK(simplify(parse("t + 0")).kind() == ExprKind::Variable);
    CHECK(simplify(parse("1*t")).kind() == ExprKind::Variable);
}

TEST_CASE("simplify cancels equal terms with opposite sign") {
    // C = ln(t^2): C_t^2 + 2*C_tt collapses structurally
    CHECK(simplify(parse("(2/t)^2 + 2*(-2/t^2)")).is_literal(0));
    CHECK(simplify(parse("x*t - t*x")).is_literal(0));
    Expr ct = differentiate(parse("ln(t^2)"), Coord::T);
    Expr ctt = differentiate(ct, Coord::T);
    Expr bracket = power(ct, constant(2)) + constant(2) * ctt;
    CHECK(simplify(bracket).is_literal(0));
}

TEST_CASE("differentiate matches the textbook rules") {
    Expr dt2 = differentiate(parse("t^2"), Coord::T);
    CHECK(evaluate(dt2, pt(3, 0)) == 6.0);

    // d/dt ln((a*t+d)^2) = 2a/(a*t+d)
    Expr e = parse("ln((a*t+d)^2)", {"a", "d"});
    ParamBindings params{{"a", 2.0}, {"d", 0.5}};
    Expr de = differentiate(e, Coord::T);
    double got = evaluate(de, pt(1.5, 0), params);
    CHECK(got == doctest::Approx(2 * 2.0 / (2.0 * 1.5 + 0.5)).epsilon(1e-12));

    CHECK(differentiate(parse("exp(2*t)"), Coord::X).is_literal(0));
    CHECK(differentiate(parse("a", {"a"}), Coord::T).is_literal(0));
}

TEST_CASE("derivative agrees with central finite differences") {
    const std::vector<std::string> corpus = {
        "t^3 + 2*x*t",      "exp(2*t) - x",          "ln(t^2 + 1)", "sqrt(t + 2)",
        "sin(t)*cos(x)",    "sinh(x) + cosh(t)",     "t^2/x",       "(t + x)^3",
        "exp(t*x)",         "1/(t + 3)",             "t^(1/2)",     "2^t",
    };
    std::mt19937_64 rng(7);
    std::uniform_real_distribution<double> u(0.5, 1.5);
    for (const auto& s : corpus) {
        Expr e = parse(s);
        for (Coord v : {Coord::T, Coord::X}) {
            Expr de = differentiate(e, v);
            for (int i = 0; i < 50; ++i) {
                Point p = pt(u(rng), u(rng));
                double sym = evaluate(de, p);
                double num = fd_derivative(e, v, p);
                CHECK(std::abs(sym - num) <= 1e-6 * (1 + std::abs(sym)));
            }
        }
    }
}

TEST_CASE("round-trip: print then reparse evaluates bit-identically") {
    const std::vector<std::string> corpus = {
        "2*t + x^2",
        "-t^2 - 3*x/(y + 4)",
        "exp(2*t)*sin(x) - sqrt(z + 2)/ln(t + 3)",
        "t^-2 * 4",
        "1/2 + t/3 - 2^t",
        "-(t + x)*(y - z)",
        "t^(x/2)",
        "((t))",
        "cosh(x)^2 - sinh(x)^2",
        "2.25*t - 0.5",
    };
    std::mt19937_64 rng(11);
    std::uniform_real_distribution<double> u(0.25, 2.0);
    for (const auto& s : corpus) {
        Expr e = parse(s);
        Expr rt = parse(to_string(e));
        Expr simp = simplify(e);
        Expr simp_rt = parse(to_string(simp));
        for (int i = 0; i < 100; ++i) {
            Point p = pt(u(rng), u(rng), u(rng), u(rng));
            double a = evaluate(e, p);
            CHECK(a == evaluate(rt, p));  // exact
            double b = evaluate(simp, p);
            double c = evaluate(simp_rt, p);
            CHECK(b == c);  // simplified form also survives printing exactly
            CHECK(std::abs(a - b) <= 1e-12 * (1 + std::abs(a)));  // simplify preserves value
        }
    }
}

TEST_CASE("symbolic exponent is rewritten through exp/ln") {
    Expr e = simplify(parse("t^x"));
    REQUIRE(e.kind() == ExprKind::Func);
    CHECK(e.func() == UnaryFunc::Exp);
    CHECK(evaluate(e, pt(2, 3)) == doctest::Approx(8.0).epsilon(1e-12));
    // derivative of t^t at t = 1 is 1
    Expr d = differentiate(parse("t^t"), Coord::T);
    CHECK(evaluate(d, pt(1, 0)) == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("zero test: decisive cases") {
    ZeroTestConfig cfg;
    Domain dom({1, 2}, {1, 2});

    Expr ct = differentiate(parse("ln(t^2)"), Coord::T);
    Expr bracket = power(ct, constant(2)) + constant(2) * differentiate(ct, Coord::T);
    CHECK(is_identically_zero(bracket, dom, cfg) == TriState::Zero);

    CHECK(is_identically_zero(parse("t - x"), dom, cfg) == TriState::NonZero);
    CHECK(is_identically_zero(parse("sin(t)^2 + cos(t)^2 - 1"), dom, cfg) == TriState::Zero);

    // evaluation failures fold into Undetermined unless some valid sample
    // already proves NonZero
    Domain spanning({-1, 1}, {1, 2});
    CHECK(is_identically_zero(parse("ln(t*t) - 2*ln(t)"), spanning, cfg) == TriState::Undetermined);
    CHECK(is_identically_zero(parse("ln(t) + 1000"), spanning, cfg) == TriState::NonZero);
}

TEST_CASE("zero test: deterministic and monotone in the tolerance") {
    Domain dom({1, 2}, {1, 2});
    const std::vector<std::string> corpus = {"t - x", "sin(t)^2 + cos(t)^2 - 1", "t*x*0.0000000001",
                                             "exp(t) - exp(t)", "t^2 - x^2 - (t-x)*(t+x)"};
    for (const auto& s : corpus) {
        Expr e = parse(s);
        for (double eps : {1e-12, 1e-9, 1e-6, 1e-3}) {
            ZeroTestConfig a{32, eps, 42};
            ZeroTestConfig b{32, eps * 10, 42};
            TriState ra = is_identically_zero(e, dom, a);
            TriState rb = is_identically_zero(e, dom, b);
            CHECK(is_identically_zero(e, dom, a) == ra);  // repeatable
            if (ra == TriState::Zero) CHECK(rb == TriState::Zero);
        }
    }
}

TEST_CASE("sample plan is deterministic and respects exclusions") {
    Domain dom({-1, 1}, {1, 2});
    dom.exclude(Coord::T, 0.0);
    auto a = sample_points(dom, 32, 42);
    auto b = sample_points(dom, 32, 42);
    REQUIRE(a.size() == 32);
    for (int i = 0; i < 32; ++i) {
        CHECK(a[i].t == b[i].t);
        CHECK(a[i].x == b[i].x);
        CHECK(std::abs(a[i].t) >= 0.02 * 2.0);
        CHECK(dom.contains(a[i]));
    }
    auto c = sample_points(dom, 32, 43);
    bool all_same = true;
    for (int i = 0; i < 32; ++i) all_same = all_same && a[i].t == c[i].t;
    CHECK_FALSE(all_same);
}

TEST_CASE("config validation") {
    ZeroTestConfig bad{4, 1e-9, 42};
    Domain dom({1, 2}, {1, 2});
    CHECK_THROWS(zero_test(parse("t"), dom, bad));
    CHECK_THROWS(Domain({2, 1}, {1, 2}));
}

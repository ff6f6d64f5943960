#pragma once

// Shared test helpers: numeric oracles that are independent of the
// symbolic-derivative pipeline (they only evaluate A, B, C), plus a small
// seeded metric generator.

#include <array>
#include <cmath>
#include <random>

#include "planesym/expr.hpp"
#include "planesym/metric.hpp"

namespace planesym::testing {

using Mat4 = std::array<std::array<double, 4>, 4>;

inline Point shifted(Point p, int axis, double h) {
    switch (axis) {
        case 0: p.t += h; break;
        case 1: p.x += h; break;
        case 2: p.y += h; break;
        case 3: p.z += h; break;
    }
    return p;
}

inline Mat4 metric_num(const PlaneSymmetricMetric& M, const Point& p) {
    Mat4 g{};
    g[0][0] = -std::exp(evaluate(M.A(), p, M.params()));
    g[1][1] = std::exp(evaluate(M.B(), p, M.params()));
    g[2][2] = std::exp(evaluate(M.C(), p, M.params()));
    g[3][3] = g[2][2];
    return g;
}

// Christoffels from central differences of the metric components only.
inline Mat4 christoffel_upper_num(const PlaneSymmetricMetric& M, const Point& p, int a,
                                  double h = 1e-6) {
    Mat4 gp = metric_num(M, p);
    double ginv_aa = 1.0 / gp[a][a];
    auto dg = [&](int axis, int i, int j) {
        Mat4 hi = metric_num(M, shifted(p, axis, h));
        Mat4 lo = metric_num(M, shifted(p, axis, -h));
        return (hi[i][j] - lo[i][j]) / (2 * h);
    };
    Mat4 gamma{};
    for (int b = 0; b < 4; ++b)
        for (int c = 0; c < 4; ++c)
            gamma[b][c] = 0.5 * ginv_aa * (dg(b, a, c) + dg(c, a, b) - dg(a, b, c));
    return gamma;
}

// R^a_bcd by finite differences over the finite-difference Christoffels.
inline double riemann_mixed_num(const PlaneSymmetricMetric& M, const Point& p, int a, int b, int c,
                                int d, double h = 1e-4) {
    auto gamma = [&](const Point& q, int up, int lo1, int lo2) {
        return christoffel_upper_num(M, q, up)[lo1][lo2];
    };
    double dc = (gamma(shifted(p, c, h), a, d, b) - gamma(shifted(p, c, -h), a, d, b)) / (2 * h);
    double dd = (gamma(shifted(p, d, h), a, c, b) - gamma(shifted(p, d, -h), a, c, b)) / (2 * h);
    double quad = 0;
    for (int e = 0; e < 4; ++e)
        quad += gamma(p, a, c, e) * gamma(p, e, d, b) - gamma(p, a, d, e) * gamma(p, e, c, b);
    return dc - dd + quad;
}

inline double riemann_down_num(const PlaneSymmetricMetric& M, const Point& p, int a, int b, int c,
                               int d) {
    return metric_num(M, p)[a][a] * riemann_mixed_num(M, p, a, b, c, d);
}

// Random degree-two polynomial in t, x with small half-integer coefficients.
inline Expr random_poly(std::mt19937_64& rng) {
    std::uniform_int_distribution<int> pick(-2, 2);
    Expr t = var(Coord::T), x = var(Coord::X);
    std::vector<Expr> monomials = {constant(1), t, x, t * x, power(t, constant(2)),
                                   power(x, constant(2))};
    std::vector<Expr> terms;
    for (const Expr& m : monomials) {
        int c = pick(rng);
        if (c != 0) terms.push_back(constant(Rational(c, 2)) * m);
    }
    return sum(std::move(terms));
}

inline PlaneSymmetricMetric random_metric(std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    Domain dom({0.3, 1.3}, {0.3, 1.3});
    return PlaneSymmetricMetric(random_poly(rng), random_poly(rng), random_poly(rng), dom);
}

// The five analyzed line elements, as pinned fixtures (also provided by
// the casebook module; duplicated here so low-level tests do not depend
// on it).
inline PlaneSymmetricMetric fixture_case1() {
    return PlaneSymmetricMetric(parse("t"), constant(0), parse("2*t"), Domain({-1, 1}, {-1, 1}));
}
inline PlaneSymmetricMetric fixture_case6() {
    return PlaneSymmetricMetric(constant(0), parse("ln((t+x)^2)"), parse("ln(t^2)"),
                                Domain({1, 2}, {1, 2}));
}
inline PlaneSymmetricMetric fixture_case14() {
    return PlaneSymmetricMetric(parse("2*t+2*x"), parse("t+x"), constant(0),
                                Domain({-1, 1}, {-1, 1}));
}
inline PlaneSymmetricMetric fixture_case27() {
    return PlaneSymmetricMetric(constant(0), constant(0), parse("ln(t^2)"), Domain({1, 3}, {-1, 1}));
}
inline PlaneSymmetricMetric fixture_case28() {
    return PlaneSymmetricMetric(constant(0), constant(0), parse("ln((t+2*x)^2)"),
                                Domain({1, 2}, {1, 2}));
}
inline PlaneSymmetricMetric fixture_flat() {
    return PlaneSymmetricMetric(constant(0), constant(0), constant(0), Domain({-1, 1}, {-1, 1}));
}

}  // namespace planesym::testing

#include "planesym/metric.hpp"

#include <cmath>

namespace planesym {

// ---------------------------------------------------------------------------
// TensorField

TensorField::TensorField(int n_upper, int n_lower) : up_(n_upper), lo_(n_lower) {
    std::size_t n = 1;
    for (int i = 0; i < rank(); ++i) n *= 4;
    comp_.assign(n, Expr());
}

std::size_t TensorField::flat(std::initializer_list<int> idx) const {
    if (static_cast<int>(idx.size()) != rank())
        throw std::invalid_argument("tensor index arity mismatch");
    std::size_t f = 0;
    for (int i : idx) {
        if (i < 0 || i > 3) throw std::out_of_range("tensor index out of range");
        f = f * 4 + static_cast<std::size_t>(i);
    }
    return f;
}

std::vector<int> TensorField::unflatten(std::size_t flat_index) const {
    std::vector<int> idx(rank());
    for (int i = rank() - 1; i >= 0; --i) {
        idx[i] = static_cast<int>(flat_index % 4);
        flat_index /= 4;
    }
    return idx;
}

double max_abs_at(const TensorField& T, const Point& p, const ParamBindings& params) {
    double m = 0;
    for (std::size_t i = 0; i < T.size(); ++i) {
        if (T.component(i).is_literal(0)) continue;
        m = std::max(m, std::abs(evaluate(T.component(i), p, params)));
    }
    return m;
}

// ---------------------------------------------------------------------------
// PlaneSymmetricMetric

PlaneSymmetricMetric::PlaneSymmetricMetric(Expr A, Expr B, Expr C, Domain domain, ParamBindings params)
    : A_(simplify(A)), B_(simplify(B)), C_(simplify(C)), domain_(std::move(domain)),
      params_(std::move(params)) {
    const char* names = "ABC";
    const Expr* fns[3] = {&A_, &B_, &C_};
    for (int i = 0; i < 3; ++i) {
        std::set<Coord> vars;
        std::set<std::string> ps;
        collect_symbols(*fns[i], vars, ps);
        if (vars.count(Coord::Y) || vars.count(Coord::Z))
            throw MetricError(std::string(1, names[i]) + " may depend only on t, x");
        for (const auto& name : ps)
            if (!params_.count(name))
                throw MetricError(std::string("unbound parameter '") + name + "' in " +
                                  std::string(1, names[i]));
    }
    // nondegeneracy probe: the metric functions must stay finite on the domain
    for (const Point& p : sample_points(domain_, 16, 42)) {
        for (int i = 0; i < 3; ++i) {
            double v;
            try {
                v = evaluate(*fns[i], p, params_);
            } catch (const EvalError& err) {
                throw MetricError(std::string(1, names[i]) + " not evaluable at " + to_string(p) +
                                  ": " + err.what());
            }
            double ev = std::exp(v);
            if (!std::isfinite(v) || !std::isfinite(ev) || ev <= 0.0)
                throw MetricError(std::string("e^") + names[i] + " degenerate at " + to_string(p));
        }
    }
}

// ---------------------------------------------------------------------------
// Geometry

TensorField metric_tensor(const PlaneSymmetricMetric& M) {
    TensorField g(0, 2);
    g.set({0, 0}, negate(exp(M.A())));
    g.set({1, 1}, exp(M.B()));
    g.set({2, 2}, exp(M.C()));
    g.set({3, 3}, exp(M.C()));
    return g;
}

TensorField inverse_metric(const PlaneSymmetricMetric& M) {
    TensorField gi(2, 0);
    gi.set({0, 0}, negate(exp(negate(M.A()))));
    gi.set({1, 1}, exp(negate(M.B())));
    gi.set({2, 2}, exp(negate(M.C())));
    gi.set({3, 3}, exp(negate(M.C())));
    return gi;
}

namespace {

TensorField christoffels_from(const TensorField& g, const TensorField& ginv) {
    // Gamma^a_bc = 1/2 g^{aa} (d_b g_ac + d_c g_ab - d_a g_bc); the metric
    // is diagonal, so only the e = a term of g^{ae} survives.
    TensorField gamma(1, 2);
    Expr half = constant(Rational(1, 2));
    for (int a = 0; a < 4; ++a) {
        for (int b = 0; b < 4; ++b) {
            for (int c = b; c < 4; ++c) {
                Expr term = sum({differentiate(g.at({a, c}), coord_of(b)),
                                 differentiate(g.at({a, b}), coord_of(c)),
                                 negate(differentiate(g.at({b, c}), coord_of(a)))});
                Expr val = simplify(product({half, ginv.at({a, a}), std::move(term)}));
                gamma.set({a, b, c}, val);
                gamma.set({a, c, b}, val);
            }
        }
    }
    return gamma;
}

TensorField riemann_mixed_from(const TensorField& gamma) {
    TensorField R(1, 3);
    for (int a = 0; a < 4; ++a) {
        for (int b = 0; b < 4; ++b) {
            for (int c = 0; c < 4; ++c) {
                for (int d = c + 1; d < 4; ++d) {  // antisymmetric in (c, d)
                    std::vector<Expr> terms;
                    terms.push_back(differentiate(gamma.at({a, d, b}), coord_of(c)));
                    terms.push_back(negate(differentiate(gamma.at({a, c, b}), coord_of(d))));
                    for (int e = 0; e < 4; ++e) {
                        terms.push_back(product({gamma.at({a, c, e}), gamma.at({e, d, b})}));
                        terms.push_back(negate(product({gamma.at({a, d, e}), gamma.at({e, c, b})})));
                    }
                    Expr val = sum(std::move(terms));
                    R.set({a, b, c, d}, val);
                    R.set({a, b, d, c}, negate(val));
                }
            }
        }
    }
    return R;
}

TensorField riemann_down_from(const TensorField& g, const TensorField& mixed) {
    TensorField R(0, 4);
    for (int a = 0; a < 4; ++a)
        for (int b = 0; b < 4; ++b)
            for (int c = 0; c < 4; ++c)
                for (int d = 0; d < 4; ++d)
                    R.set({a, b, c, d}, product({g.at({a, a}), mixed.at({a, b, c, d})}));
    return R;
}

}  // namespace

TensorField christoffels(const PlaneSymmetricMetric& M) {
    return christoffels_from(metric_tensor(M), inverse_metric(M));
}

TensorField riemann_mixed(const PlaneSymmetricMetric& M) {
    return riemann_mixed_from(christoffels(M));
}

TensorField riemann_down(const PlaneSymmetricMetric& M) {
    return riemann_down_from(metric_tensor(M), riemann_mixed(M));
}

TensorField ricci(const PlaneSymmetricMetric& M) {
    TensorField mixed = riemann_mixed(M);
    TensorField ric(0, 2);
    for (int a = 0; a < 4; ++a) {
        for (int b = 0; b < 4; ++b) {
            std::vector<Expr> terms;
            for (int c = 0; c < 4; ++c) terms.push_back(mixed.at({c, a, c, b}));
            ric.set({a, b}, sum(std::move(terms)));
        }
    }
    return ric;
}

TensorField covariant_derivative(const TensorField& T, const PlaneSymmetricMetric& M) {
    if (T.upper() != 0 || T.lower() != 2)
        throw std::invalid_argument("covariant_derivative expects a (0,2) field");
    TensorField gamma = christoffels(M);
    TensorField D(0, 3);
    for (int a = 0; a < 4; ++a) {
        for (int b = 0; b < 4; ++b) {
            for (int c = 0; c < 4; ++c) {
                std::vector<Expr> terms;
                terms.push_back(differentiate(T.at({a, b}), coord_of(c)));
                for (int e = 0; e < 4; ++e) {
                    terms.push_back(negate(product({gamma.at({e, c, a}), T.at({e, b})})));
                    terms.push_back(negate(product({gamma.at({e, c, b}), T.at({a, e})})));
                }
                D.set({a, b, c}, sum(std::move(terms)));
            }
        }
    }
    return D;
}

// ---------------------------------------------------------------------------
// Closed-form curvature components

const Expr& RiemannComponents::alpha(int i) const {
    switch (i) {
        case 1: return alpha1;
        case 2: return alpha2;
        case 3: return alpha3;
        case 4: return alpha4;
        case 5: return alpha5;
    }
    throw std::out_of_range("alpha index must be 1..5");
}

namespace {

struct Derivs {
    Expr A, B, C;
    Expr At, Ax, Axx, Bt, Bx, Btt, Ct, Cx, Ctt, Cxx, Ctx;
    explicit Derivs(const PlaneSymmetricMetric& M) : A(M.A()), B(M.B()), C(M.C()) {
        At = differentiate(A, Coord::T);
        Ax = differentiate(A, Coord::X);
        Axx = differentiate(Ax, Coord::X);
        Bt = differentiate(B, Coord::T);
        Bx = differentiate(B, Coord::X);
        Btt = differentiate(Bt, Coord::T);
        Ct = differentiate(C, Coord::T);
        Cx = differentiate(C, Coord::X);
        Ctt = differentiate(Ct, Coord::T);
        Cxx = differentiate(Cx, Coord::X);
        Ctx = differentiate(Ct, Coord::X);
    }
};

Expr quarter() { return constant(Rational(1, 4)); }

Expr sq(const Expr& e) { return power(e, constant(2)); }

Expr brkt_A(const Derivs& d) {  // A_x^2 + 2 A_xx - A_x B_x
    return sum({sq(d.Ax), constant(2) * d.Axx, negate(d.Ax * d.Bx)});
}
Expr brkt_B(const Derivs& d) {  // B_t^2 + 2 B_tt - A_t B_t
    return sum({sq(d.Bt), constant(2) * d.Btt, negate(d.At * d.Bt)});
}

Expr alpha1_expr(const Derivs& d) {
    return quarter() * (exp(d.A) * brkt_A(d) - exp(d.B) * brkt_B(d));
}

Expr alpha2_expr(const Derivs& d) {
    Expr inner = exp(d.B) * sum({sq(d.Ct), constant(2) * d.Ctt, negate(d.At * d.Ct)}) -
                 exp(d.A) * d.Ax * d.Cx;
    return negate(quarter() * exp(d.C - d.B) * inner);
}

Expr alpha3_expr(const Derivs& d) {
    Expr inner = exp(d.A) * sum({sq(d.Cx), constant(2) * d.Cxx, negate(d.Bx * d.Cx)}) -
                 exp(d.B) * d.Bt * d.Ct;
    return negate(quarter() * exp(d.C - d.A) * inner);
}

Expr alpha4_inner(const Derivs& d) { return exp(d.A) * sq(d.Cx) - exp(d.B) * sq(d.Ct); }

Expr alpha5_inner(const Derivs& d) {
    return sum({d.Ct * d.Cx, constant(2) * d.Ctx, negate(d.Ax * d.Ct), negate(d.Bt * d.Cx)});
}

}  // namespace

RiemannComponents riemann_closed_form(const PlaneSymmetricMetric& M) {
    Derivs d(M);
    RiemannComponents r;
    r.alpha1 = simplify(alpha1_expr(d));
    r.alpha2 = simplify(alpha2_expr(d));
    r.alpha3 = simplify(alpha3_expr(d));
    // adopted prefactor e^{2C-A-B}; the published e^{A+B+2C} fails the
    // generic-curvature oracle
    r.alpha4 = simplify(negate(quarter() * exp(constant(2) * d.C - d.A - d.B) * alpha4_inner(d)));
    // adopted overall minus sign; the published plus sign fails the oracle
    r.alpha5 = simplify(negate(quarter() * exp(d.C) * alpha5_inner(d)));
    return r;
}

RiemannComponents riemann_closed_form_published(const PlaneSymmetricMetric& M) {
    Derivs d(M);
    RiemannComponents r;
    r.alpha1 = simplify(alpha1_expr(d));
    r.alpha2 = simplify(alpha2_expr(d));
    r.alpha3 = simplify(alpha3_expr(d));
    r.alpha4 = simplify(negate(quarter() * exp(d.A + d.B + constant(2) * d.C) * alpha4_inner(d)));
    r.alpha5 = simplify(quarter() * exp(d.C) * alpha5_inner(d));
    return r;
}

std::vector<std::string> closed_form_corrections() {
    return {
        "alpha4: exponential prefactor corrected from e^(A+B+2C) to e^(2C-A-B)",
        "alpha5: overall sign corrected from +1/4 e^C [...] to -1/4 e^C [...]",
    };
}

// ---------------------------------------------------------------------------

CurvatureData::CurvatureData(const PlaneSymmetricMetric& M)
    : metric(M),
      g(metric_tensor(M)),
      ginv(inverse_metric(M)),
      gamma(christoffels_from(g, ginv)),
      riemann(riemann_mixed_from(gamma)),
      riemann_low(riemann_down_from(g, riemann)) {}

}  // namespace planesym

#include "planesym/collineation.hpp"

#include <cmath>

namespace planesym {

std::string VectorField::describe() const {
    std::string s = "(";
    for (int i = 0; i < 4; ++i) {
        if (i) s += ", ";
        s += to_string(comp[i]);
    }
    return s + ")";
}

namespace {

// Aggregates per-component zero tests into one verdict. NonZero decides
// immediately; Undetermined blocks a positive verdict.
struct Aggregator {
    CheckResult res;
    bool any_undetermined = false;
    bool any_nonzero = false;

    void feed(const ZeroTestResult& zt, const std::string& label) {
        if (zt.max_abs > res.residual) {
            res.residual = zt.max_abs;
            res.witness = zt.witness;
        }
        if (zt.state == TriState::NonZero) {
            any_nonzero = true;
        } else if (zt.state == TriState::Undetermined) {
            any_undetermined = true;
            res.warnings.push_back(label + ": undetermined zero test");
        }
    }

    CheckResult finish() {
        if (any_nonzero)
            res.aggregate = TriState::NonZero;
        else if (any_undetermined)
            res.aggregate = TriState::Undetermined;
        else
            res.aggregate = TriState::Zero;
        res.holds = res.aggregate == TriState::Zero;
        return res;
    }
};

std::array<std::array<Expr, 4>, 4> gradient_of(const VectorField& X) {
    std::array<std::array<Expr, 4>, 4> dX;  // dX[e][b] = d_b X^e
    for (int e = 0; e < 4; ++e)
        for (int b = 0; b < 4; ++b) dX[e][b] = differentiate(X[e], coord_of(b));
    return dX;
}

}  // namespace

TensorField lie_metric(const CurvatureData& cd, const VectorField& X) {
    auto dX = gradient_of(X);
    TensorField h(0, 2);
    for (int a = 0; a < 4; ++a) {
        for (int b = a; b < 4; ++b) {
            std::vector<Expr> terms;
            for (int e = 0; e < 4; ++e)
                terms.push_back(product({X[e], differentiate(cd.g.at({a, b}), coord_of(e))}));
            terms.push_back(product({cd.g.at({b, b}), dX[b][a]}));
            terms.push_back(product({cd.g.at({a, a}), dX[a][b]}));
            Expr val = sum(std::move(terms));
            h.set({a, b}, val);
            h.set({b, a}, val);
        }
    }
    return h;
}

CheckResult is_killing(const CurvatureData& cd, const VectorField& X, const ZeroTestConfig& cfg) {
    TensorField h = lie_metric(cd, X);
    Aggregator agg;
    for (int a = 0; a < 4; ++a)
        for (int b = a; b < 4; ++b)
            agg.feed(zero_test(h.at({a, b}), cd.metric.domain(), cfg, cd.metric.params()),
                     "h_" + std::to_string(a) + std::to_string(b));
    return agg.finish();
}

HomothetyResult homothety_constant(const CurvatureData& cd, const VectorField& X,
                                   const ZeroTestConfig& cfg) {
    TensorField h = lie_metric(cd, X);
    const Domain& dom = cd.metric.domain();
    const ParamBindings& params = cd.metric.params();

    // h = 2c g demands: vanishing off-diagonals, proportional diagonals,
    // and a constant ratio. All three are decided symbolically before the
    // numeric constant is read off.
    bool ok = true;
    for (int a = 0; a < 4 && ok; ++a)
        for (int b = a + 1; b < 4 && ok; ++b)
            ok = zero_test(h.at({a, b}), dom, cfg, params).state == TriState::Zero;
    for (int a = 1; a < 4 && ok; ++a) {
        Expr cross = h.at({0, 0}) * cd.g.at({a, a}) - h.at({a, a}) * cd.g.at({0, 0});
        ok = zero_test(cross, dom, cfg, params).state == TriState::Zero;
    }
    Expr ratio = quotient(h.at({0, 0}), cd.g.at({0, 0}));
    for (int v = 0; v < 4 && ok; ++v)
        ok = zero_test(differentiate(ratio, coord_of(v)), dom, cfg, params).state == TriState::Zero;

    HomothetyResult res;
    double c = 0;
    const std::vector<Point> pts = sample_points(dom, cfg.samples, cfg.seed);
    if (ok) {
        for (const Point& p : pts) {
            try {
                c = 0.5 * evaluate(ratio, p, params);
                break;
            } catch (const EvalError&) {
                ok = false;
            }
        }
    } else {
        // best-effort constant for the defect residual
        for (const Point& p : pts) {
            try {
                c = 0.5 * evaluate(ratio, p, params);
                break;
            } catch (const EvalError&) {
            }
        }
    }
    if (ok) res.c = c;

    for (const Point& p : pts) {
        for (int a = 0; a < 4; ++a) {
            for (int b = a; b < 4; ++b) {
                double hv, gv;
                try {
                    hv = evaluate(h.at({a, b}), p, params);
                    gv = a == b ? evaluate(cd.g.at({a, a}), p, params) : 0.0;
                } catch (const EvalError&) {
                    continue;
                }
                double defect = std::abs(hv - 2 * c * gv);
                if (defect > res.residual) {
                    res.residual = defect;
                    res.witness = p;
                }
            }
        }
    }
    return res;
}

namespace {

// T_{ab;c} against a precomputed connection.
TensorField covariant_derivative_with(const TensorField& T, const TensorField& gamma) {
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

}  // namespace

CheckResult is_affine(const CurvatureData& cd, const VectorField& X, const ZeroTestConfig& cfg) {
    TensorField Dh = covariant_derivative_with(lie_metric(cd, X), cd.gamma);
    Aggregator agg;
    for (std::size_t i = 0; i < Dh.size(); ++i) {
        if (Dh.component(i).is_literal(0)) continue;
        auto idx = Dh.unflatten(i);
        agg.feed(zero_test(Dh.component(i), cd.metric.domain(), cfg, cd.metric.params()),
                 "h_" + std::to_string(idx[0]) + std::to_string(idx[1]) + ";" +
                     std::to_string(idx[2]));
    }
    return agg.finish();
}

TensorField lie_riemann(const CurvatureData& cd, const VectorField& X) {
    auto dX = gradient_of(X);
    const TensorField& R = cd.riemann;
    TensorField L(1, 3);
    for (int a = 0; a < 4; ++a) {
        for (int b = 0; b < 4; ++b) {
            for (int c = 0; c < 4; ++c) {
                for (int d = 0; d < 4; ++d) {
                    std::vector<Expr> terms;
                    for (int e = 0; e < 4; ++e) {
                        const Expr& comp = R.at({a, b, c, d});
                        if (!comp.is_literal(0))
                            terms.push_back(product({X[e], differentiate(comp, coord_of(e))}));
                        terms.push_back(negate(product({R.at({e, b, c, d}), dX[a][e]})));
                        terms.push_back(product({R.at({a, e, c, d}), dX[e][b]}));
                        terms.push_back(product({R.at({a, b, e, d}), dX[e][c]}));
                        terms.push_back(product({R.at({a, b, c, e}), dX[e][d]}));
                    }
                    L.set({a, b, c, d}, sum(std::move(terms)));
                }
            }
        }
    }
    return L;
}

TensorField lie_riemann_covariant(const CurvatureData& cd, const VectorField& X) {
    auto dX = gradient_of(X);
    const TensorField& R = cd.riemann;
    const TensorField& gamma = cd.gamma;

    // X^e_{;b} = d_b X^e + Gamma^e_bf X^f
    std::array<std::array<Expr, 4>, 4> covX;
    for (int e = 0; e < 4; ++e) {
        for (int b = 0; b < 4; ++b) {
            std::vector<Expr> terms{dX[e][b]};
            for (int f = 0; f < 4; ++f) terms.push_back(product({gamma.at({e, b, f}), X[f]}));
            covX[e][b] = sum(std::move(terms));
        }
    }

    auto nabla_R = [&](int a, int b, int c, int d, int e) {
        std::vector<Expr> terms;
        terms.push_back(differentiate(R.at({a, b, c, d}), coord_of(e)));
        for (int f = 0; f < 4; ++f) {
            terms.push_back(product({gamma.at({a, e, f}), R.at({f, b, c, d})}));
            terms.push_back(negate(product({gamma.at({f, e, b}), R.at({a, f, c, d})})));
            terms.push_back(negate(product({gamma.at({f, e, c}), R.at({a, b, f, d})})));
            terms.push_back(negate(product({gamma.at({f, e, d}), R.at({a, b, c, f})})));
        }
        return sum(std::move(terms));
    };

    TensorField L(1, 3);
    for (int a = 0; a < 4; ++a) {
        for (int b = 0; b < 4; ++b) {
            for (int c = 0; c < 4; ++c) {
                for (int d = 0; d < 4; ++d) {
                    std::vector<Expr> terms;
                    for (int e = 0; e < 4; ++e) {
                        terms.push_back(product({nabla_R(a, b, c, d, e), X[e]}));
                        terms.push_back(product({R.at({a, e, c, d}), covX[e][b]}));
                        terms.push_back(product({R.at({a, b, e, d}), covX[e][c]}));
                        terms.push_back(product({R.at({a, b, c, e}), covX[e][d]}));
                        terms.push_back(negate(product({R.at({e, b, c, d}), covX[a][e]})));
                    }
                    L.set({a, b, c, d}, sum(std::move(terms)));
                }
            }
        }
    }
    return L;
}

CheckResult is_cc(const CurvatureData& cd, const VectorField& X, const ZeroTestConfig& cfg) {
    TensorField L = lie_riemann(cd, X);
    Aggregator agg;
    for (std::size_t i = 0; i < L.size(); ++i) {
        if (L.component(i).is_literal(0)) continue;
        auto idx = L.unflatten(i);
        ZeroTestResult zt = zero_test(L.component(i), cd.metric.domain(), cfg, cd.metric.params());
        agg.feed(zt, "L_X R^" + std::to_string(idx[0]) + "_" + std::to_string(idx[1]) +
                         std::to_string(idx[2]) + std::to_string(idx[3]));
        if (zt.state == TriState::NonZero) return agg.finish();  // witness recorded
    }
    return agg.finish();
}

CollineationReport analyze_collineation(const CurvatureData& cd, const VectorField& X,
                                        const ZeroTestConfig& cfg) {
    CollineationReport rep;

    CheckResult killing = is_killing(cd, X, cfg);
    rep.is_killing = killing.holds;
    rep.max_lie_metric = killing.residual;
    rep.lie_metric_at = killing.witness;

    HomothetyResult hom = homothety_constant(cd, X, cfg);
    rep.homothety_c = hom.c;
    rep.max_homothety_defect = hom.residual;
    rep.homothety_defect_at = hom.witness;

    CheckResult affine = is_affine(cd, X, cfg);
    rep.is_affine = affine.holds;
    rep.max_affine_defect = affine.residual;
    rep.affine_defect_at = affine.witness;

    CheckResult cc = is_cc(cd, X, cfg);
    rep.is_cc = cc.holds;
    rep.max_lie_riemann = cc.residual;
    rep.lie_riemann_at = cc.witness;

    rep.is_proper_cc = rep.is_cc && !rep.is_affine;

    for (const auto& w : killing.warnings) rep.warnings.push_back("killing: " + w);
    for (const auto& w : affine.warnings) rep.warnings.push_back("affine: " + w);
    for (const auto& w : cc.warnings) rep.warnings.push_back("cc: " + w);
    return rep;
}

// ---------------------------------------------------------------------------
// Induced 3-geometry

Induced3Geometry induced_3d(const PlaneSymmetricMetric& M, const ZeroTestConfig& cfg) {
    struct Cond {
        const char* name;
        Expr value;
    };
    const Cond conds[] = {
        {"A_x", differentiate(M.A(), Coord::X)},
        {"B_t", differentiate(M.B(), Coord::T)},
        {"C_x", differentiate(M.C(), Coord::X)},
    };
    for (const Cond& c : conds) {
        TriState s = is_identically_zero(c.value, M.domain(), cfg, M.params());
        if (s != TriState::Zero)
            throw PreconditionError(std::string("induced 3-geometry requires ") + c.name +
                                    " = 0 (" + to_string(s) + ")");
    }
    return Induced3Geometry{M.A(), M.C(), M.domain(), M.params()};
}

std::optional<double> is_homothetic_3d(const Induced3Geometry& G3, const std::array<Expr, 3>& Xp,
                                       const ZeroTestConfig& cfg) {
    for (const Expr& c : Xp)
        if (depends_on(c, Coord::X))
            throw PreconditionError("3D field components live on (t, y, z)");

    const Expr& X0 = Xp[0];
    const Expr& X2 = Xp[1];
    const Expr& X3 = Xp[2];
    Expr alpha_dot = differentiate(G3.alpha, Coord::T);
    Expr eta_dot = differentiate(G3.eta, Coord::T);

    // c on the left-hand sides; the candidate constant comes from the
    // 00-equation and must agree with the transverse ones
    Expr c_expr = alpha_dot * X0 + constant(2) * differentiate(X0, Coord::T);

    std::vector<Expr> equations = {
        negate(exp(G3.alpha) * differentiate(X0, Coord::Y)) +
            exp(G3.eta) * differentiate(X2, Coord::T),
        negate(exp(G3.alpha) * differentiate(X0, Coord::Z)) +
            exp(G3.eta) * differentiate(X3, Coord::T),
        eta_dot * X0 + constant(2) * differentiate(X2, Coord::Y) - c_expr,
        differentiate(X2, Coord::Z) + differentiate(X3, Coord::Y),
        eta_dot * X0 + constant(2) * differentiate(X3, Coord::Z) - c_expr,
    };
    // constancy of the candidate
    for (Coord v : {Coord::T, Coord::Y, Coord::Z})
        equations.push_back(differentiate(c_expr, v));

    for (const Expr& eq : equations)
        if (is_identically_zero(eq, G3.domain, cfg, G3.params) != TriState::Zero)
            return std::nullopt;

    for (const Point& p : sample_points(G3.domain, cfg.samples, cfg.seed)) {
        try {
            return evaluate(c_expr, p, G3.params);
        } catch (const EvalError&) {
        }
    }
    return std::nullopt;
}

// ---------------------------------------------------------------------------
// Induced 2-geometry

Induced2Geometry induced_2d(const PlaneSymmetricMetric& M, const ZeroTestConfig& cfg) {
    struct Cond {
        const char* name;
        Expr value;
    };
    const Cond conds[] = {
        {"C_t", differentiate(M.C(), Coord::T)},
        {"C_x", differentiate(M.C(), Coord::X)},
    };
    for (const Cond& c : conds) {
        TriState s = is_identically_zero(c.value, M.domain(), cfg, M.params());
        if (s != TriState::Zero)
            throw PreconditionError(std::string("induced 2-geometry requires ") + c.name +
                                    " = 0 (" + to_string(s) + ")");
    }

    Induced2Geometry G;
    G.A = M.A();
    G.B = M.B();
    G.domain = M.domain();
    G.params = M.params();

    // generic 2D curvature of diag(-e^A, e^B) over (t, x)
    Expr g00 = negate(exp(G.A)), g11 = exp(G.B);
    Expr gi00 = negate(exp(negate(G.A))), gi11 = exp(negate(G.B));
    Expr half = constant(Rational(1, 2));
    auto d = [](const Expr& e, int i) { return differentiate(e, coord_of(i)); };

    Expr gamma[2][2][2];
    Expr g_[2] = {g00, g11}, gi_[2] = {gi00, gi11};
    for (int a = 0; a < 2; ++a)
        for (int b = 0; b < 2; ++b)
            for (int c = 0; c < 2; ++c) {
                Expr t1 = a == c ? d(g_[a], b) : Expr();
                Expr t2 = a == b ? d(g_[a], c) : Expr();
                Expr t3 = b == c ? d(g_[b], a) : Expr();
                gamma[a][b][c] = product({half, gi_[a], sum({t1, t2, negate(t3)})});
            }

    // R^a_b01 (2D curvature has a single independent component)
    auto riem = [&](int a, int b, int c, int dd) {
        std::vector<Expr> terms;
        terms.push_back(d(gamma[a][dd][b], c));
        terms.push_back(negate(d(gamma[a][c][b], dd)));
        for (int e = 0; e < 2; ++e) {
            terms.push_back(product({gamma[a][c][e], gamma[e][dd][b]}));
            terms.push_back(negate(product({gamma[a][dd][e], gamma[e][c][b]})));
        }
        return sum(std::move(terms));
    };
    G.ricci00 = simplify(riem(1, 0, 1, 0));
    G.ricci11 = simplify(riem(0, 1, 0, 1));
    G.scalar = simplify(gi00 * G.ricci00 + gi11 * G.ricci11);
    G.G00 = simplify(half * G.scalar * g00);
    G.G11 = simplify(half * G.scalar * g11);

    // in two dimensions the Ricci tensor is (R/2) g; this checks the
    // generic computation against itself and against the closed forms
    Expr brA = sum({power(d(G.A, 1), constant(2)), constant(2) * d(d(G.A, 1), 1),
                    negate(d(G.A, 1) * d(G.B, 1))});
    Expr brB = sum({power(d(G.B, 0), constant(2)), constant(2) * d(d(G.B, 0), 0),
                    negate(d(G.A, 0) * d(G.B, 0))});
    Expr quarter = constant(Rational(1, 4));
    Expr closed00 = quarter * exp(negate(G.B)) * (exp(G.A) * brA - exp(G.B) * brB);
    Expr closed11 = negate(quarter * exp(negate(G.A)) * (exp(G.A) * brA - exp(G.B) * brB));

    G.ricci_crosscheck_ok =
        is_identically_zero(G.ricci00 - closed00, G.domain, cfg, G.params) == TriState::Zero &&
        is_identically_zero(G.ricci11 - closed11, G.domain, cfg, G.params) == TriState::Zero &&
        is_identically_zero(G.ricci00 - G.G00, G.domain, cfg, G.params) == TriState::Zero &&
        is_identically_zero(G.ricci11 - G.G11, G.domain, cfg, G.params) == TriState::Zero;
    return G;
}

TwoDCCResult is_2d_cc(const Induced2Geometry& G2, const std::array<Expr, 2>& Xp,
                      const ZeroTestConfig& cfg) {
    TwoDCCResult res;
    for (const Expr& c : Xp)
        if (depends_on(c, Coord::Y) || depends_on(c, Coord::Z))
            throw PreconditionError("2D field components live on (t, x)");

    if (is_identically_zero(G2.scalar, G2.domain, cfg, G2.params) == TriState::Zero) {
        // G vanishes identically: the three equations hold for every field
        res.vacuous = true;
        res.holds = true;
        return res;
    }

    const Expr& X0 = Xp[0];
    const Expr& X1 = Xp[1];
    auto d = [](const Expr& e, Coord v) { return differentiate(e, v); };
    Expr eq30 = d(G2.G00, Coord::T) * X0 + d(G2.G00, Coord::X) * X1 +
                constant(2) * G2.G00 * d(X0, Coord::T);
    Expr eq31 = exp(G2.B) * d(X1, Coord::T) - exp(G2.A) * d(X0, Coord::X);
    Expr eq32 = d(G2.G11, Coord::T) * X0 + d(G2.G11, Coord::X) * X1 +
                constant(2) * G2.G11 * d(X1, Coord::X);

    Aggregator agg;
    agg.feed(zero_test(eq30, G2.domain, cfg, G2.params), "eq30");
    agg.feed(zero_test(eq31, G2.domain, cfg, G2.params), "eq31");
    agg.feed(zero_test(eq32, G2.domain, cfg, G2.params), "eq32");
    CheckResult cr = agg.finish();
    res.holds = cr.holds;
    res.residual = cr.residual;
    res.witness = cr.witness;
    return res;
}

}  // namespace planesym

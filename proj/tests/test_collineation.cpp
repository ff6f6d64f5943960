#include <doctest.h>

#include <cmath>

#include "planesym/collineation.hpp"
#include "support.hpp"

using namespace planesym;
using namespace planesym::testing;

namespace {

ZeroTestConfig cfg32() { return ZeroTestConfig{32, 1e-9, 42}; }

VectorField vf(const char* x0, const char* x1, const char* x2, const char* x3) {
    return VectorField{{parse(x0), parse(x1), parse(x2), parse(x3)}};
}

const VectorField KV_Y = vf("0", "0", "1", "0");
const VectorField KV_Z = vf("0", "0", "0", "1");
const VectorField KV_ROT = vf("0", "0", "-z", "y");  // y d_z - z d_y

}  // namespace

TEST_CASE("lie derivative of the metric") {
    CurvatureData cd1(fixture_case1());

    // the transverse isometry generators annihilate g structurally
    for (const VectorField& X : {KV_Y, KV_Z, KV_ROT}) {
        TensorField h = lie_metric(cd1, X);
        for (std::size_t i = 0; i < h.size(); ++i) CHECK(h.component(i).is_literal(0));
    }

    TensorField h = lie_metric(cd1, vf("0", "x^2", "0", "0"));
    Point p{0.5, 0.7, 0, 0};
    CHECK(evaluate(h.at({1, 1}), p) == doctest::Approx(4 * 0.7).epsilon(1e-12));
    for (std::size_t i = 0; i < h.size(); ++i) {
        auto idx = h.unflatten(i);
        if (idx[0] == 1 && idx[1] == 1) continue;
        CHECK(std::abs(evaluate(h.component(i), p)) <= 1e-14);
    }
}

TEST_CASE("killing verdicts") {
    // the three-generator family is universal across the metric family
    for (int s = 0; s < 10; ++s) {
        CurvatureData cd(random_metric(400 + s));
        for (const VectorField& X : {KV_Y, KV_Z, KV_ROT}) CHECK(is_killing(cd, X, cfg32()).holds);
    }

    CurvatureData flat(fixture_flat());
    CheckResult dil = is_killing(flat, vf("t", "0", "0", "0"), cfg32());
    CHECK_FALSE(dil.holds);
    CHECK(dil.residual > 1.0);  // h_00 = -2

    CurvatureData cd6(fixture_case6());
    CHECK_FALSE(is_killing(cd6, vf("0", "x", "0", "0"), cfg32()).holds);
}

TEST_CASE("homothety constant") {
    CurvatureData flat(fixture_flat());
    HomothetyResult dil = homothety_constant(flat, vf("t", "x", "y", "z"), cfg32());
    REQUIRE(dil.c.has_value());
    CHECK(*dil.c == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(dil.residual <= 1e-12);

    CurvatureData cd1(fixture_case1());
    HomothetyResult kv = homothety_constant(cd1, KV_ROT, cfg32());
    REQUIRE(kv.c.has_value());
    CHECK(*kv.c == doctest::Approx(0.0).epsilon(1e-12));

    HomothetyResult none = homothety_constant(cd1, vf("0", "x^2", "0", "0"), cfg32());
    CHECK_FALSE(none.c.has_value());
    CHECK(none.residual > 0.1);  // h_11 = 4x against g_11 = 1
}

TEST_CASE("affine verdicts") {
    CurvatureData cd14(fixture_case14());
    CHECK(is_affine(cd14, vf("0", "0", "y", "0"), cfg32()).holds);

    CurvatureData cd1(fixture_case1());
    CheckResult aff = is_affine(cd1, vf("0", "x^2", "0", "0"), cfg32());
    CHECK_FALSE(aff.holds);
    CHECK(aff.residual >= 1.0);  // h_{11;1} = 4

    CHECK(is_affine(cd1, KV_ROT, cfg32()).holds);  // Killing fields are affine
}

TEST_CASE("lie derivative of the curvature vanishes for the known families") {
    CurvatureData cd1(fixture_case1());
    TensorField L = lie_riemann(cd1, vf("0", "x^2", "0", "0"));
    for (std::size_t i = 0; i < L.size(); ++i) CHECK(L.component(i).is_literal(0));

    CurvatureData cd27(fixture_case27());
    CHECK(is_cc(cd27, vf("t^2", "t*x", "0", "0"), cfg32()).holds);

    for (const VectorField& X : {KV_Y, KV_Z, KV_ROT}) CHECK(is_cc(cd27, X, cfg32()).holds);

    // zero curvature: every field is a collineation
    CurvatureData flat(fixture_flat());
    CHECK(is_cc(flat, vf("t*x", "sin(t)", "y^2", "z*t"), cfg32()).holds);
}

TEST_CASE("curvature collineation failures carry residuals") {
    CurvatureData cd6(fixture_case6());
    CheckResult cc = is_cc(cd6, vf("0", "x", "0", "0"), cfg32());
    CHECK_FALSE(cc.holds);
    CHECK(cc.residual > 1e-3);
}

TEST_CASE("partial and covariant forms of the curvature lie derivative agree") {
    std::vector<PlaneSymmetricMetric> metrics = {fixture_case1(), fixture_case6(),
                                                 fixture_case14(), fixture_case27(),
                                                 fixture_case28()};
    std::vector<VectorField> fields = {vf("t^2", "t*x", "0", "0"), vf("0", "x^2", "0", "0"),
                                       KV_ROT, vf("t", "x", "y", "z")};
    for (const auto& M : metrics) {
        CurvatureData cd(M);
        for (const auto& X : fields) {
            TensorField a = lie_riemann(cd, X);
            TensorField b = lie_riemann_covariant(cd, X);
            for (const Point& p : sample_points(M.domain(), 50, 42)) {
                for (std::size_t i = 0; i < a.size(); ++i) {
                    double va = a.component(i).is_literal(0) ? 0 : evaluate(a.component(i), p);
                    double vb = b.component(i).is_literal(0) ? 0 : evaluate(b.component(i), p);
                    CHECK(std::abs(va - vb) <= 1e-10 * (1 + std::abs(va)));
                }
            }
        }
    }
}

TEST_CASE("lie derivative is additive in the field") {
    CurvatureData cd(fixture_case6());
    VectorField X = vf("t", "x^2", "0", "0");
    VectorField Y = vf("0", "t*x", "y", "0");
    VectorField XY = vf("t", "x^2 + t*x", "y", "0");
    TensorField LX = lie_riemann(cd, X);
    TensorField LY = lie_riemann(cd, Y);
    TensorField LXY = lie_riemann(cd, XY);
    for (const Point& p : sample_points(cd.metric.domain(), 10, 3)) {
        for (std::size_t i = 0; i < LX.size(); ++i) {
            double sum2 = evaluate(LX.component(i), p) + evaluate(LY.component(i), p);
            double joint = evaluate(LXY.component(i), p);
            CHECK(std::abs(joint - sum2) <= 1e-10 * (1 + std::abs(joint)));
        }
    }
}

TEST_CASE("full collineation reports and the implication chain") {
    CurvatureData cd14(fixture_case14());

    CollineationReport proper = analyze_collineation(cd14, vf("0", "0", "y^2 + z", "z - y^3"), cfg32());
    CHECK(proper.is_cc);
    CHECK_FALSE(proper.is_affine);
    CHECK(proper.is_proper_cc);
    CHECK(proper.max_lie_riemann <= 1e-9);

    CollineationReport affine_cc = analyze_collineation(cd14, vf("0", "0", "y", "0"), cfg32());
    CHECK(affine_cc.is_cc);
    CHECK(affine_cc.is_affine);
    CHECK_FALSE(affine_cc.is_proper_cc);
    CHECK_FALSE(affine_cc.is_killing);

    CollineationReport kv = analyze_collineation(cd14, KV_ROT, cfg32());
    CHECK(kv.is_killing);
    CHECK(kv.homothety_c.has_value());
    CHECK(kv.is_affine);
    CHECK(kv.is_cc);
    CHECK_FALSE(kv.is_proper_cc);

    // chain on a batch of deterministic pseudo-random candidates
    std::mt19937_64 rng(99);
    const char* pool[] = {"0", "1", "t", "x", "y", "z", "t*x", "x^2", "y^2 + z", "sin(t)"};
    auto pick = [&]() { return pool[rng() % (sizeof(pool) / sizeof(pool[0]))]; };
    std::vector<CurvatureData> cds;
    cds.emplace_back(fixture_case1());
    cds.emplace_back(fixture_case6());
    cds.emplace_back(fixture_case27());
    for (int i = 0; i < 40; ++i) {
        const CurvatureData& cd = cds[i % cds.size()];
        CollineationReport r = analyze_collineation(cd, vf(pick(), pick(), pick(), pick()), cfg32());
        if (r.is_killing) {
            CHECK(r.homothety_c.has_value());
            if (r.homothety_c) CHECK(std::abs(*r.homothety_c) <= 1e-9);
        }
        if (r.homothety_c.has_value()) CHECK(r.is_affine);
        if (r.is_affine) CHECK(r.is_cc);
        CHECK(r.is_proper_cc == (r.is_cc && !r.is_affine));
    }
}

TEST_CASE("induced 3-geometry extraction") {
    ZeroTestConfig cfg = cfg32();
    Induced3Geometry g1 = induced_3d(fixture_case1(), cfg);
    CHECK(structurally_equal(simplify(g1.alpha), simplify(parse("t"))));
    CHECK(structurally_equal(simplify(g1.eta), simplify(parse("2*t"))));

    Induced3Geometry g27 = induced_3d(fixture_case27(), cfg);
    CHECK(g27.alpha.is_literal(0));
    CHECK(structurally_equal(simplify(g27.eta), simplify(parse("ln(t^2)"))));

    CHECK_THROWS_AS(induced_3d(fixture_case14(), cfg), PreconditionError);
    try {
        induced_3d(fixture_case14(), cfg);
    } catch (const PreconditionError& e) {
        CHECK(std::string(e.what()).find("A_x") != std::string::npos);
    }
}

TEST_CASE("homothety on the induced 3-geometry") {
    ZeroTestConfig cfg = cfg32();
    Induced3Geometry g = induced_3d(fixture_case27(), cfg);  // alpha = 0, eta = ln(t^2)

    auto c = is_homothetic_3d(g, {parse("t"), parse("0"), parse("0")}, cfg);
    REQUIRE(c.has_value());
    CHECK(*c == doctest::Approx(2.0).epsilon(1e-12));

    auto c_rot = is_homothetic_3d(g, {parse("0"), parse("z"), parse("-y")}, cfg);
    REQUIRE(c_rot.has_value());
    CHECK(*c_rot == doctest::Approx(0.0).epsilon(1e-12));

    Induced3Geometry g1 = induced_3d(fixture_case1(), cfg);
    CHECK_FALSE(is_homothetic_3d(g1, {parse("1"), parse("0"), parse("0")}, cfg).has_value());

    CHECK_THROWS_AS(is_homothetic_3d(g, {parse("x"), parse("0"), parse("0")}, cfg),
                    PreconditionError);
}

TEST_CASE("induced 2-geometry and its collineation equations") {
    ZeroTestConfig cfg = cfg32();
    Induced2Geometry g14 = induced_2d(fixture_case14(), cfg);
    CHECK(g14.ricci_crosscheck_ok);
    CHECK(evaluate(g14.G00, Point{0, 0, 0, 0}) == doctest::Approx(0.75).epsilon(1e-12));

    CHECK(is_2d_cc(g14, {parse("0"), parse("0")}, cfg).holds);

    TwoDCCResult bad = is_2d_cc(g14, {parse("1"), parse("0")}, cfg);
    CHECK_FALSE(bad.holds);
    CHECK(bad.residual > 1e-3);

    CHECK_FALSE(is_2d_cc(g14, {parse("t"), parse("-t")}, cfg).holds);

    // flat 2-block: G vanishes identically and the check is vacuous
    Induced2Geometry gflat = induced_2d(fixture_flat(), cfg);
    TwoDCCResult vac = is_2d_cc(gflat, {parse("t^2"), parse("x")}, cfg);
    CHECK(vac.holds);
    CHECK(vac.vacuous);

    CHECK_THROWS_AS(induced_2d(fixture_case27(), cfg), PreconditionError);
}

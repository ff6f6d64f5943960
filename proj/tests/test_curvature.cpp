#include <doctest.h>

#include <cmath>

#include "planesym/curvature.hpp"
#include "support.hpp"

using namespace planesym;
using namespace planesym::testing;

namespace {

const double RANK_TOL = 1e-10;

ZeroTestConfig cfg32() { return ZeroTestConfig{32, 1e-9, 42}; }

RiemannMatrix flat_backdrop(const Matrix6d& W) {
    RiemannMatrix rm;
    rm.W = W;
    rm.g = Eigen::Matrix4d::Identity();
    rm.g(0, 0) = -1;
    rm.ginv = rm.g;
    return rm;
}

bool in_span(const KernelBasis& kb, const Eigen::Vector4d& v) {
    Eigen::Vector4d proj = Eigen::Vector4d::Zero();
    for (int i = 0; i < kb.dim; ++i) proj += kb.basis.col(i) * kb.basis.col(i).dot(v);
    return (v - proj).norm() <= 1e-8 * v.norm();
}

std::array<Expr, 4> covector_dt() { return {constant(1), Expr(), Expr(), Expr()}; }
std::array<Expr, 4> covector_dx() { return {Expr(), constant(1), Expr(), Expr()}; }
std::array<Expr, 4> covector_dy() { return {Expr(), Expr(), constant(1), Expr()}; }
std::array<Expr, 4> covector_dz() { return {Expr(), Expr(), Expr(), constant(1)}; }

}  // namespace

TEST_CASE("riemann matrix layout and fixture values") {
    CurvatureData cd27(fixture_case27());
    RiemannMatrix rm = riemann_matrix_at(cd27, Point{2, 0, 0, 0});
    CHECK(rm.W(5, 5) == doctest::Approx(4.0).epsilon(1e-12));
    for (int i = 0; i < 6; ++i)
        for (int j = 0; j < 6; ++j)
            if (!(i == 5 && j == 5)) CHECK(std::abs(rm.W(i, j)) <= 1e-12);

    CurvatureData cd1(fixture_case1());
    RiemannMatrix rm1 = riemann_matrix_at(cd1, Point{0, 0.3, 0.1, 0.2});
    CHECK(rm1.W(1, 1) == doctest::Approx(-0.5).epsilon(1e-12));
    CHECK(rm1.W(2, 2) == doctest::Approx(-0.5).epsilon(1e-12));
    CHECK(rm1.W(5, 5) == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(std::abs(rm1.W(0, 0)) <= 1e-12);

    CurvatureData cdf(fixture_flat());
    CHECK(riemann_matrix_at(cdf, Point{0, 0, 0, 0}).W.cwiseAbs().maxCoeff() == 0.0);

    CHECK_THROWS_AS(riemann_matrix_at(cd27, Point{-5, 0, 0, 0}), std::domain_error);
}

TEST_CASE("plane-symmetric curvature has the five-component sparsity pattern") {
    std::vector<PlaneSymmetricMetric> metrics = {fixture_case1(), fixture_case6(), fixture_case14(),
                                                 fixture_case27(), fixture_case28(),
                                                 random_metric(301), random_metric(302)};
    // allowed positions: the diagonal plus the ([02],[12]) and ([03],[13]) couplings
    auto allowed = [](int i, int j) {
        if (i == j) return true;
        if ((i == 1 && j == 3) || (i == 3 && j == 1)) return true;
        if ((i == 2 && j == 4) || (i == 4 && j == 2)) return true;
        return false;
    };
    for (const auto& M : metrics) {
        CurvatureData cd(M);
        for (const Point& p : sample_points(M.domain(), 8, 42)) {
            RiemannMatrix rm = riemann_matrix_at(cd, p);
            double scale = rm.W.cwiseAbs().maxCoeff();
            for (int i = 0; i < 6; ++i)
                for (int j = 0; j < 6; ++j)
                    if (!allowed(i, j)) CHECK(std::abs(rm.W(i, j)) <= 1e-12 * (1 + scale));
            CHECK((rm.W - rm.W.transpose()).cwiseAbs().maxCoeff() <= 1e-12 * (1 + scale));
        }
    }
}

TEST_CASE("rank with tolerance") {
    CurvatureData cd27(fixture_case27());
    CHECK(rank_with_tol(riemann_matrix_at(cd27, Point{2, 0, 0, 0}), RANK_TOL) == 1);
    CurvatureData cd1(fixture_case1());
    CHECK(rank_with_tol(riemann_matrix_at(cd1, Point{0.5, 0, 0, 0}), RANK_TOL) == 3);
    CHECK(rank_with_tol(Matrix6d::Zero(), RANK_TOL) == 0);
    CHECK_THROWS(rank_with_tol(Matrix6d::Zero(), -1.0));
}

TEST_CASE("generic rank over seeded samples") {
    CHECK(generic_rank(fixture_case28(), fixture_case28().domain(), cfg32(), RANK_TOL).rank == 1);
    CHECK(generic_rank(fixture_case6(), fixture_case6().domain(), cfg32(), RANK_TOL).rank == 3);
    GenericRank flat = generic_rank(fixture_flat(), fixture_flat().domain(), cfg32(), RANK_TOL);
    CHECK(flat.rank == 0);
    int total = 0;
    for (int c : flat.histogram) total += c;
    CHECK(total == flat.samples);
    CHECK(flat.samples == 32);

    // rank >= 4 kills proper curvature collineations; this family realizes it
    PlaneSymmetricMetric big(parse("2*t+2*x"), parse("t-x"), parse("t+2*x"), Domain({0, 1}, {0, 1}));
    CHECK(generic_rank(big, big.domain(), cfg32(), RANK_TOL).rank >= 4);
}

TEST_CASE("kernel of the flattened curvature system") {
    CurvatureData cd27(fixture_case27());
    KernelBasis kb = kernel_Np(cd27, Point{2, 0.1, 0, 0}, RANK_TOL);
    CHECK(kb.dim == 2);
    CHECK(in_span(kb, Eigen::Vector4d(1, 0, 0, 0)));
    CHECK(in_span(kb, Eigen::Vector4d(0, 1, 0, 0)));

    CurvatureData cd1(fixture_case1());
    KernelBasis kb1 = kernel_Np(cd1, Point{0.4, 0.2, 0, 0}, RANK_TOL);
    CHECK(kb1.dim == 1);
    REQUIRE(kb1.aligned_axis(0).has_value());
    CHECK(*kb1.aligned_axis(0) == Coord::X);

    CurvatureData cdf(fixture_flat());
    CHECK(kernel_Np(cdf, Point{0, 0, 0, 0}, RANK_TOL).dim == 4);

    CurvatureData cd6(fixture_case6());
    KernelBasis kb6 = kernel_Np(cd6, Point{1.5, 1.5, 0, 0}, RANK_TOL);
    CHECK(kb6.dim == 1);
    REQUIRE(kb6.aligned_axis(0).has_value());
    CHECK(*kb6.aligned_axis(0) == Coord::T);
}

TEST_CASE("classification of the fixtures") {
    auto run = [&](const PlaneSymmetricMetric& M) {
        return classify(M, M.domain(), cfg32(), RANK_TOL);
    };
    ClassificationResult r27 = run(fixture_case27());
    CHECK(r27.cls == CurvatureClass::D);
    CHECK(r27.rank.rank == 1);
    CHECK(r27.kernel_dim == 2);
    CHECK(r27.anomalies.empty());

    ClassificationResult r1 = run(fixture_case1());
    CHECK(r1.cls == CurvatureClass::C);
    CHECK(r1.rank.rank == 3);
    CHECK(r1.kernel_dim == 1);
    CHECK(r1.anomalies.empty());

    ClassificationResult r6 = run(fixture_case6());
    CHECK(r6.cls == CurvatureClass::C);
    CHECK(r6.rank.rank == 3);

    ClassificationResult r14 = run(fixture_case14());
    CHECK(r14.cls == CurvatureClass::D);
    CHECK(r14.rank.rank == 1);
    CHECK(r14.kernel_dim == 2);

    ClassificationResult r28 = run(fixture_case28());
    CHECK(r28.cls == CurvatureClass::D);
    CHECK(r28.rank.rank == 1);

    CHECK(run(fixture_flat()).cls == CurvatureClass::O);
}

TEST_CASE("class C fixtures: range bivectors annihilate the kernel") {
    for (auto M : {fixture_case1(), fixture_case6()}) {
        CurvatureData cd(M);
        for (const Point& p : sample_points(M.domain(), 8, 13)) {
            RiemannMatrix rm = riemann_matrix_at(cd, p);
            KernelBasis kb = kernel_Np(cd, p, RANK_TOL);
            REQUIRE(kb.dim == 1);
            Eigen::SelfAdjointEigenSolver<Matrix6d> es(rm.W);
            double emax = es.eigenvalues().cwiseAbs().maxCoeff();
            for (int i = 0; i < 6; ++i) {
                if (std::abs(es.eigenvalues()[i]) <= RANK_TOL * emax) continue;
                Bivector Fi = Bivector::from_components(es.eigenvectors().col(i));
                Eigen::Vector4d contr = Fi.matrix() * kb.basis.col(0);
                CHECK(contr.cwiseAbs().maxCoeff() <= 1e-9 * (1 + emax));
            }
        }
    }
}

TEST_CASE("rank-1 factorization") {
    CurvatureData cd27(fixture_case27());
    RiemannMatrix rm = riemann_matrix_at(cd27, Point{2, 0, 0, 0});
    Rank1Decomposition dec = decompose_rank1(rm, RANK_TOL);
    CHECK(dec.residual <= 1e-9);
    CHECK(dec.simple);
    CHECK(dec.kernel_contraction <= 1e-9);
    // only the dy^dz component is populated
    double f23 = dec.F(2, 3);
    CHECK(std::abs(dec.alpha * f23 * f23 - 4.0) <= 1e-9);
    for (int a = 0; a < 4; ++a)
        for (int b = 0; b < 4; ++b)
            if (!((a == 2 && b == 3) || (a == 3 && b == 2)))
                CHECK(std::abs(dec.F(a, b)) <= 1e-9);

    // every rank-1 fixture reconstructs within tolerance
    for (auto M : {fixture_case14(), fixture_case28()}) {
        CurvatureData cd(M);
        for (const Point& p : sample_points(M.domain(), 8, 21)) {
            Rank1Decomposition d = decompose_rank1(riemann_matrix_at(cd, p), RANK_TOL);
            CHECK(d.residual <= 1e-9);
            CHECK(d.simple);
        }
    }

    CurvatureData cd1(fixture_case1());
    CHECK_THROWS_AS(decompose_rank1(riemann_matrix_at(cd1, Point{0.3, 0, 0, 0}), RANK_TOL),
                    RankMismatchError);
}

TEST_CASE("bivector dual and invariants on the flat backdrop") {
    RiemannMatrix rm = flat_backdrop(Matrix6d::Zero());

    Vector6d c = Vector6d::Zero();
    c[0] = 1;  // dt^dx
    Bivector F = Bivector::from_components(c);
    Bivector Fd = bivector_dual(F, rm);
    // dual is proportional to dy^dz
    for (int a = 0; a < 4; ++a)
        for (int b = 0; b < 4; ++b)
            if (!((a == 2 && b == 3) || (a == 3 && b == 2))) CHECK(std::abs(Fd(a, b)) <= 1e-14);
    CHECK(std::abs(std::abs(Fd(2, 3)) - 1.0) <= 1e-14);

    // double dual of a spacelike simple bivector is -F in Lorentz signature
    Vector6d s = Vector6d::Zero();
    s[5] = 1;  // dy^dz
    Bivector S = Bivector::from_components(s);
    Bivector Sdd = bivector_dual(bivector_dual(S, rm), rm);
    CHECK((Sdd.matrix() + S.matrix()).cwiseAbs().maxCoeff() <= 1e-14);

    // zero bivector: dual zero, simple and null
    Bivector zero;
    CHECK(bivector_dual(zero, rm).matrix().cwiseAbs().maxCoeff() == 0.0);
    BivectorInvariants zi = bivector_invariants(zero, rm, 1e-9);
    CHECK(zi.simple);
    CHECK(zi.null);

    BivectorInvariants fi = bivector_invariants(F, rm, 1e-9);
    CHECK(fi.simple);
    CHECK_FALSE(fi.null);
    CHECK(fi.ff == doctest::Approx(-2.0).epsilon(1e-12));

    Vector6d mix = Vector6d::Zero();
    mix[0] = 1;
    mix[5] = 1;  // dt^dx + dy^dz
    BivectorInvariants mi = bivector_invariants(Bivector::from_components(mix), rm, 1e-9);
    CHECK_FALSE(mi.simple);
}

TEST_CASE("pointwise classifier covers the synthetic classes") {
    // dual pair: W = alpha F F^T + eta F* F*^T with F = dt^dx
    Matrix6d W = Matrix6d::Zero();
    W(0, 0) = 2.0;   // [01] x [01]
    W(5, 5) = -1.5;  // [23] x [23]
    std::string anomaly;
    CHECK(classify_point(flat_backdrop(W), RANK_TOL, &anomaly) == CurvatureClass::B);
    CHECK(anomaly.empty());

    // rank 2 with a one-dimensional kernel is class C
    Matrix6d W2 = Matrix6d::Zero();
    W2(0, 0) = 1.0;  // [01]
    W2(1, 1) = 2.0;  // [02]
    CHECK(classify_point(flat_backdrop(W2), RANK_TOL, &anomaly) == CurvatureClass::C);

    // rank 1 built from a non-simple bivector is anomalous, reported as A
    Vector6d mix = Vector6d::Zero();
    mix[0] = 1;
    mix[5] = 1;
    Matrix6d W3 = mix * mix.transpose();
    anomaly.clear();
    CHECK(classify_point(flat_backdrop(W3), RANK_TOL, &anomaly) == CurvatureClass::A);
    CHECK_FALSE(anomaly.empty());

    // generic high rank is class A
    Matrix6d W4 = Matrix6d::Identity();
    anomaly.clear();
    CHECK(classify_point(flat_backdrop(W4), RANK_TOL, &anomaly) == CurvatureClass::A);
    CHECK(anomaly.empty());

    CHECK(classify_point(flat_backdrop(Matrix6d::Zero()), RANK_TOL) == CurvatureClass::O);
}

TEST_CASE("covariant constancy of the kernel covectors") {
    CurvatureData cd1(fixture_case1());
    CHECK(is_covariantly_constant(cd1, covector_dx(), cfg32()).constant);

    CurvatureData cd27(fixture_case27());
    CovariantConstancy dt27 = is_covariantly_constant(cd27, covector_dt(), cfg32());
    CHECK_FALSE(dt27.constant);
    CHECK(dt27.residual > 0.5);  // Gamma^0_22 = t on t in [1,3]
    CHECK(is_covariantly_constant(cd27, covector_dx(), cfg32()).constant);

    CurvatureData cd14(fixture_case14());
    CovariantConstancy dy14 = is_covariantly_constant(cd14, covector_dy(), cfg32());
    CovariantConstancy dz14 = is_covariantly_constant(cd14, covector_dz(), cfg32());
    CHECK(dy14.constant);
    CHECK(dz14.constant);
    CHECK(dy14.residual <= 1e-12);
    CHECK(dz14.residual <= 1e-12);

    CurvatureData cd28(fixture_case28());
    CHECK_FALSE(is_covariantly_constant(cd28, covector_dt(), cfg32()).constant);
    CHECK_FALSE(is_covariantly_constant(cd28, covector_dx(), cfg32()).constant);
}

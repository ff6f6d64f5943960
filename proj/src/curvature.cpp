#include "planesym/curvature.hpp"

#include <Eigen/Eigenvalues>
#include <Eigen/SVD>
#include <cmath>

namespace planesym {

// ---------------------------------------------------------------------------
// Bivector indexing

int BivectorIndex::position(int a, int b) {
    for (int i = 0; i < 6; ++i)
        if ((pairs[i][0] == a && pairs[i][1] == b) || (pairs[i][0] == b && pairs[i][1] == a))
            return i;
    throw std::out_of_range("not a bivector index pair");
}

Bivector::Bivector(const Eigen::Matrix4d& f) : f_(f) {
    if ((f + f.transpose()).cwiseAbs().maxCoeff() > 1e-12 * (1 + f.cwiseAbs().maxCoeff()))
        throw std::invalid_argument("bivector matrix must be antisymmetric");
    f_ = 0.5 * (f - f.transpose());
}

Bivector Bivector::from_components(const Vector6d& c) {
    Eigen::Matrix4d f = Eigen::Matrix4d::Zero();
    for (int i = 0; i < 6; ++i) {
        int a = BivectorIndex::pairs[i][0];
        int b = BivectorIndex::pairs[i][1];
        f(a, b) = c[i];
        f(b, a) = -c[i];
    }
    return Bivector(f);
}

Vector6d Bivector::components() const {
    Vector6d c;
    for (int i = 0; i < 6; ++i) c[i] = f_(BivectorIndex::pairs[i][0], BivectorIndex::pairs[i][1]);
    return c;
}

// ---------------------------------------------------------------------------
// Riemann matrix at a point

RiemannMatrix riemann_matrix_at(const CurvatureData& cd, const Point& p) {
    if (!cd.metric.domain().contains(p))
        throw std::domain_error("probe point outside the metric domain");
    const ParamBindings& params = cd.metric.params();
    RiemannMatrix rm;
    rm.at = p;
    for (int i = 0; i < 6; ++i) {
        for (int j = i; j < 6; ++j) {
            int a = BivectorIndex::pairs[i][0], b = BivectorIndex::pairs[i][1];
            int c = BivectorIndex::pairs[j][0], d = BivectorIndex::pairs[j][1];
            const Expr& comp = cd.riemann_low.at({a, b, c, d});
            double v = comp.is_literal(0) ? 0.0 : evaluate(comp, p, params);
            rm.W(i, j) = v;
            rm.W(j, i) = v;
        }
    }
    for (int a = 0; a < 4; ++a) {
        rm.g(a, a) = evaluate(cd.g.at({a, a}), p, params);
        rm.ginv(a, a) = evaluate(cd.ginv.at({a, a}), p, params);
    }
    return rm;
}

RiemannMatrix riemann_matrix_at(const PlaneSymmetricMetric& M, const Point& p) {
    return riemann_matrix_at(CurvatureData(M), p);
}

// ---------------------------------------------------------------------------
// Rank and kernel

int rank_with_tol(const Matrix6d& W, double tau) {
    if (!(tau > 0)) throw std::invalid_argument("rank tolerance must be positive");
    Eigen::JacobiSVD<Matrix6d> svd(W);
    const auto& sv = svd.singularValues();
    double smax = sv[0];
    if (!(smax > 0)) return 0;
    int r = 0;
    for (int i = 0; i < sv.size(); ++i)
        if (sv[i] > tau * smax) ++r;
    return r;
}

namespace {

// Full R_abcd value from the bivector matrix, using the pair symmetries.
double riemann_entry(const Matrix6d& W, int a, int b, int c, int d) {
    if (a == b || c == d) return 0.0;
    double sign = 1.0;
    if (a > b) {
        std::swap(a, b);
        sign = -sign;
    }
    if (c > d) {
        std::swap(c, d);
        sign = -sign;
    }
    return sign * W(BivectorIndex::position(a, b), BivectorIndex::position(c, d));
}

KernelBasis kernel_from(const Matrix6d& W, double tau) {
    Eigen::Matrix<double, 64, 4> J;
    int row = 0;
    for (int a = 0; a < 4; ++a)
        for (int b = 0; b < 4; ++b)
            for (int c = 0; c < 4; ++c, ++row)
                for (int d = 0; d < 4; ++d) J(row, d) = riemann_entry(W, a, b, c, d);

    KernelBasis kb;
    Eigen::JacobiSVD<Eigen::Matrix<double, 64, 4>> svd(J, Eigen::ComputeFullV);
    const Eigen::Vector4d sv = svd.singularValues();
    double smax = sv[0];
    if (!(smax > 0)) {
        kb.dim = 4;
        kb.basis = Eigen::Matrix4d::Identity();
        return kb;
    }
    int nonzero = 0;
    for (int i = 0; i < sv.size(); ++i)
        if (sv[i] > tau * smax) ++nonzero;
    kb.dim = 4 - nonzero;
    kb.basis = svd.matrixV().rightCols(kb.dim);
    return kb;
}

}  // namespace

std::optional<Coord> KernelBasis::aligned_axis(int column) const {
    Eigen::Vector4d v = basis.col(column);
    int argmax = 0;
    v.cwiseAbs().maxCoeff(&argmax);
    Eigen::Vector4d axis = Eigen::Vector4d::Zero();
    axis[argmax] = v[argmax] > 0 ? 1.0 : -1.0;
    if ((v.normalized() - axis).norm() <= 1e-8) return coord_of(argmax);
    return std::nullopt;
}

KernelBasis kernel_Np(const CurvatureData& cd, const Point& p, double tau) {
    return kernel_from(riemann_matrix_at(cd, p).W, tau);
}

KernelBasis kernel_Np(const PlaneSymmetricMetric& M, const Point& p, double tau) {
    return kernel_Np(CurvatureData(M), p, tau);
}

// ---------------------------------------------------------------------------
// Bivector algebra

namespace {

int perm_sign(int a, int b, int c, int d) {
    int idx[4] = {a, b, c, d};
    int sign = 1;
    for (int i = 0; i < 4; ++i)
        for (int j = i + 1; j < 4; ++j) {
            if (idx[i] == idx[j]) return 0;
            if (idx[i] > idx[j]) sign = -sign;
        }
    return sign;
}

Eigen::Matrix4d raise_both(const Eigen::Matrix4d& F, const Eigen::Matrix4d& ginv) {
    return ginv * F * ginv.transpose();
}

double plucker_form(const Vector6d& c) {
    // F_[ab F_cd] up to normalization: the quadratic Pluecker relation
    return c[0] * c[5] - c[1] * c[4] + c[2] * c[3];
}

}  // namespace

Bivector bivector_dual(const Bivector& F, const RiemannMatrix& rm) {
    double det = rm.g.determinant();
    double vol = std::sqrt(std::abs(det));
    Eigen::Matrix4d Fup = raise_both(F.matrix(), rm.ginv);
    Eigen::Matrix4d dual = Eigen::Matrix4d::Zero();
    for (int a = 0; a < 4; ++a)
        for (int b = 0; b < 4; ++b) {
            double s = 0;
            for (int c = 0; c < 4; ++c)
                for (int d = 0; d < 4; ++d) {
                    int sg = perm_sign(a, b, c, d);
                    if (sg != 0) s += 0.5 * vol * sg * Fup(c, d);
                }
            dual(a, b) = s;
        }
    return Bivector(dual);
}

BivectorInvariants bivector_invariants(const Bivector& F, const RiemannMatrix& rm, double tau) {
    BivectorInvariants inv;
    Eigen::Matrix4d Fup = raise_both(F.matrix(), rm.ginv);
    Bivector dual = bivector_dual(F, rm);
    double scale = 0;
    for (int a = 0; a < 4; ++a)
        for (int b = 0; b < 4; ++b) {
            inv.ff += F.matrix()(a, b) * Fup(a, b);
            scale += std::abs(F.matrix()(a, b) * Fup(a, b));
        }
    Eigen::Matrix4d dualup = raise_both(dual.matrix(), rm.ginv);
    for (int a = 0; a < 4; ++a)
        for (int b = 0; b < 4; ++b) {
            inv.ffdual += F.matrix()(a, b) * dualup(a, b);
            scale += std::abs(F.matrix()(a, b) * dualup(a, b));
        }
    inv.simple = std::abs(inv.ffdual) <= tau * (1 + scale);
    inv.null = inv.simple && std::abs(inv.ff) <= tau * (1 + scale);
    return inv;
}

// ---------------------------------------------------------------------------
// Classification

const char* to_string(CurvatureClass c) {
    switch (c) {
        case CurvatureClass::A: return "A";
        case CurvatureClass::B: return "B";
        case CurvatureClass::C: return "C";
        case CurvatureClass::D: return "D";
        case CurvatureClass::O: return "O";
    }
    return "?";
}

namespace {

// Class B requires the rank-2 range to be spanned by a dual pair (F, F*)
// with F simple and non-null.
bool has_dual_pair_range(const RiemannMatrix& rm, double tau) {
    Eigen::SelfAdjointEigenSolver<Matrix6d> es(rm.W);
    const auto& ev = es.eigenvalues();
    double emax = ev.cwiseAbs().maxCoeff();
    if (!(emax > 0)) return false;
    std::vector<int> range;
    for (int i = 0; i < 6; ++i)
        if (std::abs(ev[i]) > tau * emax) range.push_back(i);
    if (range.size() != 2) return false;

    Vector6d c1 = es.eigenvectors().col(range[0]);
    Vector6d c2 = es.eigenvectors().col(range[1]);

    // the range must be closed under duality
    auto in_range = [&](const Vector6d& v) {
        Vector6d proj = c1 * (c1.dot(v)) + c2 * (c2.dot(v));
        return (v - proj).norm() <= 1e-7 * (1 + v.norm());
    };
    Bivector F1 = Bivector::from_components(c1);
    Bivector F2 = Bivector::from_components(c2);
    if (!in_range(bivector_dual(F1, rm).components()) ||
        !in_range(bivector_dual(F2, rm).components()))
        return false;

    // find a simple non-null bivector inside the range: the Pluecker form
    // restricted to span{c1,c2} is a binary quadratic
    double p11 = plucker_form(c1);
    double p22 = plucker_form(c2);
    double p12 = plucker_form(c1 + c2) - p11 - p22;  // polarization
    // roots of p11 u^2 + p12 u v + p22 v^2 = 0
    std::vector<std::pair<double, double>> candidates;
    if (std::abs(p11) < 1e-13 && std::abs(p22) < 1e-13 && std::abs(p12) < 1e-13) {
        candidates = {{1, 0}, {0, 1}};  // every member simple
    } else if (std::abs(p11) < 1e-13) {
        candidates = {{1, 0}};
        if (std::abs(p12) > 1e-13) candidates.push_back({-p22 / p12, 1});
    } else {
        double disc = p12 * p12 - 4 * p11 * p22;
        if (disc < 0) return false;
        double r = std::sqrt(disc);
        candidates.push_back({(-p12 + r) / (2 * p11), 1});
        candidates.push_back({(-p12 - r) / (2 * p11), 1});
    }
    for (auto [u, v] : candidates) {
        Vector6d c = u * c1 + v * c2;
        if (c.norm() < 1e-12) continue;
        c.normalize();
        Bivector F = Bivector::from_components(c);
        BivectorInvariants inv = bivector_invariants(F, rm, 1e-8);
        if (inv.simple && !inv.null) return true;
    }
    return false;
}

}  // namespace

CurvatureClass classify_point(const RiemannMatrix& rm, double tau, std::string* anomaly) {
    int r = rank_with_tol(rm.W, tau);
    int kdim = kernel_from(rm.W, tau).dim;
    if (r == 0) return CurvatureClass::O;
    if (r == 1 && kdim == 2) return CurvatureClass::D;
    if ((r == 2 || r == 3) && kdim == 1) return CurvatureClass::C;
    if (r == 2 && kdim == 0 && has_dual_pair_range(rm, tau)) return CurvatureClass::B;
    if (anomaly && r == 1 && kdim != 2)
        *anomaly = "rank 1 with dim N_p = " + std::to_string(kdim);
    return CurvatureClass::A;
}

GenericRank generic_rank(const CurvatureData& cd, const Domain& dom, const ZeroTestConfig& cfg,
                         double rank_tol) {
    cfg.validate();
    GenericRank gr;
    for (const Point& p : sample_points(dom, cfg.samples, cfg.seed)) {
        int r;
        try {
            r = rank_with_tol(riemann_matrix_at(cd, p).W, rank_tol);
        } catch (const EvalError&) {
            continue;
        }
        ++gr.histogram[r];
        ++gr.samples;
        gr.rank = std::max(gr.rank, r);
    }
    return gr;
}

GenericRank generic_rank(const PlaneSymmetricMetric& M, const Domain& dom,
                         const ZeroTestConfig& cfg, double rank_tol) {
    return generic_rank(CurvatureData(M), dom, cfg, rank_tol);
}

ClassificationResult classify(const CurvatureData& cd, const Domain& dom,
                              const ZeroTestConfig& cfg, double rank_tol) {
    cfg.validate();
    ClassificationResult res;

    struct Probe {
        Point p;
        int rank;
    };
    std::vector<Probe> probes;
    for (const Point& p : sample_points(dom, cfg.samples, cfg.seed)) {
        try {
            int r = rank_with_tol(riemann_matrix_at(cd, p).W, rank_tol);
            probes.push_back({p, r});
            ++res.rank.histogram[r];
            ++res.rank.samples;
            res.rank.rank = std::max(res.rank.rank, r);
        } catch (const EvalError& err) {
            res.warnings.push_back(std::string("probe skipped (") + err.what() + ")");
        }
    }
    if (probes.empty()) {
        res.warnings.push_back("no evaluable probe points; classification undetermined");
        return res;
    }

    bool first = true;
    int degenerate = 0;
    for (const Probe& pr : probes) {
        if (pr.rank != res.rank.rank) {
            ++degenerate;  // rank dropped on a special locus
            continue;
        }
        RiemannMatrix rm = riemann_matrix_at(cd, pr.p);
        std::string anomaly;
        CurvatureClass cls = classify_point(rm, rank_tol, &anomaly);
        if (!anomaly.empty()) res.anomalies.push_back(anomaly + " at " + to_string(pr.p));
        if (first) {
            res.cls = cls;
            res.kernel_dim = kernel_from(rm.W, rank_tol).dim;
            res.probe = pr.p;
            first = false;
        } else if (cls != res.cls) {
            res.anomalies.push_back(std::string("class not stable across probes: ") +
                                    to_string(res.cls) + " vs " + to_string(cls) + " at " +
                                    to_string(pr.p));
        }
    }
    if (degenerate > 0)
        res.warnings.push_back(std::to_string(degenerate) + " probe(s) below the generic rank");
    return res;
}

ClassificationResult classify(const PlaneSymmetricMetric& M, const Domain& dom,
                              const ZeroTestConfig& cfg, double rank_tol) {
    return classify(CurvatureData(M), dom, cfg, rank_tol);
}

// ---------------------------------------------------------------------------
// Rank-1 factorization

Rank1Decomposition decompose_rank1(const RiemannMatrix& rm, double tau) {
    int r = rank_with_tol(rm.W, tau);
    if (r != 1)
        throw RankMismatchError("decompose_rank1 expects a rank-1 matrix, got rank " +
                                std::to_string(r));

    Eigen::SelfAdjointEigenSolver<Matrix6d> es(rm.W);
    int imax = 0;
    es.eigenvalues().cwiseAbs().maxCoeff(&imax);
    double lambda = es.eigenvalues()[imax];
    Vector6d v = es.eigenvectors().col(imax);

    Rank1Decomposition out;
    out.alpha = lambda;
    out.F = Bivector::from_components(v);
    Matrix6d recon = lambda * v * v.transpose();
    double wmax = rm.W.cwiseAbs().maxCoeff();
    out.residual = (rm.W - recon).cwiseAbs().maxCoeff() / (wmax > 0 ? wmax : 1.0);
    out.simple = std::abs(plucker_form(v)) <= 1e-9 * (1 + v.squaredNorm());

    KernelBasis kb = kernel_from(rm.W, tau);
    double contraction = 0;
    for (int k = 0; k < kb.dim; ++k) {
        Eigen::Vector4d fk = out.F.matrix() * kb.basis.col(k);
        contraction = std::max(contraction, fk.cwiseAbs().maxCoeff());
    }
    out.kernel_contraction = contraction;
    return out;
}

// ---------------------------------------------------------------------------
// Covariant constancy

CovariantConstancy is_covariantly_constant(const CurvatureData& cd,
                                           const std::array<Expr, 4>& covector,
                                           const ZeroTestConfig& cfg) {
    CovariantConstancy res;
    res.constant = true;
    for (int a = 0; a < 4; ++a) {
        for (int b = 0; b < 4; ++b) {
            std::vector<Expr> terms;
            terms.push_back(differentiate(covector[a], coord_of(b)));
            for (int e = 0; e < 4; ++e)
                terms.push_back(negate(product({cd.gamma.at({e, b, a}), covector[e]})));
            Expr kab = sum(std::move(terms));
            ZeroTestResult zt = zero_test(kab, cd.metric.domain(), cfg, cd.metric.params());
            if (zt.max_abs > res.residual) {
                res.residual = zt.max_abs;
                res.witness = zt.witness;
            }
            if (zt.state != TriState::Zero) res.constant = false;
        }
    }
    return res;
}

}  // namespace planesym

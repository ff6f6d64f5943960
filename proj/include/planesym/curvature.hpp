#pragma once

#include <Eigen/Dense>
#include <array>
#include <optional>
#include <string>
#include <vector>

#include "planesym/metric.hpp"

namespace planesym {

using Matrix6d = Eigen::Matrix<double, 6, 6>;
using Vector6d = Eigen::Matrix<double, 6, 1>;

/// Fixed ordering of index pairs [01],[02],[03],[12],[13],[23] that lays
/// the curvature tensor out as a symmetric 6x6 matrix.
struct BivectorIndex {
    static constexpr std::array<std::array<int, 2>, 6> pairs = {
        {{0, 1}, {0, 2}, {0, 3}, {1, 2}, {1, 3}, {2, 3}}};
    /// position of the (unordered) pair {a,b}, a != b
    static int position(int a, int b);
};

/// Antisymmetric rank-2 tensor at a point, stored as its full 4x4
/// component matrix F_ab.
class Bivector {
public:
    Bivector() : f_(Eigen::Matrix4d::Zero()) {}
    explicit Bivector(const Eigen::Matrix4d& f);
    static Bivector from_components(const Vector6d& c);  ///< bivector-ordered components

    double operator()(int a, int b) const { return f_(a, b); }
    const Eigen::Matrix4d& matrix() const { return f_; }
    Vector6d components() const;

private:
    Eigen::Matrix4d f_;
};

/// Numeric curvature snapshot of a metric at a probe point: the 6x6
/// matrix W[A][B] = R_abcd with bivector row/column indices, plus the
/// metric values needed for index gymnastics.
struct RiemannMatrix {
    Matrix6d W = Matrix6d::Zero();
    Eigen::Matrix4d g = Eigen::Matrix4d::Zero();
    Eigen::Matrix4d ginv = Eigen::Matrix4d::Zero();
    Point at;
};

RiemannMatrix riemann_matrix_at(const CurvatureData& cd, const Point& p);
RiemannMatrix riemann_matrix_at(const PlaneSymmetricMetric& M, const Point& p);

/// Count of singular values above tau * (largest singular value); the
/// zero matrix has rank 0.
int rank_with_tol(const Matrix6d& W, double tau);
inline int rank_with_tol(const RiemannMatrix& W, double tau) { return rank_with_tol(W.W, tau); }

struct GenericRank {
    int rank = 0;                      ///< max over the sampled points
    std::array<int, 7> histogram{};   ///< histogram[r] = #points with rank r
    int samples = 0;
};

/// Rank at the generic point: maximum over seeded samples (the rank can
/// drop on measure-zero sets), with the per-point histogram.
GenericRank generic_rank(const CurvatureData& cd, const Domain& dom, const ZeroTestConfig& cfg,
                         double rank_tol);
GenericRank generic_rank(const PlaneSymmetricMetric& M, const Domain& dom,
                         const ZeroTestConfig& cfg, double rank_tol);

/// Orthonormal basis of N_p = {k : R_abcd k^d = 0}, found from the
/// flattened 64x4 system.
struct KernelBasis {
    Eigen::Matrix<double, 4, Eigen::Dynamic> basis;  ///< columns are kernel vectors k^d
    int dim = 0;
    /// coordinate axis a column is parallel to, if any (tolerance 1e-8)
    std::optional<Coord> aligned_axis(int column) const;
};

KernelBasis kernel_Np(const CurvatureData& cd, const Point& p, double tau);
KernelBasis kernel_Np(const PlaneSymmetricMetric& M, const Point& p, double tau);

enum class CurvatureClass { A, B, C, D, O };
const char* to_string(CurvatureClass c);

struct ClassificationResult {
    CurvatureClass cls = CurvatureClass::O;
    GenericRank rank;
    int kernel_dim = 0;                  ///< at the max-rank probe points
    Point probe;                         ///< a representative generic point
    std::vector<std::string> anomalies;  ///< rank/kernel combinations outside the taxonomy
    std::vector<std::string> warnings;
};

/// Pointwise algebraic type from (rank, kernel dimension, bivector
/// structure); `anomaly` receives a note when the combination falls
/// outside the taxonomy.
CurvatureClass classify_point(const RiemannMatrix& rm, double tau, std::string* anomaly = nullptr);

/// Class at the generic point: classify at every seeded sample, ignore
/// points whose rank drops below the generic rank, and require agreement.
ClassificationResult classify(const CurvatureData& cd, const Domain& dom,
                              const ZeroTestConfig& cfg, double rank_tol);
ClassificationResult classify(const PlaneSymmetricMetric& M, const Domain& dom,
                              const ZeroTestConfig& cfg, double rank_tol);

class RankMismatchError : public std::runtime_error {
public:
    explicit RankMismatchError(const std::string& what) : std::runtime_error(what) {}
};

struct Rank1Decomposition {
    double alpha = 0;
    Bivector F;
    double residual = 0;  ///< max-norm of W - alpha F F^T relative to max|W|
    bool simple = false;  ///< F_[ab F_cd] = 0
    double kernel_contraction = 0;  ///< max |F_ab k^b| over the kernel basis
};

/// Factor a rank-1 curvature matrix as W = alpha F F^T with F simple and
/// its blade orthogonal to the kernel. Throws RankMismatchError when the
/// input rank is not 1.
Rank1Decomposition decompose_rank1(const RiemannMatrix& rm, double tau);

/// Hodge dual F*_ab = 1/2 eps_abcd F^cd with eps_0123 = sqrt(|det g|).
Bivector bivector_dual(const Bivector& F, const RiemannMatrix& rm);

struct BivectorInvariants {
    double ff = 0;       ///< F_ab F^ab
    double ffdual = 0;   ///< F_ab F*^ab
    bool simple = false;
    bool null = false;
};

BivectorInvariants bivector_invariants(const Bivector& F, const RiemannMatrix& rm, double tau);

struct CovariantConstancy {
    bool constant = false;
    double residual = 0;  ///< max |k_{a;b}| over samples
    Point witness;
};

/// Checks k_{a;b} = 0 for a covector field given by four component
/// expressions.
CovariantConstancy is_covariantly_constant(const CurvatureData& cd,
                                           const std::array<Expr, 4>& covector,
                                           const ZeroTestConfig& cfg);

}  // namespace planesym

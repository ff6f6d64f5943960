#pragma once

#include <array>
#include <optional>
#include <string>
#include <vector>

#include "planesym/metric.hpp"

namespace planesym {

/// Candidate symmetry generator X^0..X^3, components in (t, x, y, z).
struct VectorField {
    std::array<Expr, 4> comp{};
    const Expr& operator[](int i) const { return comp[i]; }
    std::string describe() const;
};

/// Verdict of one tensor-equation zero test.
struct CheckResult {
    bool holds = false;
    TriState aggregate = TriState::Undetermined;
    double residual = 0;  ///< max |component| over the samples
    Point witness;
    std::vector<std::string> warnings;
};

/// h_ab = L_X g_ab = X^e d_e g_ab + g_eb d_a X^e + g_ae d_b X^e.
TensorField lie_metric(const CurvatureData& cd, const VectorField& X);

/// Killing test: every component of L_X g vanishes identically.
CheckResult is_killing(const CurvatureData& cd, const VectorField& X, const ZeroTestConfig& cfg);

struct HomothetyResult {
    std::optional<double> c;  ///< L_X g = 2c g
    double residual = 0;      ///< max |h_ab - 2c g_ab| with the best-effort c
    Point witness;
};

/// Homothety test; c is recovered from h_00/(2 g_00) once proportionality
/// and constancy are established symbolically.
HomothetyResult homothety_constant(const CurvatureData& cd, const VectorField& X,
                                   const ZeroTestConfig& cfg);

/// Affine test: (L_X g)_{ab;c} vanishes identically.
CheckResult is_affine(const CurvatureData& cd, const VectorField& X, const ZeroTestConfig& cfg);

/// L_X R^a_bcd in the connection-free form
///   X^e d_e R^a_bcd - R^e_bcd d_e X^a + R^a_ecd d_b X^e
///   + R^a_bed d_c X^e + R^a_bce d_d X^e.
TensorField lie_riemann(const CurvatureData& cd, const VectorField& X);

/// The same derivative assembled from covariant pieces
///   R^a_bcd;e X^e + R^a_ecd X^e_;b + R^a_bed X^e_;c + R^a_bce X^e_;d
///   - R^e_bcd X^a_;e,
/// kept as an independent consistency route.
TensorField lie_riemann_covariant(const CurvatureData& cd, const VectorField& X);

/// Curvature collineation test: L_X R^a_bcd = 0 identically.
CheckResult is_cc(const CurvatureData& cd, const VectorField& X, const ZeroTestConfig& cfg);

/// Candidate verdicts with the residuals backing them.
struct CollineationReport {
    bool is_killing = false;
    bool is_affine = false;
    bool is_cc = false;
    bool is_proper_cc = false;  ///< is_cc and not is_affine
    std::optional<double> homothety_c;

    double max_lie_metric = 0;
    Point lie_metric_at;
    double max_homothety_defect = 0;
    Point homothety_defect_at;
    double max_affine_defect = 0;
    Point affine_defect_at;
    double max_lie_riemann = 0;
    Point lie_riemann_at;

    std::vector<std::string> warnings;
};

CollineationReport analyze_collineation(const CurvatureData& cd, const VectorField& X,
                                        const ZeroTestConfig& cfg);

inline bool is_proper_cc(const CurvatureData& cd, const VectorField& X, const ZeroTestConfig& cfg) {
    return analyze_collineation(cd, X, cfg).is_proper_cc;
}

class PreconditionError : public std::runtime_error {
public:
    explicit PreconditionError(const std::string& what) : std::runtime_error(what) {}
};

/// Three-dimensional geometry induced on the constant-x submanifolds when
/// A, C depend on t alone: g_00 = -e^{alpha(t)}, g_22 = g_33 = e^{eta(t)},
/// coordinates (t, y, z).
struct Induced3Geometry {
    Expr alpha;  ///< function of t
    Expr eta;    ///< function of t
    Domain domain;
    ParamBindings params;
};

/// Requires A_x, B_t, C_x all identically zero; the failing condition is
/// named in the error.
Induced3Geometry induced_3d(const PlaneSymmetricMetric& M, const ZeroTestConfig& cfg);

/// Homothety check on the induced 3-geometry: L_X' g = c g expanded into
/// six scalar equations. X' has components along (t, y, z).
std::optional<double> is_homothetic_3d(const Induced3Geometry& G3, const std::array<Expr, 3>& Xp,
                                       const ZeroTestConfig& cfg);

/// Two-dimensional geometry induced on the constant-(y,z) submanifolds
/// when C is constant: g_00 = -e^A, g_11 = e^B, coordinates (t, x).
struct Induced2Geometry {
    Expr A, B;
    Expr ricci00, ricci11;  ///< generic 2D computation
    Expr scalar;            ///< 2D Ricci scalar
    Expr G00, G11;          ///< G_ab = (R/2) g_ab
    Domain domain;
    ParamBindings params;
    bool ricci_crosscheck_ok = false;  ///< generic vs closed-form 2D Ricci
};

/// Requires C_t and C_x identically zero.
Induced2Geometry induced_2d(const PlaneSymmetricMetric& M, const ZeroTestConfig& cfg);

struct TwoDCCResult {
    bool holds = false;
    bool vacuous = false;  ///< G == 0 identically: every field passes trivially
    double residual = 0;
    Point witness;
};

/// Curvature-collineation condition L_X' G = 0 on the induced 2-geometry,
/// expanded into three scalar equations. X' has components along (t, x).
TwoDCCResult is_2d_cc(const Induced2Geometry& G2, const std::array<Expr, 2>& Xp,
                      const ZeroTestConfig& cfg);

}  // namespace planesym

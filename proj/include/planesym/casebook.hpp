#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "planesym/collineation.hpp"
#include "planesym/curvature.hpp"

namespace planesym {

/// Primitive and composite scalar conditions whose vanishing pattern
/// drives the 28-case catalog.
enum class ConditionId : int {
    At = 0,
    Ax,
    Bt,
    Bx,
    Ct,
    Cx,
    Ct2_2Ctt,       ///< C_t^2 + 2 C_tt
    Cx2_2Cxx,       ///< C_x^2 + 2 C_xx
    CtCx_2Ctx,      ///< C_t C_x + 2 C_tx
    Bt2_2Btt,       ///< B_t^2 + 2 B_tt
    Bt2_2Btt_AtBt,  ///< B_t^2 + 2 B_tt - A_t B_t
    Ax2_2Axx,       ///< A_x^2 + 2 A_xx
    Ax2_2Axx_AxBx,  ///< A_x^2 + 2 A_xx - A_x B_x
};
inline constexpr int kConditionCount = 13;

const char* condition_name(ConditionId c);
Expr condition_expr(ConditionId c, const PlaneSymmetricMetric& M);

struct ConditionVector {
    std::array<TriState, kConditionCount> state{};
    std::uint64_t seed = 0;
    TriState operator[](ConditionId c) const { return state[static_cast<int>(c)]; }
};

ConditionVector evaluate_conditions(const PlaneSymmetricMetric& M, const ZeroTestConfig& cfg);

struct CaseRequirement {
    ConditionId cond;
    bool must_vanish;  ///< true: condition = 0; false: condition != 0
};

/// One row of the printed catalog, stored as data so that typos stay
/// auditable rather than baked into control flow.
struct CaseSpec {
    int id = 0;                   ///< 1..28
    int printed_rank = 0;         ///< the rank label of the row
    int family = 0;               ///< representative of the "precisely the same" family
    std::vector<CaseRequirement> requirements;
    std::string annotation;       ///< typo/inconsistency notes
};

const std::vector<CaseSpec>& case_table();

struct CaseMatch {
    std::vector<int> matched;   ///< printed case ids fully satisfied
    std::vector<int> families;  ///< distinct family representatives of the matches
    bool is_static = false;     ///< A_t, B_t, C_t all vanish
    bool unclassified = false;  ///< non-static but no row matches
    GenericRank rank;
    std::vector<std::string> diagnostics;  ///< undetermined conditions etc.
};

/// Matches a metric against every printed row; overlapping matches are
/// all reported. Static metrics are flagged instead of matched.
CaseMatch classify_case(const PlaneSymmetricMetric& M, const ZeroTestConfig& cfg, double rank_tol);

enum class FixtureId {
    Case1,
    Case6,
    Case14,
    Case27,
    Case28,
    HomothetyContradiction,
    Flat,
    GenericRank4,
};

const char* to_string(FixtureId id);
std::vector<FixtureId> all_fixtures();

/// Built-in metrics with bound parameters and safe domains.
PlaneSymmetricMetric paper_fixture(FixtureId id);

/// Seeded polynomial metric for validation harnesses (degree <= 2 in t, x
/// with half-integer coefficients).
PlaneSymmetricMetric random_plane_metric(std::uint64_t seed);

struct ExpectedStatus {
    bool killing = false;
    bool affine = false;
    bool cc = false;
    bool proper = false;
};

struct CandidateField {
    VectorField field;
    std::string name;
    ExpectedStatus expected;
    /// true when the published conclusion itself is under test and the
    /// residual oracle decides (case 28)
    bool contested = false;
};

/// Families of candidate fields with their published/derived verdicts for
/// the analyzed cases {1, 6, 14, 27, 28}.
std::vector<CandidateField> known_cc_family(int case_id);

/// Euclidean-Gram rank of candidate fields sampled over a domain;
/// witnesses linear independence of collineation families.
int gram_rank(const std::vector<VectorField>& fields, const Domain& dom, const ZeroTestConfig& cfg,
              double tol);

// ---------------------------------------------------------------------------
// Verification harness

struct VerifyConfig {
    ZeroTestConfig zero{};
    double rank_tol = 1e-10;
};

struct ClaimResult {
    std::string id;           ///< stable key, e.g. "case27.kernel"
    std::string description;  ///< what was checked
    bool agree = false;
    double residual = 0;      ///< numeric evidence where applicable
    std::string detail;
};

struct FixtureReport {
    FixtureId fixture = FixtureId::Flat;
    CaseMatch case_match;
    ClassificationResult classification;
    std::vector<ClaimResult> claims;
    std::vector<std::string> advisories;
    std::vector<std::string> warnings;
};

struct ClosedFormValidation {
    bool adopted_ok = false;
    bool published_ok = false;
    double adopted_max_err = 0;
    double published_max_err = 0;
    std::vector<std::string> corrections;
};

struct VerificationReport {
    ClosedFormValidation closed_form;
    std::vector<FixtureReport> fixtures;
    int disagreements = 0;
    bool all_agree = false;
};

/// Validates the closed-form curvature components (adopted and published
/// variants) against the generic computation over the case fixtures plus
/// seeded random metrics.
ClosedFormValidation validate_closed_forms(const VerifyConfig& cfg, int random_metrics = 20,
                                           int points_per_metric = 100);

/// Runs every published claim against the computed analysis; a claim the
/// computation contradicts is reported with its residual, never
/// suppressed.
VerificationReport verify_paper(const VerifyConfig& cfg);

/// Advisory attached whenever the generic rank exceeds three.
extern const char* kRankAdvisory;

}  // namespace planesym

#include <doctest.h>

#include <algorithm>
#include <cmath>

#include "planesym/casebook.hpp"

using namespace planesym;

namespace {

ZeroTestConfig cfg32() { return ZeroTestConfig{32, 1e-9, 42}; }
const double TAU = 1e-10;

bool contains(const std::vector<int>& v, int x) {
    return std::find(v.begin(), v.end(), x) != v.end();
}

}  // namespace

TEST_CASE("the printed catalog has 28 rows with annotated typos") {
    const auto& table = case_table();
    REQUIRE(table.size() == 28);
    for (std::size_t i = 0; i < table.size(); ++i) CHECK(table[i].id == static_cast<int>(i) + 1);
    CHECK_FALSE(table[16].annotation.empty());  // case 17
    CHECK_FALSE(table[18].annotation.empty());  // case 19
    CHECK_FALSE(table[27].annotation.empty());  // case 28 duplicate condition
    for (const auto& cs : table) CHECK((cs.printed_rank == 1 || cs.printed_rank == 3));
}

TEST_CASE("condition vectors of the fixtures") {
    ZeroTestConfig cfg = cfg32();

    ConditionVector v27 = evaluate_conditions(paper_fixture(FixtureId::Case27), cfg);
    CHECK(v27[ConditionId::At] == TriState::Zero);
    CHECK(v27[ConditionId::Ax] == TriState::Zero);
    CHECK(v27[ConditionId::Bt] == TriState::Zero);
    CHECK(v27[ConditionId::Bx] == TriState::Zero);
    CHECK(v27[ConditionId::Cx] == TriState::Zero);
    CHECK(v27[ConditionId::Ct] == TriState::NonZero);
    CHECK(v27[ConditionId::Ct2_2Ctt] == TriState::Zero);

    ConditionVector v1 = evaluate_conditions(paper_fixture(FixtureId::Case1), cfg);
    CHECK(v1[ConditionId::Ax] == TriState::Zero);
    CHECK(v1[ConditionId::Bt] == TriState::Zero);
    CHECK(v1[ConditionId::Cx] == TriState::Zero);
    CHECK(v1[ConditionId::At] == TriState::NonZero);
    CHECK(v1[ConditionId::Ct] == TriState::NonZero);
    CHECK(v1[ConditionId::Ct2_2Ctt] == TriState::NonZero);

    ConditionVector vflat = evaluate_conditions(paper_fixture(FixtureId::Flat), cfg);
    for (int i = 0; i < kConditionCount; ++i) CHECK(vflat.state[i] == TriState::Zero);
}

TEST_CASE("case matching includes the nominal family for every fixture") {
    ZeroTestConfig cfg = cfg32();

    CaseMatch m27 = classify_case(paper_fixture(FixtureId::Case27), cfg, TAU);
    CHECK(contains(m27.matched, 27));
    CHECK(m27.rank.rank == 1);
    CHECK_FALSE(m27.is_static);

    // the reduced case-1 line element has B = 0 after the x-rescaling, so it
    // satisfies printed case 2; the family representative is case 1
    CaseMatch m1 = classify_case(paper_fixture(FixtureId::Case1), cfg, TAU);
    CHECK(contains(m1.matched, 2));
    CHECK(contains(m1.families, 1));
    CHECK(m1.rank.rank == 3);

    CaseMatch m6 = classify_case(paper_fixture(FixtureId::Case6), cfg, TAU);
    CHECK(contains(m6.matched, 6));
    CHECK(contains(m6.families, 6));

    CaseMatch m14 = classify_case(paper_fixture(FixtureId::Case14), cfg, TAU);
    CHECK(contains(m14.matched, 14));
    CHECK(m14.matched.size() == 1);  // 17/18 variants require vanishing composites
    CHECK(m14.rank.rank == 1);

    CaseMatch m28 = classify_case(paper_fixture(FixtureId::Case28), cfg, TAU);
    CHECK(contains(m28.matched, 28));
    CHECK(m28.rank.rank == 1);
}

TEST_CASE("static and unclassified verdicts") {
    ZeroTestConfig cfg = cfg32();

    // depends on x only: static
    PlaneSymmetricMetric st(parse("x"), parse("2*x"), parse("x"), Domain({1, 2}, {1, 2}));
    CaseMatch ms = classify_case(st, cfg, TAU);
    CHECK(ms.is_static);
    CHECK(ms.matched.empty());

    // A_t != 0 alone keeps it non-static; it fits no printed row and the
    // curvature in fact vanishes (a disguised flat patch)
    PlaneSymmetricMetric odd(parse("-t"), constant(1), constant(2), Domain({1, 2}, {1, 2}));
    CaseMatch mo = classify_case(odd, cfg, TAU);
    CHECK_FALSE(mo.is_static);
    CHECK(mo.unclassified);
    CHECK(mo.rank.rank == 0);

    PlaneSymmetricMetric flat = paper_fixture(FixtureId::Flat);
    CaseMatch mf = classify_case(flat, cfg, TAU);
    CHECK(mf.is_static);
}

TEST_CASE("fixtures satisfy their matched row's full condition vector") {
    ZeroTestConfig cfg = cfg32();
    struct Row {
        FixtureId fix;
        int matched_case;
    };
    for (Row r : {Row{FixtureId::Case1, 2}, Row{FixtureId::Case6, 6}, Row{FixtureId::Case14, 14},
                  Row{FixtureId::Case27, 27}, Row{FixtureId::Case28, 28}}) {
        PlaneSymmetricMetric M = paper_fixture(r.fix);
        ConditionVector cv = evaluate_conditions(M, cfg);
        const CaseSpec& spec = case_table()[r.matched_case - 1];
        for (const CaseRequirement& req : spec.requirements) {
            TriState s = cv[req.cond];
            if (req.must_vanish)
                CHECK(s == TriState::Zero);
            else
                CHECK(s == TriState::NonZero);
        }
    }
}

TEST_CASE("random plane metrics construct deterministically") {
    PlaneSymmetricMetric a = random_plane_metric(7);
    PlaneSymmetricMetric b = random_plane_metric(7);
    CHECK(structurally_equal(a.A(), b.A()));
    CHECK(structurally_equal(a.B(), b.B()));
    CHECK(structurally_equal(a.C(), b.C()));
    PlaneSymmetricMetric c = random_plane_metric(8);
    bool same = structurally_equal(a.A(), c.A()) && structurally_equal(a.B(), c.B()) &&
                structurally_equal(a.C(), c.C());
    CHECK_FALSE(same);
}

TEST_CASE("gram rank witnesses independence") {
    std::vector<VectorField> wit;
    for (const char* f : {"1", "x", "x^2", "x^3", "x^4"})
        wit.push_back(VectorField{{constant(0), parse(f), constant(0), constant(0)}});
    CHECK(gram_rank(wit, Domain({-1, 1}, {-1, 1}), cfg32(), TAU) == 5);

    // a dependent family drops rank
    wit.push_back(VectorField{{constant(0), parse("x^2 + x"), constant(0), constant(0)}});
    CHECK(gram_rank(wit, Domain({-1, 1}, {-1, 1}), cfg32(), 1e-8) == 5);
}

TEST_CASE("closed-form validation adopts the corrected formulas") {
    VerifyConfig cfg;
    ClosedFormValidation v = validate_closed_forms(cfg, 20, 100);
    CHECK(v.adopted_ok);
    CHECK_FALSE(v.published_ok);
    CHECK(v.adopted_max_err <= 1e-9);
    CHECK(v.published_max_err > 1e-3);
    REQUIRE(v.corrections.size() == 2);
}

TEST_CASE("verify_paper: agreement pattern") {
    VerifyConfig cfg;
    VerificationReport report = verify_paper(cfg);

    REQUIRE(report.fixtures.size() == 8);

    int disagree = 0;
    std::vector<std::string> disagreeing_ids;
    for (const auto& fr : report.fixtures)
        for (const auto& c : fr.claims)
            if (!c.agree) {
                ++disagree;
                disagreeing_ids.push_back(c.id);
            }

    // the single expected disagreement: the contested case-28 conclusion,
    // where the residual oracle finds a non-isometric collineation
    REQUIRE(disagree == 1);
    CHECK(disagreeing_ids[0] == "case28.field.(t^2, 0, 0, 0)");
    CHECK(report.disagreements == 1);
    CHECK_FALSE(report.all_agree);

    // the rank advisory is attached exactly where rank > 3
    for (const auto& fr : report.fixtures) {
        if (fr.fixture == FixtureId::GenericRank4) {
            REQUIRE_FALSE(fr.advisories.empty());
            CHECK(fr.advisories[0] == std::string(kRankAdvisory));
        } else {
            CHECK(fr.advisories.empty());
        }
    }
}

TEST_CASE("verify_paper is deterministic") {
    VerifyConfig cfg;
    VerificationReport a = verify_paper(cfg);
    VerificationReport b = verify_paper(cfg);
    REQUIRE(a.fixtures.size() == b.fixtures.size());
    for (std::size_t i = 0; i < a.fixtures.size(); ++i) {
        REQUIRE(a.fixtures[i].claims.size() == b.fixtures[i].claims.size());
        for (std::size_t j = 0; j < a.fixtures[i].claims.size(); ++j) {
            CHECK(a.fixtures[i].claims[j].agree == b.fixtures[i].claims[j].agree);
            CHECK(a.fixtures[i].claims[j].residual == b.fixtures[i].claims[j].residual);
        }
    }
}

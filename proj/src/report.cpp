#include "planesym/report.hpp"

#include <cstdio>
#include <sstream>

namespace planesym {

namespace {

std::string fmt(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.12g", v);
    return buf;
}

std::string join_ints(const std::vector<int>& v) {
    std::string s;
    for (int x : v) {
        if (!s.empty()) s += ", ";
        s += std::to_string(x);
    }
    return s.empty() ? "none" : s;
}

std::string point_str(const Point& p) {
    return "(" + fmt(p.t) + ", " + fmt(p.x) + ", " + fmt(p.y) + ", " + fmt(p.z) + ")";
}

void emit_point(JsonWriter& w, const Point& p) {
    w.begin_array().value(p.t).value(p.x).value(p.y).value(p.z).end_array();
}

void emit_strings(JsonWriter& w, std::string_view key, const std::vector<std::string>& v) {
    w.key(key).begin_array();
    for (const auto& s : v) w.value(s);
    w.end_array();
}

void emit_ints(JsonWriter& w, std::string_view key, const std::vector<int>& v) {
    w.key(key).begin_array();
    for (int s : v) w.value(s);
    w.end_array();
}

void emit_case_match(JsonWriter& w, const CaseMatch& m) {
    emit_ints(w, "cases", m.matched);
    emit_ints(w, "families", m.families);
    w.kv("static", m.is_static);
    w.kv("unclassified", m.unclassified);
    emit_strings(w, "diagnostics", m.diagnostics);
}

void emit_rank(JsonWriter& w, const GenericRank& r) {
    w.kv("rank", r.rank);
    w.key("rank_histogram").begin_array();
    for (int c : r.histogram) w.value(c);
    w.end_array();
    w.kv("rank_samples", r.samples);
}

std::string verdict_line(const ClaimResult& c) {
    std::string s = std::string(c.agree ? "AGREE    " : "DISAGREE ") + c.id + ": " + c.description;
    if (!c.agree || c.residual > 0) s += " [residual " + fmt(c.residual) + "]";
    if (!c.detail.empty() && !c.agree) s += " {" + c.detail + "}";
    return s;
}

}  // namespace

// ---------------------------------------------------------------------------
// classify

std::string text_report(const ClassifyAnalysis& a) {
    std::ostringstream os;
    os << "input: " << a.input << "\n";
    os << "rank: " << a.classification.rank.rank << "\n";
    os << "rank_histogram:";
    for (int r = 0; r <= 6; ++r) os << " " << r << ":" << a.classification.rank.histogram[r];
    os << "\n";
    os << "class: " << to_string(a.classification.cls) << "\n";
    os << "kernel_dim: " << a.classification.kernel_dim << "\n";
    os << "kernel_axes:";
    if (a.kernel_axes.empty()) os << " none";
    for (const auto& ax : a.kernel_axes) os << " " << ax;
    os << "\n";
    if (a.case_match.is_static)
        os << "case: static\n";
    else if (a.case_match.unclassified)
        os << "case: unclassified\n";
    else
        os << "case: " << join_ints(a.case_match.matched) << "\n";
    os << "family: " << join_ints(a.case_match.families) << "\n";
    if (a.classification.rank.rank > 3) os << "advisory: " << kRankAdvisory << "\n";
    for (const auto& an : a.classification.anomalies) os << "anomaly: " << an << "\n";
    for (const auto& wn : a.classification.warnings) os << "warning: " << wn << "\n";
    for (const auto& d : a.case_match.diagnostics) os << "diagnostic: " << d << "\n";
    return os.str();
}

void emit_json(JsonWriter& w, const ClassifyAnalysis& a) {
    w.begin_object();
    w.kv("kind", "classify");
    w.kv("input", a.input);
    emit_rank(w, a.classification.rank);
    w.kv("class", to_string(a.classification.cls));
    w.kv("kernel_dim", a.classification.kernel_dim);
    emit_strings(w, "kernel_axes", a.kernel_axes);
    emit_case_match(w, a.case_match);
    w.key("advisories").begin_array();
    if (a.classification.rank.rank > 3) w.value(kRankAdvisory);
    w.end_array();
    emit_strings(w, "anomalies", a.classification.anomalies);
    emit_strings(w, "warnings", a.classification.warnings);
    w.end_object();
}

// ---------------------------------------------------------------------------
// conditions

std::string text_report(const ConditionAnalysis& a) {
    std::ostringstream os;
    os << "input: " << a.input << "\n";
    for (int i = 0; i < kConditionCount; ++i)
        os << condition_name(static_cast<ConditionId>(i)) << ": "
           << to_string(a.conditions.state[i]) << "\n";
    if (a.case_match.is_static)
        os << "case: static\n";
    else if (a.case_match.unclassified)
        os << "case: unclassified\n";
    else
        os << "case: " << join_ints(a.case_match.matched) << "\n";
    os << "family: " << join_ints(a.case_match.families) << "\n";
    os << "rank: " << a.case_match.rank.rank << "\n";
    return os.str();
}

void emit_json(JsonWriter& w, const ConditionAnalysis& a) {
    w.begin_object();
    w.kv("kind", "conditions");
    w.kv("input", a.input);
    w.key("conditions").begin_object();
    for (int i = 0; i < kConditionCount; ++i)
        w.kv(condition_name(static_cast<ConditionId>(i)), to_string(a.conditions.state[i]));
    w.end_object();
    emit_rank(w, a.case_match.rank);
    emit_case_match(w, a.case_match);
    w.end_object();
}

// ---------------------------------------------------------------------------
// riemann

std::string text_report(const RiemannAnalysis& a) {
    std::ostringstream os;
    os << "input: " << a.input << "\n";
    os << "at: " << point_str(a.at) << "\n";
    for (int i = 0; i < 5; ++i) os << "alpha" << i + 1 << ": " << fmt(a.alpha[i]) << "\n";
    os << "matrix:\n";
    for (int i = 0; i < 6; ++i) {
        os << " ";
        for (int j = 0; j < 6; ++j) os << " " << fmt(a.matrix(i, j));
        os << "\n";
    }
    os << "rank: " << a.rank << "\n";
    return os.str();
}

void emit_json(JsonWriter& w, const RiemannAnalysis& a) {
    w.begin_object();
    w.kv("kind", "riemann");
    w.kv("input", a.input);
    w.key("at");
    emit_point(w, a.at);
    w.key("alpha").begin_array();
    for (double v : a.alpha) w.value(v);
    w.end_array();
    w.key("matrix").begin_array();
    for (int i = 0; i < 6; ++i) {
        w.begin_array();
        for (int j = 0; j < 6; ++j) w.value(a.matrix(i, j));
        w.end_array();
    }
    w.end_array();
    w.kv("rank", a.rank);
    w.end_object();
}

// ---------------------------------------------------------------------------
// collineation check

std::string text_report(const CollineationAnalysis& a) {
    const CollineationReport& r = a.report;
    std::ostringstream os;
    os << "metric: " << a.metric_input << "\n";
    os << "vector: " << a.vector_input << " " << a.field << "\n";
    os << "killing: " << (r.is_killing ? "true" : "false") << "\n";
    os << "homothety_c: " << (r.homothety_c ? fmt(*r.homothety_c) : "none") << "\n";
    os << "affine: " << (r.is_affine ? "true" : "false") << "\n";
    os << "cc: " << (r.is_cc ? "true" : "false") << "\n";
    os << "proper_cc: " << (r.is_proper_cc ? "true" : "false") << "\n";
    os << "residual_lie_metric: " << fmt(r.max_lie_metric) << " at " << point_str(r.lie_metric_at)
       << "\n";
    os << "residual_homothety_defect: " << fmt(r.max_homothety_defect) << " at "
       << point_str(r.homothety_defect_at) << "\n";
    os << "residual_affine_defect: " << fmt(r.max_affine_defect) << " at "
       << point_str(r.affine_defect_at) << "\n";
    os << "residual_lie_riemann: " << fmt(r.max_lie_riemann) << " at "
       << point_str(r.lie_riemann_at) << "\n";
    for (const auto& wn : r.warnings) os << "warning: " << wn << "\n";
    return os.str();
}

void emit_json(JsonWriter& w, const CollineationAnalysis& a) {
    const CollineationReport& r = a.report;
    w.begin_object();
    w.kv("kind", "collineation");
    w.kv("metric", a.metric_input);
    w.kv("vector", a.vector_input);
    w.kv("field", a.field);
    w.kv("killing", r.is_killing);
    w.key("homothety_c");
    if (r.homothety_c)
        w.value(*r.homothety_c);
    else
        w.null();
    w.kv("affine", r.is_affine);
    w.kv("cc", r.is_cc);
    w.kv("proper_cc", r.is_proper_cc);
    w.key("residuals").begin_object();
    auto res = [&](const char* name, double v, const Point& p) {
        w.key(name).begin_object();
        w.kv("value", v);
        w.key("at");
        emit_point(w, p);
        w.end_object();
    };
    res("lie_metric", r.max_lie_metric, r.lie_metric_at);
    res("homothety_defect", r.max_homothety_defect, r.homothety_defect_at);
    res("affine_defect", r.max_affine_defect, r.affine_defect_at);
    res("lie_riemann", r.max_lie_riemann, r.lie_riemann_at);
    w.end_object();
    emit_strings(w, "warnings", r.warnings);
    w.end_object();
}

// ---------------------------------------------------------------------------
// verify-paper

std::string text_report(const VerificationReport& r) {
    std::ostringstream os;
    os << "closed_form: adopted "
       << (r.closed_form.adopted_ok ? "matches the generic curvature" : "MISMATCH") << " (max err "
       << fmt(r.closed_form.adopted_max_err) << "); published formulas "
       << (r.closed_form.published_ok ? "match" : "fail") << " (max err "
       << fmt(r.closed_form.published_max_err) << ")\n";
    for (const auto& c : r.closed_form.corrections) os << "correction: " << c << "\n";

    int total = 0;
    for (const auto& fr : r.fixtures) {
        os << "[" << to_string(fr.fixture) << "] rank " << fr.classification.rank.rank << ", class "
           << to_string(fr.classification.cls);
        if (!fr.case_match.matched.empty()) os << ", case " << join_ints(fr.case_match.matched);
        if (fr.case_match.is_static) os << ", static";
        os << "\n";
        for (const auto& ad : fr.advisories) os << "  advisory: " << ad << "\n";
        for (const auto& c : fr.claims) {
            os << "  " << verdict_line(c) << "\n";
            ++total;
        }
        for (const auto& wn : fr.warnings) os << "  warning: " << wn << "\n";
    }
    os << "summary: " << total << " claims, " << r.disagreements << " disagreement"
       << (r.disagreements == 1 ? "" : "s") << "\n";
    return os.str();
}

void emit_json(JsonWriter& w, const VerificationReport& r) {
    w.begin_object();
    w.kv("kind", "verify_paper");
    w.key("closed_form").begin_object();
    w.kv("adopted_ok", r.closed_form.adopted_ok);
    w.kv("published_ok", r.closed_form.published_ok);
    w.kv("adopted_max_err", r.closed_form.adopted_max_err);
    w.kv("published_max_err", r.closed_form.published_max_err);
    emit_strings(w, "corrections", r.closed_form.corrections);
    w.end_object();
    w.key("fixtures").begin_array();
    for (const auto& fr : r.fixtures) {
        w.begin_object();
        w.kv("fixture", to_string(fr.fixture));
        emit_rank(w, fr.classification.rank);
        w.kv("class", to_string(fr.classification.cls));
        w.kv("kernel_dim", fr.classification.kernel_dim);
        emit_case_match(w, fr.case_match);
        emit_strings(w, "advisories", fr.advisories);
        w.key("claims").begin_array();
        for (const auto& c : fr.claims) {
            w.begin_object();
            w.kv("id", c.id);
            w.kv("description", c.description);
            w.kv("agree", c.agree);
            w.kv("residual", c.residual);
            w.kv("detail", c.detail);
            w.end_object();
        }
        w.end_array();
        emit_strings(w, "warnings", fr.warnings);
        w.end_object();
    }
    w.end_array();
    w.kv("disagreements", r.disagreements);
    w.kv("all_agree", r.all_agree);
    w.end_object();
}

std::string json_document(const ToolOptions& opt,
                          const std::function<void(JsonWriter&)>& emit_analyses) {
    JsonWriter w;
    w.begin_object();
    w.kv("version", kToolVersion);
    w.kv("seed", static_cast<long long>(opt.seed));
    w.key("tolerances").begin_object();
    w.kv("zero", opt.tol);
    w.kv("rank", opt.rank_tol);
    w.kv("samples", opt.samples);
    w.end_object();
    w.key("analyses").begin_array();
    emit_analyses(w);
    w.end_array();
    w.end_object();
    std::string out = w.str();
    out += "\n";
    return out;
}

}  // namespace planesym

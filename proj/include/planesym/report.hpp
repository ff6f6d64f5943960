#pragma once

#include <functional>
#include <string>

#include "planesym/casebook.hpp"
#include "planesym/json_writer.hpp"

namespace planesym {

inline constexpr const char* kToolVersion = "0.1.0";

/// Global analysis knobs shared by every subcommand.
struct ToolOptions {
    int samples = 32;
    double tol = 1e-9;
    double rank_tol = 1e-10;
    std::uint64_t seed = 42;

    ZeroTestConfig zero() const { return ZeroTestConfig{samples, tol, seed}; }
    VerifyConfig verify() const { return VerifyConfig{zero(), rank_tol}; }
};

struct ClassifyAnalysis {
    std::string input;
    CaseMatch case_match;
    ClassificationResult classification;
    std::vector<std::string> kernel_axes;  ///< per kernel column: "t".."z" or "mixed"
};

struct ConditionAnalysis {
    std::string input;
    ConditionVector conditions;
    CaseMatch case_match;
};

struct RiemannAnalysis {
    std::string input;
    Point at;
    std::array<double, 5> alpha{};
    Matrix6d matrix = Matrix6d::Zero();
    int rank = 0;
};

struct CollineationAnalysis {
    std::string metric_input;
    std::string vector_input;
    std::string field;
    CollineationReport report;
};

std::string text_report(const ClassifyAnalysis& a);
std::string text_report(const ConditionAnalysis& a);
std::string text_report(const RiemannAnalysis& a);
std::string text_report(const CollineationAnalysis& a);
std::string text_report(const VerificationReport& r);

void emit_json(JsonWriter& w, const ClassifyAnalysis& a);
void emit_json(JsonWriter& w, const ConditionAnalysis& a);
void emit_json(JsonWriter& w, const RiemannAnalysis& a);
void emit_json(JsonWriter& w, const CollineationAnalysis& a);
void emit_json(JsonWriter& w, const VerificationReport& r);

/// Wraps analyses into the stable top-level document
/// {version, seed, tolerances, analyses:[...]}.
std::string json_document(const ToolOptions& opt,
                          const std::function<void(JsonWriter&)>& emit_analyses);

}  // namespace planesym

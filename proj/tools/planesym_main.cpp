// planesym: curvature classification and collineation checks for
// non-static plane symmetric metrics.
//
//   planesym classify <metric-file>
//   planesym case <metric-file>
//   planesym riemann <metric-file> --at t,x,y,z
//   planesym check <metric-file> --vector <vector-file>
//   planesym verify-paper
//
// Global flags: --samples N --tol e --rank-tol e --seed S --json <path>.
// Exit codes: 0 success; 1 a requested verification failed or a published
// claim was contradicted; 2 input or usage errors.

#include <CLI11.hpp>
#include <fstream>
#include <iostream>

#include "planesym/metric_file.hpp"
#include "planesym/report.hpp"

using namespace planesym;

namespace {

std::vector<std::string> kernel_axis_labels(const CurvatureData& cd,
                                            const ClassificationResult& cls, double rank_tol) {
    std::vector<std::string> out;
    if (cls.rank.samples == 0) return out;
    KernelBasis kb = kernel_Np(cd, cls.probe, rank_tol);
    for (int i = 0; i < kb.dim; ++i) {
        auto ax = kb.aligned_axis(i);
        out.push_back(ax ? coord_name(*ax) : "mixed");
    }
    return out;
}

void deliver(const ToolOptions& opt, const std::string& json_path, const std::string& text,
             const std::function<void(JsonWriter&)>& emit) {
    if (json_path.empty()) {
        std::cout << text;
        return;
    }
    std::ofstream out(json_path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write '" + json_path + "'");
    out << json_document(opt, emit);
}

Point parse_point(const std::string& spec) {
    std::array<double, 4> v{};
    std::size_t pos = 0;
    for (int i = 0; i < 4; ++i) {
        std::size_t next = i < 3 ? spec.find(',', pos) : spec.size();
        if (next == std::string::npos) throw CLI::ValidationError("--at expects t,x,y,z");
        try {
            v[i] = std::stod(spec.substr(pos, next - pos));
        } catch (...) {
            throw CLI::ValidationError("--at expects four numbers t,x,y,z");
        }
        pos = next + 1;
    }
    return Point{v[0], v[1], v[2], v[3]};
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"curvature classification and collineation checks for non-static plane "
                 "symmetric metrics"};
    app.require_subcommand(1);
    app.fallthrough();

    ToolOptions opt;
    std::string json_path;
    app.add_option("--samples", opt.samples, "zero-test sample count")->check(CLI::Range(8, 100000));
    app.add_option("--tol", opt.tol, "zero-test absolute tolerance");
    app.add_option("--rank-tol", opt.rank_tol, "relative singular-value threshold");
    app.add_option("--seed", opt.seed, "deterministic sampling seed");
    app.add_option("--json", json_path, "write the JSON report to this path instead of text");

    auto* classify_cmd = app.add_subcommand("classify", "rank, curvature class and case match");
    std::string classify_metric;
    classify_cmd->add_option("metric", classify_metric, "metric description file")->required();

    auto* case_cmd = app.add_subcommand("case", "condition vector and catalog match");
    std::string case_metric;
    case_cmd->add_option("metric", case_metric, "metric description file")->required();

    auto* riemann_cmd = app.add_subcommand("riemann", "6x6 curvature matrix at a point");
    std::string riemann_metric, at_spec;
    riemann_cmd->add_option("metric", riemann_metric, "metric description file")->required();
    riemann_cmd->add_option("--at", at_spec, "probe point t,x,y,z")->required();

    auto* check_cmd = app.add_subcommand("check", "collineation verdicts for a vector field");
    std::string check_metric, vector_path;
    check_cmd->add_option("metric", check_metric, "metric description file")->required();
    check_cmd->add_option("--vector", vector_path, "vector field description file")->required();

    auto* verify_cmd = app.add_subcommand("verify-paper", "run the built-in verification harness");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int rc = app.exit(e);
        return rc == 0 ? 0 : 2;
    }

    try {
        if (*classify_cmd) {
            PlaneSymmetricMetric M = parse_metric_file(classify_metric);
            CurvatureData cd(M);
            ClassifyAnalysis a;
            a.input = classify_metric;
            a.case_match = classify_case(M, opt.zero(), opt.rank_tol);
            a.classification = classify(cd, M.domain(), opt.zero(), opt.rank_tol);
            a.kernel_axes = kernel_axis_labels(cd, a.classification, opt.rank_tol);
            deliver(opt, json_path, text_report(a), [&](JsonWriter& w) { emit_json(w, a); });
            return 0;
        }
        if (*case_cmd) {
            PlaneSymmetricMetric M = parse_metric_file(case_metric);
            ConditionAnalysis a;
            a.input = case_metric;
            a.conditions = evaluate_conditions(M, opt.zero());
            a.case_match = classify_case(M, opt.zero(), opt.rank_tol);
            deliver(opt, json_path, text_report(a), [&](JsonWriter& w) { emit_json(w, a); });
            return 0;
        }
        if (*riemann_cmd) {
            PlaneSymmetricMetric M = parse_metric_file(riemann_metric);
            CurvatureData cd(M);
            RiemannAnalysis a;
            a.input = riemann_metric;
            a.at = parse_point(at_spec);
            RiemannMatrix rm = riemann_matrix_at(cd, a.at);
            a.matrix = rm.W;
            a.rank = rank_with_tol(rm, opt.rank_tol);
            RiemannComponents cf = riemann_closed_form(M);
            for (int i = 0; i < 5; ++i) a.alpha[i] = evaluate(cf.alpha(i + 1), a.at, M.params());
            deliver(opt, json_path, text_report(a), [&](JsonWriter& w) { emit_json(w, a); });
            return 0;
        }
        if (*check_cmd) {
            PlaneSymmetricMetric M = parse_metric_file(check_metric);
            CurvatureData cd(M);
            VectorField X = parse_vector_file(vector_path);
            CollineationAnalysis a;
            a.metric_input = check_metric;
            a.vector_input = vector_path;
            a.field = X.describe();
            a.report = analyze_collineation(cd, X, opt.zero());
            deliver(opt, json_path, text_report(a), [&](JsonWriter& w) { emit_json(w, a); });
            // the weakest property a candidate can verify is being a
            // collineation at all
            return a.report.is_cc ? 0 : 1;
        }
        if (*verify_cmd) {
            VerificationReport r = verify_paper(opt.verify());
            deliver(opt, json_path, text_report(r), [&](JsonWriter& w) { emit_json(w, r); });
            return r.all_agree ? 0 : 1;
        }
    } catch (const CLI::Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
    return 2;
}

#include "planesym/metric_file.hpp"

#include <fstream>
#include <optional>
#include <sstream>

namespace planesym {

FileFormatError::FileFormatError(const std::string& path, int line, const std::string& what)
    : std::runtime_error(path + ":" + std::to_string(line) + ": " + what), line_(line) {}

namespace {

std::string strip(const std::string& s) {
    std::size_t b = s.find_first_not_of(" \t\r\n");
    if (b == std::string::npos) return "";
    std::size_t e = s.find_last_not_of(" \t\r\n");
    return s.substr(b, e - b + 1);
}

std::string drop_comment(const std::string& s) {
    std::size_t h = s.find('#');
    return h == std::string::npos ? s : s.substr(0, h);
}

// splits "key = value"; returns false when there is no '='
bool split_assign(const std::string& line, std::string& key, std::string& value) {
    std::size_t eq = line.find('=');
    if (eq == std::string::npos) return false;
    key = strip(line.substr(0, eq));
    value = strip(line.substr(eq + 1));
    return true;
}

double parse_number(const std::string& s, const std::string& path, int lineno) {
    try {
        std::size_t used = 0;
        double v = std::stod(s, &used);
        if (strip(s.substr(used)).empty()) return v;
    } catch (...) {
    }
    throw FileFormatError(path, lineno, "expected a number, got '" + s + "'");
}

std::string read_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open '" + path + "'");
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

}  // namespace

PlaneSymmetricMetric parse_metric_text(const std::string& text, const std::string& path) {
    std::istringstream in(text);
    std::string raw;
    int lineno = 0;

    std::set<std::string> param_names;
    ParamBindings params;
    std::optional<Expr> A, B, C;
    Domain dom({1, 2}, {1, 2}, {-1, 1}, {-1, 1});

    while (std::getline(in, raw)) {
        ++lineno;
        std::string line = strip(drop_comment(raw));
        if (line.empty()) continue;

        std::string key, value;
        if (!split_assign(line, key, value))
            throw FileFormatError(path, lineno, "expected 'key = value'");

        std::istringstream ks(key);
        std::string head, arg;
        ks >> head >> arg;

        try {
            if (head == "param") {
                if (arg.empty()) throw FileFormatError(path, lineno, "param needs a name");
                if (coord_from_name(arg) || func_from_name(arg))
                    throw FileFormatError(path, lineno, "'" + arg + "' is reserved");
                param_names.insert(arg);
                params[arg] = parse_number(value, path, lineno);
            } else if (head == "domain") {
                auto c = coord_from_name(arg);
                if (!c) throw FileFormatError(path, lineno, "domain needs a coordinate t/x/y/z");
                std::string v = strip(value);
                if (v.size() < 5 || v.front() != '[' || v.back() != ']')
                    throw FileFormatError(path, lineno, "domain value must be [lo, hi]");
                std::string body = v.substr(1, v.size() - 2);
                std::size_t comma = body.find(',');
                if (comma == std::string::npos)
                    throw FileFormatError(path, lineno, "domain value must be [lo, hi]");
                double lo = parse_number(strip(body.substr(0, comma)), path, lineno);
                double hi = parse_number(strip(body.substr(comma + 1)), path, lineno);
                if (!(hi > lo)) throw FileFormatError(path, lineno, "empty domain interval");
                dom.set_interval(*c, {lo, hi});
            } else if (head == "exclude") {
                auto c = coord_from_name(arg);
                if (!c) throw FileFormatError(path, lineno, "exclude needs a coordinate t/x/y/z");
                dom.exclude(*c, parse_number(value, path, lineno));
            } else if (key == "A" || key == "B" || key == "C") {
                std::optional<Expr>& slot = key == "A" ? A : key == "B" ? B : C;
                if (slot) throw FileFormatError(path, lineno, key + " defined twice");
                slot = parse(value, param_names);
            } else {
                throw FileFormatError(path, lineno, "unknown key '" + key + "'");
            }
        } catch (const ParseError& pe) {
            throw FileFormatError(path, lineno, pe.what());
        }
    }

    for (auto [name, slot] : {std::pair<const char*, const std::optional<Expr>*>{"A", &A},
                              {"B", &B},
                              {"C", &C}})
        if (!slot->has_value())
            throw FileFormatError(path, lineno, std::string("missing definition of ") + name);

    try {
        return PlaneSymmetricMetric(*A, *B, *C, dom, params);
    } catch (const MetricError& me) {
        throw FileFormatError(path, lineno, me.what());
    }
}

PlaneSymmetricMetric parse_metric_file(const std::string& path) {
    return parse_metric_text(read_file(path), path);
}

VectorField parse_vector_text(const std::string& text, const std::string& path) {
    std::istringstream in(text);
    std::string raw;
    int lineno = 0;

    std::set<std::string> param_names;
    std::array<std::optional<Expr>, 4> comp;

    while (std::getline(in, raw)) {
        ++lineno;
        std::string line = strip(drop_comment(raw));
        if (line.empty()) continue;

        std::string key, value;
        if (!split_assign(line, key, value))
            throw FileFormatError(path, lineno, "expected 'key = value'");

        try {
            if (key.rfind("param", 0) == 0) {
                std::istringstream ks(key);
                std::string head, arg;
                ks >> head >> arg;
                if (arg.empty()) throw FileFormatError(path, lineno, "param needs a name");
                param_names.insert(arg);
                // vector files carry parameter declarations only for parsing;
                // numeric bindings come from the metric side
            } else if (key.size() == 2 && key[0] == 'X' && key[1] >= '0' && key[1] <= '3') {
                int i = key[1] - '0';
                if (comp[i]) throw FileFormatError(path, lineno, key + " defined twice");
                comp[i] = parse(value, param_names);
            } else {
                throw FileFormatError(path, lineno, "unknown key '" + key + "'");
            }
        } catch (const ParseError& pe) {
            throw FileFormatError(path, lineno, pe.what());
        }
    }

    VectorField X;
    for (int i = 0; i < 4; ++i) X.comp[i] = comp[i].value_or(constant(0));
    return X;
}

VectorField parse_vector_file(const std::string& path) {
    return parse_vector_text(read_file(path), path);
}

}  // namespace planesym

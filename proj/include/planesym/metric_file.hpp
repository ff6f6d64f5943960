#pragma once

#include <string>

#include "planesym/collineation.hpp"
#include "planesym/metric.hpp"

namespace planesym {

class FileFormatError : public std::runtime_error {
public:
    FileFormatError(const std::string& path, int line, const std::string& what);
    int line() const { return line_; }

private:
    int line_;
};

/// Line-oriented metric description:
///   param <name> = <number>
///   A = <expression in t, x and declared parameters>
///   B = ...
///   C = ...
///   domain <var> = [<lo>, <hi>]
///   exclude <var> = <number>
/// '#' starts a comment. A, B, C must each appear exactly once and
/// parameters must be declared before use. Unspecified domain intervals
/// default to t, x in [1, 2] and y, z in [-1, 1].
PlaneSymmetricMetric parse_metric_file(const std::string& path);

/// Vector field description: lines X0..X3 = <expression>; missing
/// components default to zero, repeats are rejected. Parameters may be
/// declared as in metric files.
VectorField parse_vector_file(const std::string& path);

// string-based entry points (used by the file parsers and the tests)
PlaneSymmetricMetric parse_metric_text(const std::string& text, const std::string& path_label);
VectorField parse_vector_text(const std::string& text, const std::string& path_label);

}  // namespace planesym

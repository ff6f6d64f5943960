#pragma once

#include <array>
#include <cstdint>
#include <vector>

#include "planesym/expr.hpp"

namespace planesym {

/// Closed real interval with positive length.
struct Interval {
    double lo = 1.0;
    double hi = 2.0;
    double length() const { return hi - lo; }
};

/// Hyperplane {coord == value} removed from a Domain to avoid singular loci.
struct ExcludedHyperplane {
    Coord coord = Coord::T;
    double value = 0.0;
};

/// Per-variable sampling box for t, x, y, z with optional excluded
/// hyperplanes of measure zero.
class Domain {
public:
    Domain();
    Domain(Interval t, Interval x, Interval y = {-1.0, 1.0}, Interval z = {-1.0, 1.0});

    const Interval& interval(Coord c) const { return box_[coord_index(c)]; }
    void set_interval(Coord c, Interval iv);
    void exclude(Coord c, double value);
    const std::vector<ExcludedHyperplane>& exclusions() const { return excluded_; }

    bool contains(const Point& p) const;

private:
    std::array<Interval, 4> box_;
    std::vector<ExcludedHyperplane> excluded_;
};

struct ZeroTestConfig {
    int samples = 32;         ///< N >= 8
    double eps_zero = 1e-9;   ///< absolute tolerance, scaled by (1 + local scale)
    std::uint64_t seed = 42;  ///< drives the deterministic sample plan

    void validate() const;
};

enum class TriState { Zero, NonZero, Undetermined };

const char* to_string(TriState s);

/// Deterministic stratified-jitter samples covering the domain; points
/// near excluded hyperplanes are re-drawn. Same seed, same plan.
std::vector<Point> sample_points(const Domain& dom, int count, std::uint64_t seed);

struct ZeroTestResult {
    TriState state = TriState::Undetermined;
    double max_abs = 0.0;  ///< largest |value| seen over the samples
    Point witness;         ///< point attaining max_abs (NonZero: first violation)
};

/// Simplification-first identical-vanishing test: literal zero after
/// simplify decides immediately; otherwise seeded samples must all stay
/// below eps_zero*(1 + local scale). Non-finite values or evaluation
/// errors yield Undetermined.
ZeroTestResult zero_test(const Expr& e, const Domain& dom, const ZeroTestConfig& cfg,
                         const ParamBindings& params = {});

inline TriState is_identically_zero(const Expr& e, const Domain& dom, const ZeroTestConfig& cfg,
                                    const ParamBindings& params = {}) {
    return zero_test(e, dom, cfg, params).state;
}

}  // namespace planesym

#include "planesym/zerotest.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <stdexcept>

namespace planesym {

Domain::Domain() : box_{Interval{1, 2}, Interval{1, 2}, Interval{-1, 1}, Interval{-1, 1}} {}

Domain::Domain(Interval t, Interval x, Interval y, Interval z) : box_{t, x, y, z} {
    for (const Interval& iv : box_)
        if (!(iv.length() > 0)) throw std::invalid_argument("domain interval must have positive length");
}

void Domain::set_interval(Coord c, Interval iv) {
    if (!(iv.length() > 0)) throw std::invalid_argument("domain interval must have positive length");
    box_[coord_index(c)] = iv;
}

void Domain::exclude(Coord c, double value) { excluded_.push_back({c, value}); }

bool Domain::contains(const Point& p) const {
    for (int i = 0; i < 4; ++i) {
        const Interval& iv = box_[i];
        double v = p[i];
        if (!(v >= iv.lo && v <= iv.hi)) return false;
    }
    for (const auto& ex : excluded_)
        if (p.coord(ex.coord) == ex.value) return false;
    return true;
}

void ZeroTestConfig::validate() const {
    if (samples < 8) throw std::invalid_argument("zero test needs at least 8 samples");
    if (!(eps_zero > 0)) throw std::invalid_argument("zero tolerance must be positive");
}

const char* to_string(TriState s) {
    switch (s) {
        case TriState::Zero: return "zero";
        case TriState::NonZero: return "nonzero";
        case TriState::Undetermined: return "undetermined";
    }
    return "?";
}

std::vector<Point> sample_points(const Domain& dom, int count, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> unit(0.0, 1.0);

    // one stratum permutation per axis gives latin-hypercube coverage
    std::array<std::vector<int>, 4> strata;
    for (auto& s : strata) {
        s.resize(count);
        for (int i = 0; i < count; ++i) s[i] = i;
        std::shuffle(s.begin(), s.end(), rng);
    }

    auto draw = [&](Coord c, int stratum) {
        const Interval& iv = dom.interval(c);
        double margin = 0.02 * iv.length();
        for (int attempt = 0; attempt < 64; ++attempt) {
            double u = (stratum + unit(rng)) / count;
            double v = iv.lo + u * iv.length();
            bool ok = true;
            for (const auto& ex : dom.exclusions())
                if (ex.coord == c && std::abs(v - ex.value) < margin) ok = false;
            if (ok) return v;
        }
        return iv.lo + 0.5 * iv.length();
    };

    std::vector<Point> pts;
    pts.reserve(count);
    for (int i = 0; i < count; ++i) {
        Point p;
        p.t = draw(Coord::T, strata[0][i]);
        p.x = draw(Coord::X, strata[1][i]);
        p.y = draw(Coord::Y, strata[2][i]);
        p.z = draw(Coord::Z, strata[3][i]);
        pts.push_back(p);
    }
    return pts;
}

ZeroTestResult zero_test(const Expr& e, const Domain& dom, const ZeroTestConfig& cfg,
                         const ParamBindings& params) {
    cfg.validate();
    ZeroTestResult res;

    Expr s = simplify(e);
    if (s.is_literal(0)) {
        res.state = TriState::Zero;
        return res;
    }

    // A sample that provably exceeds the threshold decides NonZero even if
    // other samples fail to evaluate; errors only block the Zero verdict.
    const std::vector<Point> pts = sample_points(dom, cfg.samples, cfg.seed);
    bool saw_error = false;
    Point error_at;
    for (const Point& p : pts) {
        ValueScale vs;
        try {
            vs = evaluate_with_scale(s, p, params);
        } catch (const EvalError&) {
            saw_error = true;
            error_at = p;
            continue;
        }
        if (!std::isfinite(vs.value) || !std::isfinite(vs.scale)) {
            saw_error = true;
            error_at = p;
            continue;
        }
        double mag = std::abs(vs.value);
        if (mag > res.max_abs) {
            res.max_abs = mag;
            res.witness = p;
        }
        if (mag > cfg.eps_zero * (1.0 + vs.scale)) {
            res.state = TriState::NonZero;
            res.max_abs = mag;
            res.witness = p;
            return res;
        }
    }
    if (saw_error) {
        res.state = TriState::Undetermined;
        res.witness = error_at;
    } else {
        res.state = TriState::Zero;
    }
    return res;
}

}  // namespace planesym

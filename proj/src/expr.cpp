#include "planesym/expr.hpp"

#include <algorithm>
#include <cassert>
#include <cctype>
#include <cmath>
#include <numeric>
#include <sstream>

namespace planesym {

namespace {

bool mul_ll(long long a, long long b, long long& out) {
    return !__builtin_mul_overflow(a, b, &out);
}
bool add_ll(long long a, long long b, long long& out) {
    return !__builtin_add_overflow(a, b, &out);
}

}  // namespace

// ---------------------------------------------------------------------------
// Rational

Rational::Rational(long long num, long long den) : num_(num), den_(den) {
    if (den_ == 0) throw std::invalid_argument("rational with zero denominator");
    if (den_ < 0) {
        num_ = -num_;
        den_ = -den_;
    }
    long long g = std::gcd(num_ < 0 ? -num_ : num_, den_);
    if (g > 1) {
        num_ /= g;
        den_ /= g;
    }
}

Rational Rational::negated() const { return Rational(-num_, den_); }

std::optional<Rational> Rational::add(const Rational& a, const Rational& b) {
    long long n1, n2, n, d;
    if (!mul_ll(a.num_, b.den_, n1)) return std::nullopt;
    if (!mul_ll(b.num_, a.den_, n2)) return std::nullopt;
    if (!add_ll(n1, n2, n)) return std::nullopt;
    if (!mul_ll(a.den_, b.den_, d)) return std::nullopt;
    return Rational(n, d);
}

std::optional<Rational> Rational::mul(const Rational& a, const Rational& b) {
    long long n, d;
    if (!mul_ll(a.num_, b.num_, n)) return std::nullopt;
    if (!mul_ll(a.den_, b.den_, d)) return std::nullopt;
    return Rational(n, d);
}

std::optional<Rational> Rational::reciprocal(const Rational& a) {
    if (a.num_ == 0) return std::nullopt;
    return Rational(a.den_, a.num_);
}

std::optional<Rational> Rational::pow_int(const Rational& a, long long n) {
    if (n == 0) return Rational(1);
    if (n < 0) {
        auto r = reciprocal(a);
        if (!r) return std::nullopt;
        return pow_int(*r, -n);
    }
    if (n > 62) return std::nullopt;
    Rational acc(1);
    for (long long i = 0; i < n; ++i) {
        auto m = mul(acc, a);
        if (!m) return std::nullopt;
        acc = *m;
    }
    return acc;
}

std::optional<Rational> Rational::exact_sqrt(const Rational& a) {
    if (a.num_ < 0) return std::nullopt;
    auto isqrt = [](long long v) -> std::optional<long long> {
        long long r = static_cast<long long>(std::llround(std::sqrt(static_cast<double>(v))));
        for (long long c = std::max(0LL, r - 2); c <= r + 2; ++c)
            if (c * c == v) return c;
        return std::nullopt;
    };
    auto n = isqrt(a.num_);
    auto d = isqrt(a.den_);
    if (!n || !d) return std::nullopt;
    return Rational(*n, *d);
}

std::string to_string(const Rational& q) {
    if (q.is_integer()) return std::to_string(q.num());
    return std::to_string(q.num()) + "/" + std::to_string(q.den());
}

// ---------------------------------------------------------------------------
// Expr node

struct ExprNode {
    ExprKind kind = ExprKind::Constant;
    Rational value;
    Coord variable = Coord::T;
    std::string param;
    UnaryFunc func = UnaryFunc::Exp;
    std::vector<Expr> kids;
    std::size_t hash = 0;
};

namespace {

std::size_t hash_combine(std::size_t seed, std::size_t v) {
    return seed ^ (v + 0x9e3779b97f4a7c15ULL + (seed << 6) + (seed >> 2));
}

std::size_t node_hash(const ExprNode& n) {
    std::size_t h = hash_combine(0xa5a5, static_cast<std::size_t>(n.kind));
    switch (n.kind) {
        case ExprKind::Constant:
            h = hash_combine(h, static_cast<std::size_t>(n.value.num()));
            h = hash_combine(h, static_cast<std::size_t>(n.value.den()));
            break;
        case ExprKind::Variable:
            h = hash_combine(h, static_cast<std::size_t>(n.variable));
            break;
        case ExprKind::Parameter:
            h = hash_combine(h, std::hash<std::string>{}(n.param));
            break;
        case ExprKind::Func:
            h = hash_combine(h, static_cast<std::size_t>(n.func));
            break;
        default:
            break;
    }
    for (const Expr& k : n.kids) h = hash_combine(h, k.hash());
    return h;
}

std::shared_ptr<const ExprNode> finish(ExprNode n) {
    n.hash = node_hash(n);
    return std::make_shared<const ExprNode>(std::move(n));
}

const std::shared_ptr<const ExprNode>& zero_node() {
    static const std::shared_ptr<const ExprNode> z = [] {
        ExprNode n;
        n.kind = ExprKind::Constant;
        n.value = Rational(0);
        return finish(std::move(n));
    }();
    return z;
}

}  // namespace

Expr::Expr() : node_(zero_node()) {}
Expr::Expr(std::shared_ptr<const ExprNode> node) : node_(std::move(node)) {}

ExprKind Expr::kind() const { return node_->kind; }
const Rational& Expr::constant_value() const { return node_->value; }
Coord Expr::variable() const { return node_->variable; }
const std::string& Expr::parameter() const { return node_->param; }
UnaryFunc Expr::func() const { return node_->func; }
const std::vector<Expr>& Expr::children() const { return node_->kids; }
std::size_t Expr::hash() const { return node_->hash; }

bool Expr::is_literal(long long n) const {
    return kind() == ExprKind::Constant && constant_value().is(n);
}

Expr Expr::make_constant(Rational v) {
    ExprNode n;
    n.kind = ExprKind::Constant;
    n.value = v;
    return Expr(finish(std::move(n)));
}
Expr Expr::make_variable(Coord v) {
    ExprNode n;
    n.kind = ExprKind::Variable;
    n.variable = v;
    return Expr(finish(std::move(n)));
}
Expr Expr::make_parameter(std::string name) {
    ExprNode n;
    n.kind = ExprKind::Parameter;
    n.param = std::move(name);
    return Expr(finish(std::move(n)));
}
Expr Expr::make_sum(std::vector<Expr> terms) {
    ExprNode n;
    n.kind = ExprKind::Sum;
    n.kids = std::move(terms);
    return Expr(finish(std::move(n)));
}
Expr Expr::make_product(std::vector<Expr> factors) {
    ExprNode n;
    n.kind = ExprKind::Product;
    n.kids = std::move(factors);
    return Expr(finish(std::move(n)));
}
Expr Expr::make_quotient(Expr num, Expr den) {
    ExprNode n;
    n.kind = ExprKind::Quotient;
    n.kids = {std::move(num), std::move(den)};
    return Expr(finish(std::move(n)));
}
Expr Expr::make_negate(Expr inner) {
    ExprNode n;
    n.kind = ExprKind::Negate;
    n.kids = {std::move(inner)};
    return Expr(finish(std::move(n)));
}
Expr Expr::make_power(Expr base, Expr exponent) {
    ExprNode n;
    n.kind = ExprKind::Power;
    n.kids = {std::move(base), std::move(exponent)};
    return Expr(finish(std::move(n)));
}
Expr Expr::make_func(UnaryFunc f, Expr arg) {
    ExprNode n;
    n.kind = ExprKind::Func;
    n.func = f;
    n.kids = {std::move(arg)};
    return Expr(finish(std::move(n)));
}

bool structurally_equal(const Expr& a, const Expr& b) {
    if (a.hash() != b.hash()) return false;
    if (a.kind() != b.kind()) return false;
    switch (a.kind()) {
        case ExprKind::Constant:
            return a.constant_value() == b.constant_value();
        case ExprKind::Variable:
            return a.variable() == b.variable();
        case ExprKind::Parameter:
            return a.parameter() == b.parameter();
        case ExprKind::Func:
            if (a.func() != b.func()) return false;
            break;
        default:
            break;
    }
    const auto& ka = a.children();
    const auto& kb = b.children();
    if (ka.size() != kb.size()) return false;
    for (std::size_t i = 0; i < ka.size(); ++i)
        if (!structurally_equal(ka[i], kb[i])) return false;
    return true;
}

// ---------------------------------------------------------------------------
// Names

const char* coord_name(Coord c) {
    switch (c) {
        case Coord::T: return "t";
        case Coord::X: return "x";
        case Coord::Y: return "y";
        case Coord::Z: return "z";
    }
    return "?";
}

std::optional<Coord> coord_from_name(std::string_view name) {
    if (name == "t") return Coord::T;
    if (name == "x") return Coord::X;
    if (name == "y") return Coord::Y;
    if (name == "z") return Coord::Z;
    return std::nullopt;
}

const char* func_name(UnaryFunc f) {
    switch (f) {
        case UnaryFunc::Exp: return "exp";
        case UnaryFunc::Ln: return "ln";
        case UnaryFunc::Sqrt: return "sqrt";
        case UnaryFunc::Sin: return "sin";
        case UnaryFunc::Cos: return "cos";
        case UnaryFunc::Sinh: return "sinh";
        case UnaryFunc::Cosh: return "cosh";
    }
    return "?";
}

std::optional<UnaryFunc> func_from_name(std::string_view name) {
    if (name == "exp") return UnaryFunc::Exp;
    if (name == "ln") return UnaryFunc::Ln;
    if (name == "sqrt") return UnaryFunc::Sqrt;
    if (name == "sin") return UnaryFunc::Sin;
    if (name == "cos") return UnaryFunc::Cos;
    if (name == "sinh") return UnaryFunc::Sinh;
    if (name == "cosh") return UnaryFunc::Cosh;
    return std::nullopt;
}

// ---------------------------------------------------------------------------
// Simplifying builders

Expr constant(long long n) { return Expr::make_constant(Rational(n)); }
Expr constant(Rational q) { return Expr::make_constant(q); }
Expr var(Coord c) { return Expr::make_variable(c); }
Expr parameter(std::string name) { return Expr::make_parameter(std::move(name)); }

namespace {

// Total order on expressions used to canonicalize commutative operands,
// so that t*x and x*t collect into the same term.
int compare_exprs(const Expr& a, const Expr& b) {
    auto rank = [](ExprKind k) {
        switch (k) {
            case ExprKind::Constant: return 0;
            case ExprKind::Variable: return 1;
            case ExprKind::Parameter: return 2;
            case ExprKind::Func: return 3;
            case ExprKind::Power: return 4;
            case ExprKind::Product: return 5;
            case ExprKind::Quotient: return 6;
            case ExprKind::Negate: return 7;
            case ExprKind::Sum: return 8;
        }
        return 9;
    };
    if (rank(a.kind()) != rank(b.kind())) return rank(a.kind()) < rank(b.kind()) ? -1 : 1;
    switch (a.kind()) {
        case ExprKind::Constant: {
            const auto &qa = a.constant_value(), &qb = b.constant_value();
            if (qa.num() != qb.num()) return qa.num() < qb.num() ? -1 : 1;
            if (qa.den() != qb.den()) return qa.den() < qb.den() ? -1 : 1;
            return 0;
        }
        case ExprKind::Variable:
            if (a.variable() != b.variable()) return a.variable() < b.variable() ? -1 : 1;
            return 0;
        case ExprKind::Parameter:
            return a.parameter().compare(b.parameter());
        case ExprKind::Func:
            if (a.func() != b.func()) return a.func() < b.func() ? -1 : 1;
            break;
        default:
            break;
    }
    const auto& ka = a.children();
    const auto& kb = b.children();
    if (ka.size() != kb.size()) return ka.size() < kb.size() ? -1 : 1;
    for (std::size_t i = 0; i < ka.size(); ++i)
        if (int c = compare_exprs(ka[i], kb[i])) return c;
    return 0;
}

bool expr_less(const Expr& a, const Expr& b) { return compare_exprs(a, b) < 0; }

// Splits a simplified term into (rational coefficient, core expression).
// The core of a pure constant is the literal 1.
std::pair<Rational, Expr> split_coefficient(const Expr& term) {
    if (term.kind() == ExprKind::Constant) return {term.constant_value(), constant(1)};
    if (term.kind() == ExprKind::Product && !term.children().empty() &&
        term.children().front().kind() == ExprKind::Constant) {
        const auto& kids = term.children();
        Rational c = kids.front().constant_value();
        if (kids.size() == 2) return {c, kids[1]};
        std::vector<Expr> rest(kids.begin() + 1, kids.end());
        return {c, Expr::make_product(std::move(rest))};
    }
    return {Rational(1), term};
}

Expr rescale(const Rational& coeff, const Expr& core) {
    if (coeff.is_zero()) return constant(0);
    if (core.is_literal(1)) return constant(coeff);
    if (coeff.is(1)) return core;
    if (core.kind() == ExprKind::Product) {
        std::vector<Expr> kids;
        kids.reserve(core.children().size() + 1);
        kids.push_back(constant(coeff));
        for (const Expr& k : core.children()) kids.push_back(k);
        return Expr::make_product(std::move(kids));
    }
    return Expr::make_product({constant(coeff), core});
}

}  // namespace

Expr sum(std::vector<Expr> terms) {
    std::vector<Expr> flat;
    flat.reserve(terms.size());
    for (Expr& t : terms) {
        if (t.kind() == ExprKind::Sum)
            for (const Expr& k : t.children()) flat.push_back(k);
        else
            flat.push_back(std::move(t));
    }

    // Collect like terms by structural key, preserving first-appearance
    // order so that rebuilds are deterministic.
    std::vector<std::pair<Expr, Rational>> collected;
    std::unordered_map<Expr, std::size_t, ExprHash, ExprEq> index;
    for (const Expr& t : flat) {
        if (t.is_literal(0)) continue;
        auto [coeff, core] = split_coefficient(t);
        auto it = index.find(core);
        if (it == index.end()) {
            index.emplace(core, collected.size());
            collected.emplace_back(core, coeff);
        } else {
            auto s = Rational::add(collected[it->second].second, coeff);
            if (s) {
                collected[it->second].second = *s;
            } else {
                // overflow: keep as an independent term
                collected.emplace_back(core, coeff);
            }
        }
    }

    std::stable_sort(collected.begin(), collected.end(),
                     [](const auto& a, const auto& b) { return expr_less(a.first, b.first); });

    std::vector<Expr> out;
    out.reserve(collected.size());
    for (const auto& [core, coeff] : collected) {
        if (coeff.is_zero()) continue;
        out.push_back(rescale(coeff, core));
    }
    if (out.empty()) return constant(0);
    if (out.size() == 1) return out.front();
    return Expr::make_sum(std::move(out));
}

Expr product(std::vector<Expr> factors) {
    std::vector<Expr> flat;
    flat.reserve(factors.size());
    for (Expr& f : factors) {
        if (f.kind() == ExprKind::Product)
            for (const Expr& k : f.children()) flat.push_back(k);
        else if (f.kind() == ExprKind::Negate) {
            flat.push_back(constant(-1));
            flat.push_back(f.children().front());
        } else
            flat.push_back(std::move(f));
    }

    Rational coeff(1);
    std::vector<std::pair<Expr, Rational>> bases;  // base -> accumulated exponent
    std::unordered_map<Expr, std::size_t, ExprHash, ExprEq> index;
    auto add_base = [&](const Expr& base, const Rational& expo) {
        auto it = index.find(base);
        if (it == index.end()) {
            index.emplace(base, bases.size());
            bases.emplace_back(base, expo);
        } else {
            auto s = Rational::add(bases[it->second].second, expo);
            if (s)
                bases[it->second].second = *s;
            else
                bases.emplace_back(base, expo);
        }
    };

    for (const Expr& f : flat) {
        if (f.kind() == ExprKind::Constant) {
            auto m = Rational::mul(coeff, f.constant_value());
            if (m) {
                coeff = *m;
            } else {
                add_base(f, Rational(1));
            }
            continue;
        }
        if (f.kind() == ExprKind::Power && f.children()[1].kind() == ExprKind::Constant) {
            add_base(f.children()[0], f.children()[1].constant_value());
            continue;
        }
        add_base(f, Rational(1));
    }

    if (coeff.is_zero()) return constant(0);

    std::stable_sort(bases.begin(), bases.end(),
                     [](const auto& a, const auto& b) { return expr_less(a.first, b.first); });

    std::vector<Expr> out;
    for (const auto& [base, expo] : bases) {
        if (expo.is_zero()) continue;
        if (expo.is(1)) {
            out.push_back(base);
            continue;
        }
        Expr p = power(base, constant(expo));
        // power() may have folded into a constant or redistributed
        if (p.kind() == ExprKind::Constant) {
            auto m = Rational::mul(coeff, p.constant_value());
            if (m) {
                coeff = *m;
                continue;
            }
        }
        out.push_back(std::move(p));
    }

    if (out.empty()) return constant(coeff);
    if (!coeff.is(1)) {
        std::vector<Expr> withc;
        withc.reserve(out.size() + 1);
        withc.push_back(constant(coeff));
        for (Expr& e : out) withc.push_back(std::move(e));
        return Expr::make_product(std::move(withc));
    }
    if (out.size() == 1) return out.front();
    return Expr::make_product(std::move(out));
}

Expr quotient(Expr num, Expr den) {
    if (num.is_literal(0)) return constant(0);
    if (den.is_literal(1)) return num;
    if (den.kind() == ExprKind::Constant) {
        auto r = Rational::reciprocal(den.constant_value());
        if (r) return product({constant(*r), std::move(num)});
        return Expr::make_quotient(std::move(num), std::move(den));  // literal /0: error at evaluation
    }
    return product({std::move(num), power(std::move(den), constant(-1))});
}

Expr negate(Expr e) { return product({constant(-1), std::move(e)}); }

Expr power(Expr base, Expr exponent) {
    if (exponent.kind() != ExprKind::Constant) {
        // symbolic exponent: single differentiation rule via exp/ln
        return apply(UnaryFunc::Exp, product({std::move(exponent), apply(UnaryFunc::Ln, std::move(base))}));
    }
    const Rational q = exponent.constant_value();
    if (q.is_zero()) return constant(1);
    if (q.is(1)) return base;

    if (base.kind() == ExprKind::Constant) {
        if (q.is_integer() && !(base.constant_value().is_zero() && q.num() < 0)) {
            auto f = Rational::pow_int(base.constant_value(), q.num());
            if (f) return constant(*f);
        }
        return Expr::make_power(std::move(base), constant(q));
    }
    if (q.is_integer()) {
        if (base.kind() == ExprKind::Product) {
            std::vector<Expr> kids;
            kids.reserve(base.children().size());
            for (const Expr& k : base.children()) kids.push_back(power(k, constant(q)));
            return product(std::move(kids));
        }
        if (base.kind() == ExprKind::Quotient) {
            return quotient(power(base.children()[0], constant(q)), power(base.children()[1], constant(q)));
        }
        if (base.kind() == ExprKind::Negate) {
            Expr inner = power(base.children()[0], constant(q));
            return (q.num() % 2 == 0) ? inner : negate(std::move(inner));
        }
        if (base.kind() == ExprKind::Power && base.children()[1].kind() == ExprKind::Constant) {
            auto m = Rational::mul(base.children()[1].constant_value(), q);
            if (m) return power(base.children()[0], constant(*m));
        }
    }
    return Expr::make_power(std::move(base), constant(q));
}

Expr apply(UnaryFunc f, Expr arg) {
    if (arg.kind() == ExprKind::Constant) {
        const Rational& q = arg.constant_value();
        switch (f) {
            case UnaryFunc::Exp:
                if (q.is_zero()) return constant(1);
                break;
            case UnaryFunc::Ln:
                if (q.is(1)) return constant(0);
                break;
            case UnaryFunc::Sqrt: {
                auto r = Rational::exact_sqrt(q);
                if (r) return constant(*r);
                break;
            }
            case UnaryFunc::Sin:
            case UnaryFunc::Sinh:
                if (q.is_zero()) return constant(0);
                break;
            case UnaryFunc::Cos:
            case UnaryFunc::Cosh:
                if (q.is_zero()) return constant(1);
                break;
        }
    }
    // ln(exp(u)) = u holds for all real u
    if (f == UnaryFunc::Ln && arg.kind() == ExprKind::Func && arg.func() == UnaryFunc::Exp)
        return arg.children().front();
    // exp(ln(u)) = u wherever the left side is defined; the rewrite only
    // extends the domain
    if (f == UnaryFunc::Exp && arg.kind() == ExprKind::Func && arg.func() == UnaryFunc::Ln)
        return arg.children().front();
    return Expr::make_func(f, std::move(arg));
}

Expr simplify(const Expr& e) {
    switch (e.kind()) {
        case ExprKind::Constant:
        case ExprKind::Variable:
        case ExprKind::Parameter:
            return e;
        case ExprKind::Sum: {
            std::vector<Expr> kids;
            kids.reserve(e.children().size());
            for (const Expr& k : e.children()) kids.push_back(simplify(k));
            return sum(std::move(kids));
        }
        case ExprKind::Product: {
            std::vector<Expr> kids;
            kids.reserve(e.children().size());
            for (const Expr& k : e.children()) kids.push_back(simplify(k));
            return product(std::move(kids));
        }
        case ExprKind::Quotient:
            return quotient(simplify(e.children()[0]), simplify(e.children()[1]));
        case ExprKind::Negate:
            return negate(simplify(e.children()[0]));
        case ExprKind::Power:
            return power(simplify(e.children()[0]), simplify(e.children()[1]));
        case ExprKind::Func:
            return apply(e.func(), simplify(e.children()[0]));
    }
    return e;
}

// ---------------------------------------------------------------------------
// Differentiation

namespace {

Expr diff_simplified(const Expr& e, Coord v) {
    switch (e.kind()) {
        case ExprKind::Constant:
        case ExprKind::Parameter:
            return constant(0);
        case ExprKind::Variable:
            return constant(e.variable() == v ? 1 : 0);
        case ExprKind::Sum: {
            std::vector<Expr> kids;
            kids.reserve(e.children().size());
            for (const Expr& k : e.children()) kids.push_back(diff_simplified(k, v));
            return sum(std::move(kids));
        }
        case ExprKind::Product: {
            const auto& kids = e.children();
            std::vector<Expr> terms;
            terms.reserve(kids.size());
            for (std::size_t i = 0; i < kids.size(); ++i) {
                std::vector<Expr> factors;
                factors.reserve(kids.size());
                for (std::size_t j = 0; j < kids.size(); ++j)
                    factors.push_back(i == j ? diff_simplified(kids[j], v) : kids[j]);
                terms.push_back(product(std::move(factors)));
            }
            return sum(std::move(terms));
        }
        case ExprKind::Power: {
            // simplified trees only carry constant rational exponents
            const Expr& base = e.children()[0];
            const Rational q = e.children()[1].constant_value();
            Rational qm1 = *Rational::add(q, Rational(-1));
            return product({constant(q), power(base, constant(qm1)), diff_simplified(base, v)});
        }
        case ExprKind::Func: {
            const Expr& u = e.children()[0];
            Expr du = diff_simplified(u, v);
            switch (e.func()) {
                case UnaryFunc::Exp: return product({e, std::move(du)});
                case UnaryFunc::Ln: return quotient(std::move(du), u);
                case UnaryFunc::Sqrt:
                    return quotient(std::move(du), product({constant(2), apply(UnaryFunc::Sqrt, u)}));
                case UnaryFunc::Sin: return product({apply(UnaryFunc::Cos, u), std::move(du)});
                case UnaryFunc::Cos: return negate(product({apply(UnaryFunc::Sin, u), std::move(du)}));
                case UnaryFunc::Sinh: return product({apply(UnaryFunc::Cosh, u), std::move(du)});
                case UnaryFunc::Cosh: return product({apply(UnaryFunc::Sinh, u), std::move(du)});
            }
            break;
        }
        case ExprKind::Quotient:
        case ExprKind::Negate:
            break;  // eliminated by simplify
    }
    throw std::logic_error("diff_simplified: unexpected node kind");
}

}  // namespace

Expr differentiate(const Expr& e, Coord v) { return diff_simplified(simplify(e), v); }

// ---------------------------------------------------------------------------
// Evaluation

EvalError::EvalError(Kind kind, const std::string& what) : std::runtime_error(what), kind_(kind) {}

double Point::coord(Coord c) const {
    switch (c) {
        case Coord::T: return t;
        case Coord::X: return x;
        case Coord::Y: return y;
        case Coord::Z: return z;
    }
    return 0;
}

std::string to_string(const Point& p) {
    std::ostringstream os;
    os << "(" << p.t << ", " << p.x << ", " << p.y << ", " << p.z << ")";
    return os.str();
}

namespace {

double pow_ll(double base, long long n) {
    if (n < 0) {
        if (base == 0.0) throw EvalError(EvalError::Kind::DivideByZero, "zero base with negative exponent");
        return 1.0 / pow_ll(base, -n);
    }
    double acc = 1.0, b = base;
    while (n > 0) {
        if (n & 1) acc *= b;
        b *= b;
        n >>= 1;
    }
    return acc;
}

double eval_rec(const Expr& e, const Point& p, const ParamBindings& params) {
    switch (e.kind()) {
        case ExprKind::Constant:
            return e.constant_value().to_double();
        case ExprKind::Variable:
            return p.coord(e.variable());
        case ExprKind::Parameter: {
            auto it = params.find(e.parameter());
            if (it == params.end())
                throw EvalError(EvalError::Kind::UnboundParameter, "unbound parameter '" + e.parameter() + "'");
            return it->second;
        }
        case ExprKind::Sum: {
            double s = 0;
            for (const Expr& k : e.children()) s += eval_rec(k, p, params);
            return s;
        }
        case ExprKind::Product: {
            double s = 1;
            for (const Expr& k : e.children()) s *= eval_rec(k, p, params);
            return s;
        }
        case ExprKind::Quotient: {
            double n = eval_rec(e.children()[0], p, params);
            double d = eval_rec(e.children()[1], p, params);
            if (d == 0.0) throw EvalError(EvalError::Kind::DivideByZero, "division by zero");
            return n / d;
        }
        case ExprKind::Negate:
            return -eval_rec(e.children()[0], p, params);
        case ExprKind::Power: {
            double b = eval_rec(e.children()[0], p, params);
            const Expr& ex = e.children()[1];
            // structurally integral exponents (also through a raw Negate)
            // take the repeated-squaring path so that a printed and
            // re-parsed tree evaluates bit-identically
            if (ex.kind() == ExprKind::Constant && ex.constant_value().is_integer())
                return pow_ll(b, ex.constant_value().num());
            if (ex.kind() == ExprKind::Negate && ex.children()[0].kind() == ExprKind::Constant &&
                ex.children()[0].constant_value().is_integer())
                return pow_ll(b, -ex.children()[0].constant_value().num());
            double w = eval_rec(ex, p, params);
            if (b < 0.0 && std::nearbyint(w) != w)
                throw EvalError(EvalError::Kind::DomainError, "negative base with non-integer exponent");
            if (b == 0.0 && w < 0.0)
                throw EvalError(EvalError::Kind::DivideByZero, "zero base with negative exponent");
            return std::pow(b, w);
        }
        case ExprKind::Func: {
            double u = eval_rec(e.children()[0], p, params);
            switch (e.func()) {
                case UnaryFunc::Exp: return std::exp(u);
                case UnaryFunc::Ln:
                    if (u <= 0.0) throw EvalError(EvalError::Kind::DomainError, "ln of non-positive argument");
                    return std::log(u);
                case UnaryFunc::Sqrt:
                    if (u < 0.0) throw EvalError(EvalError::Kind::DomainError, "sqrt of negative argument");
                    return std::sqrt(u);
                case UnaryFunc::Sin: return std::sin(u);
                case UnaryFunc::Cos: return std::cos(u);
                case UnaryFunc::Sinh: return std::sinh(u);
                case UnaryFunc::Cosh: return std::cosh(u);
            }
            break;
        }
    }
    throw std::logic_error("eval: unexpected node kind");
}

ValueScale eval_scale_rec(const Expr& e, const Point& p, const ParamBindings& params) {
    auto mag = [](double v) { return std::abs(v); };
    switch (e.kind()) {
        case ExprKind::Constant:
        case ExprKind::Variable:
        case ExprKind::Parameter: {
            double v = eval_rec(e, p, params);
            return {v, mag(v)};
        }
        case ExprKind::Sum: {
            double v = 0, s = 0;
            for (const Expr& k : e.children()) {
                auto [kv, ks] = eval_scale_rec(k, p, params);
                v += kv;
                s += ks;
            }
            return {v, s};
        }
        case ExprKind::Product: {
            double v = 1, s = 1;
            for (const Expr& k : e.children()) {
                auto [kv, ks] = eval_scale_rec(k, p, params);
                v *= kv;
                s *= ks;
            }
            return {v, s};
        }
        case ExprKind::Quotient: {
            auto n = eval_scale_rec(e.children()[0], p, params);
            auto d = eval_scale_rec(e.children()[1], p, params);
            if (d.value == 0.0) throw EvalError(EvalError::Kind::DivideByZero, "division by zero");
            return {n.value / d.value, n.scale / mag(d.value)};
        }
        case ExprKind::Negate: {
            auto u = eval_scale_rec(e.children()[0], p, params);
            return {-u.value, u.scale};
        }
        case ExprKind::Power: {
            auto b = eval_scale_rec(e.children()[0], p, params);
            const Expr& ex = e.children()[1];
            double v = eval_rec(e, p, params);
            double q = ex.kind() == ExprKind::Constant ? std::abs(ex.constant_value().to_double())
                                                       : std::abs(eval_rec(ex, p, params));
            double rel = b.value != 0.0 ? std::max(1.0, b.scale / mag(b.value)) : 1.0;
            double s = mag(v) * std::pow(rel, std::min(q, 8.0));
            return {v, std::isfinite(s) ? s : mag(v)};
        }
        case ExprKind::Func: {
            auto u = eval_scale_rec(e.children()[0], p, params);
            double v = eval_rec(e, p, params);
            double s = mag(v);
            switch (e.func()) {
                case UnaryFunc::Exp:
                    s = std::exp(std::min(u.scale, 700.0));
                    break;
                case UnaryFunc::Ln:
                    s = mag(v) + (u.value != 0.0 ? u.scale / mag(u.value) : 0.0);
                    break;
                case UnaryFunc::Sqrt:
                    s = std::sqrt(u.scale);
                    break;
                case UnaryFunc::Sin:
                case UnaryFunc::Cos:
                    s = std::min(u.scale, 1.0) + mag(v);
                    break;
                case UnaryFunc::Sinh:
                case UnaryFunc::Cosh:
                    s = std::cosh(std::min(u.scale, 700.0));
                    break;
            }
            return {v, std::isfinite(s) ? s : mag(v)};
        }
    }
    throw std::logic_error("eval_scale: unexpected node kind");
}

}  // namespace

double evaluate(const Expr& e, const Point& p, const ParamBindings& params) {
    return eval_rec(e, p, params);
}

ValueScale evaluate_with_scale(const Expr& e, const Point& p, const ParamBindings& params) {
    return eval_scale_rec(e, p, params);
}

void collect_symbols(const Expr& e, std::set<Coord>& vars, std::set<std::string>& params) {
    switch (e.kind()) {
        case ExprKind::Variable:
            vars.insert(e.variable());
            return;
        case ExprKind::Parameter:
            params.insert(e.parameter());
            return;
        default:
            for (const Expr& k : e.children()) collect_symbols(k, vars, params);
    }
}

bool depends_on(const Expr& e, Coord v) {
    std::set<Coord> vars;
    std::set<std::string> params;
    collect_symbols(e, vars, params);
    return vars.count(v) > 0;
}

// ---------------------------------------------------------------------------
// Parser

ParseError::ParseError(std::size_t offset, const std::string& what)
    : std::runtime_error(what + " at offset " + std::to_string(offset)), offset_(offset) {}

namespace {

class Parser {
public:
    Parser(std::string_view text, const std::set<std::string>& params) : text_(text), params_(params) {}

    Expr run() {
        Expr e = parse_expr();
        skip_ws();
        if (pos_ != text_.size()) fail("unexpected trailing input");
        return e;
    }

private:
    std::string_view text_;
    const std::set<std::string>& params_;
    std::size_t pos_ = 0;

    [[noreturn]] void fail(const std::string& msg) { throw ParseError(pos_, "syntax error: " + msg); }

    void skip_ws() {
        while (pos_ < text_.size()) {
            char c = text_[pos_];
            if (c == '#') {  // comment to end of line
                while (pos_ < text_.size() && text_[pos_] != '\n') ++pos_;
            } else if (std::isspace(static_cast<unsigned char>(c))) {
                ++pos_;
            } else {
                break;
            }
        }
    }

    bool peek_is(char c) {
        skip_ws();
        return pos_ < text_.size() && text_[pos_] == c;
    }

    bool accept(char c) {
        if (peek_is(c)) {
            ++pos_;
            return true;
        }
        return false;
    }

    void expect(char c) {
        if (!accept(c)) fail(std::string("expected '") + c + "'");
    }

    // expr := term (("+"|"-") term)*
    Expr parse_expr() {
        std::vector<Expr> terms;
        terms.push_back(parse_term());
        for (;;) {
            if (accept('+'))
                terms.push_back(parse_term());
            else if (accept('-'))
                terms.push_back(Expr::make_negate(parse_term()));
            else
                break;
        }
        if (terms.size() == 1) return terms.front();
        return Expr::make_sum(std::move(terms));
    }

    // term := unary (("*"|"/") unary)*
    // consecutive '*' factors collect into one n-ary product; '/' folds left
    Expr parse_term() {
        Expr acc = parse_unary();
        bool acc_is_run = false;  // acc is a product run we may extend
        for (;;) {
            if (accept('*')) {
                Expr rhs = parse_unary();
                if (acc_is_run) {
                    std::vector<Expr> kids = acc.children();
                    kids.push_back(std::move(rhs));
                    acc = Expr::make_product(std::move(kids));
                } else {
                    acc = Expr::make_product({std::move(acc), std::move(rhs)});
                    acc_is_run = true;
                }
            } else if (accept('/')) {
                Expr rhs = parse_unary();
                acc = Expr::make_quotient(std::move(acc), std::move(rhs));
                acc_is_run = false;
            } else {
                break;
            }
        }
        return acc;
    }

    // unary := "-" unary | pow
    Expr parse_unary() {
        if (accept('-')) return Expr::make_negate(parse_unary());
        return parse_pow();
    }

    // pow := atom ("^" unary)?
    Expr parse_pow() {
        Expr base = parse_atom();
        if (accept('^')) {
            Expr expo = parse_unary();
            return Expr::make_power(std::move(base), std::move(expo));
        }
        return base;
    }

    Expr parse_atom() {
        skip_ws();
        if (pos_ >= text_.size()) fail("unexpected end of input");
        char c = text_[pos_];
        if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') return parse_number();
        if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') return parse_ident();
        if (c == '(') {
            ++pos_;
            Expr e = parse_expr();
            expect(')');
            return e;
        }
        fail("expected number, identifier or '('");
    }

    Expr parse_number() {
        std::size_t start = pos_;
        long long int_part = 0, frac_part = 0;
        long long frac_scale = 1;
        bool any = false;
        while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) {
            if (__builtin_mul_overflow(int_part, 10LL, &int_part) ||
                __builtin_add_overflow(int_part, static_cast<long long>(text_[pos_] - '0'), &int_part))
                throw ParseError(start, "number too large");
            ++pos_;
            any = true;
        }
        if (pos_ < text_.size() && text_[pos_] == '.') {
            ++pos_;
            while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) {
                if (__builtin_mul_overflow(frac_part, 10LL, &frac_part) ||
                    __builtin_add_overflow(frac_part, static_cast<long long>(text_[pos_] - '0'), &frac_part) ||
                    __builtin_mul_overflow(frac_scale, 10LL, &frac_scale))
                    throw ParseError(start, "number too large");
                ++pos_;
                any = true;
            }
        }
        if (!any) throw ParseError(start, "syntax error: malformed number");
        long long num;
        if (__builtin_mul_overflow(int_part, frac_scale, &num) || __builtin_add_overflow(num, frac_part, &num))
            throw ParseError(start, "number too large");
        return Expr::make_constant(Rational(num, frac_scale));
    }

    Expr parse_ident() {
        std::size_t start = pos_;
        while (pos_ < text_.size() &&
               (std::isalnum(static_cast<unsigned char>(text_[pos_])) || text_[pos_] == '_'))
            ++pos_;
        std::string name(text_.substr(start, pos_ - start));
        if (auto f = func_from_name(name)) {
            expect('(');
            Expr arg = parse_expr();
            expect(')');
            return Expr::make_func(*f, std::move(arg));
        }
        if (auto c = coord_from_name(name)) return Expr::make_variable(*c);
        if (params_.count(name)) return Expr::make_parameter(name);
        throw ParseError(start, "unknown identifier '" + name + "'");
    }
};

}  // namespace

Expr parse(std::string_view text, const std::set<std::string>& parameters) {
    return Parser(text, parameters).run();
}

// ---------------------------------------------------------------------------
// Printing

namespace {

// Parent contexts controlling parenthesization of a printed child.
enum class Ctx { Top, SumTail, ProductHead, ProductTail, Denominator, Negated, PowerBase, PowerExpo };

bool needs_parens(const Expr& e, Ctx ctx) {
    switch (e.kind()) {
        case ExprKind::Constant: {
            bool neg = e.constant_value().num() < 0;
            bool frac = !e.constant_value().is_integer();
            switch (ctx) {
                case Ctx::Top:
                case Ctx::ProductHead:
                    return false;
                case Ctx::SumTail:
                    return false;  // handled via "- term" rendering
                case Ctx::ProductTail:
                case Ctx::Denominator:
                    return neg || frac;
                case Ctx::Negated:
                    return neg;
                case Ctx::PowerBase:
                    return neg || frac;
                case Ctx::PowerExpo:
                    return frac;
            }
            return false;
        }
        case ExprKind::Variable:
        case ExprKind::Parameter:
        case ExprKind::Func:
            return false;
        case ExprKind::Sum:
            return ctx != Ctx::Top;
        case ExprKind::Product:
            return ctx == Ctx::Denominator || ctx == Ctx::PowerBase || ctx == Ctx::Negated ||
                   ctx == Ctx::PowerExpo;
        case ExprKind::Quotient:
            return ctx == Ctx::ProductTail || ctx == Ctx::Denominator || ctx == Ctx::PowerBase ||
                   ctx == Ctx::Negated || ctx == Ctx::PowerExpo;
        case ExprKind::Negate:
            return ctx == Ctx::ProductHead || ctx == Ctx::ProductTail || ctx == Ctx::Denominator ||
                   ctx == Ctx::PowerBase;
        case ExprKind::Power:
            return ctx == Ctx::PowerBase;
    }
    return true;
}

void print_rec(std::ostream& os, const Expr& e, Ctx ctx);

void print_child(std::ostream& os, const Expr& e, Ctx ctx) {
    if (needs_parens(e, ctx)) {
        os << "(";
        print_rec(os, e, Ctx::Top);
        os << ")";
    } else {
        print_rec(os, e, ctx);
    }
}

// true when the term renders with a leading minus that Sum can absorb
bool is_negative_term(const Expr& e) {
    if (e.kind() == ExprKind::Negate) return true;
    if (e.kind() == ExprKind::Constant) return e.constant_value().num() < 0;
    if (e.kind() == ExprKind::Product && !e.children().empty() &&
        e.children().front().kind() == ExprKind::Constant)
        return e.children().front().constant_value().num() < 0;
    return false;
}

Expr strip_sign(const Expr& e) {
    if (e.kind() == ExprKind::Negate) return e.children().front();
    if (e.kind() == ExprKind::Constant) return constant(e.constant_value().negated());
    if (e.kind() == ExprKind::Product) {
        std::vector<Expr> kids = e.children();
        Rational c = kids.front().constant_value().negated();
        if (c.is(1)) {
            kids.erase(kids.begin());
            if (kids.size() == 1) return kids.front();
            return Expr::make_product(std::move(kids));
        }
        kids.front() = constant(c);
        return Expr::make_product(std::move(kids));
    }
    return e;
}

void print_rec(std::ostream& os, const Expr& e, Ctx ctx) {
    switch (e.kind()) {
        case ExprKind::Constant:
            os << to_string(e.constant_value());
            return;
        case ExprKind::Variable:
            os << coord_name(e.variable());
            return;
        case ExprKind::Parameter:
            os << e.parameter();
            return;
        case ExprKind::Sum: {
            const auto& kids = e.children();
            for (std::size_t i = 0; i < kids.size(); ++i) {
                if (i == 0) {
                    print_child(os, kids[i], Ctx::Top == ctx ? Ctx::Top : Ctx::SumTail);
                } else if (is_negative_term(kids[i])) {
                    os << " - ";
                    print_child(os, strip_sign(kids[i]), Ctx::SumTail);
                } else {
                    os << " + ";
                    print_child(os, kids[i], Ctx::SumTail);
                }
            }
            return;
        }
        case ExprKind::Product: {
            const auto& kids = e.children();
            for (std::size_t i = 0; i < kids.size(); ++i) {
                if (i > 0) os << "*";
                print_child(os, kids[i], i == 0 ? Ctx::ProductHead : Ctx::ProductTail);
            }
            return;
        }
        case ExprKind::Quotient:
            print_child(os, e.children()[0], Ctx::ProductHead);
            os << "/";
            print_child(os, e.children()[1], Ctx::Denominator);
            return;
        case ExprKind::Negate:
            os << "-";
            print_child(os, e.children()[0], Ctx::Negated);
            return;
        case ExprKind::Power:
            print_child(os, e.children()[0], Ctx::PowerBase);
            os << "^";
            print_child(os, e.children()[1], Ctx::PowerExpo);
            return;
        case ExprKind::Func:
            os << func_name(e.func()) << "(";
            print_rec(os, e.children()[0], Ctx::Top);
            os << ")";
            return;
    }
}

}  // namespace

std::string to_string(const Expr& e) {
    std::ostringstream os;
    // render simplified negative-power products as quotients where possible
    print_rec(os, e, Ctx::Top);
    return os.str();
}

}  // namespace planesym

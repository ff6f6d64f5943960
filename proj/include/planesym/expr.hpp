#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

namespace planesym {

/// Chart coordinates in index order (x^0,x^1,x^2,x^3) = (t,x,y,z).
enum class Coord : int { T = 0, X = 1, Y = 2, Z = 3 };

constexpr int coord_index(Coord c) { return static_cast<int>(c); }
constexpr Coord coord_of(int i) { return static_cast<Coord>(i); }
const char* coord_name(Coord c);
std::optional<Coord> coord_from_name(std::string_view name);

/// Exact rational with 64-bit numerator/denominator, normalized so that
/// den > 0 and gcd(num, den) = 1. Arithmetic that would overflow reports
/// failure instead of wrapping.
class Rational {
public:
    constexpr Rational() = default;
    Rational(long long num, long long den = 1);

    long long num() const { return num_; }
    long long den() const { return den_; }
    bool is_integer() const { return den_ == 1; }
    bool is_zero() const { return num_ == 0; }
    bool is(long long n) const { return den_ == 1 && num_ == n; }
    double to_double() const { return static_cast<double>(num_) / static_cast<double>(den_); }
    Rational negated() const;

    static std::optional<Rational> add(const Rational& a, const Rational& b);
    static std::optional<Rational> mul(const Rational& a, const Rational& b);
    static std::optional<Rational> reciprocal(const Rational& a);
    /// a^n for integer n (n may be negative if a != 0).
    static std::optional<Rational> pow_int(const Rational& a, long long n);
    /// Exact rational square root if one exists (e.g. 4/9 -> 2/3).
    static std::optional<Rational> exact_sqrt(const Rational& a);

    friend bool operator==(const Rational& a, const Rational& b) = default;

private:
    long long num_ = 0;
    long long den_ = 1;
};

std::string to_string(const Rational& q);

enum class ExprKind { Constant, Variable, Parameter, Sum, Product, Quotient, Negate, Power, Func };
enum class UnaryFunc { Exp, Ln, Sqrt, Sin, Cos, Sinh, Cosh };

const char* func_name(UnaryFunc f);
std::optional<UnaryFunc> func_from_name(std::string_view name);

struct ExprNode;

/// Immutable symbolic expression over t, x, y, z and named parameters.
/// Value-semantic handle; copying shares the underlying tree. Default
/// constructed Expr is the literal 0.
class Expr {
public:
    Expr();

    ExprKind kind() const;
    const Rational& constant_value() const;   ///< pre: kind() == Constant
    Coord variable() const;                   ///< pre: kind() == Variable
    const std::string& parameter() const;     ///< pre: kind() == Parameter
    UnaryFunc func() const;                   ///< pre: kind() == Func
    const std::vector<Expr>& children() const;
    std::size_t hash() const;

    bool is_constant() const { return kind() == ExprKind::Constant; }
    bool is_literal(long long n) const;

    // Raw factories preserve the given structure exactly (used by the
    // parser and by tests); the simplifying builders below are what
    // library code normally uses.
    static Expr make_constant(Rational v);
    static Expr make_variable(Coord v);
    static Expr make_parameter(std::string name);
    static Expr make_sum(std::vector<Expr> terms);
    static Expr make_product(std::vector<Expr> factors);
    static Expr make_quotient(Expr num, Expr den);
    static Expr make_negate(Expr inner);
    static Expr make_power(Expr base, Expr exponent);
    static Expr make_func(UnaryFunc f, Expr arg);

private:
    explicit Expr(std::shared_ptr<const ExprNode> node);
    std::shared_ptr<const ExprNode> node_;
};

bool structurally_equal(const Expr& a, const Expr& b);

struct ExprHash {
    std::size_t operator()(const Expr& e) const { return e.hash(); }
};
struct ExprEq {
    bool operator()(const Expr& a, const Expr& b) const { return structurally_equal(a, b); }
};

// Simplifying builders. Results are canonical: no zero/one identity or
// absorbing operands survive, constants are folded, nested sums/products
// are flattened, like sum terms and equal product bases are collected,
// quotients become negative powers and negations become -1 coefficients.
Expr constant(long long n);
Expr constant(Rational q);
Expr var(Coord c);
Expr parameter(std::string name);
Expr sum(std::vector<Expr> terms);
Expr product(std::vector<Expr> factors);
Expr quotient(Expr num, Expr den);
Expr negate(Expr e);
Expr power(Expr base, Expr exponent);
Expr apply(UnaryFunc f, Expr arg);

inline Expr exp(Expr e) { return apply(UnaryFunc::Exp, std::move(e)); }
inline Expr ln(Expr e) { return apply(UnaryFunc::Ln, std::move(e)); }
inline Expr sqrt(Expr e) { return apply(UnaryFunc::Sqrt, std::move(e)); }
inline Expr sin(Expr e) { return apply(UnaryFunc::Sin, std::move(e)); }
inline Expr cos(Expr e) { return apply(UnaryFunc::Cos, std::move(e)); }
inline Expr sinh(Expr e) { return apply(UnaryFunc::Sinh, std::move(e)); }
inline Expr cosh(Expr e) { return apply(UnaryFunc::Cosh, std::move(e)); }

inline Expr operator+(Expr a, Expr b) { return sum({std::move(a), std::move(b)}); }
inline Expr operator-(Expr a, Expr b) { return sum({std::move(a), negate(std::move(b))}); }
inline Expr operator*(Expr a, Expr b) { return product({std::move(a), std::move(b)}); }
inline Expr operator/(Expr a, Expr b) { return quotient(std::move(a), std::move(b)); }
inline Expr operator-(Expr a) { return negate(std::move(a)); }

/// Value-preserving canonical rewrite of an arbitrary tree (bottom-up
/// rebuild through the simplifying builders).
Expr simplify(const Expr& e);

/// Partial derivative with respect to a coordinate; the result is
/// simplified. Parameters differentiate to zero.
Expr differentiate(const Expr& e, Coord v);

class ParseError : public std::runtime_error {
public:
    ParseError(std::size_t offset, const std::string& what);
    std::size_t offset() const { return offset_; }

private:
    std::size_t offset_;
};

/// Parse a source line into the grammar-shaped raw AST. `parameters` is
/// the set of declared parameter names; any other identifier that is not
/// a coordinate or function is rejected.
Expr parse(std::string_view text, const std::set<std::string>& parameters = {});

/// Precedence-aware rendering; re-parsing the output evaluates to
/// bit-identical values.
std::string to_string(const Expr& e);

struct Point {
    double t = 0, x = 0, y = 0, z = 0;
    double coord(Coord c) const;
    double operator[](int i) const { return coord(coord_of(i)); }
};

std::string to_string(const Point& p);

using ParamBindings = std::unordered_map<std::string, double>;

class EvalError : public std::runtime_error {
public:
    enum class Kind { DomainError, DivideByZero, UnboundParameter };
    EvalError(Kind kind, const std::string& what);
    Kind error_kind() const { return kind_; }

private:
    Kind kind_;
};

/// IEEE double evaluation. Throws EvalError on ln/sqrt of a non-positive
/// argument, division by zero, a negative base under a non-integer
/// exponent, or an unbound parameter; overflow to infinity is returned
/// as-is for the caller to inspect.
double evaluate(const Expr& e, const Point& p, const ParamBindings& params = {});

struct ValueScale {
    double value = 0;
    double scale = 0;  ///< magnitude at which additive cancellation occurred
};

/// Evaluation that also tracks, heuristically, the largest magnitude fed
/// into any cancelling sum; used by the zero test's relative guard.
ValueScale evaluate_with_scale(const Expr& e, const Point& p, const ParamBindings& params = {});

void collect_symbols(const Expr& e, std::set<Coord>& vars, std::set<std::string>& params);
bool depends_on(const Expr& e, Coord v);

}  // namespace planesym

#pragma once

#include <map>
#include <memory>
#include <set>
#include <string>
#include <string_view>

namespace gaugeforge {

enum class Kind {
    Number,
    Constant,
    Variable,
    Neg,
    Add,
    Sub,
    Mul,
    Div,
    Pow,
    Sin,
    Cos,
    Exp,
};

/// The four dynamical symbols: time, position, velocity, acceleration.
enum class Var { T, X, V, A };

const char* var_name(Var v) noexcept;

struct Node;

/// Immutable expression handle. Copies share structure; all operations on
/// expressions are pure, so values can be shared across threads freely.
class Expr {
public:
    Expr() = default;
    explicit Expr(std::shared_ptr<const Node> node) : node_(std::move(node)) {}

    bool empty() const noexcept { return node_ == nullptr; }
    const Node& node() const noexcept { return *node_; }
    const std::shared_ptr<const Node>& ptr() const noexcept { return node_; }

private:
    std::shared_ptr<const Node> node_;
};

struct Node {
    Kind kind;
    double number = 0.0;   // Kind::Number
    std::string name;      // Kind::Constant
    Var var = Var::T;      // Kind::Variable
    Expr a, b;             // operands; unary nodes use a only
    int exponent = 0;      // Kind::Pow
};

/// Values for free symbols during evaluation. Keys are the variable names
/// "t", "x", "v", "a" and any constant names; extra entries are ignored.
using Bindings = std::map<std::string, double>;

// ---- construction ----------------------------------------------------------

Expr num(double value);
Expr constant(std::string name);
Expr var(Var v);
Expr neg(Expr e);
Expr add(Expr lhs, Expr rhs);
Expr sub(Expr lhs, Expr rhs);
Expr mul(Expr lhs, Expr rhs);
Expr div(Expr lhs, Expr rhs);
Expr pow(Expr base, int exponent);
Expr sin(Expr arg);
Expr cos(Expr arg);
Expr exp(Expr arg);

inline Expr operator-(Expr e) { return neg(std::move(e)); }
inline Expr operator+(Expr l, Expr r) { return add(std::move(l), std::move(r)); }
inline Expr operator-(Expr l, Expr r) { return sub(std::move(l), std::move(r)); }
inline Expr operator*(Expr l, Expr r) { return mul(std::move(l), std::move(r)); }
inline Expr operator/(Expr l, Expr r) { return div(std::move(l), std::move(r)); }
inline Expr operator*(double c, Expr e) { return mul(num(c), std::move(e)); }

// ---- parsing / printing ----------------------------------------------------

/// Parses expression text. Grammar:
///   expr   := term (('+'|'-') term)*
///   term   := factor (('*'|'/') factor)*
///   factor := '-' factor | atom ('^' integer)?
///   atom   := number | ident | ident '(' expr ')' | '(' expr ')'
/// Whitespace is insignificant; identifiers are [A-Za-z_][A-Za-z0-9_]*.
/// Known names are t, x, v, a, sin, cos, exp, pi plus `declared` constants.
/// The '^' exponent is a (possibly negative) integer literal.
/// Throws SyntaxError / UnknownIdentifier with the byte offset of the fault.
Expr parse(std::string_view text, const std::set<std::string>& declared);
Expr parse(std::string_view text);

/// Prints with minimal parentheses; numbers use the shortest digits that
/// round-trip. parse(to_string(simplify(e))) is structurally simplify(e).
std::string to_string(const Expr& e);

// ---- core operations -------------------------------------------------------

/// IEEE-double evaluation. Throws UnboundSymbol on a missing binding and
/// DomainError on division by zero or 0 raised to a negative power.
double eval(const Expr& e, const Bindings& b);

/// Symbolic partial derivative, other variables held fixed. Simplified.
Expr diff(const Expr& e, Var with_respect_to);

/// d/dt along a path: de/dt + v*de/dx + a*de/dv for e in (t, x, v).
/// If e does not depend on v the result does not depend on a. Simplified.
Expr total_time_derivative(const Expr& e);

/// Canonical form: constants folded, 0/1 identities applied, sums and
/// products flattened, like terms collected. Idempotent; preserves value
/// at every binding.
Expr simplify(const Expr& e);

/// Total order on trees (kind, then payload, then operands). Defines the
/// term ordering inside canonical forms.
int compare(const Expr& lhs, const Expr& rhs) noexcept;

/// Structural equality.
bool equal(const Expr& lhs, const Expr& rhs) noexcept;
inline bool operator==(const Expr& l, const Expr& r) noexcept { return equal(l, r); }
inline bool operator!=(const Expr& l, const Expr& r) noexcept { return !equal(l, r); }

bool contains(const Expr& e, Var v) noexcept;

/// Names of all Constant nodes in the tree.
std::set<std::string> constants_in(const Expr& e);

/// True when e is the literal number 0.
bool is_literal_zero(const Expr& e) noexcept;

}  // namespace gaugeforge

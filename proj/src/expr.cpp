#include "gaugeforge/expr.hpp"

#include <charconv>
#include <cmath>
#include <cstdlib>
#include <utility>

#include "gaugeforge/errors.hpp"

namespace gaugeforge {

const char* var_name(Var v) noexcept {
    switch (v) {
        case Var::T: return "t";
        case Var::X: return "x";
        case Var::V: return "v";
        case Var::A: return "a";
    }
    return "?";
}

// ---- construction ----------------------------------------------------------

namespace {

Expr make(Node n) { return Expr(std::make_shared<const Node>(std::move(n))); }

Expr unary(Kind k, Expr operand) {
    Node n;
    n.kind = k;
    n.a = std::move(operand);
    return make(std::move(n));
}

Expr binary(Kind k, Expr lhs, Expr rhs) {
    Node n;
    n.kind = k;
    n.a = std::move(lhs);
    n.b = std::move(rhs);
    return make(std::move(n));
}

}  // namespace

Expr num(double value) {
    Node n;
    n.kind = Kind::Number;
    n.number = value;
    return make(std::move(n));
}

Expr constant(std::string name) {
    Node n;
    n.kind = Kind::Constant;
    n.name = std::move(name);
    return make(std::move(n));
}

Expr var(Var v) {
    Node n;
    n.kind = Kind::Variable;
    n.var = v;
    return make(std::move(n));
}

Expr neg(Expr e) { return unary(Kind::Neg, std::move(e)); }
Expr add(Expr lhs, Expr rhs) { return binary(Kind::Add, std::move(lhs), std::move(rhs)); }
Expr sub(Expr lhs, Expr rhs) { return binary(Kind::Sub, std::move(lhs), std::move(rhs)); }
Expr mul(Expr lhs, Expr rhs) { return binary(Kind::Mul, std::move(lhs), std::move(rhs)); }
Expr div(Expr lhs, Expr rhs) { return binary(Kind::Div, std::move(lhs), std::move(rhs)); }

Expr pow(Expr base, int exponent) {
    Node n;
    n.kind = Kind::Pow;
    n.a = std::move(base);
    n.exponent = exponent;
    return make(std::move(n));
}

Expr sin(Expr arg) { return unary(Kind::Sin, std::move(arg)); }
Expr cos(Expr arg) { return unary(Kind::Cos, std::move(arg)); }
Expr exp(Expr arg) { return unary(Kind::Exp, std::move(arg)); }

// ---- evaluation ------------------------------------------------------------

double eval(const Expr& e, const Bindings& b) {
    const Node& n = e.node();
    switch (n.kind) {
        case Kind::Number: return n.number;
        case Kind::Constant: {
            auto it = b.find(n.name);
            if (it == b.end()) throw UnboundSymbol(n.name);
            return it->second;
        }
        case Kind::Variable: {
            auto it = b.find(var_name(n.var));
            if (it == b.end()) throw UnboundSymbol(var_name(n.var));
            return it->second;
        }
        case Kind::Neg: return -eval(n.a, b);
        case Kind::Add: return eval(n.a, b) + eval(n.b, b);
        case Kind::Sub: return eval(n.a, b) - eval(n.b, b);
        case Kind::Mul: return eval(n.a, b) * eval(n.b, b);
        case Kind::Div: {
            double den = eval(n.b, b);
            if (den == 0.0) throw DomainError("division by zero");
            return eval(n.a, b) / den;
        }
        case Kind::Pow: {
            double base = eval(n.a, b);
            if (base == 0.0 && n.exponent < 0)
                throw DomainError("zero raised to a negative power");
            if (n.exponent == 0) return 1.0;
            return std::pow(base, n.exponent);
        }
        case Kind::Sin: return std::sin(eval(n.a, b));
        case Kind::Cos: return std::cos(eval(n.a, b));
        case Kind::Exp: return std::exp(eval(n.a, b));
    }
    std::abort();  // unreachable
}

// ---- differentiation -------------------------------------------------------

namespace {

// Unsimplified derivative; the public entry simplifies once at the top.
Expr diff_raw(const Expr& e, Var w) {
    const Node& n = e.node();
    switch (n.kind) {
        case Kind::Number:
        case Kind::Constant:
            return num(0);
        case Kind::Variable:
            return num(n.var == w ? 1 : 0);
        case Kind::Neg:
            return neg(diff_raw(n.a, w));
        case Kind::Add:
            return add(diff_raw(n.a, w), diff_raw(n.b, w));
        case Kind::Sub:
            return sub(diff_raw(n.a, w), diff_raw(n.b, w));
        case Kind::Mul:
            return add(mul(diff_raw(n.a, w), n.b), mul(n.a, diff_raw(n.b, w)));
        case Kind::Div:
            return div(sub(mul(diff_raw(n.a, w), n.b), mul(n.a, diff_raw(n.b, w))),
                       pow(n.b, 2));
        case Kind::Pow:
            if (n.exponent == 0) return num(0);
            return mul(mul(num(n.exponent), pow(n.a, n.exponent - 1)), diff_raw(n.a, w));
        case Kind::Sin:
            return mul(cos(n.a), diff_raw(n.a, w));
        case Kind::Cos:
            return neg(mul(sin(n.a), diff_raw(n.a, w)));
        case Kind::Exp:
            return mul(exp(n.a), diff_raw(n.a, w));
    }
    std::abort();  // unreachable
}

}  // namespace

Expr diff(const Expr& e, Var with_respect_to) {
    return simplify(diff_raw(e, with_respect_to));
}

Expr total_time_derivative(const Expr& e) {
    Expr raw = add(add(diff_raw(e, Var::T), mul(var(Var::V), diff_raw(e, Var::X))),
                   mul(var(Var::A), diff_raw(e, Var::V)));
    return simplify(raw);
}

// ---- structure queries -----------------------------------------------------

int compare(const Expr& lhs, const Expr& rhs) noexcept {
    const Node& l = lhs.node();
    const Node& r = rhs.node();
    if (l.kind != r.kind) return static_cast<int>(l.kind) < static_cast<int>(r.kind) ? -1 : 1;
    switch (l.kind) {
        case Kind::Number:
            if (l.number != r.number) return l.number < r.number ? -1 : 1;
            return 0;
        case Kind::Constant: {
            int c = l.name.compare(r.name);
            return c < 0 ? -1 : (c > 0 ? 1 : 0);
        }
        case Kind::Variable:
            if (l.var != r.var) return static_cast<int>(l.var) < static_cast<int>(r.var) ? -1 : 1;
            return 0;
        case Kind::Pow: {
            if (int c = compare(l.a, r.a)) return c;
            if (l.exponent != r.exponent) return l.exponent < r.exponent ? -1 : 1;
            return 0;
        }
        case Kind::Neg:
        case Kind::Sin:
        case Kind::Cos:
        case Kind::Exp:
            return compare(l.a, r.a);
        case Kind::Add:
        case Kind::Sub:
        case Kind::Mul:
        case Kind::Div: {
            if (int c = compare(l.a, r.a)) return c;
            return compare(l.b, r.b);
        }
    }
    return 0;
}

bool equal(const Expr& lhs, const Expr& rhs) noexcept {
    if (lhs.ptr() == rhs.ptr()) return true;
    if (lhs.empty() || rhs.empty()) return false;
    return compare(lhs, rhs) == 0;
}

bool contains(const Expr& e, Var v) noexcept {
    const Node& n = e.node();
    switch (n.kind) {
        case Kind::Number:
        case Kind::Constant:
            return false;
        case Kind::Variable:
            return n.var == v;
        case Kind::Neg:
        case Kind::Pow:
        case Kind::Sin:
        case Kind::Cos:
        case Kind::Exp:
            return contains(n.a, v);
        default:
            return contains(n.a, v) || contains(n.b, v);
    }
}

namespace {

void collect_constants(const Expr& e, std::set<std::string>& out) {
    const Node& n = e.node();
    switch (n.kind) {
        case Kind::Number:
        case Kind::Variable:
            return;
        case Kind::Constant:
            out.insert(n.name);
            return;
        case Kind::Neg:
        case Kind::Pow:
        case Kind::Sin:
        case Kind::Cos:
        case Kind::Exp:
            collect_constants(n.a, out);
            return;
        default:
            collect_constants(n.a, out);
            collect_constants(n.b, out);
            return;
    }
}

}  // namespace

std::set<std::string> constants_in(const Expr& e) {
    std::set<std::string> out;
    collect_constants(e, out);
    return out;
}

bool is_literal_zero(const Expr& e) noexcept {
    return !e.empty() && e.node().kind == Kind::Number && e.node().number == 0.0;
}

// ---- printing --------------------------------------------------------------

namespace {

std::string number_repr(double v) {
    char buf[64];
    auto res = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, res.ptr);
}

// Precedence levels: sum < product < unary minus < power < atom.
int prec(const Node& n) {
    switch (n.kind) {
        case Kind::Add:
        case Kind::Sub: return 1;
        case Kind::Mul:
        case Kind::Div: return 2;
        case Kind::Neg: return 3;
        case Kind::Pow: return 4;
        default: return 5;
    }
}

void print(const Expr& e, std::string& out);

void print_child(const Expr& child, int parent_prec, bool tight_bind, std::string& out) {
    bool parens = prec(child.node()) < parent_prec ||
                  (tight_bind && prec(child.node()) == parent_prec);
    if (parens) out += '(';
    print(child, out);
    if (parens) out += ')';
}

void print(const Expr& e, std::string& out) {
    const Node& n = e.node();
    switch (n.kind) {
        case Kind::Number:
            out += number_repr(n.number);
            return;
        case Kind::Constant:
            out += n.name;
            return;
        case Kind::Variable:
            out += var_name(n.var);
            return;
        case Kind::Neg:
            out += '-';
            print_child(n.a, 3, false, out);
            return;
        case Kind::Add:
            print_child(n.a, 1, false, out);
            out += " + ";
            print_child(n.b, 1, true, out);
            return;
        case Kind::Sub:
            print_child(n.a, 1, false, out);
            out += " - ";
            print_child(n.b, 1, true, out);
            return;
        case Kind::Mul:
            print_child(n.a, 2, false, out);
            out += '*';
            print_child(n.b, 2, true, out);
            return;
        case Kind::Div:
            print_child(n.a, 2, false, out);
            out += '/';
            print_child(n.b, 2, true, out);
            return;
        case Kind::Pow:
            // The grammar allows one exponent per atom, so any non-atom
            // base (including a nested power) must be parenthesized.
            print_child(n.a, 5, false, out);
            out += '^';
            out += std::to_string(n.exponent);
            return;
        case Kind::Sin:
            out += "sin(";
            print(n.a, out);
            out += ')';
            return;
        case Kind::Cos:
            out += "cos(";
            print(n.a, out);
            out += ')';
            return;
        case Kind::Exp:
            out += "exp(";
            print(n.a, out);
            out += ')';
            return;
    }
}

}  // namespace

std::string to_string(const Expr& e) {
    std::string out;
    print(e, out);
    return out;
}

}  // namespace gaugeforge

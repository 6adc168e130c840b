#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <vector>

#include "gaugeforge/expr.hpp"

namespace gaugeforge {

// Canonical form: a sum of terms, each term a folded coefficient times a
// sorted product of unit powers. Unit bases are constants, variables,
// sin/cos/exp calls with canonical arguments, or irreducible subtrees
// (multi-term power bases, division by a sum or by zero). Products of sums
// distribute fully, so eval-equal polynomial expressions share one form.

namespace {

struct Unit {
    Expr base;
    int exp;
};

struct Term {
    double coeff = 0.0;
    std::vector<Unit> units;
};

using Sum = std::vector<Term>;

// Orders terms: compare unit lists pairwise (base order, then higher power
// first); a list that extends another sorts before it, so pure-number terms
// come last.
int compare_unit_lists(const std::vector<Unit>& a, const std::vector<Unit>& b) {
    std::size_t n = std::min(a.size(), b.size());
    for (std::size_t i = 0; i < n; ++i) {
        if (int c = compare(a[i].base, b[i].base)) return c;
        if (a[i].exp != b[i].exp) return a[i].exp > b[i].exp ? -1 : 1;
    }
    if (a.size() != b.size()) return a.size() > b.size() ? -1 : 1;
    return 0;
}

void sort_and_merge(Sum& s) {
    std::sort(s.begin(), s.end(), [](const Term& p, const Term& q) {
        return compare_unit_lists(p.units, q.units) < 0;
    });
    Sum out;
    for (Term& t : s) {
        if (!out.empty() && compare_unit_lists(out.back().units, t.units) == 0)
            out.back().coeff += t.coeff;
        else
            out.push_back(std::move(t));
    }
    out.erase(std::remove_if(out.begin(), out.end(),
                             [](const Term& t) { return t.coeff == 0.0; }),
              out.end());
    s = std::move(out);
}

Sum add_sums(Sum a, Sum b) {
    a.insert(a.end(), std::make_move_iterator(b.begin()), std::make_move_iterator(b.end()));
    sort_and_merge(a);
    return a;
}

Sum negate(Sum s) {
    for (Term& t : s) t.coeff = -t.coeff;
    return s;
}

Term mul_terms(const Term& p, const Term& q) {
    Term r;
    r.coeff = p.coeff * q.coeff;
    std::size_t i = 0, j = 0;
    while (i < p.units.size() && j < q.units.size()) {
        int c = compare(p.units[i].base, q.units[j].base);
        if (c < 0) {
            r.units.push_back(p.units[i++]);
        } else if (c > 0) {
            r.units.push_back(q.units[j++]);
        } else {
            int e = p.units[i].exp + q.units[j].exp;
            if (e != 0) r.units.push_back({p.units[i].base, e});
            ++i;
            ++j;
        }
    }
    for (; i < p.units.size(); ++i) r.units.push_back(p.units[i]);
    for (; j < q.units.size(); ++j) r.units.push_back(q.units[j]);
    return r;
}

Sum mul_sums(const Sum& a, const Sum& b) {
    Sum out;
    out.reserve(a.size() * b.size());
    for (const Term& p : a)
        for (const Term& q : b) out.push_back(mul_terms(p, q));
    sort_and_merge(out);
    return out;
}

Expr to_expr(const Sum& s);
Sum div_sums(const Sum& a, const Sum& b);

Sum single_unit(Expr base, int exp) {
    Term t;
    t.coeff = 1.0;
    t.units.push_back({std::move(base), exp});
    return {std::move(t)};
}

Sum pow_sum(const Sum& base, int k) {
    if (k == 0) return {Term{1.0, {}}};  // 0^0 = 1, matching eval
    if (base.empty()) {
        if (k > 0) return {};
        return single_unit(pow(num(0), k), 1);  // kept opaque; eval raises
    }
    if (base.size() == 1) {
        Term t;
        t.coeff = std::pow(base[0].coeff, k);
        for (const Unit& u : base[0].units) {
            long long e = static_cast<long long>(u.exp) * k;
            if (e > 1000000 || e < -1000000) return single_unit(pow(to_expr(base), k), 1);
            if (e != 0) t.units.push_back({u.base, static_cast<int>(e)});
        }
        return {std::move(t)};
    }
    if (k > 0) {
        if (k > 8) return single_unit(to_expr(base), k);  // no blow-up expansion
        Sum acc = base;
        for (int i = 1; i < k; ++i) acc = mul_sums(acc, base);
        return acc;
    }
    if (k < -8) return single_unit(to_expr(base), k);
    // Small negative power of a sum: invert the expanded positive power, so
    // the stored form matches what re-parsing its printed form produces.
    return div_sums(Sum{Term{1.0, {}}}, pow_sum(base, -k));
}

Sum div_sums(const Sum& a, const Sum& b) {
    if (b.empty()) return single_unit(div(to_expr(a), num(0)), 1);  // eval raises
    if (b.size() == 1) {
        Term inv;
        inv.coeff = 1.0 / b[0].coeff;
        for (const Unit& u : b[0].units) inv.units.push_back({u.base, -u.exp});
        return mul_sums(a, {std::move(inv)});
    }
    return mul_sums(a, single_unit(to_expr(b), -1));
}

Sum norm(const Expr& e) {
    const Node& n = e.node();
    switch (n.kind) {
        case Kind::Number:
            if (n.number == 0.0) return {};
            return {Term{n.number, {}}};
        case Kind::Constant:
        case Kind::Variable:
            return single_unit(e, 1);
        case Kind::Neg:
            return negate(norm(n.a));
        case Kind::Add:
            return add_sums(norm(n.a), norm(n.b));
        case Kind::Sub:
            return add_sums(norm(n.a), negate(norm(n.b)));
        case Kind::Mul:
            return mul_sums(norm(n.a), norm(n.b));
        case Kind::Div:
            return div_sums(norm(n.a), norm(n.b));
        case Kind::Pow:
            return pow_sum(norm(n.a), n.exponent);
        case Kind::Sin: {
            Expr arg = to_expr(norm(n.a));
            if (is_literal_zero(arg)) return {};
            return single_unit(sin(std::move(arg)), 1);
        }
        case Kind::Cos: {
            Expr arg = to_expr(norm(n.a));
            if (is_literal_zero(arg)) return {Term{1.0, {}}};
            return single_unit(cos(std::move(arg)), 1);
        }
        case Kind::Exp: {
            Expr arg = to_expr(norm(n.a));
            if (is_literal_zero(arg)) return {Term{1.0, {}}};
            return single_unit(exp(std::move(arg)), 1);
        }
    }
    std::abort();  // unreachable
}

// Rebuilds a term as a left-associated product over a division bar. The sign
// is folded into the leading numerator factor (only used for the first term
// of a sum; later negative terms subtract instead).
Expr term_expr(const Term& t, bool negative) {
    std::vector<Expr> numer, denom;
    for (const Unit& u : t.units) {
        if (u.exp > 0)
            numer.push_back(u.exp == 1 ? u.base : pow(u.base, u.exp));
        else
            denom.push_back(u.exp == -1 ? u.base : pow(u.base, -u.exp));
    }
    double m = std::fabs(t.coeff);
    std::vector<Expr> factors;
    if (m != 1.0 || numer.empty()) factors.push_back(num(m));
    for (Expr& e : numer) factors.push_back(std::move(e));
    if (negative) factors[0] = neg(std::move(factors[0]));
    Expr n_expr = factors[0];
    for (std::size_t i = 1; i < factors.size(); ++i) n_expr = mul(std::move(n_expr), factors[i]);
    if (denom.empty()) return n_expr;
    Expr d_expr = denom[0];
    for (std::size_t i = 1; i < denom.size(); ++i) d_expr = mul(std::move(d_expr), denom[i]);
    return div(std::move(n_expr), std::move(d_expr));
}

Expr to_expr(const Sum& s) {
    if (s.empty()) return num(0);
    Expr acc = term_expr(s[0], s[0].coeff < 0);
    for (std::size_t i = 1; i < s.size(); ++i) {
        if (s[i].coeff < 0)
            acc = sub(std::move(acc), term_expr(s[i], false));
        else
            acc = add(std::move(acc), term_expr(s[i], false));
    }
    return acc;
}

}  // namespace

Expr simplify(const Expr& e) { return to_expr(norm(e)); }

}  // namespace gaugeforge

#include "gaugeforge/calculus.hpp"

#include <cmath>
#include <random>

#include "gaugeforge/errors.hpp"

namespace gaugeforge {

namespace {

// Bit-reproducible uniform draw; avoids uniform_real_distribution, whose
// output differs across standard libraries.
double draw(std::mt19937_64& gen, double lo, double hi) {
    double u = static_cast<double>(gen() >> 11) * 0x1.0p-53;
    return lo + u * (hi - lo);
}

Bindings sample_bindings(std::mt19937_64& gen, const std::set<std::string>& constants) {
    Bindings b;
    for (const char* name : {"t", "x", "v", "a"}) b[name] = draw(gen, -10.0, 10.0);
    for (const std::string& name : constants) b[name] = draw(gen, -5.0, 5.0);
    return b;
}

void require_first_order(const Expr& L) {
    if (contains(L, Var::A))
        throw InvalidLagrangian("Lagrangian must not depend on the acceleration variable");
}

}  // namespace

ELResidual euler_lagrange(const Expr& L) {
    require_first_order(L);
    Expr momentum = diff(L, Var::V);
    Expr residual = simplify(sub(total_time_derivative(momentum), diff(L, Var::X)));
    return ELResidual{std::move(residual), L};
}

NullCertificate is_null(const Expr& L, int n_samples, double tol, std::uint64_t seed) {
    if (n_samples < 1) throw InvalidParameter("is_null needs at least one sample");
    if (!(tol > 0.0)) throw InvalidParameter("is_null tolerance must be positive");

    NullCertificate cert;
    cert.residual = euler_lagrange(L).residual;
    if (is_literal_zero(cert.residual)) {
        cert.verdict = NullVerdict::CertifiedSymbolic;
        return cert;
    }

    std::set<std::string> constants = constants_in(cert.residual);
    std::mt19937_64 gen(seed);
    double worst = 0.0;
    for (int i = 0; i < n_samples; ++i) {
        Bindings b = sample_bindings(gen, constants);
        double r = eval(cert.residual, b);
        if (std::fabs(r) > tol) {
            cert.verdict = NullVerdict::NotNull;
            cert.witness = std::move(b);
            cert.witness_value = r;
            cert.max_residual = std::fabs(r);
            return cert;
        }
        worst = std::max(worst, std::fabs(r));
    }
    cert.verdict = NullVerdict::CertifiedNumeric;
    cert.max_residual = worst;
    return cert;
}

HelmholtzReport helmholtz_check(const Expr& ode_residual, std::uint64_t seed) {
    if (!contains(ode_residual, Var::A))
        throw NotSecondOrder("ODE residual has no acceleration dependence");
    Expr p = diff(ode_residual, Var::A);
    if (contains(p, Var::A))
        throw NotSecondOrder("ODE residual is nonlinear in the acceleration variable");

    const double tol = 1e-9;
    const int n_samples = 1000;
    std::set<std::string> constants = constants_in(ode_residual);

    HelmholtzReport report;

    // Nondegeneracy: dPhi/da stays away from zero over the sample domain.
    {
        std::mt19937_64 gen(seed);
        double min_abs = std::fabs(eval(p, sample_bindings(gen, constants)));
        for (int i = 1; i < n_samples; ++i)
            min_abs = std::min(min_abs, std::fabs(eval(p, sample_bindings(gen, constants))));
        HelmholtzCondition cond;
        cond.name = "nondegeneracy";
        cond.passed = min_abs > tol;
        cond.max_violation = cond.passed ? 0.0 : tol - min_abs;
        report.conditions.push_back(std::move(cond));
    }

    // First-derivative condition and the derivative of its defect. Both are
    // identities that should simplify to literal zero for variational ODEs.
    Expr defect = simplify(sub(diff(ode_residual, Var::V), total_time_derivative(p)));
    Expr defect_rate = total_time_derivative(defect);
    const char* names[] = {"first-derivative", "symmetry"};
    const Expr* residues[] = {&defect, &defect_rate};
    for (int k = 0; k < 2; ++k) {
        HelmholtzCondition cond;
        cond.name = names[k];
        if (is_literal_zero(*residues[k])) {
            cond.passed = true;
            cond.max_violation = 0.0;
        } else {
            std::mt19937_64 gen(seed + 1 + static_cast<std::uint64_t>(k));
            double worst = 0.0;
            for (int i = 0; i < n_samples; ++i)
                worst = std::max(worst,
                                 std::fabs(eval(*residues[k], sample_bindings(gen, constants))));
            cond.passed = worst <= tol;
            cond.max_violation = worst;
        }
        report.conditions.push_back(std::move(cond));
    }

    report.overall = true;
    for (const HelmholtzCondition& c : report.conditions) report.overall &= c.passed;
    return report;
}

Expr energy_function(const Expr& L) {
    require_first_order(L);
    return simplify(sub(mul(var(Var::V), diff(L, Var::V)), L));
}

namespace {

// Derivative at `at` of the quadratic through three samples; exact for
// parabolas, second-order accurate on any spacing.
double quadratic_derivative(double t0, double e0, double t1, double e1, double t2, double e2,
                            double at) {
    return e0 * (2 * at - t1 - t2) / ((t0 - t1) * (t0 - t2)) +
           e1 * (2 * at - t0 - t2) / ((t1 - t0) * (t1 - t2)) +
           e2 * (2 * at - t0 - t1) / ((t2 - t0) * (t2 - t1));
}

}  // namespace

std::vector<double> energy_balance_residual(const Expr& L, const std::vector<double>& t,
                                            const std::vector<double>& x,
                                            const std::vector<double>& v,
                                            const Bindings& constants) {
    const std::size_t n = t.size();
    if (n < 3 || x.size() != n || v.size() != n)
        throw TrajectoryTooShort("energy balance needs at least three aligned samples");

    Expr energy = energy_function(L);
    Expr dLdt = diff(L, Var::T);

    std::vector<double> e(n);
    std::vector<double> lt(n);
    Bindings b = constants;
    for (std::size_t i = 0; i < n; ++i) {
        b["t"] = t[i];
        b["x"] = x[i];
        b["v"] = v[i];
        e[i] = eval(energy, b);
        lt[i] = eval(dLdt, b);
    }

    const double h = t[1] - t[0];
    auto uniform_gap = [&](std::size_t j) {  // gap between t[j] and t[j+1]
        return std::fabs(t[j + 1] - t[j] - h) <= 1e-9 * std::max(1.0, std::fabs(h));
    };
    auto uniform_window = [&](std::size_t lo, std::size_t hi) {  // gaps lo..hi
        for (std::size_t j = lo; j <= hi; ++j)
            if (!uniform_gap(j)) return false;
        return true;
    };

    std::vector<double> residual(n);
    for (std::size_t i = 0; i < n; ++i) {
        double dedt;
        if (i >= 2 && i + 2 < n && uniform_window(i - 2, i + 1)) {
            dedt = (e[i - 2] - 8 * e[i - 1] + 8 * e[i + 1] - e[i + 2]) / (12 * h);
        } else if (i <= 1 && n >= 5 && uniform_window(0, 3)) {
            dedt = i == 0 ? (-25 * e[0] + 48 * e[1] - 36 * e[2] + 16 * e[3] - 3 * e[4]) / (12 * h)
                          : (-3 * e[0] - 10 * e[1] + 18 * e[2] - 6 * e[3] + e[4]) / (12 * h);
        } else if (i + 2 >= n && n >= 5 && uniform_window(n - 5, n - 2)) {
            dedt = i + 1 == n ? (25 * e[n - 1] - 48 * e[n - 2] + 36 * e[n - 3] - 16 * e[n - 4] +
                                 3 * e[n - 5]) /
                                    (12 * h)
                              : (3 * e[n - 1] + 10 * e[n - 2] - 18 * e[n - 3] + 6 * e[n - 4] -
                                 e[n - 5]) /
                                    (12 * h);
        } else if (i == 0) {
            dedt = quadratic_derivative(t[0], e[0], t[1], e[1], t[2], e[2], t[0]);
        } else if (i + 1 == n) {
            dedt = quadratic_derivative(t[n - 3], e[n - 3], t[n - 2], e[n - 2], t[n - 1], e[n - 1],
                                        t[n - 1]);
        } else {
            dedt = quadratic_derivative(t[i - 1], e[i - 1], t[i], e[i], t[i + 1], e[i + 1], t[i]);
        }
        residual[i] = dedt + lt[i];
    }
    return residual;
}

}  // namespace gaugeforge

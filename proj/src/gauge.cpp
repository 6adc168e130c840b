#include "gaugeforge/gauge.hpp"

#include <cmath>
#include <random>
#include <utility>

#include "gaugeforge/calculus.hpp"
#include "gaugeforge/errors.hpp"

namespace gaugeforge {

namespace {

void require_time_function(const Expr& f, const char* which) {
    if (contains(f, Var::X) || contains(f, Var::V) || contains(f, Var::A))
        throw InvalidGauge(std::string(which) + " must depend on t only");
}

void require_parameter_constant(const Expr& e, const char* which) {
    for (Var v : {Var::T, Var::X, Var::V, Var::A}) {
        if (contains(e, v))
            throw InvalidLagrangian(std::string(which) +
                                    " must be a constant (no t, x, v, a dependence)");
    }
}

// Structural zero after simplify, with a numeric fallback: 1000 samples of
// t in [-10,10] and the named constants in [-5,5], tolerance 1e-9.
bool identically_zero(const Expr& e) {
    Expr s = simplify(e);
    if (is_literal_zero(s)) return true;
    std::set<std::string> constants = constants_in(s);
    std::mt19937_64 gen(kDefaultSampleSeed);
    auto draw = [&](double lo, double hi) {
        return lo + static_cast<double>(gen() >> 11) * 0x1.0p-53 * (hi - lo);
    };
    for (int i = 0; i < 1000; ++i) {
        Bindings b;
        b["t"] = draw(-10.0, 10.0);
        b["x"] = draw(-10.0, 10.0);
        b["v"] = draw(-10.0, 10.0);
        b["a"] = draw(-10.0, 10.0);
        for (const std::string& name : constants) b[name] = draw(-5.0, 5.0);
        if (std::fabs(eval(s, b)) > 1e-9) return false;
    }
    return true;
}

Expr dt(const Expr& f) { return diff(f, Var::T); }

}  // namespace

const char* gauge_role_name(GaugeRole role) noexcept {
    switch (role) {
        case GaugeRole::FGauge: return "F-gauge";
        case GaugeRole::EGauge: return "E-gauge";
        case GaugeRole::FrequencyShift: return "frequency-shift";
        case GaugeRole::ForceOnly: return "force-only";
        case GaugeRole::Inert: return "inert";
    }
    return "?";
}

GaugeSet make_gauge(Expr f1, Expr f2, Expr f4, Expr f6) {
    require_time_function(f1, "f1");
    require_time_function(f2, "f2");
    require_time_function(f4, "f4");
    require_time_function(f6, "f6");
    GaugeSet g{std::move(f1), std::move(f2), std::move(f4), std::move(f6), false};
    g.primary = !contains(g.f1, Var::T) && !contains(g.f2, Var::T) &&
                !contains(g.f4, Var::T) && !contains(g.f6, Var::T);
    return g;
}

GaugeSet primary_gauge(Expr C1, Expr C2, Expr C4, Expr C6) {
    GaugeSet g = make_gauge(std::move(C1), std::move(C2), std::move(C4), std::move(C6));
    if (!g.primary) throw InvalidGauge("primary gauge coefficients must be constants");
    return g;
}

GaugeSet primary_gauge(double C1, double C2, double C4, double C6) {
    return primary_gauge(num(C1), num(C2), num(C4), num(C6));
}

GaugeSet operator+(const GaugeSet& lhs, const GaugeSet& rhs) {
    GaugeSet g;
    g.f1 = simplify(add(lhs.f1, rhs.f1));
    g.f2 = simplify(add(lhs.f2, rhs.f2));
    g.f4 = simplify(add(lhs.f4, rhs.f4));
    g.f6 = simplify(add(lhs.f6, rhs.f6));
    g.primary = lhs.primary && rhs.primary;
    return g;
}

Expr gauge_scalar(const GaugeSet& g) {
    Expr x = var(Var::X);
    Expr t = var(Var::T);
    Expr phi = add(add(mul(mul(num(0.5), g.f1), pow(x, 2)), mul(mul(g.f2, x), t)),
                   add(mul(g.f4, x), mul(g.f6, t)));
    return simplify(phi);
}

Expr null_lagrangian_from_gauge(const GaugeSet& g) {
    Expr L = total_time_derivative(gauge_scalar(g));
    NullCertificate cert = is_null(L);
    if (!cert.certified())
        throw InternalNullViolation("total derivative of a gauge scalar failed null certification");
    return L;
}

Drive extract_force(const GaugeSet& g) {
    Expr t = var(Var::T);
    Drive d;
    d.force = simplify(add(add(g.f2, mul(dt(g.f2), t)), dt(g.f4)));
    d.shift = simplify(add(g.f6, mul(dt(g.f6), t)));
    return d;
}

Expr standard_lagrangian(const LagrangianSpec& spec) {
    require_parameter_constant(spec.C_o, "C_o");
    require_parameter_constant(spec.c, "c");
    Expr v = var(Var::V);
    Expr x = var(Var::X);
    return simplify(mul(mul(num(0.5), spec.C_o), sub(pow(v, 2), mul(spec.c, pow(x, 2)))));
}

Expr assemble(const LagrangianSpec& spec) {
    Expr L = standard_lagrangian(spec);
    if (spec.gauge) L = add(std::move(L), null_lagrangian_from_gauge(*spec.gauge));
    if (spec.drive)
        L = add(std::move(L), add(mul(spec.drive->force, var(Var::X)), spec.drive->shift));
    return simplify(L);
}

Expr driven_lagrangian(const LagrangianSpec& spec) {
    if (!spec.drive) throw InvalidParameter("driven_lagrangian requires drive terms");
    Expr L = add(standard_lagrangian(spec),
                 add(mul(spec.drive->force, var(Var::X)), spec.drive->shift));
    return simplify(L);
}

EnergyDecomposition energy_decomposition(const LagrangianSpec& spec) {
    Expr v = var(Var::V);
    Expr x = var(Var::X);
    Expr t = var(Var::T);
    EnergyDecomposition d;
    require_parameter_constant(spec.C_o, "C_o");
    require_parameter_constant(spec.c, "c");
    d.standard = simplify(mul(mul(num(0.5), spec.C_o), add(pow(v, 2), mul(spec.c, pow(x, 2)))));
    if (spec.gauge) {
        const GaugeSet& g = *spec.gauge;
        Expr kinetic_part = add(mul(mul(num(0.5), dt(g.f1)), pow(x, 2)),
                                mul(mul(dt(g.f2), x), t));
        Expr shift_part = add(mul(add(g.f2, dt(g.f4)), x), add(g.f6, mul(dt(g.f6), t)));
        d.gauge = simplify(neg(add(std::move(kinetic_part), std::move(shift_part))));
    } else {
        d.gauge = num(0);
    }
    d.total = simplify(add(d.standard, d.gauge));
    return d;
}

GaugeClassification classify_gauges(const GaugeSet& g) {
    Expr t = var(Var::T);
    bool shift1 = !identically_zero(dt(g.f1));
    bool force2 = !identically_zero(add(g.f2, mul(dt(g.f2), t)));
    bool force3 = !identically_zero(dt(g.f4));
    bool energy4 = !identically_zero(add(g.f6, mul(dt(g.f6), t)));

    GaugeClassification cls;
    cls.partials[0] = {"phi_g1", shift1, false,
                       shift1 ? GaugeRole::FrequencyShift : GaugeRole::Inert};
    cls.partials[1] = {"phi_g2", force2, force2, force2 ? GaugeRole::FGauge : GaugeRole::Inert};
    cls.partials[2] = {"phi_g3", force3, force3, force3 ? GaugeRole::ForceOnly : GaugeRole::Inert};
    cls.partials[3] = {"phi_g4", energy4, false, energy4 ? GaugeRole::EGauge : GaugeRole::Inert};
    return cls;
}

}  // namespace gaugeforge

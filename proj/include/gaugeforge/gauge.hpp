#pragma once

#include <array>
#include <optional>
#include <string>

#include "gaugeforge/expr.hpp"

namespace gaugeforge {

/// The four time-functions generating a gauge scalar
///   Phi(t, x) = f1*x^2/2 + f2*x*t + f4*x + f6*t.
/// The index gaps are structural: the coefficients that would break null-ness
/// (the x*t Lagrangian term, an x coefficient differing from f2) are not
/// representable. `primary` marks the constant-coefficient family.
struct GaugeSet {
    Expr f1, f2, f4, f6;
    bool primary = false;
};

/// Driving terms extracted from a gauge set: F(t) multiplies x, G(t) shifts
/// the Lagrangian. Both depend on time only.
struct Drive {
    Expr force;
    Expr shift;
};

/// Structured Lagrangian: standard part (C_o/2)(v^2 - c x^2), an optional
/// null part generated by a gauge set, optional driving terms F(t)x + G(t).
struct LagrangianSpec {
    Expr C_o;
    Expr c;
    std::optional<GaugeSet> gauge;
    std::optional<Drive> drive;
};

enum class GaugeRole { FGauge, EGauge, FrequencyShift, ForceOnly, Inert };

const char* gauge_role_name(GaugeRole role) noexcept;

struct GaugeVerdict {
    std::string partial;  // "phi_g1" .. "phi_g4"
    bool contributes_to_energy = false;
    bool contributes_to_force = false;
    GaugeRole role = GaugeRole::Inert;
};

struct GaugeClassification {
    std::array<GaugeVerdict, 4> partials;
};

struct EnergyDecomposition {
    Expr standard;  // (C_o/2)(v^2 + c x^2)
    Expr gauge;     // -[f1' x^2/2 + f2' x t] - [(f2 + f4') x + f6 + f6' t]
    Expr total;     // standard + gauge = energy of the assembled Lagrangian
};

/// Validates and packs four time-functions. Throws InvalidGauge if any
/// depends on x, v or a; `primary` is set when none depends on t either.
GaugeSet make_gauge(Expr f1, Expr f2, Expr f4, Expr f6);

/// Constant-coefficient gauge set (f1 = C1, f2 = C2, f4 = C4, f6 = C6).
GaugeSet primary_gauge(Expr C1, Expr C2, Expr C4, Expr C6);
GaugeSet primary_gauge(double C1, double C2, double C4, double C6);

/// Component-wise sum; primary iff both operands are.
GaugeSet operator+(const GaugeSet& lhs, const GaugeSet& rhs);

/// The scalar Phi(t, x) generating the gauge's null Lagrangian.
Expr gauge_scalar(const GaugeSet& g);

/// d/dt of the gauge scalar — a Lagrangian with identically vanishing
/// equation of motion. Certified before return; a failed certificate throws
/// InternalNullViolation (an expression-core bug, never a user error).
Expr null_lagrangian_from_gauge(const GaugeSet& g);

/// Driving force F = f2 + f2' t + f4' and energy shift G = f6 + f6' t.
/// A constant gauge yields the constant force f2 and constant shift f6.
Drive extract_force(const GaugeSet& g);

/// (C_o/2)(v^2 - c x^2).
Expr standard_lagrangian(const LagrangianSpec& spec);

/// Standard part plus the gauge's null Lagrangian plus drive terms, each
/// present iff configured.
Expr assemble(const LagrangianSpec& spec);

/// L = (C_o/2)(v^2 - c x^2) + F(t) x + G(t): same dynamics as the gauged
/// Lagrangian, with the drive made explicit. Requires spec.drive.
Expr driven_lagrangian(const LagrangianSpec& spec);

/// Energy split for the gauged Lagrangian (standard + null part):
/// total = energy_function(standard + null) holds identically.
EnergyDecomposition energy_decomposition(const LagrangianSpec& spec);

/// Roles of the four gauge partials. Decided structurally after simplify,
/// with a 1000-point numeric zero-test as fallback:
///   phi_g1: frequency-shift when f1' != 0 (enters the energy via x^2),
///   phi_g2: F-gauge when f2 + f2' t != 0 (force and energy),
///   phi_g3: force-only when f4' != 0 (force, plus energy via f4' x),
///   phi_g4: E-gauge when f6 + f6' t != 0 (pure energy shift),
/// and inert otherwise.
GaugeClassification classify_gauges(const GaugeSet& g);

}  // namespace gaugeforge

#pragma once

#include <optional>
#include <ostream>
#include <vector>

#include "gaugeforge/expr.hpp"
#include "gaugeforge/gauge.hpp"

namespace gaugeforge {

/// System parameters and integration window. Exactly one of the frequency
/// parameterizations must be set: omega0 directly, (k, m), (g, L_pend), or
/// the stiffness c itself (which may be <= 0: non-oscillatory but still
/// integrable). Pendulum mode is the small-angle (linear) regime; x0/v0 then
/// read as angle (radians) and angular velocity.
struct OscillatorConfig {
    enum class Mode { Oscillator, Pendulum };
    Mode mode = Mode::Oscillator;

    std::optional<double> omega0;
    std::optional<double> k, m;
    std::optional<double> g, L_pend;
    std::optional<double> c;

    double x0 = 0.0;
    double v0 = 0.0;
    double t0 = 0.0;
    double t_end = 10.0;
    double dt = 1e-3;
};

struct Frequency {
    double omega = 0.0;      // sqrt(stiffness) when oscillatory
    double stiffness = 0.0;  // the c in a + c x = F(t)
    bool oscillatory = false;
};

/// Uniformly sampled state series; E/H/balance_residual are filled by
/// track_energy. The final step is shortened when the span is not an exact
/// multiple of dt, so the last gap may be smaller than the rest.
struct Trajectory {
    std::vector<double> t, x, v;
    std::vector<double> E, H, balance_residual;

    std::size_t size() const noexcept { return t.size(); }
    bool has_energy() const noexcept { return !E.empty(); }
};

/// Resolves the characteristic frequency: omega0 as given, sqrt(k/m),
/// sqrt(g/L_pend), or sqrt(c) with c <= 0 flagged non-oscillatory.
/// Throws ConflictingParameters when several parameterizations are set,
/// InvalidParameter when none is, or on k, m, g, L_pend <= 0 or omega0 < 0.
Frequency derive_frequency(const OscillatorConfig& cfg);

/// Classical fixed-step fourth-order Runge-Kutta integration of
///   dx/dt = v,   dv/dt = force(t) - stiffness * x
/// from (x0, v0) over [t0, t_end]; the final sample lands exactly on t_end.
/// `constants` binds the named constants of the force expression.
/// Throws ForceContainsState if force references x, v or a; NonFiniteState
/// (with the step index) if the state overflows; InvalidParameter on a bad
/// window or step.
Trajectory simulate(const OscillatorConfig& cfg, const Expr& force,
                    const Bindings& constants = {});

/// Appends energy columns to a simulated trajectory:
///   E        energy function of the tracked Lagrangian along the samples,
///   H        (v^2 + stiffness x^2) / 2,
///   balance  dE/dt + dL/dt, which vanishes along true motion.
/// The tracked Lagrangian is the driven form — standard part plus F x + G,
/// with the drive taken from spec.drive or extracted from spec.gauge when no
/// explicit drive is given. That is the Lagrangian whose equation of motion
/// the integrator solves, so its energy obeys the balance law; for a gauge
/// with constant entries it coincides with the gauged-Lagrangian energy.
Trajectory track_energy(Trajectory traj, const LagrangianSpec& spec,
                        const Bindings& constants = {});

/// max_i |series[i] - series[0]|.
double max_drift(const std::vector<double>& series);

/// max_i |series[i]|.
double max_abs_value(const std::vector<double>& series);

/// CSV with header t,x,v,E,H,balance_residual, one row per sample, full
/// double precision (17 significant digits), LF line endings. Requires the
/// energy columns (run track_energy first).
void write_csv(const Trajectory& traj, std::ostream& out);

}  // namespace gaugeforge

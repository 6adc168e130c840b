#include "gaugeforge/dynamics.hpp"

#include <charconv>
#include <cmath>
#include <cstddef>
#include <string>

#include "gaugeforge/calculus.hpp"
#include "gaugeforge/errors.hpp"

namespace gaugeforge {

namespace {

bool both_or_neither(const std::optional<double>& a,
                     const std::optional<double>& b, const char* what) {
    if (a.has_value() != b.has_value())
        throw InvalidParameter(std::string(what) +
                               " requires both parameters or neither");
    return a.has_value();
}

void require_positive(double value, const char* name) {
    if (!(value > 0.0))
        throw InvalidParameter(std::string(name) + " must be positive, got " +
                               std::to_string(value));
}

}  // namespace

Frequency derive_frequency(const OscillatorConfig& cfg) {
    const bool has_omega = cfg.omega0.has_value();
    const bool has_spring = both_or_neither(cfg.k, cfg.m, "spring form (k, m)");
    const bool has_pendulum =
        both_or_neither(cfg.g, cfg.L_pend, "pendulum form (g, L_pend)");
    const bool has_stiffness = cfg.c.has_value();

    const int given = int(has_omega) + int(has_spring) + int(has_pendulum) +
                      int(has_stiffness);
    if (given == 0)
        throw InvalidParameter(
            "no frequency parameterization: set omega0, (k, m), (g, L_pend) "
            "or c");
    if (given > 1)
        throw ConflictingParameters(
            "more than one frequency parameterization set; pick one of "
            "omega0, (k, m), (g, L_pend), c");

    Frequency out;
    if (has_omega) {
        if (*cfg.omega0 < 0.0)
            throw InvalidParameter("omega0 must be nonnegative, got " +
                                   std::to_string(*cfg.omega0));
        out.omega = *cfg.omega0;
        out.stiffness = *cfg.omega0 * *cfg.omega0;
        out.oscillatory = *cfg.omega0 > 0.0;
    } else if (has_spring) {
        require_positive(*cfg.k, "k");
        require_positive(*cfg.m, "m");
        out.stiffness = *cfg.k / *cfg.m;
        out.omega = std::sqrt(out.stiffness);
        out.oscillatory = true;
    } else if (has_pendulum) {
        require_positive(*cfg.g, "g");
        require_positive(*cfg.L_pend, "L_pend");
        out.stiffness = *cfg.g / *cfg.L_pend;
        out.omega = std::sqrt(out.stiffness);
        out.oscillatory = true;
    } else {
        out.stiffness = *cfg.c;
        out.oscillatory = *cfg.c > 0.0;
        out.omega = out.oscillatory ? std::sqrt(*cfg.c) : 0.0;
    }
    return out;
}

Trajectory simulate(const OscillatorConfig& cfg, const Expr& force,
                    const Bindings& constants) {
    if (contains(force, Var::X) || contains(force, Var::V) ||
        contains(force, Var::A))
        throw ForceContainsState(
            "driving force must be a function of t only: " + to_string(force));
    if (!(cfg.dt > 0.0) || !std::isfinite(cfg.dt))
        throw InvalidParameter("dt must be positive and finite, got " +
                               std::to_string(cfg.dt));
    if (!(cfg.t_end > cfg.t0))
        throw InvalidParameter("t_end must exceed t0");
    if (!std::isfinite(cfg.x0) || !std::isfinite(cfg.v0))
        throw InvalidParameter("initial state must be finite");

    const double c = derive_frequency(cfg).stiffness;

    Bindings env = constants;
    auto drive = [&](double time) {
        env["t"] = time;
        return eval(force, env);
    };

    const double span = cfg.t_end - cfg.t0;
    // Count whole steps of dt; anything left over becomes one shortened step.
    // The epsilon keeps an exact multiple from growing a spurious extra step.
    const auto steps =
        static_cast<std::size_t>(std::ceil(span / cfg.dt - 1e-12));

    Trajectory traj;
    traj.t.reserve(steps + 1);
    traj.x.reserve(steps + 1);
    traj.v.reserve(steps + 1);
    traj.t.push_back(cfg.t0);
    traj.x.push_back(cfg.x0);
    traj.v.push_back(cfg.v0);

    double x = cfg.x0, v = cfg.v0;
    for (std::size_t i = 0; i < steps; ++i) {
        const double t = cfg.t0 + double(i) * cfg.dt;
        const double t_next =
            (i + 1 == steps) ? cfg.t_end
                             : std::min(cfg.t0 + double(i + 1) * cfg.dt,
                                        cfg.t_end);
        const double h = t_next - t;

        const double f0 = drive(t);
        const double fm = drive(t + 0.5 * h);
        const double f1 = drive(t_next);

        const double k1x = v;
        const double k1v = f0 - c * x;
        const double k2x = v + 0.5 * h * k1v;
        const double k2v = fm - c * (x + 0.5 * h * k1x);
        const double k3x = v + 0.5 * h * k2v;
        const double k3v = fm - c * (x + 0.5 * h * k2x);
        const double k4x = v + h * k3v;
        const double k4v = f1 - c * (x + h * k3x);

        x += h / 6.0 * (k1x + 2.0 * k2x + 2.0 * k3x + k4x);
        v += h / 6.0 * (k1v + 2.0 * k2v + 2.0 * k3v + k4v);

        if (!std::isfinite(x) || !std::isfinite(v))
            throw NonFiniteState("state overflowed during integration", i + 1);

        traj.t.push_back(t_next);
        traj.x.push_back(x);
        traj.v.push_back(v);
    }
    return traj;
}

Trajectory track_energy(Trajectory traj, const LagrangianSpec& spec,
                        const Bindings& constants) {
    if (traj.size() < 3)
        throw TrajectoryTooShort("need at least 3 samples to track energy");

    // Track against the driven form: the integrator solves the equation of
    // motion of standard + F x + G (the null part never reaches it), so that
    // is the Lagrangian whose energy obeys the balance law along the samples.
    LagrangianSpec tracked = spec;
    tracked.gauge.reset();
    if (!tracked.drive && spec.gauge) tracked.drive = extract_force(*spec.gauge);
    const Expr L = assemble(tracked);
    const Expr E = energy_function(L);

    const double stiffness = eval(spec.c, constants);

    const std::size_t n = traj.size();
    traj.E.resize(n);
    traj.H.resize(n);
    Bindings env = constants;
    env["a"] = 0.0;  // the energy of a first-order Lagrangian ignores it
    for (std::size_t i = 0; i < n; ++i) {
        env["t"] = traj.t[i];
        env["x"] = traj.x[i];
        env["v"] = traj.v[i];
        traj.E[i] = eval(E, env);
        traj.H[i] =
            0.5 * (traj.v[i] * traj.v[i] +
                   stiffness * traj.x[i] * traj.x[i]);
    }

    traj.balance_residual =
        energy_balance_residual(L, traj.t, traj.x, traj.v, constants);
    return traj;
}

double max_drift(const std::vector<double>& series) {
    if (series.empty()) return 0.0;
    double worst = 0.0;
    for (double s : series) worst = std::max(worst, std::abs(s - series[0]));
    return worst;
}

double max_abs_value(const std::vector<double>& series) {
    double worst = 0.0;
    for (double s : series) worst = std::max(worst, std::abs(s));
    return worst;
}

namespace {

void put_number(std::string& row, double value) {
    char buf[64];
    auto res = std::to_chars(buf, buf + sizeof buf, value,
                             std::chars_format::general, 17);
    row.append(buf, res.ptr);
}

}  // namespace

void write_csv(const Trajectory& traj, std::ostream& out) {
    const std::size_t n = traj.size();
    if (!traj.has_energy() || traj.H.size() != n ||
        traj.balance_residual.size() != n || traj.x.size() != n ||
        traj.v.size() != n || traj.E.size() != n)
        throw InvalidParameter(
            "trajectory is missing columns; run track_energy before "
            "write_csv");

    out << "t,x,v,E,H,balance_residual\n";
    std::string row;
    for (std::size_t i = 0; i < n; ++i) {
        row.clear();
        put_number(row, traj.t[i]);
        row.push_back(',');
        put_number(row, traj.x[i]);
        row.push_back(',');
        put_number(row, traj.v[i]);
        row.push_back(',');
        put_number(row, traj.E[i]);
        row.push_back(',');
        put_number(row, traj.H[i]);
        row.push_back(',');
        put_number(row, traj.balance_residual[i]);
        row.push_back('\n');
        out << row;
    }
}

}  // namespace gaugeforge

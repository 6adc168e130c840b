#pragma once

#include <optional>
#include <string>
#include <string_view>

#include "gaugeforge/dynamics.hpp"
#include "gaugeforge/expr.hpp"
#include "gaugeforge/gauge.hpp"

namespace gaugeforge {

/// Resolved run configuration. Sections of the INI-like file:
///   [system]      mode, one frequency parameterization (omega0 | k,m |
///                 g,L_pend | c), x0, v0, t0, t_end, dt, and optional
///                 force/shift expression strings (the explicit drive)
///   [gauge]       f1, f2, f4, f6 expression strings (all four required)
///   [constants]   name = value, declaring every named constant the
///                 expressions may reference
///   [output]      dir, format (csv|json), trajectory (file stem)
///   [tolerances]  null_tol, balance_tol, samples
///   [helmholtz]   ode expression string
/// Expression values are double-quoted; numbers and bare words are not.
/// Defaults: t0=0, t_end=10, dt=1e-3, x0=0, v0=0, dir=".", format=csv,
/// trajectory="trajectory", null_tol=1e-9, balance_tol=1e-5, samples=1000.
struct RunConfig {
    OscillatorConfig system;
    bool has_system = false;

    std::optional<GaugeSet> gauge;
    Bindings constants;
    std::optional<Expr> force;
    std::optional<Expr> shift;
    std::optional<Expr> ode;

    std::string out_dir = ".";
    std::string format = "csv";
    std::string trajectory_stem = "trajectory";

    double null_tol = 1e-9;
    double balance_tol = 1e-5;
    int samples = 1000;
};

/// Parses configuration text. Unknown sections or keys, malformed lines,
/// unparsable numbers or expressions, undeclared constants, nonpositive
/// tolerances and an incomplete gauge block all raise ConfigError naming the
/// offending section-qualified key.
RunConfig parse_config(std::string_view text);

/// parse_config over the contents of the file at `path`; ConfigError if it
/// cannot be read.
RunConfig load_config(const std::string& path);

}  // namespace gaugeforge

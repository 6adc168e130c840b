#pragma once

#include <cstdint>
#include <exception>
#include <iosfwd>
#include <optional>
#include <string>

#include "gaugeforge/calculus.hpp"
#include "gaugeforge/config.hpp"

namespace gaugeforge {

/// Options resolved from the command line and environment.
struct CommandOptions {
    std::optional<std::string> lagrangian;  // verify-null: check this instead
    std::optional<std::string> ode;         // check-helmholtz: residual string
    std::optional<std::string> out_dir;     // --out, overrides output.dir
    std::optional<std::string> format;      // --format, overrides output.format
    std::uint64_t seed = kDefaultSampleSeed;  // GAUGEFORGE_SEED
    int jobs = 1;
};

/// Certifies the configured gauge's generated Lagrangian (or the override
/// expression) as null. Prints a JSON certificate. Exit 0 certified, 1 not.
int cmd_verify_null(const RunConfig& cfg, const CommandOptions& opt,
                    std::ostream& out);

/// Extracts F(t) and G(t) from the gauge block and classifies each gauge
/// entry. Prints JSON {force, shift, classification}. Exit 0.
int cmd_derive_force(const RunConfig& cfg, const CommandOptions& opt,
                     std::ostream& out);

/// Integrates the configured system, writes the trajectory file, prints a
/// JSON summary {omega, max_energy_drift, max_balance_residual, samples, ...}.
/// Exit 0.
int cmd_simulate(const RunConfig& cfg, const CommandOptions& opt,
                 std::ostream& out);

/// Runs the Helmholtz conditions on the explicit --ode expression, the
/// [helmholtz] block, or the configured system's equation of motion.
/// Prints a JSON report. Exit 0 on pass, 1 on fail.
int cmd_check_helmholtz(const RunConfig& cfg, const CommandOptions& opt,
                        std::ostream& out);

/// Maps a command failure to the exit-code contract and writes a JSON error
/// object to `err`: 3 for numeric failures (non-finite state, domain
/// errors), 2 for configuration and usage errors.
int report_error(const std::exception& e, std::ostream& err);

}  // namespace gaugeforge

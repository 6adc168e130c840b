#include "gaugeforge/commands.hpp"

#include <filesystem>
#include <fstream>
#include <ostream>
#include <set>

#include <json.hpp>

#include "gaugeforge/dynamics.hpp"
#include "gaugeforge/errors.hpp"
#include "gaugeforge/gauge.hpp"

namespace gaugeforge {

namespace {

using json = nlohmann::ordered_json;

std::set<std::string> declared_constants(const RunConfig& cfg) {
    std::set<std::string> names;
    for (const auto& [name, value] : cfg.constants) names.insert(name);
    return names;
}

json config_echo(const RunConfig& cfg) {
    json j;
    if (cfg.has_system) {
        json sys;
        sys["mode"] = cfg.system.mode == OscillatorConfig::Mode::Pendulum
                          ? "pendulum"
                          : "oscillator";
        if (cfg.system.omega0) sys["omega0"] = *cfg.system.omega0;
        if (cfg.system.k) sys["k"] = *cfg.system.k;
        if (cfg.system.m) sys["m"] = *cfg.system.m;
        if (cfg.system.g) sys["g"] = *cfg.system.g;
        if (cfg.system.L_pend) sys["L_pend"] = *cfg.system.L_pend;
        if (cfg.system.c) sys["c"] = *cfg.system.c;
        sys["x0"] = cfg.system.x0;
        sys["v0"] = cfg.system.v0;
        sys["t0"] = cfg.system.t0;
        sys["t_end"] = cfg.system.t_end;
        sys["dt"] = cfg.system.dt;
        if (cfg.force) sys["force"] = to_string(*cfg.force);
        if (cfg.shift) sys["shift"] = to_string(*cfg.shift);
        j["system"] = sys;
    } else {
        j["system"] = nullptr;
    }

    if (cfg.gauge) {
        j["gauge"] = {{"f1", to_string(cfg.gauge->f1)},
                      {"f2", to_string(cfg.gauge->f2)},
                      {"f4", to_string(cfg.gauge->f4)},
                      {"f6", to_string(cfg.gauge->f6)}};
    } else {
        j["gauge"] = nullptr;
    }

    j["constants"] = json::object();
    for (const auto& [name, value] : cfg.constants) j["constants"][name] = value;

    j["output"] = {{"dir", cfg.out_dir},
                   {"format", cfg.format},
                   {"trajectory", cfg.trajectory_stem}};
    j["tolerances"] = {{"null_tol", cfg.null_tol},
                       {"balance_tol", cfg.balance_tol},
                       {"samples", cfg.samples}};
    if (cfg.ode) j["helmholtz"] = {{"ode", to_string(*cfg.ode)}};
    return j;
}

const char* verdict_name(NullVerdict v) {
    switch (v) {
        case NullVerdict::CertifiedSymbolic: return "certified_symbolic";
        case NullVerdict::CertifiedNumeric: return "certified_numeric";
        case NullVerdict::NotNull: return "not_null";
    }
    return "not_null";
}

json bindings_json(const Bindings& b) {
    json j = json::object();
    for (const auto& [name, value] : b) j[name] = value;
    return j;
}

Expr parse_cli_expression(const std::string& text, const char* flag,
                          const std::set<std::string>& declared) {
    try {
        return parse(text, declared);
    } catch (const UnknownIdentifier& e) {
        throw ConfigError(std::string(flag) + " uses undeclared constant '" +
                              e.name() + "' (declare it in [constants])",
                          flag);
    } catch (const SyntaxError& e) {
        throw ConfigError(std::string(flag) +
                              " does not parse: " + e.what(),
                          flag);
    }
}

/// The drive the configuration asks for: the explicit force/shift pair, or
/// the one extracted from the gauge block. Giving both is ambiguous.
std::optional<Drive> resolve_drive(const RunConfig& cfg) {
    if (cfg.force) {
        if (cfg.gauge)
            throw ConfigError(
                "give either an explicit system.force or a gauge block, not "
                "both",
                "system.force");
        return Drive{*cfg.force, cfg.shift ? *cfg.shift : num(0.0)};
    }
    if (cfg.shift)
        throw ConfigError("system.shift requires system.force",
                          "system.shift");
    if (cfg.gauge) return extract_force(*cfg.gauge);
    return std::nullopt;
}

void write_trajectory_json(const Trajectory& traj, std::ostream& out) {
    json j;
    j["t"] = traj.t;
    j["x"] = traj.x;
    j["v"] = traj.v;
    j["E"] = traj.E;
    j["H"] = traj.H;
    j["balance_residual"] = traj.balance_residual;
    out << j.dump() << "\n";
}

}  // namespace

int cmd_verify_null(const RunConfig& cfg, const CommandOptions& opt,
                    std::ostream& out) {
    Expr L;
    if (opt.lagrangian) {
        L = parse_cli_expression(*opt.lagrangian, "--lagrangian",
                                 declared_constants(cfg));
    } else if (cfg.gauge) {
        L = simplify(total_time_derivative(gauge_scalar(*cfg.gauge)));
    } else {
        throw ConfigError(
            "verify-null needs a gauge block or a --lagrangian expression",
            "gauge");
    }

    NullCertificate cert = is_null(L, cfg.samples, cfg.null_tol, opt.seed);

    json j;
    j["verdict"] = verdict_name(cert.verdict);
    j["lagrangian"] = to_string(L);
    j["residual"] = to_string(cert.residual);
    j["max_residual"] = cert.max_residual;
    if (cert.verdict == NullVerdict::NotNull) {
        j["witness"] = bindings_json(cert.witness);
        j["witness_value"] = cert.witness_value;
    } else {
        j["witness"] = nullptr;
    }
    j["config"] = config_echo(cfg);
    out << j.dump(2) << "\n";
    return cert.certified() ? 0 : 1;
}

int cmd_derive_force(const RunConfig& cfg, const CommandOptions&,
                     std::ostream& out) {
    if (!cfg.gauge)
        throw ConfigError("derive-force needs a gauge block", "gauge");

    Drive drive = extract_force(*cfg.gauge);
    GaugeClassification cls = classify_gauges(*cfg.gauge);

    json j;
    j["force"] = to_string(drive.force);
    j["shift"] = to_string(drive.shift);
    j["classification"] = json::array();
    for (const GaugeVerdict& v : cls.partials) {
        j["classification"].push_back(
            {{"partial", v.partial},
             {"role", gauge_role_name(v.role)},
             {"contributes_to_force", v.contributes_to_force},
             {"contributes_to_energy", v.contributes_to_energy}});
    }
    j["config"] = config_echo(cfg);
    out << j.dump(2) << "\n";
    return 0;
}

int cmd_simulate(const RunConfig& cfg, const CommandOptions& opt,
                 std::ostream& out) {
    if (!cfg.has_system)
        throw ConfigError("simulate needs a system block", "system");

    RunConfig eff = cfg;
    if (opt.out_dir) eff.out_dir = *opt.out_dir;
    if (opt.format) {
        if (*opt.format != "csv" && *opt.format != "json")
            throw ConfigError("--format must be csv or json", "--format");
        eff.format = *opt.format;
    }

    const Frequency freq = derive_frequency(eff.system);
    const std::optional<Drive> drive = resolve_drive(eff);

    LagrangianSpec spec;
    spec.C_o = num(1.0);
    spec.c = num(freq.stiffness);
    spec.drive = drive;

    Trajectory traj =
        simulate(eff.system, drive ? drive->force : num(0.0), eff.constants);
    traj = track_energy(std::move(traj), spec, eff.constants);

    namespace fs = std::filesystem;
    fs::create_directories(eff.out_dir);
    const fs::path path =
        fs::path(eff.out_dir) /
        (eff.trajectory_stem + (eff.format == "json" ? ".json" : ".csv"));
    {
        std::ofstream file(path, std::ios::binary);
        if (!file)
            throw ConfigError("cannot open trajectory file for writing",
                              path.string());
        if (eff.format == "json")
            write_trajectory_json(traj, file);
        else
            write_csv(traj, file);
    }

    const double drift = max_drift(traj.E);
    const double worst_balance = max_abs_value(traj.balance_residual);

    json j;
    j["omega"] = freq.omega;
    j["oscillatory"] = freq.oscillatory;
    if (!freq.oscillatory)
        j["warning"] = "stiffness is not positive; motion is non-oscillatory";
    j["max_energy_drift"] = drift;
    j["max_balance_residual"] = worst_balance;
    j["balance_ok"] = worst_balance <= eff.balance_tol;
    j["samples"] = traj.size();
    if (drive) {
        j["force"] = to_string(drive->force);
        j["shift"] = to_string(drive->shift);
    }
    j["trajectory"] = path.string();
    j["config"] = config_echo(eff);
    out << j.dump(2) << "\n";
    return 0;
}

int cmd_check_helmholtz(const RunConfig& cfg, const CommandOptions& opt,
                        std::ostream& out) {
    Expr residual;
    if (opt.ode) {
        residual =
            parse_cli_expression(*opt.ode, "--ode", declared_constants(cfg));
    } else if (cfg.ode) {
        residual = *cfg.ode;
    } else if (cfg.has_system) {
        const Frequency freq = derive_frequency(cfg.system);
        const std::optional<Drive> drive = resolve_drive(cfg);
        Expr eq = add(var(Var::A), mul(num(freq.stiffness), var(Var::X)));
        if (drive) eq = sub(eq, drive->force);
        residual = simplify(eq);
    } else {
        throw ConfigError(
            "check-helmholtz needs --ode, a [helmholtz] block or a system "
            "block",
            "helmholtz.ode");
    }

    HelmholtzReport report = helmholtz_check(residual, opt.seed);

    json j;
    j["ode"] = to_string(residual);
    j["overall"] = report.overall;
    j["conditions"] = json::array();
    for (const HelmholtzCondition& c : report.conditions) {
        j["conditions"].push_back({{"name", c.name},
                                   {"passed", c.passed},
                                   {"max_violation", c.max_violation}});
    }
    j["config"] = config_echo(cfg);
    out << j.dump(2) << "\n";
    return report.overall ? 0 : 1;
}

int report_error(const std::exception& e, std::ostream& err) {
    int code = 2;
    json j;
    j["error"] = e.what();
    if (const auto* nf = dynamic_cast<const NonFiniteState*>(&e)) {
        code = 3;
        j["step"] = nf->step();
    } else if (dynamic_cast<const DomainError*>(&e) != nullptr) {
        code = 3;
    } else if (const auto* ce = dynamic_cast<const ConfigError*>(&e)) {
        j["key"] = ce->key();
    }
    err << j.dump(2) << "\n";
    return code;
}

}  // namespace gaugeforge

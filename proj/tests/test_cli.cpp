#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <array>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "gaugeforge/commands.hpp"
#include "gaugeforge/config.hpp"
#include "gaugeforge/errors.hpp"
#include "gaugeforge/expr.hpp"

using namespace gaugeforge;
using json = nlohmann::json;
namespace fs = std::filesystem;

namespace {

const char* kPrimaryConfig = R"ini(
[system]
omega0 = 1
x0 = 1
v0 = 0
t_end = 10
dt = 1e-3

[gauge]
f1 = "0"
f2 = "0.5"
f4 = "0"
f6 = "1"
)ini";

std::string config_key(const std::function<void()>& call) {
    try {
        call();
    } catch (const ConfigError& e) {
        return e.key();
    }
    return "<no error>";
}

fs::path fresh_dir(const char* leaf) {
    fs::path dir = fs::temp_directory_path() / leaf;
    fs::remove_all(dir);
    fs::create_directories(dir);
    return dir;
}

std::string slurp(const fs::path& path) {
    std::ifstream in(path, std::ios::binary);
    REQUIRE(in.good());
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

std::vector<std::array<double, 6>> read_csv(const fs::path& path) {
    std::ifstream in(path);
    REQUIRE(in.good());
    std::string line;
    REQUIRE(std::getline(in, line));
    REQUIRE(line == "t,x,v,E,H,balance_residual");
    std::vector<std::array<double, 6>> rows;
    while (std::getline(in, line)) {
        std::array<double, 6> row{};
        const char* p = line.c_str();
        for (int i = 0; i < 6; ++i) {
            char* end = nullptr;
            row[i] = std::strtod(p, &end);
            REQUIRE(end != p);
            p = (*end == ',') ? end + 1 : end;
        }
        rows.push_back(row);
    }
    return rows;
}

}  // namespace

TEST_CASE("config parsing fills every section") {
    RunConfig cfg = parse_config(R"ini(
# full configuration          ; both comment styles work
[system]
mode = pendulum
g = 19.6
L_pend = 4.9                  # => stiffness 4
x0 = 0.2
v0 = -0.1
t0 = 1
t_end = 5
dt = 1e-2
force = "F_0*sin(nu*t)"
shift = "0.5*t"

[constants]
F_0 = 0.25
nu = 2

[gauge]
f1 = "0"
f2 = "F_0*t"
f4 = "0"
f6 = "1"

[output]
dir = "runs/a b"
format = json
trajectory = "osc"

[tolerances]
null_tol = 1e-8
balance_tol = 1e-4
samples = 250

[helmholtz]
ode = "a + 4*x"
)ini");

    CHECK(cfg.has_system);
    CHECK(cfg.system.mode == OscillatorConfig::Mode::Pendulum);
    CHECK(*cfg.system.g == 19.6);
    CHECK(*cfg.system.L_pend == 4.9);
    CHECK(!cfg.system.omega0);
    CHECK(cfg.system.x0 == 0.2);
    CHECK(cfg.system.v0 == -0.1);
    CHECK(cfg.system.t0 == 1.0);
    CHECK(cfg.system.t_end == 5.0);
    CHECK(cfg.system.dt == 1e-2);
    REQUIRE(cfg.force);
    CHECK(to_string(*cfg.force) == "F_0*sin(nu*t)");
    REQUIRE(cfg.shift);
    CHECK(to_string(*cfg.shift) == "0.5*t");

    CHECK(cfg.constants == Bindings{{"F_0", 0.25}, {"nu", 2.0}});
    REQUIRE(cfg.gauge);
    CHECK(to_string(cfg.gauge->f2) == "F_0*t");

    CHECK(cfg.out_dir == "runs/a b");
    CHECK(cfg.format == "json");
    CHECK(cfg.trajectory_stem == "osc");
    CHECK(cfg.null_tol == 1e-8);
    CHECK(cfg.balance_tol == 1e-4);
    CHECK(cfg.samples == 250);
    REQUIRE(cfg.ode);
    // Config expressions are stored as written; reports canonicalize.
    CHECK(to_string(*cfg.ode) == "a + 4*x");
}

TEST_CASE("config defaults apply when keys are absent") {
    RunConfig cfg = parse_config("[system]\nomega0 = 2\n");
    CHECK(cfg.has_system);
    CHECK(cfg.system.x0 == 0.0);
    CHECK(cfg.system.v0 == 0.0);
    CHECK(cfg.system.t0 == 0.0);
    CHECK(cfg.system.t_end == 10.0);
    CHECK(cfg.system.dt == 1e-3);
    CHECK(cfg.system.mode == OscillatorConfig::Mode::Oscillator);
    CHECK(!cfg.gauge);
    CHECK(!cfg.force);
    CHECK(!cfg.ode);
    CHECK(cfg.out_dir == ".");
    CHECK(cfg.format == "csv");
    CHECK(cfg.trajectory_stem == "trajectory");
    CHECK(cfg.null_tol == 1e-9);
    CHECK(cfg.balance_tol == 1e-5);
    CHECK(cfg.samples == 1000);

    RunConfig empty = parse_config("");
    CHECK(!empty.has_system);
}

TEST_CASE("constants may be declared after their first use") {
    RunConfig cfg = parse_config(R"ini(
[gauge]
f1 = "0"
f2 = "C2"
f4 = "0"
f6 = "C6"

[constants]
C2 = 0.5
C6 = 1
)ini");
    REQUIRE(cfg.gauge);
    CHECK(to_string(cfg.gauge->f2) == "C2");
    CHECK(cfg.constants.at("C6") == 1.0);
}

TEST_CASE("config errors name the offending key") {
    CHECK_THROWS_AS(parse_config("[nosuch]\n"), ConfigError);
    CHECK_THROWS_AS(parse_config("[system]\nbogus = 1\n"), ConfigError);
    CHECK(config_key([] { parse_config("[system]\nbogus = 1\n"); }) ==
          "system.bogus");

    CHECK_THROWS_AS(parse_config("[system]\nx0 = 1\nx0 = 2\n"), ConfigError);
    CHECK_THROWS_AS(parse_config("[system]\njust words\n"), ConfigError);
    CHECK_THROWS_AS(parse_config("x0 = 1\n"), ConfigError);
    CHECK_THROWS_AS(parse_config("[system\nx0 = 1\n"), ConfigError);
    CHECK_THROWS_AS(parse_config("[system]\nforce = \"sin(t)\nx0 = 1\n"),
                    ConfigError);
    CHECK_THROWS_AS(parse_config("[system]\nx0 = twelve\n"), ConfigError);
    CHECK_THROWS_AS(parse_config("[system]\nmode = spring\n"), ConfigError);
    CHECK_THROWS_AS(parse_config("[output]\nformat = xml\n"), ConfigError);

    CHECK(config_key([] { parse_config("[tolerances]\nnull_tol = 0\n"); }) ==
          "tolerances.null_tol");
    CHECK_THROWS_AS(parse_config("[tolerances]\nsamples = 2.5\n"),
                    ConfigError);
    CHECK_THROWS_AS(parse_config("[tolerances]\nsamples = -3\n"), ConfigError);
    CHECK_THROWS_AS(parse_config("[constants]\nt = 1\n"), ConfigError);

    // Expressions must parse, be quoted, and only use declared constants.
    CHECK(config_key([] {
        parse_config("[gauge]\nf1 = \"0\"\nf2 = \"C2\"\nf4 = \"0\"\nf6 = "
                     "\"0\"\n");
    }) == "gauge.f2");
    CHECK(config_key([] { parse_config("[system]\nforce = sin(t)\n"); }) ==
          "system.force");
    CHECK(config_key([] { parse_config("[system]\nforce = \"sin(\"\n"); }) ==
          "system.force");
    CHECK(config_key([] {
        parse_config("[gauge]\nf1 = \"0\"\nf2 = \"1\"\nf4 = \"0\"\n");
    }) == "gauge.f6");

    // Gauge entries must be functions of time alone.
    CHECK_THROWS_AS(
        parse_config(
            "[gauge]\nf1 = \"0\"\nf2 = \"x\"\nf4 = \"0\"\nf6 = \"0\"\n"),
        ConfigError);
}

TEST_CASE("load_config reads files and reports missing ones") {
    fs::path dir = fresh_dir("gaugeforge_cli_cfg");
    fs::path file = dir / "run.ini";
    std::ofstream(file) << kPrimaryConfig;

    RunConfig cfg = load_config(file.string());
    CHECK(cfg.has_system);
    REQUIRE(cfg.gauge);

    CHECK_THROWS_AS(load_config((dir / "absent.ini").string()), ConfigError);
    fs::remove_all(dir);
}

TEST_CASE("verify-null certifies the gauge and refutes impostors") {
    RunConfig cfg = parse_config(kPrimaryConfig);
    CommandOptions opt;

    std::ostringstream out;
    CHECK(cmd_verify_null(cfg, opt, out) == 0);
    json j = json::parse(out.str());
    CHECK(j["verdict"] == "certified_symbolic");
    CHECK(j["max_residual"] == 0.0);
    CHECK(j["witness"].is_null());
    CHECK(j["config"]["gauge"]["f2"] == "0.5");
    CHECK(j["config"]["tolerances"]["samples"] == 1000);

    opt.lagrangian = "x*t";
    std::ostringstream refuted;
    CHECK(cmd_verify_null(cfg, opt, refuted) == 1);
    json r = json::parse(refuted.str());
    CHECK(r["verdict"] == "not_null");
    CHECK(r["residual"] == "-t");
    REQUIRE(r["witness"].is_object());
    // The residual is -t, so the witness value must be minus the witness t.
    CHECK(std::abs(double(r["witness"]["t"]) + double(r["witness_value"])) <=
          1e-12);

    opt.lagrangian.reset();
    CHECK_THROWS_AS(cmd_verify_null(RunConfig{}, opt, out), ConfigError);

    // Constants declared in the config are usable in the override.
    RunConfig with_consts = parse_config("[constants]\nC2 = 0.5\n");
    opt.lagrangian = "C2*v*t + C2*x";
    std::ostringstream certified;
    CHECK(cmd_verify_null(with_consts, opt, certified) == 0);
    CHECK(json::parse(certified.str())["verdict"] == "certified_symbolic");

    opt.lagrangian = "C9*x";
    CHECK_THROWS_AS(cmd_verify_null(with_consts, opt, out), ConfigError);
}

TEST_CASE("derive-force emits canonical strings and roles") {
    CommandOptions opt;

    RunConfig constant = parse_config(kPrimaryConfig);
    std::ostringstream out1;
    CHECK(cmd_derive_force(constant, opt, out1) == 0);
    json j1 = json::parse(out1.str());
    CHECK(j1["force"] == "0.5");
    CHECK(j1["shift"] == "1");
    REQUIRE(j1["classification"].size() == 4);
    CHECK(j1["classification"][0]["role"] == "inert");
    CHECK(j1["classification"][1]["role"] == "F-gauge");
    CHECK(j1["classification"][1]["partial"] == "phi_g2");
    CHECK(j1["classification"][2]["role"] == "inert");
    CHECK(j1["classification"][3]["role"] == "E-gauge");
    CHECK(j1["classification"][3]["contributes_to_force"] == false);

    RunConfig zero = parse_config(
        "[gauge]\nf1 = \"0\"\nf2 = \"0\"\nf4 = \"0\"\nf6 = \"0\"\n");
    std::ostringstream out2;
    CHECK(cmd_derive_force(zero, opt, out2) == 0);
    json j2 = json::parse(out2.str());
    CHECK(j2["force"] == "0");
    CHECK(j2["shift"] == "0");
    for (const auto& entry : j2["classification"])
        CHECK(entry["role"] == "inert");

    RunConfig sinusoid = parse_config(
        "[gauge]\nf1 = \"0\"\nf2 = \"sin(2*t)\"\nf4 = \"0\"\nf6 = \"0\"\n");
    std::ostringstream out3;
    CHECK(cmd_derive_force(sinusoid, opt, out3) == 0);
    json j3 = json::parse(out3.str());
    CHECK(j3["force"] == "2*t*cos(2*t) + sin(2*t)");
    // The string is the canonical form of f2 + f2'*t.
    CHECK(equal(simplify(parse(j3["force"].get<std::string>())),
                simplify(parse("sin(2*t) + 2*t*cos(2*t)"))));

    CHECK_THROWS_AS(cmd_derive_force(RunConfig{}, opt, out3), ConfigError);
}

TEST_CASE("simulate summary carries the contract keys") {
    fs::path dir = fresh_dir("gaugeforge_cli_sim");
    CommandOptions opt;
    opt.out_dir = dir.string();

    RunConfig undriven = parse_config("[system]\nomega0 = 1\nx0 = 1\n");
    std::ostringstream out;
    CHECK(cmd_simulate(undriven, opt, out) == 0);
    json j = json::parse(out.str());
    CHECK(j["omega"] == 1.0);
    CHECK(j["oscillatory"] == true);
    CHECK(double(j["max_energy_drift"]) <= 1e-8);
    CHECK(double(j["max_balance_residual"]) <= 1e-5);
    CHECK(j["balance_ok"] == true);
    CHECK(j["samples"] == 10001);
    CHECK(j["config"]["output"]["dir"] == dir.string());
    CHECK(!j.contains("force"));

    auto rows = read_csv(dir / "trajectory.csv");
    CHECK(rows.size() == 10001);

    fs::remove_all(dir);
}

TEST_CASE("simulate conserves the gauge energy but not the bare H") {
    fs::path dir = fresh_dir("gaugeforge_cli_gauge");
    CommandOptions opt;
    opt.out_dir = dir.string();

    RunConfig cfg = parse_config(kPrimaryConfig);
    std::ostringstream out;
    CHECK(cmd_simulate(cfg, opt, out) == 0);
    json j = json::parse(out.str());
    CHECK(j["force"] == "0.5");
    CHECK(j["shift"] == "1");
    CHECK(double(j["max_energy_drift"]) <= 1e-6);
    CHECK(double(j["max_balance_residual"]) <= 1e-5);

    auto rows = read_csv(dir / "trajectory.csv");
    double h_drift = 0.0;
    for (const auto& row : rows)
        h_drift = std::max(h_drift, std::abs(row[4] - rows.front()[4]));
    CHECK(h_drift >= 0.1);

    fs::remove_all(dir);
}

TEST_CASE("simulate reproduces the resonant amplitude") {
    fs::path dir = fresh_dir("gaugeforge_cli_resonant");
    CommandOptions opt;
    opt.out_dir = dir.string();

    RunConfig cfg = parse_config(R"ini(
[system]
omega0 = 1
x0 = 0
v0 = 0
t_end = 20
dt = 1e-3
force = "F_0*sin(t)"

[constants]
F_0 = 0.2
)ini");
    std::ostringstream out;
    CHECK(cmd_simulate(cfg, opt, out) == 0);

    auto rows = read_csv(dir / "trajectory.csv");
    const double want =
        0.1 * std::abs(std::sin(20.0) - 20.0 * std::cos(20.0));
    CHECK(std::abs(std::abs(rows.back()[1]) - want) <= 1e-4);

    fs::remove_all(dir);
}

TEST_CASE("simulate output is byte-identical across runs") {
    fs::path dir1 = fresh_dir("gaugeforge_cli_det1");
    fs::path dir2 = fresh_dir("gaugeforge_cli_det2");
    RunConfig cfg = parse_config(kPrimaryConfig);

    CommandOptions opt;
    std::ostringstream out1, out2;
    opt.out_dir = dir1.string();
    CHECK(cmd_simulate(cfg, opt, out1) == 0);
    opt.out_dir = dir2.string();
    CHECK(cmd_simulate(cfg, opt, out2) == 0);

    CHECK(slurp(dir1 / "trajectory.csv") == slurp(dir2 / "trajectory.csv"));
    // Summaries differ only in the echoed output directory.
    json j1 = json::parse(out1.str());
    json j2 = json::parse(out2.str());
    j1["trajectory"] = j2["trajectory"] = "";
    j1["config"]["output"]["dir"] = j2["config"]["output"]["dir"] = "";
    CHECK(j1 == j2);

    fs::remove_all(dir1);
    fs::remove_all(dir2);
}

TEST_CASE("simulate writes json trajectories on request") {
    fs::path dir = fresh_dir("gaugeforge_cli_json");
    CommandOptions opt;
    opt.out_dir = dir.string();
    opt.format = "json";

    RunConfig cfg = parse_config("[system]\nomega0 = 1\nx0 = 1\nt_end = 1\n");
    std::ostringstream out;
    CHECK(cmd_simulate(cfg, opt, out) == 0);
    json summary = json::parse(out.str());
    CHECK(summary["config"]["output"]["format"] == "json");

    json traj = json::parse(slurp(dir / "trajectory.json"));
    const std::size_t n = summary["samples"];
    for (const char* key : {"t", "x", "v", "E", "H", "balance_residual"}) {
        REQUIRE(traj.contains(key));
        CHECK(traj[key].size() == n);
    }
    CHECK(traj["t"].back() == 1.0);

    fs::remove_all(dir);
}

TEST_CASE("simulate rejects ambiguous or impossible configs") {
    CommandOptions opt;
    std::ostringstream out;

    CHECK_THROWS_AS(cmd_simulate(RunConfig{}, opt, out), ConfigError);

    RunConfig both = parse_config(R"ini(
[system]
omega0 = 1
force = "sin(t)"

[gauge]
f1 = "0"
f2 = "1"
f4 = "0"
f6 = "0"
)ini");
    CHECK_THROWS_AS(cmd_simulate(both, opt, out), ConfigError);

    RunConfig shift_only =
        parse_config("[system]\nomega0 = 1\nshift = \"1\"\n");
    CHECK_THROWS_AS(cmd_simulate(shift_only, opt, out), ConfigError);

    RunConfig blowup = parse_config(
        "[system]\nc = -25\nx0 = 1e307\nt_end = 10\ndt = 1e-2\n");
    CommandOptions tmp_out;
    tmp_out.out_dir = fresh_dir("gaugeforge_cli_blow").string();
    CHECK_THROWS_AS(cmd_simulate(blowup, tmp_out, out), NonFiniteState);
    fs::remove_all(tmp_out.out_dir.value());
}

TEST_CASE("check-helmholtz reads the ode from flag, block or system") {
    CommandOptions opt;

    opt.ode = "a + 4*x";
    std::ostringstream out1;
    CHECK(cmd_check_helmholtz(RunConfig{}, opt, out1) == 0);
    json j1 = json::parse(out1.str());
    CHECK(j1["overall"] == true);
    REQUIRE(j1["conditions"].size() == 3);
    CHECK(j1["conditions"][0]["name"] == "nondegeneracy");

    opt.ode.reset();
    RunConfig damped = parse_config("[helmholtz]\node = \"a + 0.3*v + 4*x\"\n");
    std::ostringstream out2;
    CHECK(cmd_check_helmholtz(damped, opt, out2) == 1);
    json j2 = json::parse(out2.str());
    CHECK(j2["overall"] == false);
    CHECK(j2["conditions"][1]["name"] == "first-derivative");
    CHECK(j2["conditions"][1]["passed"] == false);

    RunConfig primary = parse_config(kPrimaryConfig);
    std::ostringstream out3;
    CHECK(cmd_check_helmholtz(primary, opt, out3) == 0);
    CHECK(json::parse(out3.str())["ode"] == "x + a - 0.5");

    CHECK_THROWS_AS(cmd_check_helmholtz(RunConfig{}, opt, out3), ConfigError);

    opt.ode = "v + x";
    CHECK_THROWS_AS(cmd_check_helmholtz(RunConfig{}, opt, out3),
                    NotSecondOrder);
}

TEST_CASE("report_error follows the exit-code contract") {
    std::ostringstream err;
    CHECK(report_error(ConfigError("bad", "system.dt"), err) == 2);
    json j = json::parse(err.str());
    CHECK(j["key"] == "system.dt");

    std::ostringstream err2;
    CHECK(report_error(NonFiniteState("overflow", 7), err2) == 3);
    CHECK(json::parse(err2.str())["step"] == 7);

    std::ostringstream err3;
    CHECK(report_error(DomainError("division by zero"), err3) == 3);
    std::ostringstream err4;
    CHECK(report_error(InvalidParameter("dt"), err4) == 2);
    std::ostringstream err5;
    CHECK(report_error(std::runtime_error("misc"), err5) == 2);
}

TEST_CASE("sampling seed is honored and deterministic") {
    // A Lagrangian that is null numerically but not structurally.
    RunConfig cfg;
    CommandOptions opt;
    opt.lagrangian = "x*(sin(2*t) - 2*sin(t)*cos(t))";

    opt.seed = 12345;
    std::ostringstream a, b;
    CHECK(cmd_verify_null(cfg, opt, a) == 0);
    CHECK(cmd_verify_null(cfg, opt, b) == 0);
    CHECK(a.str() == b.str());
    CHECK(json::parse(a.str())["verdict"] == "certified_numeric");

    opt.seed = 99999;
    std::ostringstream c;
    CHECK(cmd_verify_null(cfg, opt, c) == 0);
    CHECK(json::parse(c.str())["verdict"] == "certified_numeric");
}

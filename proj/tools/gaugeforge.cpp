#include <algorithm>
#include <atomic>
#include <cerrno>
#include <cstdlib>
#include <iostream>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include <CLI11.hpp>

#include "gaugeforge/commands.hpp"
#include "gaugeforge/config.hpp"
#include "gaugeforge/errors.hpp"

namespace {

std::uint64_t seed_from_environment() {
    const char* raw = std::getenv("GAUGEFORGE_SEED");
    if (!raw || !*raw) return gaugeforge::kDefaultSampleSeed;
    errno = 0;
    char* end = nullptr;
    const unsigned long long value = std::strtoull(raw, &end, 10);
    if (errno != 0 || end == raw || *end != '\0')
        throw gaugeforge::ConfigError(
            "GAUGEFORGE_SEED must be an unsigned integer, got '" +
                std::string(raw) + "'",
            "GAUGEFORGE_SEED");
    return value;
}

}  // namespace

int main(int argc, char** argv) {
    using namespace gaugeforge;

    CLI::App app{"gauge-function pipeline for the driven oscillator"};
    app.require_subcommand(1);

    std::vector<std::string> config_paths;
    std::string out_dir, format, lagrangian, ode;
    int jobs = 1;

    auto add_common = [&](CLI::App* cmd) {
        cmd->add_option("--config", config_paths,
                        "run configuration file (INI-like sections); may be "
                        "repeated to sweep several configurations")
            ->expected(-1);
        cmd->add_option("--out", out_dir,
                        "output directory, overrides output.dir");
        cmd->add_option("--format", format,
                        "trajectory file format, overrides output.format")
            ->check(CLI::IsMember({"csv", "json"}));
        cmd->add_option("--jobs", jobs, "parallel workers for sweep runs")
            ->check(CLI::PositiveNumber);
    };

    CLI::App* verify = app.add_subcommand(
        "verify-null",
        "certify that the gauge's generated Lagrangian changes no dynamics");
    add_common(verify);
    CLI::Option* lagrangian_opt = verify->add_option(
        "--lagrangian", lagrangian,
        "certify this Lagrangian expression instead of the gauge block");

    CLI::App* derive = app.add_subcommand(
        "derive-force", "extract F(t) and G(t) from the gauge block");
    add_common(derive);

    CLI::App* run = app.add_subcommand(
        "simulate",
        "integrate the configured system and write the trajectory");
    add_common(run);

    CLI::App* helmholtz = app.add_subcommand(
        "check-helmholtz",
        "test a second-order equation of motion against the Helmholtz "
        "conditions");
    add_common(helmholtz);
    CLI::Option* ode_opt = helmholtz->add_option(
        "--ode", ode, "residual expression of the equation of motion");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e);
        return rc == 0 ? 0 : 2;
    }

    CommandOptions opt;
    try {
        opt.seed = seed_from_environment();
    } catch (const std::exception& e) {
        return report_error(e, std::cerr);
    }
    opt.jobs = jobs;
    if (!out_dir.empty()) opt.out_dir = out_dir;
    if (!format.empty()) opt.format = format;
    if (lagrangian_opt->count() > 0) opt.lagrangian = lagrangian;
    if (ode_opt->count() > 0) opt.ode = ode;

    auto run_one = [&](const std::string& path, std::ostream& out,
                       std::ostream& err) -> int {
        try {
            RunConfig cfg = path.empty() ? RunConfig{} : load_config(path);
            if (app.got_subcommand(verify))
                return cmd_verify_null(cfg, opt, out);
            if (app.got_subcommand(derive))
                return cmd_derive_force(cfg, opt, out);
            if (app.got_subcommand(run)) return cmd_simulate(cfg, opt, out);
            return cmd_check_helmholtz(cfg, opt, out);
        } catch (const std::exception& e) {
            return report_error(e, err);
        }
    };

    if (config_paths.size() <= 1) {
        const std::string path = config_paths.empty() ? "" : config_paths[0];
        return run_one(path, std::cout, std::cerr);
    }

    // Sweep: run each configuration independently, up to --jobs at a time.
    // Buffered output is flushed in input order so runs are reproducible.
    const std::size_t n = config_paths.size();
    std::vector<std::ostringstream> outs(n), errs(n);
    std::vector<int> codes(n, 0);
    std::atomic<std::size_t> cursor{0};
    auto worker = [&] {
        for (std::size_t i = cursor.fetch_add(1); i < n;
             i = cursor.fetch_add(1))
            codes[i] = run_one(config_paths[i], outs[i], errs[i]);
    };
    const std::size_t workers =
        std::min<std::size_t>(static_cast<std::size_t>(jobs), n);
    std::vector<std::thread> pool;
    for (std::size_t w = 1; w < workers; ++w) pool.emplace_back(worker);
    worker();
    for (std::thread& th : pool) th.join();

    for (std::size_t i = 0; i < n; ++i) {
        std::cout << outs[i].str();
        std::cerr << errs[i].str();
    }
    return *std::max_element(codes.begin(), codes.end());
}

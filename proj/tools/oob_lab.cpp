#include "ooblab/errors.hpp"
#include "ooblab/harness/experiments.hpp"
#include "ooblab/rt/server.hpp"

#include <CLI11.hpp>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>

namespace fs = std::filesystem;
using namespace ooblab;

namespace {

constexpr int kConfigError = 2;
constexpr int kCheckFailed = 3;
constexpr int kRuntimeError = 1;

// Picks one variant by name; with no name the base scenario.
harness::Scenario pick(const std::string& path, const std::string& variant) {
    auto all = harness::load_scenario_file(path);
    const std::string want = variant.empty() ? "base" : variant;
    for (auto& [name, sc] : all)
        if (name == want)
            return sc;
    throw ConfigError("variants", "no variant named '" + want + "'");
}

int cmd_run(const std::string& path, const std::string& out_dir, std::optional<std::uint64_t> seed,
            const std::string& variant, bool check) {
    auto all = harness::load_scenario_file(path);
    bool failed = false;
    bool matched = false;
    for (auto& [name, sc] : all) {
        if (!variant.empty() && name != variant)
            continue;
        matched = true;
        if (seed)
            sc.seed = *seed;
        const auto out = harness::run(sc, name);
        const fs::path dir = all.size() > 1 ? fs::path(out_dir) / name : fs::path(out_dir);
        harness::write_outputs(out, dir);
        const auto& r = out.report;
        std::printf("%s[%s] theta=%.4f %s omega_max=%.4f omega_mean=%.4f ratio=%.4f active=%.2fs -> %s\n",
                    r.scenario.c_str(), name.c_str(), r.theta_final, r.units.c_str(), r.omega_max, r.omega_mean,
                    r.ratio, r.active_duration_s, dir.string().c_str());
        if (check) {
            for (const auto& c : harness::evaluate_checks(r, sc.checks)) {
                std::printf("  check %s: %.6g vs %.6g %s\n", c.check.metric.c_str(), c.value, c.check.target,
                            c.pass ? "ok" : "FAILED");
                failed = failed || !c.pass;
            }
        }
    }
    if (!matched)
        throw ConfigError("variants", "no variant named '" + variant + "'");
    return failed ? kCheckFailed : 0;
}

int cmd_sweep(const std::string& path, const std::string& variant, const std::string& out_file) {
    const auto sc = pick(path, variant);
    if (sc.defense_matrix.empty())
        throw ConfigError("defense_matrix", "at least one defense is required");
    const auto rows = harness::sweep_defense_matrix(sc, sc.defense_matrix);
    std::ofstream file;
    if (!out_file.empty()) {
        file.open(out_file);
        if (!file)
            throw std::runtime_error("cannot write " + out_file);
    }
    std::ostream& out = out_file.empty() ? std::cout : file;
    out << "defense,abs_theta,attenuation_db,relative\n";
    char line[256];
    for (const auto& r : rows) {
        std::snprintf(line, sizeof line, "%s,%.9g,%.6g,%.6g\n", r.name.c_str(), r.abs_theta, r.attenuation_db,
                      r.relative);
        out << line;
    }
    return 0;
}

int cmd_estimate(const std::string& path, const std::string& variant) {
    const auto est = harness::estimate_sample_rate(pick(path, variant));
    std::printf("fs_hz=%.4f residual_hz=%.4f drift_flagged=%s dc_aliases=", est.fs_hz, est.residual_hz,
                est.drift_flagged ? "yes" : "no");
    for (std::size_t i = 0; i < est.dc_aliases.size(); ++i)
        std::printf("%s%.2f", i ? "," : "", est.dc_aliases[i]);
    std::printf("\n");
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Out-of-band signal injection lab"};
    app.require_subcommand(1);

    std::string scenario, variant, out_dir = "out", out_file, mode = "non_invasive", host = "127.0.0.1";
    std::optional<std::uint64_t> seed;
    bool check = false;

    auto* run = app.add_subcommand("run", "Run a scenario and write report.json plus CSVs");
    run->add_option("scenario", scenario, "Scenario file")->required();
    run->add_option("--out", out_dir, "Output directory")->capture_default_str();
    run->add_option("--seed", seed, "Override the scenario seed");
    run->add_option("--variant", variant, "Run one named variant (default: all)");
    run->add_flag("--check", check, "Evaluate the scenario's checks; exit 3 on failure");

    auto* sweep = app.add_subcommand("sweep-defenses", "Tabulate accumulated |theta| per defense");
    sweep->add_option("scenario", scenario, "Scenario file")->required();
    sweep->add_option("--variant", variant, "Variant to use as the base");
    sweep->add_option("--out", out_file, "Write the CSV table here instead of stdout");

    auto* est = app.add_subcommand("estimate-fs", "Infer the sensor sample rate from DC-like aliases");
    est->add_option("scenario", scenario, "Scenario file")->required();
    est->add_option("--variant", variant, "Variant to use");

    rt::ServerOptions sopt;
    std::string ui_dir, log_path;
    double max_wall = 0.0;
    auto* serve = app.add_subcommand("serve", "Expose a live session over WebSocket");
    serve->add_option("scenario", scenario, "Scenario file")->required();
    serve->add_option("--variant", variant, "Variant to serve");
    serve->add_option("--host", host, "Listen address")->capture_default_str();
    serve->add_option("--port", sopt.port, "TCP port (0 picks a free one)")->capture_default_str();
    serve->add_option("--realtime-factor", sopt.realtime_factor, "Simulated seconds per wall second")
        ->capture_default_str();
    serve->add_option("--mode", mode, "non_invasive or invasive")
        ->check(CLI::IsMember({"non_invasive", "invasive"}))
        ->capture_default_str();
    serve->add_option("--bundle-s", sopt.session.bundle_s, "Simulated seconds per telemetry frame")
        ->capture_default_str();
    serve->add_option("--with-ui", ui_dir, "Serve static console assets from this directory")
        ->check(CLI::ExistingDirectory);
    serve->add_option("--command-log", log_path, "Record applied commands (JSON lines)");
    serve->add_option("--max-wall-s", max_wall, "Stop after this many wall seconds");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        // Usage mistakes are configuration errors too; --help stays at 0.
        const int code = app.exit(e);
        return code == 0 ? 0 : kConfigError;
    }

    try {
        if (*run)
            return cmd_run(scenario, out_dir, seed, variant, check);
        if (*sweep)
            return cmd_sweep(scenario, variant, out_file);
        if (*est)
            return cmd_estimate(scenario, variant);
        if (*serve) {
            sopt.host = host;
            sopt.session.mode = harness::attack_mode_from_string(mode);
            if (!ui_dir.empty())
                sopt.ui_dir = ui_dir;
            if (!log_path.empty())
                sopt.command_log = log_path;
            if (max_wall > 0.0)
                sopt.max_wall_s = max_wall;
            rt::Server server(pick(scenario, variant), sopt);
            server.bind();
            std::printf("listening on ws://%s:%u/\n", host.c_str(), static_cast<unsigned>(server.port()));
            std::fflush(stdout);
            server.run();
            return 0;
        }
    } catch (const ConfigError& e) {
        std::fprintf(stderr, "config error: %s\n", e.what());
        return kConfigError;
    } catch (const nlohmann::json::exception& e) {
        std::fprintf(stderr, "config error: %s\n", e.what());
        return kConfigError;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return kRuntimeError;
    }
    return 0;
}

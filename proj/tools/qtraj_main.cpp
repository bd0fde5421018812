// Command-line driver: trajectory | fisher | sweep | qfi subcommands over a
// shared experiment configuration. Exit codes: 0 success, 2 configuration
// error, 3 numerical failure.
#include <cstdint>
#include <cstdio>
#include <exception>
#include <filesystem>
#include <fstream>
#include <functional>
#include <string>

#include "CLI11.hpp"
#include "json.hpp"

#include "qtraj/config.hpp"
#include "qtraj/errors.hpp"
#include "qtraj/experiment.hpp"
#include "qtraj/log.hpp"

namespace {

/// Machine-readable failure record: always on stderr, best-effort copy in
/// <out_dir>/error.json.
void emit_error_record(const std::string& kind, const std::string& message, int exit_code,
                       const std::string& out_dir) {
    nlohmann::json record = {
        {"error", {{"type", kind}, {"message", message}, {"exit_code", exit_code}}}};
    std::fprintf(stderr, "%s\n", record.dump().c_str());
    if (out_dir.empty()) return;
    std::error_code ec;
    std::filesystem::create_directories(out_dir, ec);
    if (ec) return;
    std::ofstream f(std::filesystem::path(out_dir) / "error.json", std::ios::trunc);
    if (f) f << record.dump(2) << '\n';
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"quantum-trajectory simulator and Fisher-information toolkit"};
    app.require_subcommand(1);

    std::string config_path;
    std::uint64_t seed_override = 0;
    std::string out_override;
    int workers_override = 1;

    const auto add_common = [&](CLI::App* sub) {
        sub->add_option("--config", config_path, "config file (flat key=value or JSON)")
            ->check(CLI::ExistingFile);
        sub->add_option("--seed", seed_override, "master seed override");
        sub->add_option("--out", out_override, "output directory override");
        sub->add_option("--workers", workers_override, "worker thread count override")
            ->check(CLI::PositiveNumber);
    };

    CLI::App* cmd_trajectory =
        app.add_subcommand("trajectory", "simulate one monitored trajectory (trajectory.csv)");
    CLI::App* cmd_fisher = app.add_subcommand(
        "fisher", "trajectory ensemble -> Fisher information vs time, with benchmark curve");
    CLI::App* cmd_sweep =
        app.add_subcommand("sweep", "Fisher-information ensembles for sigma_x/sigma_y/sigma_z");
    CLI::App* cmd_qfi = app.add_subcommand("qfi", "benchmark information curve only (qfi.csv)");
    for (CLI::App* sub : {cmd_trajectory, cmd_fisher, cmd_sweep, cmd_qfi}) add_common(sub);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    CLI::App* active = cmd_trajectory;
    for (CLI::App* sub : {cmd_fisher, cmd_sweep, cmd_qfi})
        if (sub->parsed()) active = sub;

    qtraj::ExperimentConfig cfg;
    std::string stage = "configuration";
    try {
        if (!config_path.empty()) {
            cfg = qtraj::load_config(config_path);
        } else {
            cfg.finalize_defaults();
        }
        if (active->count("--seed")) cfg.seed = seed_override;
        if (active->count("--out")) cfg.out_dir = out_override;
        if (active->count("--workers")) cfg.workers = workers_override;
        cfg.validate();

        stage = active->get_name();
        if (active == cmd_trajectory) {
            qtraj::run_trajectory_demo(cfg);
        } else if (active == cmd_fisher) {
            qtraj::run_fisher_experiment(cfg);
        } else if (active == cmd_sweep) {
            qtraj::run_operator_sweep(cfg);
        } else {
            qtraj::run_qfi_curve(cfg);
        }
        return 0;
    } catch (const qtraj::NumericalError& e) {
        qtraj::logf(qtraj::LogLevel::error, "%s failed: %s", stage.c_str(), e.what());
        emit_error_record("numerical", e.what(), 3, cfg.out_dir);
        return 3;
    } catch (const std::invalid_argument& e) {  // ConfigError and kin
        qtraj::logf(qtraj::LogLevel::error, "%s failed: %s", stage.c_str(), e.what());
        emit_error_record("config", e.what(), 2, cfg.out_dir);
        return 2;
    } catch (const std::exception& e) {
        qtraj::logf(qtraj::LogLevel::error, "%s failed: %s", stage.c_str(), e.what());
        emit_error_record("internal", e.what(), 3, cfg.out_dir);
        return 3;
    }
}

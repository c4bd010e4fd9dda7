#include <cstdio>
#include <exception>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "splitquat/experiments.hpp"
#include "splitquat/geometry.hpp"

int main(int argc, char** argv) {
    CLI::App app{"splitquat experiment runner"};
    app.require_subcommand(1);

    CLI::App* run_cmd = app.add_subcommand("run", "run a named experiment");
    std::string config_path, experiment, out_path, format = "csv";
    std::vector<std::string> overrides;
    int threads = 0;
    run_cmd->add_option("--config", config_path, "config file (key=value lines)");
    run_cmd->add_option("--experiment", experiment, "experiment name");
    run_cmd->add_option("--set", overrides, "parameter override key=value (repeatable)");
    run_cmd->add_option("--out", out_path, "output file path");
    run_cmd->add_option("--format", format, "csv or json")
        ->check(CLI::IsMember({"csv", "json"}));
    run_cmd->add_option("--threads", threads, "worker thread cap (0 = hardware)");

    CLI::App* list_cmd = app.add_subcommand("list", "list experiment names");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e) == 0 ? 0 : 2;
    }

    if (list_cmd->parsed()) {
        for (const auto& name : sq::experiment_names()) std::printf("%s\n", name.c_str());
        return 0;
    }

    try {
        sq::ExperimentConfig cfg;
        if (!config_path.empty()) {
            cfg = sq::parse_config_file(config_path);
        } else if (!experiment.empty()) {
            cfg.experiment = experiment;
        } else {
            std::fprintf(stderr, "error: need --config or --experiment\n");
            return 2;
        }
        for (const auto& kv : overrides) {
            const auto eq = kv.find('=');
            if (eq == std::string::npos || eq == 0) {
                std::fprintf(stderr, "error: --set expects key=value, got '%s'\n", kv.c_str());
                return 2;
            }
            cfg.parameters[kv.substr(0, eq)] = kv.substr(eq + 1);
        }
        if (!out_path.empty()) cfg.output_path = out_path;
        if (run_cmd->count("--format") > 0 || cfg.format.empty()) cfg.format = format;
        if (threads > 0) sq::set_thread_count(threads);

        const sq::RunReport report = sq::run(cfg);
        if (!cfg.output_path.empty()) sq::emit(report, cfg.output_path, cfg.format);

        int failures = 0;
        for (const auto& row : report.rows) {
            const bool ok = row.abs_error <= row.tolerance;
            if (!ok) ++failures;
            std::printf("%-40s %s  err=%.3e  tol=%.3e\n", row.case_id.c_str(),
                        ok ? "ok  " : "FAIL", row.abs_error, row.tolerance);
        }
        std::printf("%s: %zu case(s), %d failure(s)\n", cfg.experiment.c_str(),
                    report.rows.size(), failures);
        return failures == 0 ? 0 : 1;
    } catch (const sq::ConfigError& e) {
        std::fprintf(stderr, "config error: %s\n", e.what());
        return 2;
    } catch (const sq::IoError& e) {
        std::fprintf(stderr, "io error: %s\n", e.what());
        return 2;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 2;
    }
}

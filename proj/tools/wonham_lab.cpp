// Command-line front end; talks to the library only through the C API.

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "wonham/wonham.h"

#ifndef WONHAM_ACCEPTANCE_BINARY
#define WONHAM_ACCEPTANCE_BINARY "wonham_acceptance"
#endif

namespace {

int report(wl_status status, const char* what) {
    std::fprintf(stderr, "wonham-lab: %s failed (%s): %s\n", what, wl_status_name(status), wl_last_error());
    return 2;
}

int finish_run(wl_run_result* result, const std::string& out_path) {
    wl_status st = wl_run_result_write_csv(result, out_path.c_str());
    if (st != WL_OK) {
        wl_run_result_destroy(result);
        return report(st, "writing results");
    }
    const size_t paths = wl_run_result_paths(result);
    const size_t violations = wl_run_result_violations(result);
    wl_run_result_destroy(result);
    std::printf("wrote %s (%zu paths, %zu bound violations)\n", out_path.c_str(), paths, violations);
    if (violations > 0) {
        std::fprintf(stderr, "wonham-lab: %zu bound violations; see the manifest\n", violations);
        return 1;
    }
    return 0;
}

int run_config(const std::string& config, const std::string& out, int workers, bool bounds_only) {
    wl_scenario* scenario = nullptr;
    wl_status st = wl_scenario_load_file(config.c_str(), &scenario);
    if (st != WL_OK) return report(st, "loading config");
    if (workers >= 0) wl_scenario_set_workers(scenario, workers);
    wl_run_result* result = nullptr;
    st = bounds_only ? wl_scenario_bounds(scenario, &result) : wl_scenario_run(scenario, &result);
    wl_scenario_destroy(scenario);
    if (st != WL_OK) return report(st, bounds_only ? "bounds" : "simulate");
    return finish_run(result, out);
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Wonham filter simulation and bound verification lab"};
    app.set_version_flag("--version", std::string(wl_version()));
    app.require_subcommand(1);

    std::string config;
    std::string out = "run.csv";
    int workers = -1;

    auto* simulate = app.add_subcommand("simulate", "Run a Monte Carlo scenario from a JSON config");
    simulate->add_option("--config", config, "Scenario config file")->required()->check(CLI::ExistingFile);
    simulate->add_option("--out", out, "Output CSV path (a .manifest.json is written beside it)");
    simulate->add_option("--workers", workers, "Worker threads (0: all cores)");

    std::string figure;
    std::string out_dir = "figures";
    bool paper_scale = false;
    auto* reproduce = app.add_subcommand("reproduce", "Regenerate a figure family as CSV");
    reproduce->add_option("--figure", figure, "fig1 | fig2:<n> | fig4:3 | fig4:6")->required();
    reproduce->add_option("--out", out_dir, "Output directory");
    reproduce->add_flag("--paper-scale", paper_scale, "300 paths instead of the desk-scale 100");
    reproduce->add_option("--workers", workers, "Worker threads (0: all cores)");

    auto* selftest = app.add_subcommand("selftest", "Run the acceptance suite");

    auto* bounds = app.add_subcommand("bounds", "Evaluate bounds on a stored trajectory CSV");
    bounds->add_option("--config", config, "Scenario config with trajectory_csv")->required()->check(CLI::ExistingFile);
    bounds->add_option("--out", out, "Output CSV path");

    CLI11_PARSE(app, argc, argv);

    if (simulate->parsed()) return run_config(config, out, workers, false);
    if (bounds->parsed()) return run_config(config, out, workers, true);
    if (reproduce->parsed()) {
        size_t violations = 0;
        const wl_status st = wl_reproduce_figure(figure.c_str(), out_dir.c_str(), paper_scale ? 1 : 0,
                                                 workers < 0 ? 0 : workers, &violations);
        if (st != WL_OK) return report(st, "reproduce");
        std::printf("%s: written to %s (%zu bound violations)\n", figure.c_str(), out_dir.c_str(), violations);
        return violations == 0 ? 0 : 1;
    }
    if (selftest->parsed()) {
        std::filesystem::path binary = WONHAM_ACCEPTANCE_BINARY;
        if (!std::filesystem::exists(binary)) {
            // Installed layout: look next to this executable.
            binary = std::filesystem::path(argv[0]).parent_path() / binary.filename();
        }
        if (!std::filesystem::exists(binary)) {
            std::fprintf(stderr, "wonham-lab: acceptance binary not found (%s)\n", binary.c_str());
            return 2;
        }
        const std::string cmd = "\"" + binary.string() + "\"";
        const int rc = std::system(cmd.c_str());
        return rc == 0 ? 0 : 1;
    }
    return 0;
}

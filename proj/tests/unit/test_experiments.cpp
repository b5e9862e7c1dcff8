#include <doctest.h>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "core/error.hpp"
#include "core/hilbert.hpp"
#include "experiments/config.hpp"
#include "experiments/csv.hpp"
#include "experiments/figures.hpp"
#include "experiments/scenario.hpp"

using namespace wonham;
using nlohmann::json;

namespace {

json small_config() {
    return json::parse(R"({
      "run_id": "unit",
      "model": {"explicit": [[-3, 1, 2], [1, -3, 2], [1.5, 1.5, -3]]},
      "sensor": {"explicit": [-1, 0, 1]},
      "mu": {"explicit": [0.3, 0.3, 0.4]},
      "nu": {"explicit": [0.2, 0.2, 0.6]},
      "approximate": {"fixture": "three_state"},
      "T": 0.5, "dt": 0.001, "n_paths": 4, "master_seed": 9,
      "bounds": ["deterministic", "pathwise_simple", "pathwise_subset", "ode", "expected", "robustness"],
      "output_points": 50
    })");
}

std::string csv_text(const RunResult& r) {
    std::ostringstream os;
    write_run_csv(r, os);
    return os.str();
}

std::filesystem::path scratch_dir(const std::string& name) {
    const auto dir = std::filesystem::temp_directory_path() / ("wonham_unit_" + name);
    std::filesystem::remove_all(dir);
    std::filesystem::create_directories(dir);
    return dir;
}

}  // namespace

TEST_CASE("config parsing and serialization") {
    const ScenarioConfig cfg = config_from_json(small_config());
    CHECK(cfg.horizon == 0.5);
    CHECK(cfg.approx_kind == ScenarioConfig::ApproxKind::Fixture);
    CHECK(cfg.wants(BoundRequest::Robustness));
    const ScenarioConfig again = config_from_json(config_to_json(cfg));
    CHECK(config_to_json(again) == config_to_json(cfg));

    json bad = small_config();
    bad["unknown_key"] = 1;
    CHECK_THROWS_AS(config_from_json(bad), Error);
    json no_model = small_config();
    no_model.erase("model");
    CHECK_THROWS_AS(config_from_json(no_model), Error);
    json bad_bound = small_config();
    bad_bound["bounds"] = {"nonsense"};
    CHECK_THROWS_AS(config_from_json(bad_bound), Error);

    const ResolvedScenario r = resolve(cfg);
    CHECK(r.q.n_states() == 3);
    CHECK(r.q_tilde.has_value());
    CHECK(r.grid.n_steps == 500);

    json mismatch = small_config();
    mismatch["sensor"] = {{"explicit", {1, 2}}};
    CHECK_THROWS_AS(resolve(config_from_json(mismatch)), Error);
}

TEST_CASE("runs are deterministic across worker counts") {
    ScenarioConfig cfg = config_from_json(small_config());
    cfg.workers = 1;
    const RunResult a = run_scenario(cfg);
    cfg.workers = 3;
    const RunResult b = run_scenario(cfg);
    CHECK(csv_text(a) == csv_text(b));
    CHECK(a.paths.size() == 4);
    for (const auto& p : a.paths) CHECK(p.h_error.front() == doctest::Approx(a.initial_error));
}

TEST_CASE("violation flags follow the tolerance rule") {
    ScenarioConfig cfg = config_from_json(small_config());
    cfg.workers = 2;
    const RunResult r = run_scenario(cfg);
    for (const auto& p : r.paths) {
        std::size_t expected = 0;
        for (const auto& [metric, values] : p.bounds) {
            const bool tanh_scale = metric.size() > 5 && metric.compare(metric.size() - 5, 5, "_tanh") == 0;
            const auto& x = tanh_scale ? p.tanh_error : p.h_error;
            for (std::size_t k = 0; k < values.size(); ++k)
                if (x[k] > values[k] * (1.0 + cfg.tolerance)) {
                    ++expected;
                    break;
                }
        }
        CHECK(p.violations.size() == expected);
    }
}

TEST_CASE("CSV layout") {
    ScenarioConfig cfg = figure_config(parse_figure("fig1"));
    cfg.n_paths = 2;
    cfg.horizon = 0.2;
    cfg.workers = 1;
    const RunResult r = run_scenario(cfg);
    std::istringstream in(csv_text(r));
    std::string line;
    std::getline(in, line);
    CHECK(line == "run_id,path,t,metric,value");
    bool saw_det_at_zero = false;
    bool saw_mean = false;
    while (std::getline(in, line)) {
        std::istringstream ls(line);
        std::string run, path, t, metric, value;
        std::getline(ls, run, ',');
        std::getline(ls, path, ',');
        std::getline(ls, t, ',');
        std::getline(ls, metric, ',');
        std::getline(ls, value);
        REQUIRE(run == "fig1");
        if (metric == "bound_det" && std::stod(t) == 0.0) {
            CHECK(std::abs(std::stod(value) - std::log(1.5)) <= 1e-12);
            saw_det_at_zero = true;
        }
        if (metric.rfind("mean_", 0) == 0) {
            CHECK(path == "-1");
            saw_mean = true;
        }
    }
    CHECK(saw_det_at_zero);
    CHECK(saw_mean);

    // 10001 grid points into at most 1000 rows, final point included.
    const TimeGrid g = TimeGrid::covering(10.0, 1e-3);
    const std::size_t stride = output_stride(g, 1000);
    CHECK(stride == 11);
    CHECK(g.n_steps / stride + 2 <= 1000);
    CHECK(output_stride(TimeGrid::covering(1.0, 1e-3), 5000) == 1);
}

TEST_CASE("bounds recomputed from exported trajectories") {
    ScenarioConfig cfg = config_from_json(small_config());
    cfg.export_trajectories = true;
    cfg.workers = 2;
    const RunResult run = run_scenario(cfg);
    const auto dir = scratch_dir("roundtrip");
    const std::string csv = (dir / "traj.csv").string();
    write_run_files(run, csv);
    CHECK(std::filesystem::exists(dir / "traj.manifest.json"));

    cfg.trajectory_csv = csv;
    const RunResult back = bounds_from_trajectory_csv(cfg);
    REQUIRE(back.paths.size() == run.paths.size());
    for (std::size_t p = 0; p < run.paths.size(); ++p) {
        for (std::size_t k = 0; k < run.paths[p].h_error.size(); ++k)
            REQUIRE(std::abs(back.paths[p].h_error[k] - run.paths[p].h_error[k]) <= 1e-9);
        for (const auto& [metric, values] : run.paths[p].bounds) {
            const auto& other = back.paths[p].bounds.at(metric);
            for (std::size_t k = 0; k < values.size(); ++k)
                REQUIRE(std::abs(other[k] - values[k]) <= 1e-9 * (1.0 + std::abs(values[k])));
        }
    }

    ScenarioConfig missing = cfg;
    missing.trajectory_csv = (dir / "absent.csv").string();
    CHECK_THROWS_AS(bounds_from_trajectory_csv(missing), Error);
}

TEST_CASE("figure presets") {
    CHECK(figure_name(parse_figure("fig2:20")) == "fig2_n20");
    CHECK(figure_name(parse_figure("fig4:6")) == "fig4_6state");
    CHECK_THROWS_AS(parse_figure("fig3"), Error);
    CHECK_THROWS_AS(parse_figure("fig2:1"), Error);
    CHECK_THROWS_AS(parse_figure("fig4:5"), Error);

    const ScenarioConfig f2 = figure_config(parse_figure("fig2:20"));
    const ResolvedScenario r2 = resolve(f2);
    CHECK(r2.q.n_states() == 21);
    CHECK(r2.nu.is_interior());
    CHECK(hilbert_distance(r2.mu, r2.nu) > 0.0);

    const ResolvedScenario r4 = resolve(figure_config(parse_figure("fig4:3")));
    CHECK(r4.nu[2] == doctest::Approx(0.6));
    CHECK(r4.q_tilde->entries()(0, 1) == 0.5);
    CHECK(figure_config(parse_figure("fig4:3")).horizon == 10.0);
}

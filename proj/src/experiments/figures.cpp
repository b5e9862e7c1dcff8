#include "experiments/figures.hpp"

#include <filesystem>

#include "core/error.hpp"
#include "experiments/csv.hpp"

namespace wonham {

namespace {

constexpr int kDeskPaths = 100;
constexpr int kPaperPaths = 300;

Eigen::VectorXd vec(std::initializer_list<double> values) {
    Eigen::VectorXd v(static_cast<Eigen::Index>(values.size()));
    Eigen::Index i = 0;
    for (double x : values) v(i++) = x;
    return v;
}

}  // namespace

FigureRequest parse_figure(const std::string& name) {
    FigureRequest r;
    if (name == "fig1") {
        r.kind = FigureKind::Fig1;
    } else if (name.rfind("fig2:", 0) == 0) {
        r.kind = FigureKind::Fig2;
        try {
            std::size_t used = 0;
            r.n = std::stoi(name.substr(5), &used);
            if (used != name.size() - 5) throw std::invalid_argument("trailing");
        } catch (const std::exception&) {
            fail(ErrorCode::Config, "fig2 needs an integer dimension, e.g. fig2:20");
        }
        if (r.n < 2) fail(ErrorCode::Config, "fig2 dimension must be at least 2");
    } else if (name == "fig4:3") {
        r.kind = FigureKind::Fig4ThreeState;
    } else if (name == "fig4:6") {
        r.kind = FigureKind::Fig4SixState;
    } else {
        fail(ErrorCode::Config, "unknown figure '" + name + "' (fig1 | fig2:<n> | fig4:3 | fig4:6)");
    }
    return r;
}

std::string figure_name(const FigureRequest& request) {
    switch (request.kind) {
        case FigureKind::Fig1: return "fig1";
        case FigureKind::Fig2: return "fig2_n" + std::to_string(request.n);
        case FigureKind::Fig4ThreeState: return "fig4_3state";
        case FigureKind::Fig4SixState: return "fig4_6state";
    }
    return "figure";
}

ScenarioConfig figure_config(const FigureRequest& request) {
    ScenarioConfig cfg;
    cfg.run_id = figure_name(request);
    cfg.dt = 1e-3;
    cfg.tolerance = 0.05;
    cfg.bounds = {BoundRequest::Deterministic, BoundRequest::PathwiseSimple, BoundRequest::Ode};
    switch (request.kind) {
        case FigureKind::Fig1: {
            cfg.model_kind = ScenarioConfig::ModelKind::Explicit;
            cfg.q_explicit = Eigen::MatrixXd(2, 2);
            cfg.q_explicit << -1, 1, 1, -1;
            cfg.h_explicit = vec({-1, 1});
            cfg.mu_kind = ScenarioConfig::MuKind::Explicit;
            cfg.mu_explicit = vec({0.5, 0.5});
            cfg.nu_explicit = vec({0.4, 0.6});
            cfg.horizon = 5.0;
            cfg.n_paths = request.paper_scale ? kPaperPaths : kDeskPaths;
            cfg.master_seed = 101;
            break;
        }
        case FigureKind::Fig2: {
            cfg.model_kind = ScenarioConfig::ModelKind::AppendixB;
            cfg.appendix_n = request.n;
            cfg.sensor_kind = ScenarioConfig::SensorKind::Random;
            cfg.sensor_seed = 2000 + static_cast<std::uint64_t>(request.n);
            cfg.mu_kind = ScenarioConfig::MuKind::Uniform;
            cfg.nu_kind = ScenarioConfig::NuKind::Perturb;
            cfg.nu_seed = 3000 + static_cast<std::uint64_t>(request.n);
            cfg.horizon = 1.0;
            cfg.n_paths = request.paper_scale ? kPaperPaths : kDeskPaths;
            cfg.master_seed = 200 + static_cast<std::uint64_t>(request.n);
            break;
        }
        case FigureKind::Fig4ThreeState:
        case FigureKind::Fig4SixState: {
            const bool three = request.kind == FigureKind::Fig4ThreeState;
            cfg.model_kind = ScenarioConfig::ModelKind::Fixture;
            cfg.fixture = three ? FixtureModel::ThreeState : FixtureModel::SixState;
            cfg.approx_kind = ScenarioConfig::ApproxKind::Fixture;
            cfg.mu_kind = ScenarioConfig::MuKind::Explicit;
            if (three) {
                cfg.h_explicit = vec({-1, 0, 1});
                cfg.mu_explicit = vec({0.3, 0.3, 0.4});
                cfg.nu_explicit = vec({0.2, 0.2, 0.6});
            } else {
                cfg.h_explicit = vec({-3, -2, -1, 1, 2, 3});
                cfg.mu_explicit = vec({0.5, 0.04, 0.09, 0.2, 0.04, 0.13});
                cfg.nu_explicit = vec({0.25, 0.1, 0.06, 0.07, 0.22, 0.3});
            }
            cfg.horizon = 10.0;
            // The figure shows 100 realizations at either scale.
            cfg.n_paths = 100;
            cfg.master_seed = three ? 403 : 406;
            cfg.bounds.push_back(BoundRequest::Expected);
            cfg.bounds.push_back(BoundRequest::Robustness);
            break;
        }
    }
    return cfg;
}

FigureOutput reproduce_figure(const FigureRequest& request, const std::string& out_dir, int workers) {
    std::error_code ec;
    std::filesystem::create_directories(out_dir, ec);
    if (ec) fail(ErrorCode::Io, "cannot create " + out_dir + ": " + ec.message());
    ScenarioConfig cfg = figure_config(request);
    cfg.workers = workers;
    FigureOutput out{(std::filesystem::path(out_dir) / (cfg.run_id + ".csv")).string(),
                     (std::filesystem::path(out_dir) / (cfg.run_id + ".manifest.json")).string(),
                     run_scenario(cfg)};
    write_run_files(out.result, out.csv_path);
    return out;
}

}  // namespace wonham

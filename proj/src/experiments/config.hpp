#ifndef WONHAM_EXPERIMENTS_CONFIG_HPP
#define WONHAM_EXPERIMENTS_CONFIG_HPP

// Scenario description for Monte Carlo runs, read from JSON.

#include <Eigen/Dense>

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "core/ctmc.hpp"
#include "core/filtering.hpp"
#include "core/qapprox.hpp"

namespace wonham {

enum class BoundRequest { Deterministic, PathwiseSimple, PathwiseSubset, Ode, Expected, Robustness };

const char* bound_request_name(BoundRequest b) noexcept;
BoundRequest parse_bound_request(const std::string& name);

struct ScenarioConfig {
    std::string run_id = "run";

    enum class ModelKind { Explicit, AppendixB, Fixture } model_kind = ModelKind::Explicit;
    Eigen::MatrixXd q_explicit;
    int appendix_n = 2;
    FixtureModel fixture = FixtureModel::ThreeState;

    enum class SensorKind { Explicit, Random } sensor_kind = SensorKind::Explicit;
    Eigen::VectorXd h_explicit;
    std::uint64_t sensor_seed = 0;

    double sigma = 1.0;

    enum class MuKind { Explicit, Stationary, Uniform } mu_kind = MuKind::Explicit;
    Eigen::VectorXd mu_explicit;

    enum class NuKind { Explicit, Perturb } nu_kind = NuKind::Explicit;
    Eigen::VectorXd nu_explicit;
    std::uint64_t nu_seed = 0;

    enum class ApproxKind { None, Misspecified, Fixture, Nmf } approx_kind = ApproxKind::None;
    Eigen::MatrixXd q_tilde_explicit;
    std::optional<Eigen::VectorXd> h_tilde;  // defaults to h
    int nmf_rank = 2;
    int nmf_iterations = 500;
    std::uint64_t nmf_seed = 0;

    double horizon = 1.0;
    double dt = 1e-3;
    int n_paths = 100;
    std::uint64_t master_seed = 1;
    std::vector<BoundRequest> bounds{BoundRequest::Deterministic, BoundRequest::PathwiseSimple,
                                     BoundRequest::Ode};
    double tolerance = 0.05;
    WonhamScheme scheme = WonhamScheme::Zakai;
    bool mirror = false;
    int workers = 0;  // 0: hardware concurrency
    std::size_t output_points = 1000;
    bool export_trajectories = false;
    std::string trajectory_csv;  // input of the bounds-only mode

    bool wants(BoundRequest b) const;
};

/// Config with every source turned into concrete values.
struct ResolvedScenario {
    RateMatrix q;
    SensorVector h;
    SimplexVector mu;
    SimplexVector nu;
    std::optional<RateMatrix> q_tilde;
    std::optional<SensorVector> h_tilde;
    TimeGrid grid;
};

ScenarioConfig config_from_json(const nlohmann::json& j);
ScenarioConfig load_config_file(const std::string& path);
nlohmann::json config_to_json(const ScenarioConfig& cfg);

/// Throws Config on unresolvable or inconsistent sources.
ResolvedScenario resolve(const ScenarioConfig& cfg);
nlohmann::json resolved_to_json(const ResolvedScenario& r);

nlohmann::json matrix_to_json(const Eigen::MatrixXd& m);
nlohmann::json vector_to_json(const Eigen::VectorXd& v);

}  // namespace wonham

#endif  // WONHAM_EXPERIMENTS_CONFIG_HPP

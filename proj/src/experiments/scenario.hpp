#ifndef WONHAM_EXPERIMENTS_SCENARIO_HPP
#define WONHAM_EXPERIMENTS_SCENARIO_HPP

// Monte Carlo harness: per path, sample the chain and its observations, run
// the exact filter from mu and the approximate filter from nu on the same
// increments, and evaluate the requested bounds.

#include <Eigen/Dense>

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "core/bound_series.hpp"
#include "experiments/config.hpp"

namespace wonham {

struct Violation {
    std::size_t path = 0;
    std::string metric;  // which bound was exceeded
    std::size_t step = 0;
    double error = 0.0;
    double bound = 0.0;
};

struct PathRecord {
    std::size_t path = 0;
    std::vector<double> h_error;
    std::vector<double> tanh_error;
    /// Per-path bounds keyed by CSV metric name (bound_det, bound_ode, ...).
    std::map<std::string, std::vector<double>> bounds;
    std::vector<double> drift_error;    // empty when identically zero
    std::vector<double> e3_diff;        // empty when identically zero
    std::vector<double> inv_min_pitilde;
    std::optional<std::vector<double>> local_time;  // discounted local-time sum
    std::vector<Violation> violations;
    std::size_t floor_activations = 0;
    bool subset_exact = true;
    std::vector<Eigen::VectorXd> pi;       // only with export_trajectories
    std::vector<Eigen::VectorXd> pi_tilde;
};

struct Aggregate {
    std::vector<double> mean;
    std::vector<double> min;
    std::vector<double> max;
};

struct RunResult {
    ScenarioConfig config;
    ResolvedScenario resolved;
    double initial_error = 0.0;
    double lambda = 0.0;
    std::vector<PathRecord> paths;
    std::map<std::string, Aggregate> aggregates;       // keyed by per-path metric name
    std::map<std::string, BoundSeries> expected_bounds;  // bound_expected, bound_robustness
    std::vector<Violation> aggregate_violations;         // expected bounds vs mean error
    std::vector<std::string> notes;

    std::size_t violation_count() const;
};

RunResult run_scenario(const ScenarioConfig& cfg);

/// Per-path bound evaluation for given filter trajectories; shared by
/// run_scenario and the bounds-only mode.
PathRecord evaluate_path(const ScenarioConfig& cfg, const ResolvedScenario& resolved,
                         std::size_t path, const FilterTrajectory& pi,
                         const FilterTrajectory& pi_tilde);

/// Fills aggregates, expected bounds and aggregate violations from paths.
void finalize_run(RunResult& result);

}  // namespace wonham

#endif  // WONHAM_EXPERIMENTS_SCENARIO_HPP

#ifndef WONHAM_EXPERIMENTS_CSV_HPP
#define WONHAM_EXPERIMENTS_CSV_HPP

// Long-format CSV output (run_id,path,t,metric,value) and JSON manifests.
// Per-path rows carry the path index; cross-path rows use path -1.

#include <ostream>
#include <string>

#include <json.hpp>

#include "experiments/scenario.hpp"

namespace wonham {

/// Grid stride that keeps at most `output_points` rows per series (the final
/// grid point is always written).
std::size_t output_stride(const TimeGrid& grid, std::size_t output_points);

void write_run_csv(const RunResult& result, std::ostream& out);

nlohmann::json run_manifest(const RunResult& result, const std::string& csv_name);

/// Writes <csv_path> and <csv_path minus .csv>.manifest.json.
void write_run_files(const RunResult& result, const std::string& csv_path);

/// Rebuilds filter trajectories from pi_j / pitilde_j rows of an exported
/// trajectory CSV and re-evaluates the configured bounds on them.
RunResult bounds_from_trajectory_csv(const ScenarioConfig& cfg);

}  // namespace wonham

#endif  // WONHAM_EXPERIMENTS_CSV_HPP

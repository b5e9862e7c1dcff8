#include "experiments/csv.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <map>
#include <sstream>

#include "core/error.hpp"
#include "core/hilbert.hpp"
#include "core/rates.hpp"

#ifndef WONHAM_VERSION_STRING
#define WONHAM_VERSION_STRING "unknown"
#endif

namespace wonham {

namespace {

class RowWriter {
public:
    RowWriter(std::ostream& out, const std::string& run_id) : out_(out), run_id_(run_id) {}

    void row(long path, double t, const std::string& metric, double value) {
        char tbuf[32];
        char vbuf[32];
        std::snprintf(tbuf, sizeof tbuf, "%.17g", t);
        std::snprintf(vbuf, sizeof vbuf, "%.17g", value);
        out_ << run_id_ << ',' << path << ',' << tbuf << ',' << metric << ',' << vbuf << '\n';
    }

private:
    std::ostream& out_;
    const std::string& run_id_;
};

std::vector<std::size_t> sample_points(const TimeGrid& grid, std::size_t stride) {
    std::vector<std::size_t> ks;
    for (std::size_t k = 0; k < grid.n_points(); k += stride) ks.push_back(k);
    if (ks.back() != grid.n_steps) ks.push_back(grid.n_steps);
    return ks;
}

std::string manifest_path_for(const std::string& csv_path) {
    const std::string suffix = ".csv";
    if (csv_path.size() > suffix.size() &&
        csv_path.compare(csv_path.size() - suffix.size(), suffix.size(), suffix) == 0)
        return csv_path.substr(0, csv_path.size() - suffix.size()) + ".manifest.json";
    return csv_path + ".manifest.json";
}

}  // namespace

std::size_t output_stride(const TimeGrid& grid, std::size_t output_points) {
    if (output_points < 2) return 1;
    const std::size_t intervals = output_points - 1;
    return std::max<std::size_t>(1, (grid.n_steps + intervals - 1) / intervals);
}

void write_run_csv(const RunResult& result, std::ostream& out) {
    const TimeGrid& grid = result.resolved.grid;
    const std::vector<std::size_t> ks = sample_points(grid, output_stride(grid, result.config.output_points));
    RowWriter w(out, result.config.run_id);
    out << "run_id,path,t,metric,value\n";

    for (const PathRecord& p : result.paths) {
        const auto path = static_cast<long>(p.path);
        for (std::size_t k : ks) {
            const double t = grid.time(k);
            w.row(path, t, "h_error", p.h_error[k]);
            w.row(path, t, "tanh_error", p.tanh_error[k]);
            for (const auto& [name, values] : p.bounds) w.row(path, t, name, values[k]);
            if (!p.drift_error.empty()) w.row(path, t, "drift_error", p.drift_error[k]);
        }
        // Trajectories are written on the full grid so they can be re-read.
        if (!p.pi.empty()) {
            for (std::size_t k = 0; k < grid.n_points(); ++k) {
                const double t = grid.time(k);
                for (Eigen::Index j = 0; j < p.pi[k].size(); ++j)
                    w.row(path, t, "pi_" + std::to_string(j), p.pi[k](j));
                for (Eigen::Index j = 0; j < p.pi_tilde[k].size(); ++j)
                    w.row(path, t, "pitilde_" + std::to_string(j), p.pi_tilde[k](j));
            }
        }
    }

    for (std::size_t k : ks) {
        const double t = grid.time(k);
        for (const auto& [name, agg] : result.aggregates) w.row(-1, t, "mean_" + name, agg.mean[k]);
        for (const auto& [name, bound] : result.expected_bounds) w.row(-1, t, name, bound.values[k]);
    }
}

nlohmann::json run_manifest(const RunResult& result, const std::string& csv_name) {
    using nlohmann::json;
    const TimeGrid& grid = result.resolved.grid;
    json m;
    m["run_id"] = result.config.run_id;
    m["version"] = WONHAM_VERSION_STRING;
    m["csv"] = csv_name;
    m["columns"] = {"run_id", "path", "t", "metric", "value"};
    m["config"] = config_to_json(result.config);
    m["resolved"] = resolved_to_json(result.resolved);
    m["master_seed"] = result.config.master_seed;
    m["seed_derivation"] = "splitmix64(splitmix64(master) ^ (path + 0x632be59bd9b4e019))";
    m["n_paths"] = result.paths.size();
    m["output_stride"] = output_stride(grid, result.config.output_points);
    m["initial_error"] = result.initial_error;
    m["lambda"] = result.lambda;
    std::size_t floors = 0;
    for (const auto& p : result.paths) floors += p.floor_activations;
    m["floor_activations"] = floors;
    m["violation_count"] = result.violation_count();
    json violations = json::array();
    auto add = [&](const Violation& v, long path) {
        if (violations.size() >= 100) return;
        violations.push_back({{"path", path}, {"metric", v.metric}, {"t", grid.time(v.step)},
                              {"error", v.error}, {"bound", v.bound}});
    };
    for (const auto& p : result.paths)
        for (const auto& v : p.violations) add(v, static_cast<long>(v.path));
    for (const auto& v : result.aggregate_violations) add(v, -1);
    m["violations"] = violations;
    m["notes"] = result.notes;
    return m;
}

void write_run_files(const RunResult& result, const std::string& csv_path) {
    const std::filesystem::path parent = std::filesystem::path(csv_path).parent_path();
    if (!parent.empty()) {
        std::error_code ec;
        std::filesystem::create_directories(parent, ec);
        if (ec) fail(ErrorCode::Io, "cannot create " + parent.string() + ": " + ec.message());
    }
    {
        std::ofstream out(csv_path, std::ios::binary);
        if (!out) fail(ErrorCode::Io, "cannot write " + csv_path);
        write_run_csv(result, out);
        if (!out) fail(ErrorCode::Io, "write failed for " + csv_path);
    }
    const std::string manifest = manifest_path_for(csv_path);
    std::ofstream out(manifest, std::ios::binary);
    if (!out) fail(ErrorCode::Io, "cannot write " + manifest);
    std::string name = csv_path;
    if (const auto slash = name.find_last_of('/'); slash != std::string::npos) name = name.substr(slash + 1);
    out << run_manifest(result, name).dump(2) << '\n';
    if (!out) fail(ErrorCode::Io, "write failed for " + manifest);
}

RunResult bounds_from_trajectory_csv(const ScenarioConfig& cfg) {
    if (cfg.trajectory_csv.empty()) fail(ErrorCode::Config, "bounds mode needs 'trajectory_csv'");
    ResolvedScenario resolved = resolve(cfg);
    const TimeGrid grid = resolved.grid;
    const auto n = static_cast<Eigen::Index>(resolved.q.n_states());

    std::ifstream in(cfg.trajectory_csv);
    if (!in) fail(ErrorCode::Io, "cannot open " + cfg.trajectory_csv);

    struct Pair {
        std::vector<Eigen::VectorXd> pi;
        std::vector<Eigen::VectorXd> pi_tilde;
        std::vector<bool> seen;
    };
    std::map<long, Pair> paths;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (line_no == 1) {
            if (line.rfind("run_id,path,t,metric,value", 0) != 0)
                fail(ErrorCode::Io, cfg.trajectory_csv + ": unexpected header");
            continue;
        }
        std::istringstream ls(line);
        std::string run, path_s, t_s, metric, value_s;
        if (!std::getline(ls, run, ',') || !std::getline(ls, path_s, ',') || !std::getline(ls, t_s, ',') ||
            !std::getline(ls, metric, ',') || !std::getline(ls, value_s))
            fail(ErrorCode::Io, cfg.trajectory_csv + ": malformed line " + std::to_string(line_no));
        const bool is_pi = metric.rfind("pi_", 0) == 0;
        const bool is_tilde = metric.rfind("pitilde_", 0) == 0;
        if (!is_pi && !is_tilde) continue;
        const long path = std::stol(path_s);
        const double t = std::stod(t_s);
        const double value = std::stod(value_s);
        const auto j = static_cast<Eigen::Index>(std::stol(metric.substr(is_pi ? 3 : 8)));
        if (j < 0 || j >= n) fail(ErrorCode::DimensionMismatch, "trajectory state index out of range");
        const double kk = (t - grid.t0) / grid.dt;
        const auto k = static_cast<long>(std::llround(kk));
        if (k < 0 || static_cast<std::size_t>(k) >= grid.n_points() || std::abs(kk - static_cast<double>(k)) > 1e-6)
            fail(ErrorCode::GridMismatch, "trajectory time " + t_s + " is not on the configured grid");
        Pair& pr = paths[path];
        if (pr.pi.empty()) {
            pr.pi.assign(grid.n_points(), Eigen::VectorXd::Constant(n, std::nan("")));
            pr.pi_tilde = pr.pi;
        }
        (is_pi ? pr.pi : pr.pi_tilde)[static_cast<std::size_t>(k)](j) = value;
    }
    if (paths.empty()) fail(ErrorCode::Io, cfg.trajectory_csv + ": no pi_j/pitilde_j rows");

    RunResult result{cfg, std::move(resolved), 0.0, 0.0, {}, {}, {}, {}, {}};
    result.initial_error = hilbert_distance(result.resolved.mu, result.resolved.nu);
    result.lambda = deterministic_rate(result.resolved.q);
    for (auto& [path, pr] : paths) {
        if (path < 0) continue;
        auto build = [&](const std::vector<Eigen::VectorXd>& states, const char* label) {
            FilterTrajectory traj;
            traj.grid = grid;
            traj.spec_label = label;
            for (const auto& s : states) {
                if (!s.allFinite())
                    fail(ErrorCode::GridMismatch, "trajectory of path " + std::to_string(path) + " has gaps");
                traj.states.push_back(SimplexVector::normalized(s));
            }
            return traj;
        };
        const FilterTrajectory pi = build(pr.pi, "pi");
        const FilterTrajectory pi_tilde = build(pr.pi_tilde, "pitilde");
        result.paths.push_back(evaluate_path(cfg, result.resolved, static_cast<std::size_t>(path), pi, pi_tilde));
    }
    finalize_run(result);
    return result;
}

}  // namespace wonham

#include "experiments/scenario.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <limits>
#include <sstream>
#include <thread>

#include "core/error.hpp"
#include "core/error_terms.hpp"
#include "core/hilbert.hpp"
#include "core/rates.hpp"
#include "core/smooth_max.hpp"

namespace wonham {

namespace {

// Below this the E3 spread counts as identically zero.
constexpr double kVanishingE3 = 1e-8;
// Pair-of-pairs local-time sums are only formed up to this many states.
constexpr std::size_t kLocalTimeMaxStates = 4;

void check_against(PathRecord& rec, const std::string& metric, const std::vector<double>& x,
                   const BoundSeries& bound, double tol) {
    const ComparisonReport r = comparison_check(x, bound, tol);
    if (!r.ok) rec.violations.push_back({rec.path, metric, r.first_violation, r.x, r.bound});
}

bool vanishes(const std::vector<double>& v) {
    for (double x : v)
        if (!(std::abs(x) <= kVanishingE3)) return false;
    return true;
}

// Sum over ordered pairs (a,b) != (c,d) of the discounted local time at 0 of
// Delta_ab - Delta_cd.
std::vector<double> local_time_terms(const FilterTrajectory& pi, const FilterTrajectory& pi_tilde,
                                     double lambda) {
    const TimeGrid& grid = pi.grid;
    const std::size_t n = pi.n_states();
    std::vector<Eigen::VectorXd> r(grid.n_points());
    for (std::size_t k = 0; k < grid.n_points(); ++k)
        r[k] = (pi.states[k].probs().array().log() - pi_tilde.states[k].probs().array().log()).matrix();
    auto delta = [&](std::size_t k, std::size_t a, std::size_t b) {
        return a == b ? 0.0 : r[k](static_cast<Eigen::Index>(a)) - r[k](static_cast<Eigen::Index>(b));
    };
    const double eps = default_local_time_window(grid);
    std::vector<double> total(grid.n_points(), 0.0);
    std::vector<double> z(grid.n_points());
    for (std::size_t ab = 0; ab < n * n; ++ab) {
        for (std::size_t cd = 0; cd < n * n; ++cd) {
            if (ab == cd) continue;
            for (std::size_t k = 0; k < grid.n_points(); ++k)
                z[k] = delta(k, ab / n, ab % n) - delta(k, cd / n, cd % n);
            const LocalTimeEstimate lt = estimate_local_time(z, grid, eps);
            const std::vector<double> disc = discounted_increments(lt.values, lambda, grid);
            for (std::size_t k = 0; k < total.size(); ++k) total[k] += disc[k];
        }
    }
    return total;
}

Aggregate aggregate_of(const std::vector<const std::vector<double>*>& series) {
    Aggregate a;
    if (series.empty()) return a;
    const std::size_t len = series.front()->size();
    a.mean.assign(len, 0.0);
    a.min.assign(len, std::numeric_limits<double>::infinity());
    a.max.assign(len, -std::numeric_limits<double>::infinity());
    for (const auto* s : series) {
        for (std::size_t k = 0; k < len; ++k) {
            a.mean[k] += (*s)[k];
            a.min[k] = std::min(a.min[k], (*s)[k]);
            a.max[k] = std::max(a.max[k], (*s)[k]);
        }
    }
    for (double& m : a.mean) m /= static_cast<double>(series.size());
    return a;
}

}  // namespace

std::size_t RunResult::violation_count() const {
    std::size_t count = aggregate_violations.size();
    for (const auto& p : paths) count += p.violations.size();
    return count;
}

PathRecord evaluate_path(const ScenarioConfig& cfg, const ResolvedScenario& resolved,
                         std::size_t path, const FilterTrajectory& pi,
                         const FilterTrajectory& pi_tilde) {
    if (pi.obs_checksum != pi_tilde.obs_checksum)
        fail(ErrorCode::InvalidArgument, "filters were driven by different observation paths");
    if (!(pi.grid == pi_tilde.grid)) fail(ErrorCode::GridMismatch, "filter grids differ");
    const TimeGrid& grid = pi.grid;
    const RateMatrix& q = resolved.q;
    const double tol = cfg.tolerance;

    PathRecord rec;
    rec.path = path;
    rec.floor_activations = pi.floor_activations + pi_tilde.floor_activations;
    rec.h_error.resize(grid.n_points());
    rec.tanh_error.resize(grid.n_points());
    rec.inv_min_pitilde.resize(grid.n_points());
    for (std::size_t k = 0; k < grid.n_points(); ++k) {
        rec.h_error[k] = hilbert_distance(pi.states[k], pi_tilde.states[k]);
        rec.tanh_error[k] = std::tanh(rec.h_error[k] / 4.0);
        rec.inv_min_pitilde[k] = 1.0 / pi_tilde.states[k].min_entry();
    }
    if (cfg.export_trajectories) {
        for (const auto& s : pi.states) rec.pi.push_back(s.probs());
        for (const auto& s : pi_tilde.states) rec.pi_tilde.push_back(s.probs());
    }
    const double h0 = rec.h_error.front();
    const double lambda = deterministic_rate(q);

    bool pathwise_applicable = true;
    if (resolved.q_tilde) {
        const ApproximateFilterSpec spec = misspecified_wonham_spec(*resolved.q_tilde, *resolved.h_tilde, cfg.sigma);
        const ErrorTermSeries terms = error_terms(q, resolved.h, cfg.sigma, spec, pi_tilde);
        rec.drift_error = combined_drift_error(terms);
        rec.e3_diff = e3_differences(terms);
        if (vanishes(rec.e3_diff)) {
            rec.e3_diff.clear();
        } else {
            pathwise_applicable = false;
        }
    }

    if (pathwise_applicable) {
        const std::vector<double>& drift = rec.drift_error;
        if (cfg.wants(BoundRequest::Deterministic)) {
            const std::vector<double> rate(grid.n_points(), lambda);
            const BoundSeries b = exponential_bound(h0, rate, drift, grid, BoundScale::HilbertError,
                                                    BoundKind::DeterministicExp);
            const BoundSeries bt = exponential_bound(h0, rate, drift, grid, BoundScale::TanhQuarter,
                                                     BoundKind::DeterministicExp);
            check_against(rec, "bound_det", rec.h_error, b, tol);
            check_against(rec, "bound_det_tanh", rec.tanh_error, bt, tol);
            rec.bounds["bound_det"] = b.values;
            rec.bounds["bound_det_tanh"] = bt.values;
        }
        if (cfg.wants(BoundRequest::PathwiseSimple)) {
            std::vector<double> rate(grid.n_points());
            for (std::size_t k = 0; k < grid.n_points(); ++k)
                rate[k] = pathwise_rate_simple(q, pi_tilde.states[k]);
            const BoundSeries b = exponential_bound(h0, rate, drift, grid, BoundScale::HilbertError);
            check_against(rec, "bound_pathwise_simple", rec.h_error, b, tol);
            rec.bounds["bound_pathwise_simple"] = b.values;
        }
        if (cfg.wants(BoundRequest::PathwiseSubset)) {
            std::vector<double> rate(grid.n_points());
            for (std::size_t k = 0; k < grid.n_points(); ++k) {
                const SubsetRate s = pathwise_rate_subset(q, pi_tilde.states[k]);
                rate[k] = s.value;
                rec.subset_exact = rec.subset_exact && s.exact;
            }
            const BoundSeries b = exponential_bound(h0, rate, drift, grid, BoundScale::HilbertError);
            check_against(rec, "bound_pathwise_subset", rec.h_error, b, tol);
            rec.bounds["bound_pathwise_subset"] = b.values;
        }
        if (cfg.wants(BoundRequest::Ode)) {
            const FilterTrajectory& along = cfg.mirror ? pi : pi_tilde;
            const BoundSeries u = solve_bound_ode(q, along, drift, std::tanh(h0 / 4.0), cfg.mirror);
            const BoundSeries b = to_hilbert_scale(u);
            check_against(rec, "bound_ode_tanh", rec.tanh_error, u, tol);
            check_against(rec, "bound_ode", rec.h_error, b, tol);
            rec.bounds["bound_ode"] = b.values;
            rec.bounds["bound_ode_tanh"] = u.values;
        }
    }

    const bool wants_expected = cfg.wants(BoundRequest::Expected) || cfg.wants(BoundRequest::Robustness);
    if (wants_expected && !rec.e3_diff.empty() && q.n_states() <= kLocalTimeMaxStates)
        rec.local_time = local_time_terms(pi, pi_tilde, lambda);
    return rec;
}

void finalize_run(RunResult& result) {
    const ScenarioConfig& cfg = result.config;
    const ResolvedScenario& res = result.resolved;
    const TimeGrid& grid = res.grid;
    if (result.paths.empty()) return;

    // Aggregates over every per-path series that all paths carry.
    std::map<std::string, std::vector<const std::vector<double>*>> by_metric;
    for (const auto& p : result.paths) {
        by_metric["h_error"].push_back(&p.h_error);
        by_metric["tanh_error"].push_back(&p.tanh_error);
        for (const auto& [name, values] : p.bounds) by_metric[name].push_back(&values);
        if (!p.drift_error.empty()) by_metric["drift_error"].push_back(&p.drift_error);
        if (!p.e3_diff.empty()) by_metric["e3_diff"].push_back(&p.e3_diff);
        by_metric["inv_min_pitilde"].push_back(&p.inv_min_pitilde);
        if (p.local_time) by_metric["local_time"].push_back(&*p.local_time);
    }
    for (const auto& [name, series] : by_metric)
        if (series.size() == result.paths.size()) result.aggregates[name] = aggregate_of(series);

    bool subset_exact = true;
    for (const auto& p : result.paths) subset_exact = subset_exact && p.subset_exact;
    if (cfg.wants(BoundRequest::PathwiseSubset) && !subset_exact)
        result.notes.push_back("pathwise_subset: state count above the enumeration cap, simple rate used");

    const bool has_e3 = result.aggregates.count("e3_diff") > 0;
    if (has_e3 && (cfg.wants(BoundRequest::Deterministic) || cfg.wants(BoundRequest::PathwiseSimple) ||
                   cfg.wants(BoundRequest::PathwiseSubset) || cfg.wants(BoundRequest::Ode)))
        result.notes.push_back("pathwise bounds skipped: sensor mismatch leaves nonvanishing E3 differences");

    std::optional<std::vector<double>> local_time;
    bool local_time_complete = true;
    if (has_e3) {
        if (result.aggregates.count("local_time")) {
            local_time = result.aggregates.at("local_time").mean;
        } else {
            local_time_complete = false;
            result.notes.push_back("local-time terms not evaluated (more than 4 states); expected bounds omitted");
        }
    } else if (cfg.wants(BoundRequest::Expected) || cfg.wants(BoundRequest::Robustness)) {
        result.notes.push_back("local-time terms are exactly zero (E3 differences vanish)");
    }

    const std::vector<double>& mean_error = result.aggregates.at("h_error").mean;
    auto check_mean = [&](const std::string& name, const BoundSeries& b) {
        const ComparisonReport r = comparison_check(mean_error, b, cfg.tolerance);
        if (!r.ok) result.aggregate_violations.push_back({0, name, r.first_violation, r.x, r.bound});
    };

    if (cfg.wants(BoundRequest::Expected) && local_time_complete) {
        std::vector<double> drift;
        if (result.aggregates.count("drift_error")) drift = result.aggregates.at("drift_error").mean;
        std::vector<double> e3;
        if (has_e3) e3 = result.aggregates.at("e3_diff").mean;
        const double hmax = res.h.max_abs() / cfg.sigma;
        BoundSeries b = expected_distance_bound(result.lambda, result.initial_error, drift, e3, hmax,
                                             local_time, grid);
        check_mean("bound_expected", b);
        result.expected_bounds.emplace("bound_expected", std::move(b));
    }
    if (cfg.wants(BoundRequest::Robustness) && local_time_complete && res.q_tilde) {
        const SensorVector h_unit(res.h.values() / cfg.sigma);
        const SensorVector ht_unit(res.h_tilde->values() / cfg.sigma);
        const RobustnessConstants c = robustness_constants(res.q, *res.q_tilde, h_unit, ht_unit);
        BoundSeries b = robustness_bound(c, result.initial_error,
                                               result.aggregates.at("inv_min_pitilde").mean,
                                               local_time, grid);
        check_mean("bound_robustness", b);
        result.expected_bounds.emplace("bound_robustness", std::move(b));
    } else if (cfg.wants(BoundRequest::Robustness) && !res.q_tilde) {
        result.notes.push_back("robustness bound needs a misspecified model; skipped");
    }
}

RunResult run_scenario(const ScenarioConfig& cfg) {
    ResolvedScenario resolved = resolve(cfg);
    const TimeGrid grid = resolved.grid;
    const auto n_paths = static_cast<std::size_t>(cfg.n_paths);

    std::vector<std::optional<PathRecord>> records(n_paths);
    std::vector<std::exception_ptr> errors(n_paths);
    std::atomic<std::size_t> next{0};

    auto work = [&] {
        for (std::size_t p = next++; p < n_paths; p = next++) {
            try {
                RngStream rng = make_stream(cfg.master_seed, p);
                const CtmcPath path = sample_ctmc_path(resolved.q, resolved.mu, grid.end(), rng);
                const ObservationIncrements obs = simulate_observations(path, resolved.h, cfg.sigma, grid, rng);
                const FilterTrajectory pi =
                    integrate_wonham(resolved.q, resolved.h, cfg.sigma, obs, resolved.mu, cfg.scheme);
                const FilterTrajectory pi_tilde =
                    resolved.q_tilde
                        ? integrate_wonham(*resolved.q_tilde, *resolved.h_tilde, cfg.sigma, obs, resolved.nu, cfg.scheme)
                        : integrate_wonham(resolved.q, resolved.h, cfg.sigma, obs, resolved.nu, cfg.scheme);
                records[p] = evaluate_path(cfg, resolved, p, pi, pi_tilde);
            } catch (...) {
                errors[p] = std::current_exception();
            }
        }
    };

    unsigned workers = cfg.workers > 0 ? static_cast<unsigned>(cfg.workers)
                                       : std::max(1u, std::thread::hardware_concurrency());
    workers = static_cast<unsigned>(std::min<std::size_t>(workers, n_paths));
    if (workers <= 1) {
        work();
    } else {
        std::vector<std::thread> pool;
        for (unsigned w = 0; w < workers; ++w) pool.emplace_back(work);
        for (auto& t : pool) t.join();
    }

    for (std::size_t p = 0; p < n_paths; ++p) {
        if (!errors[p]) continue;
        try {
            std::rethrow_exception(errors[p]);
        } catch (const Error& e) {
            fail(e.code(), "path " + std::to_string(p) + ": " + e.what());
        } catch (const std::exception& e) {
            fail(ErrorCode::InvalidArgument, "path " + std::to_string(p) + ": " + e.what());
        }
    }

    RunResult result{cfg, std::move(resolved), 0.0, 0.0, {}, {}, {}, {}, {}};
    result.initial_error = hilbert_distance(result.resolved.mu, result.resolved.nu);
    result.lambda = deterministic_rate(result.resolved.q);
    result.paths.reserve(n_paths);
    for (auto& r : records) result.paths.push_back(std::move(*r));
    finalize_run(result);
    return result;
}

}  // namespace wonham

#include "core/bound_series.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "core/error.hpp"
#include "core/rates.hpp"

namespace wonham {

const char* bound_kind_name(BoundKind kind) noexcept {
    switch (kind) {
        case BoundKind::DeterministicExp: return "deterministic";
        case BoundKind::PathwiseExp: return "pathwise";
        case BoundKind::OdeTanh: return "ode";
        case BoundKind::ExpectedMean: return "expected";
        case BoundKind::RobustnessMean: return "robustness";
    }
    return "unknown";
}

namespace {

void require_grid_length(const std::vector<double>& v, const TimeGrid& grid, const char* what) {
    if (v.size() != grid.n_points()) {
        std::ostringstream os;
        os << what << " has " << v.size() << " points, grid has " << grid.n_points();
        fail(ErrorCode::GridMismatch, os.str());
    }
}

// Trapezoidal I_k = int_0^{t_k} e^{-(R(t_k) - R(s))} d(s) ds, where the
// per-cell decay factors are e^{-(R(t_{k+1}) - R(t_k))}.
std::vector<double> discounted_integral(const std::vector<double>& decay,
                                        const std::vector<double>& d, double dt) {
    std::vector<double> out(decay.size() + 1, 0.0);
    if (d.empty()) return out;
    for (std::size_t k = 0; k < decay.size(); ++k)
        out[k + 1] = decay[k] * out[k] + 0.5 * dt * (decay[k] * d[k] + d[k + 1]);
    return out;
}

}  // namespace

BoundSeries exponential_bound(double initial_h, const std::vector<double>& rate,
                              const std::vector<double>& drift_error, const TimeGrid& grid,
                              BoundScale scale, BoundKind kind) {
    require_grid_length(rate, grid, "rate series");
    if (!drift_error.empty()) require_grid_length(drift_error, grid, "drift error series");
    if (!(initial_h >= 0.0)) fail(ErrorCode::InvalidArgument, "initial error must be nonnegative");
    for (double r : rate)
        if (!(r >= 0.0)) fail(ErrorCode::NegativeRate, "rate series has a negative entry");

    std::vector<double> decay(grid.n_steps);
    for (std::size_t k = 0; k < grid.n_steps; ++k)
        decay[k] = std::exp(-0.5 * grid.dt * (rate[k] + rate[k + 1]));
    const std::vector<double> integral = discounted_integral(decay, drift_error, grid.dt);

    BoundSeries out{grid, std::vector<double>(grid.n_points()), kind, scale};
    const double start = scale == BoundScale::HilbertError ? initial_h : std::tanh(initial_h / 4.0);
    const double weight = scale == BoundScale::HilbertError ? 1.0 : 0.25;
    double survival = 1.0;
    for (std::size_t k = 0; k < grid.n_points(); ++k) {
        if (k > 0) survival *= decay[k - 1];
        double v = start * survival + weight * integral[k];
        if (scale == BoundScale::TanhQuarter) v = std::min(v, kOdeCeiling);
        out.values[k] = v;
    }
    return out;
}

std::vector<double> tamed_euler(double u0, const TimeGrid& grid, const OdeRhs& rhs) {
    std::vector<double> u(grid.n_points());
    u[0] = std::clamp(u0, 0.0, kOdeCeiling);
    for (std::size_t k = 0; k < grid.n_steps; ++k) {
        const double f = rhs(k, grid.time(k), u[k]);
        if (!std::isfinite(f)) {
            std::ostringstream os;
            os << "NonFiniteState(" << k << "): ODE right side is not finite";
            fail(ErrorCode::NonFiniteState, os.str());
        }
        const double step = grid.dt * f / (1.0 + grid.dt * std::abs(f));
        u[k + 1] = std::clamp(u[k] + step, 0.0, kOdeCeiling);
    }
    return u;
}

BoundSeries solve_bound_ode(const RateMatrix& q, const FilterTrajectory& traj,
                            const std::vector<double>& drift_error, double u0, bool mirror) {
    if (!(u0 >= 0.0) || !(u0 < 1.0)) fail(ErrorCode::InvalidArgument, "u0 must lie in [0, 1)");
    if (traj.states.size() != traj.grid.n_points())
        fail(ErrorCode::GridMismatch, "trajectory does not cover its grid");
    if (!drift_error.empty()) require_grid_length(drift_error, traj.grid, "drift error series");

    const OdeRhs rhs = [&](std::size_t k, double, double u) {
        const double rate = state_dependent_rate(q, traj.states[k], u, mirror);
        const double forcing = drift_error.empty() ? 0.0 : drift_error[k];
        return -rate * u + 0.25 * forcing * (1.0 - u * u);
    };
    return BoundSeries{traj.grid, tamed_euler(u0, traj.grid, rhs), BoundKind::OdeTanh,
                       BoundScale::TanhQuarter};
}

BoundSeries to_hilbert_scale(const BoundSeries& bound) {
    BoundSeries out = bound;
    if (bound.scale == BoundScale::TanhQuarter) {
        for (double& v : out.values) v = 4.0 * std::atanh(std::min(v, kOdeCeiling));
        out.scale = BoundScale::HilbertError;
    }
    return out;
}

ComparisonReport comparison_check(const std::vector<double>& x, const BoundSeries& u, double tol) {
    if (x.size() != u.values.size()) fail(ErrorCode::GridMismatch, "comparison series lengths differ");
    for (std::size_t k = 0; k < x.size(); ++k) {
        if (!(x[k] <= u.values[k] * (1.0 + tol))) return {false, k, x[k], u.values[k]};
    }
    return {};
}

RobustnessConstants robustness_constants(const RateMatrix& q, const RateMatrix& q_tilde,
                                         const SensorVector& h, const SensorVector& h_tilde) {
    const std::size_t n = q.n_states();
    if (q_tilde.n_states() != n || h.size() != n || h_tilde.size() != n)
        fail(ErrorCode::DimensionMismatch, "robustness_constants size mismatch");
    RobustnessConstants c;
    c.k_q = 2.0 * (q_tilde.entries() - q.entries()).cwiseAbs().maxCoeff();
    const Eigen::VectorXd& hv = h.values();
    const Eigen::VectorXd& ht = h_tilde.values();
    c.k_h = 2.0 * hv.cwiseAbs().maxCoeff() * (hv - ht).cwiseAbs().maxCoeff() +
            (hv.cwiseProduct(hv) - ht.cwiseProduct(ht)).cwiseAbs().maxCoeff();
    c.lambda = deterministic_rate(q);
    return c;
}

std::vector<double> discounted_increments(const std::vector<double>& local_time, double lambda,
                                          const TimeGrid& grid) {
    require_grid_length(local_time, grid, "local time series");
    std::vector<double> out(grid.n_points(), 0.0);
    const double decay = std::exp(-lambda * grid.dt);
    const double mid = std::exp(-0.5 * lambda * grid.dt);
    for (std::size_t k = 0; k < grid.n_steps; ++k)
        out[k + 1] = decay * out[k] + mid * (local_time[k + 1] - local_time[k]);
    return out;
}

BoundSeries expected_distance_bound(double lambda, double h0, const std::vector<double>& drift_expect,
                                 const std::vector<double>& e3_expect, double hmax,
                                 const std::optional<std::vector<double>>& local_time,
                                 const TimeGrid& grid) {
    if (!(lambda >= 0.0)) fail(ErrorCode::NegativeRate, "lambda must be nonnegative");
    if (!drift_expect.empty()) require_grid_length(drift_expect, grid, "drift expectation");
    if (!e3_expect.empty()) require_grid_length(e3_expect, grid, "e3 expectation");
    if (local_time) require_grid_length(*local_time, grid, "local time terms");

    const std::vector<double> decay(grid.n_steps, std::exp(-lambda * grid.dt));
    const std::vector<double> drift = discounted_integral(decay, drift_expect, grid.dt);
    const std::vector<double> e3 = discounted_integral(decay, e3_expect, grid.dt);
    BoundSeries out{grid, std::vector<double>(grid.n_points()), BoundKind::ExpectedMean,
                    BoundScale::HilbertError};
    for (std::size_t k = 0; k < grid.n_points(); ++k) {
        double v = h0 * std::exp(-lambda * (grid.time(k) - grid.t0)) + drift[k] + hmax * e3[k];
        if (local_time) v += 0.25 * (*local_time)[k];
        out.values[k] = v;
    }
    return out;
}

BoundSeries robustness_bound(const RobustnessConstants& constants, double h0,
                                   const std::vector<double>& inv_min_expect,
                                   const std::optional<std::vector<double>>& local_time,
                                   const TimeGrid& grid) {
    const double lambda = constants.lambda;
    if (!(lambda >= 0.0)) fail(ErrorCode::NegativeRate, "lambda must be nonnegative");
    require_grid_length(inv_min_expect, grid, "1/min pi~ expectation");
    if (local_time) require_grid_length(*local_time, grid, "local time terms");

    const std::vector<double> decay(grid.n_steps, std::exp(-lambda * grid.dt));
    const std::vector<double> drift = discounted_integral(decay, inv_min_expect, grid.dt);
    BoundSeries out{grid, std::vector<double>(grid.n_points()), BoundKind::RobustnessMean,
                    BoundScale::HilbertError};
    for (std::size_t k = 0; k < grid.n_points(); ++k) {
        const double t = grid.time(k) - grid.t0;
        const double sensor = lambda > 0.0 ? (1.0 - std::exp(-lambda * t)) / lambda : t;
        double v = h0 * std::exp(-lambda * t) + constants.k_q * drift[k] + constants.k_h * sensor;
        if (local_time) v += 0.25 * (*local_time)[k];
        out.values[k] = v;
    }
    return out;
}

}  // namespace wonham

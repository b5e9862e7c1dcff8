#ifndef WONHAM_CORE_BOUND_SERIES_HPP
#define WONHAM_CORE_BOUND_SERIES_HPP

// Error bounds evaluated on a time grid: exponential bounds with a given rate
// series, the comparison ODE, and the expected-error bounds for approximate
// and misspecified filters.

#include <Eigen/Dense>

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "core/ctmc.hpp"
#include "core/filtering.hpp"

namespace wonham {

enum class BoundKind { DeterministicExp, PathwiseExp, OdeTanh, ExpectedMean, RobustnessMean };
enum class BoundScale { HilbertError, TanhQuarter };

const char* bound_kind_name(BoundKind kind) noexcept;

struct BoundSeries {
    TimeGrid grid;
    std::vector<double> values;
    BoundKind kind = BoundKind::DeterministicExp;
    BoundScale scale = BoundScale::HilbertError;
};

/// Upper end of the ODE state; keeps artanh finite.
inline constexpr double kOdeCeiling = 1.0 - 1e-12;

/// With R(t) the trapezoidal integral of `rate` and I(t) the integral of
/// e^{-(R(t)-R(s))} drift_error(s) ds:
///   HilbertError: H0 e^{-R} + I
///   TanhQuarter:  tanh(H0/4) e^{-R} + I/4   (capped below 1)
/// An empty drift_error means zero.
BoundSeries exponential_bound(double initial_h, const std::vector<double>& rate,
                              const std::vector<double>& drift_error, const TimeGrid& grid,
                              BoundScale scale, BoundKind kind = BoundKind::PathwiseExp);

/// Right-hand side f(k, t_k, u_k) of a scalar ODE on a grid.
using OdeRhs = std::function<double(std::size_t, double, double)>;

/// u_{k+1} = u_k + dt f / (1 + dt |f|), clamped to [0, kOdeCeiling].
std::vector<double> tamed_euler(double u0, const TimeGrid& grid, const OdeRhs& rhs);

/// Comparison ODE du/dt = -rate(t, u) u + drift_error(t) (1 - u^2) / 4 with
/// the state-dependent rate evaluated along `traj`. Returned on the tanh scale.
BoundSeries solve_bound_ode(const RateMatrix& q, const FilterTrajectory& traj,
                            const std::vector<double>& drift_error, double u0,
                            bool mirror = false);

/// 4 artanh(u) for a tanh-scale series; identity otherwise.
BoundSeries to_hilbert_scale(const BoundSeries& bound);

struct ComparisonReport {
    bool ok = true;
    std::size_t first_violation = 0;
    double x = 0.0;
    double bound = 0.0;
};

/// Checks x_k <= u_k (1 + tol) at every grid point.
ComparisonReport comparison_check(const std::vector<double>& x, const BoundSeries& u,
                                  double tol = 0.05);

struct RobustnessConstants {
    double k_q = 0.0;
    double k_h = 0.0;
    double lambda = 0.0;
};

RobustnessConstants robustness_constants(const RateMatrix& q, const RateMatrix& q_tilde,
                                         const SensorVector& h, const SensorVector& h_tilde);

/// H0 e^{-lambda t} + int e^{-lambda(t-s)} D(s) ds + hmax int e^{-lambda(t-s)} E3(s) ds
/// + local_time / 4, where local_time already holds the discounted local-time sum.
BoundSeries expected_distance_bound(double lambda, double h0, const std::vector<double>& drift_expect,
                                 const std::vector<double>& e3_expect, double hmax,
                                 const std::optional<std::vector<double>>& local_time,
                                 const TimeGrid& grid);

/// H0 e^{-lambda t} + K_q int e^{-lambda(t-s)} E[1/min p~] ds + K_h (1 - e^{-lambda t}) / lambda
/// + local_time / 4.
BoundSeries robustness_bound(const RobustnessConstants& constants, double h0,
                                   const std::vector<double>& inv_min_expect,
                                   const std::optional<std::vector<double>>& local_time,
                                   const TimeGrid& grid);

/// int_0^t e^{-lambda(t-s)} dL_s for a nondecreasing series L on the grid.
std::vector<double> discounted_increments(const std::vector<double>& local_time, double lambda,
                                          const TimeGrid& grid);

}  // namespace wonham

#endif  // WONHAM_CORE_BOUND_SERIES_HPP

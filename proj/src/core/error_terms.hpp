#ifndef WONHAM_CORE_ERROR_TERMS_HPP
#define WONHAM_CORE_ERROR_TERMS_HPP

// Per-state discrepancies between an approximate filter's coefficients and
// the Wonham coefficients, evaluated along the approximate trajectory.
//
// With sigma != 1 the observation is rescaled to unit noise first, so h enters
// as h/sigma and the gain as sigma * g~.

#include <Eigen/Dense>

#include <vector>

#include "core/ctmc.hpp"
#include "core/filtering.hpp"

namespace wonham {

struct ErrorTermSeries {
    TimeGrid grid;
    std::vector<Eigen::VectorXd> e1;  // (Q^T p~)_j / p~_j - f~_j / p~_j
    std::vector<Eigen::VectorXd> e2;  // h_j^2 - (g~_j / p~_j)^2
    std::vector<Eigen::VectorXd> e3;  // h_j - g~_j / p~_j
};

ErrorTermSeries error_terms(const RateMatrix& q, const SensorVector& h, double sigma,
                            const ApproximateFilterSpec& spec, const FilterTrajectory& traj);

/// max over ordered pairs i != k of (e1_i - e1_k) - (e2_i - e2_k) / 2.
std::vector<double> combined_drift_error(const ErrorTermSeries& terms);

/// max over ordered pairs i != k of e3_i - e3_k.
std::vector<double> e3_differences(const ErrorTermSeries& terms);

/// max_i - min_i of ((Q - Q~)^T p~)_i / p~_i; equals combined_drift_error for a
/// misspecified-Q filter with the true sensor.
std::vector<double> misspecified_drift_error(const RateMatrix& q, const RateMatrix& q_tilde,
                                             const FilterTrajectory& traj);

/// Spread max - min of a vector (0 for fewer than two entries).
double spread(const Eigen::VectorXd& v);

}  // namespace wonham

#endif  // WONHAM_CORE_ERROR_TERMS_HPP

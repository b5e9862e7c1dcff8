#ifndef WONHAM_CORE_SMOOTH_MAX_HPP
#define WONHAM_CORE_SMOOTH_MAX_HPP

#include <Eigen/Dense>

#include <vector>

#include "core/ctmc.hpp"

namespace wonham {

/// (1/alpha) log sum_i exp(alpha x_i).
double lse_alpha(const Eigen::VectorXd& x, double alpha);

/// sum_i c_i exp(alpha x_i) / sum_k exp(alpha x_k).
double softargmax_alpha(const Eigen::VectorXd& x, const Eigen::VectorXd& c, double alpha);

struct LocalTimeEstimate {
    TimeGrid grid;
    std::vector<double> values;  // nondecreasing
    double epsilon = 0.0;
};

/// Default window for estimate_local_time: 10 sqrt(dt).
double default_local_time_window(const TimeGrid& grid);

/// Occupation estimator of the local time at level 0:
/// L_k = (1/2 eps) sum_{m<k} 1{|Z_m| < eps} (Z_{m+1} - Z_m)^2.
LocalTimeEstimate estimate_local_time(const std::vector<double>& series, const TimeGrid& grid,
                                      double epsilon);

}  // namespace wonham

#endif  // WONHAM_CORE_SMOOTH_MAX_HPP

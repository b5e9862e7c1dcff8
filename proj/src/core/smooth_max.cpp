#include "core/smooth_max.hpp"

#include <cmath>

#include "core/error.hpp"

namespace wonham {

namespace {

void check_inputs(const Eigen::VectorXd& x, double alpha) {
    if (x.size() == 0) fail(ErrorCode::InvalidArgument, "smooth max of an empty vector");
    if (!x.allFinite()) fail(ErrorCode::InvalidArgument, "smooth max needs finite inputs");
    if (!(alpha > 0.0) || !std::isfinite(alpha)) fail(ErrorCode::InvalidArgument, "alpha must be positive");
}

}  // namespace

double lse_alpha(const Eigen::VectorXd& x, double alpha) {
    check_inputs(x, alpha);
    const double top = x.maxCoeff();
    const double sum = (alpha * (x.array() - top)).exp().sum();
    return top + std::log(sum) / alpha;
}

double softargmax_alpha(const Eigen::VectorXd& x, const Eigen::VectorXd& c, double alpha) {
    check_inputs(x, alpha);
    if (c.size() != x.size()) fail(ErrorCode::DimensionMismatch, "softargmax weights size mismatch");
    const Eigen::ArrayXd w = (alpha * (x.array() - x.maxCoeff())).exp();
    return (w * c.array()).sum() / w.sum();
}

double default_local_time_window(const TimeGrid& grid) {
    return 10.0 * std::sqrt(grid.dt);
}

LocalTimeEstimate estimate_local_time(const std::vector<double>& series, const TimeGrid& grid,
                                      double epsilon) {
    if (!(epsilon > 0.0)) fail(ErrorCode::InvalidArgument, "local time window must be positive");
    if (series.size() != grid.n_points()) fail(ErrorCode::GridMismatch, "series does not match grid");
    LocalTimeEstimate out{grid, std::vector<double>(grid.n_points(), 0.0), epsilon};
    const double scale = 0.5 / epsilon;
    for (std::size_t m = 0; m < grid.n_steps; ++m) {
        double add = 0.0;
        if (std::abs(series[m]) < epsilon) {
            const double dz = series[m + 1] - series[m];
            add = scale * dz * dz;
        }
        out.values[m + 1] = out.values[m] + add;
    }
    return out;
}

}  // namespace wonham

#include "core/error_terms.hpp"

#include <cmath>

#include "core/error.hpp"

namespace wonham {

double spread(const Eigen::VectorXd& v) {
    if (v.size() < 2) return 0.0;
    return v.maxCoeff() - v.minCoeff();
}

ErrorTermSeries error_terms(const RateMatrix& q, const SensorVector& h, double sigma,
                            const ApproximateFilterSpec& spec, const FilterTrajectory& traj) {
    if (!(sigma > 0.0)) fail(ErrorCode::InvalidArgument, "sigma must be positive");
    if (traj.states.empty()) fail(ErrorCode::InvalidArgument, "empty trajectory");
    const std::size_t n = q.n_states();
    if (h.size() != n || traj.n_states() != n)
        fail(ErrorCode::DimensionMismatch, "error_terms inputs disagree in size");

    const Eigen::MatrixXd qt = q.entries().transpose();
    const Eigen::VectorXd h_unit = h.values() / sigma;
    ErrorTermSeries out;
    out.grid = traj.grid;
    out.e1.reserve(traj.states.size());
    out.e2.reserve(traj.states.size());
    out.e3.reserve(traj.states.size());
    for (std::size_t k = 0; k < traj.states.size(); ++k) {
        const SimplexVector& state = traj.states[k];
        if (!state.is_interior()) {
            fail(ErrorCode::NonInteriorInput,
                 "trajectory leaves the interior at step " + std::to_string(k));
        }
        const Eigen::VectorXd& p = state.probs();
        const double t = traj.grid.time(k);
        const Eigen::VectorXd f = spec.drift(t, p);
        const Eigen::VectorXd g_ratio = (spec.gain(t, p) * sigma).cwiseQuotient(p);
        out.e1.push_back((qt * p - f).cwiseQuotient(p));
        out.e2.push_back(h_unit.cwiseProduct(h_unit) - g_ratio.cwiseProduct(g_ratio));
        out.e3.push_back(h_unit - g_ratio);
    }
    return out;
}

std::vector<double> combined_drift_error(const ErrorTermSeries& terms) {
    std::vector<double> out;
    out.reserve(terms.e1.size());
    for (std::size_t k = 0; k < terms.e1.size(); ++k)
        out.push_back(spread(terms.e1[k] - 0.5 * terms.e2[k]));
    return out;
}

std::vector<double> e3_differences(const ErrorTermSeries& terms) {
    std::vector<double> out;
    out.reserve(terms.e3.size());
    for (const auto& e : terms.e3) out.push_back(spread(e));
    return out;
}

std::vector<double> misspecified_drift_error(const RateMatrix& q, const RateMatrix& q_tilde,
                                             const FilterTrajectory& traj) {
    if (q.n_states() != q_tilde.n_states() || traj.n_states() != q.n_states())
        fail(ErrorCode::DimensionMismatch, "misspecified_drift_error size mismatch");
    const Eigen::MatrixXd dt = (q.entries() - q_tilde.entries()).transpose();
    std::vector<double> out;
    out.reserve(traj.states.size());
    for (const auto& s : traj.states) out.push_back(spread((dt * s.probs()).cwiseQuotient(s.probs())));
    return out;
}

}  // namespace wonham

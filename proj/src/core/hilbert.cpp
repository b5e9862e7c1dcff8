#include "core/hilbert.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "core/error.hpp"

namespace wonham {

namespace {

void require_interior(const SimplexVector& p, const char* what) {
    if (!p.is_interior()) fail(ErrorCode::NonInteriorInput, std::string(what) + " is not interior");
}

}  // namespace

double hilbert_distance(const SimplexVector& mu, const SimplexVector& nu) {
    if (mu.size() != nu.size()) fail(ErrorCode::DimensionMismatch, "hilbert_distance size mismatch");
    double max_log = -std::numeric_limits<double>::infinity();
    double min_log = std::numeric_limits<double>::infinity();
    bool any = false;
    for (std::size_t j = 0; j < mu.size(); ++j) {
        const bool in_mu = mu[j] >= kInteriorFloor;
        const bool in_nu = nu[j] >= kInteriorFloor;
        if (in_mu != in_nu) return std::numeric_limits<double>::infinity();
        if (!in_mu) continue;
        // Working with log-ratios keeps tiny entries from overflowing.
        const double r = std::log(mu[j]) - std::log(nu[j]);
        max_log = std::max(max_log, r);
        min_log = std::min(min_log, r);
        any = true;
    }
    if (!any) return 0.0;
    return std::max(0.0, max_log - min_log);
}

Eigen::VectorXd theta_chart(const SimplexVector& p, std::size_t k) {
    require_interior(p, "theta_chart input");
    if (k >= p.size()) fail(ErrorCode::InvalidArgument, "chart index out of range");
    const Eigen::VectorXd logs = p.probs().array().log().matrix();
    Eigen::VectorXd theta = logs.array() - logs(static_cast<Eigen::Index>(k));
    theta(static_cast<Eigen::Index>(k)) = 0.0;
    return theta;
}

SimplexVector theta_inverse(const Eigen::VectorXd& theta, std::size_t k) {
    if (k >= static_cast<std::size_t>(theta.size()))
        fail(ErrorCode::InvalidArgument, "chart index out of range");
    if (!theta.allFinite()) fail(ErrorCode::NonFiniteState, "theta has non-finite entries");
    if (theta(static_cast<Eigen::Index>(k)) != 0.0)
        fail(ErrorCode::InvalidArgument, "theta must vanish at the chart index");
    const double top = theta.maxCoeff();
    Eigen::VectorXd w = (theta.array() - top).exp().matrix();
    return SimplexVector(w / w.sum());
}

DeltaMatrix delta_matrix(const SimplexVector& pi, const SimplexVector& pi_tilde) {
    require_interior(pi, "pi");
    require_interior(pi_tilde, "pi~");
    if (pi.size() != pi_tilde.size()) fail(ErrorCode::DimensionMismatch, "delta_matrix size mismatch");
    // Delta_ik = r_i - r_k with r = log(pi / pi~).
    const Eigen::VectorXd r =
        (pi.probs().array().log() - pi_tilde.probs().array().log()).matrix();
    const Eigen::Index n = r.size();
    DeltaMatrix d{Eigen::MatrixXd(n, n)};
    for (Eigen::Index i = 0; i < n; ++i)
        for (Eigen::Index k = 0; k < n; ++k) d.values(i, k) = i == k ? 0.0 : r(i) - r(k);
    return d;
}

DeltaMax delta_infinity(const DeltaMatrix& delta) {
    const Eigen::Index n = delta.values.rows();
    DeltaMax best;
    if (n < 2) return best;
    best.value = -std::numeric_limits<double>::infinity();
    for (Eigen::Index i = 0; i < n; ++i) {
        for (Eigen::Index k = 0; k < n; ++k) {
            if (i == k) continue;
            if (delta.values(i, k) > best.value) {
                best.value = delta.values(i, k);
                best.i_star = static_cast<std::size_t>(i);
                best.k_star = static_cast<std::size_t>(k);
            }
        }
    }
    return best;
}

}  // namespace wonham

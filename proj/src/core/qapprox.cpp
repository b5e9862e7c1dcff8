#include "core/qapprox.hpp"

#include <cmath>
#include <sstream>

#include "core/error.hpp"

namespace wonham {

namespace {

constexpr double kNmfEps = 1e-300;

Eigen::MatrixXd offdiag(const Eigen::MatrixXd& m) {
    Eigen::MatrixXd out = m;
    out.diagonal().setZero();
    return out;
}

// Rebuilds a generator from off-diagonal rates, absorbing up to
// `max_residue` of rounding per row into the diagonal.
RateMatrix from_rounded(const Eigen::MatrixXd& rounded, double max_residue) {
    Eigen::MatrixXd q = rounded;
    for (Eigen::Index i = 0; i < q.rows(); ++i) {
        const double residue = q.row(i).sum();
        if (std::abs(residue) > max_residue) {
            std::ostringstream os;
            os << "fixture row " << i << " has rounding residue " << residue;
            fail(ErrorCode::RowSumNonZero, os.str());
        }
        q(i, i) = 0.0;
        q(i, i) = -q.row(i).sum();
    }
    return validate_rate_matrix(q);
}

}  // namespace

NmfResult nmf_factorize_q(const RateMatrix& q, int rank, RngStream& rng,
                          const NmfOptions& options) {
    const auto n = static_cast<Eigen::Index>(q.n_states());
    if (rank < 1) fail(ErrorCode::InvalidArgument, "rank must be positive");
    if (rank > n) fail(ErrorCode::RankTooLarge, "rank exceeds the number of states");
    if (options.inner_updates < 1) fail(ErrorCode::InvalidArgument, "inner_updates must be positive");
    if (options.iterations < 0) fail(ErrorCode::InvalidArgument, "iterations must be nonnegative");

    const Eigen::MatrixXd a = offdiag(q.entries());
    Eigen::MatrixXd mask = Eigen::MatrixXd::Ones(n, n);
    if (options.mask_diagonal) mask.diagonal().setZero();

    // Random init scaled so W V has the magnitude of A.
    const double scale = std::sqrt(std::max(a.mean(), 1e-12) / rank);
    std::uniform_real_distribution<double> unit(0.5, 1.5);
    Eigen::MatrixXd w(n, rank);
    Eigen::MatrixXd v(rank, n);
    for (Eigen::Index i = 0; i < w.size(); ++i) w.data()[i] = scale * unit(rng);
    for (Eigen::Index i = 0; i < v.size(); ++i) v.data()[i] = scale * unit(rng);

    NmfResult result{validate_rate_matrix(Eigen::MatrixXd::Zero(n, n)), {}, {}, 0.0, {}};
    auto objective = [&] { return (mask.cwiseProduct(a - w * v)).squaredNorm(); };
    for (int it = 0; it < options.iterations; ++it) {
        // Weighted Lee-Seung updates, repeated on each factor before switching
        // (accelerated MU). Every single update keeps the objective from rising.
        Eigen::MatrixXd approx;
        for (int r = 0; r < options.inner_updates; ++r) {
            approx = mask.cwiseProduct(w * v);
            v = v.cwiseProduct((w.transpose() * mask.cwiseProduct(a)).cwiseQuotient(
                    (w.transpose() * approx).array().max(kNmfEps).matrix()));
        }
        for (int r = 0; r < options.inner_updates; ++r) {
            approx = mask.cwiseProduct(w * v);
            w = w.cwiseProduct((mask.cwiseProduct(a) * v.transpose()).cwiseQuotient(
                    (approx * v.transpose()).array().max(kNmfEps).matrix()));
        }
        if (options.track_objective) result.objective.push_back(objective());
    }

    Eigen::MatrixXd q_tilde = offdiag(w * v);
    for (Eigen::Index i = 0; i < n; ++i) q_tilde(i, i) = -q_tilde.row(i).sum();
    result.q_tilde = validate_rate_matrix(q_tilde);
    result.w = std::move(w);
    result.v = std::move(v);
    result.offdiag_error = offdiag_distance(q, result.q_tilde);
    return result;
}

RateMatrix nmf_approximate_q(const RateMatrix& q, int rank, int iterations, RngStream& rng) {
    NmfOptions options;
    options.iterations = iterations;
    return nmf_factorize_q(q, rank, rng, options).q_tilde;
}

RateMatrix paper_q(FixtureModel which) {
    if (which == FixtureModel::ThreeState) {
        Eigen::MatrixXd q(3, 3);
        q << -3, 1, 2,
             1, -3, 2,
             1.5, 1.5, -3;
        return validate_rate_matrix(q);
    }
    Eigen::MatrixXd q(6, 6);
    q << -9, 3, 1, 1.5, 2.5, 1,
         1, -7.5, 1, 2, 2.3, 1.2,
         3, 2, -8, 1, 1, 1,
         2, 1.3, 1, -6, 0.7, 1,
         1.1, 1, 0.9, 3, -9, 3,
         1, 1, 3, 2, 2.5, -9.5;
    // Decimal entries do not sum to exactly zero in binary.
    return from_rounded(q, 1e-9);
}

RateMatrix paper_q_tilde(FixtureModel which) {
    if (which == FixtureModel::ThreeState) {
        Eigen::MatrixXd q(3, 3);
        q << -2.5, 0.5, 2,
             0.5, -2.5, 2,
             1.5, 1.5, -3;
        return from_rounded(q, 0.05);
    }
    Eigen::MatrixXd q(6, 6);
    q << -9, 3.04, 1.04, 1.54, 2.43, 0.95,
         0.94, -7.25, 1.70, 2.02, 1.58, 1.01,
         2.92, 2.05, -7.8, 0.69, 0.88, 1.26,
         2.11, 1.24, 0.52, -5.34, 0.84, 0.62,
         1.13, 0.86, 0.63, 3.02, -8.68, 3.04,
         1.02, 0.77, 2.64, 1.92, 2.92, -9.28;
    return from_rounded(q, 0.05);
}

double offdiag_distance(const RateMatrix& a, const RateMatrix& b) {
    if (a.n_states() != b.n_states()) fail(ErrorCode::DimensionMismatch, "offdiag_distance size mismatch");
    return offdiag(a.entries() - b.entries()).norm();
}

}  // namespace wonham

#ifndef WONHAM_CORE_QAPPROX_HPP
#define WONHAM_CORE_QAPPROX_HPP

// Low-rank nonnegative approximations of rate matrices and the reference
// models of the approximation experiment.

#include <Eigen/Dense>

#include <vector>

#include "core/ctmc.hpp"

namespace wonham {

struct NmfOptions {
    int iterations = 500;
    /// Fit only the off-diagonal entries (the diagonal of Q - diag(Q) is a
    /// structural zero that the reconstruction discards anyway).
    bool mask_diagonal = true;
    /// Consecutive updates of each factor per iteration.
    int inner_updates = 10;
    /// Record the objective after every iteration.
    bool track_objective = false;
};

struct NmfResult {
    RateMatrix q_tilde;
    Eigen::MatrixXd w;
    Eigen::MatrixXd v;
    double offdiag_error = 0.0;          // Frobenius norm over off-diagonal entries
    std::vector<double> objective;       // squared error per iteration, if tracked
};

/// Multiplicative-update NMF of A = Q - diag(Q); the off-diagonal part of W V
/// becomes Q~ and the diagonal is reset so rows sum to zero.
NmfResult nmf_factorize_q(const RateMatrix& q, int rank, RngStream& rng,
                          const NmfOptions& options = {});

RateMatrix nmf_approximate_q(const RateMatrix& q, int rank, int iterations, RngStream& rng);

enum class FixtureModel { ThreeState, SixState };

/// Reference generators of the approximation experiment.
RateMatrix paper_q(FixtureModel which);
/// Rounded rank-reduced approximations of paper_q, diagonal corrected so rows
/// sum to zero.
RateMatrix paper_q_tilde(FixtureModel which);

/// Frobenius norm of the off-diagonal difference.
double offdiag_distance(const RateMatrix& a, const RateMatrix& b);

}  // namespace wonham

#endif  // WONHAM_CORE_QAPPROX_HPP

#ifndef WONHAM_CORE_HILBERT_HPP
#define WONHAM_CORE_HILBERT_HPP

// Hilbert projective metric on the simplex, natural-parameter charts and the
// matrix of log-ratio differences between two filters.

#include <Eigen/Dense>

#include <cstddef>

#include "core/ctmc.hpp"

namespace wonham {

/// log(max_j mu_j/nu_j / min_j mu_j/nu_j); +infinity when the supports
/// (entries >= kInteriorFloor) differ.
double hilbert_distance(const SimplexVector& mu, const SimplexVector& nu);

/// theta^i = log(p^i / p^k), so theta^k = 0.
Eigen::VectorXd theta_chart(const SimplexVector& p, std::size_t k);

/// Softmax inverse of theta_chart.
SimplexVector theta_inverse(const Eigen::VectorXd& theta, std::size_t k);

/// Delta_ik = log(pi^i/pi^k) - log(pi~^i/pi~^k); zero diagonal.
struct DeltaMatrix {
    Eigen::MatrixXd values;
};

DeltaMatrix delta_matrix(const SimplexVector& pi, const SimplexVector& pi_tilde);

struct DeltaMax {
    double value = 0.0;
    std::size_t i_star = 0;
    std::size_t k_star = 0;
};

/// Largest off-diagonal entry; ties go to the lexicographically smallest (i,k).
DeltaMax delta_infinity(const DeltaMatrix& delta);

}  // namespace wonham

#endif  // WONHAM_CORE_HILBERT_HPP

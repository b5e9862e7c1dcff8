#ifndef WONHAM_TESTS_SUPPORT_HPP
#define WONHAM_TESTS_SUPPORT_HPP

#include <Eigen/Dense>

#include <random>

#include "core/ctmc.hpp"

namespace wonham::testing {

inline Eigen::MatrixXd vec_matrix(std::initializer_list<std::initializer_list<double>> rows) {
    Eigen::MatrixXd m(static_cast<Eigen::Index>(rows.size()),
                      static_cast<Eigen::Index>(rows.begin()->size()));
    Eigen::Index i = 0;
    for (const auto& r : rows) {
        Eigen::Index j = 0;
        for (double x : r) m(i, j++) = x;
        ++i;
    }
    return m;
}

inline Eigen::VectorXd vec(std::initializer_list<double> values) {
    Eigen::VectorXd v(static_cast<Eigen::Index>(values.size()));
    Eigen::Index i = 0;
    for (double x : values) v(i++) = x;
    return v;
}

/// Off-diagonal rates uniform in [lo, hi].
inline RateMatrix random_rate_matrix(std::size_t n, RngStream& rng, double lo = 0.1, double hi = 3.0) {
    std::uniform_real_distribution<double> u(lo, hi);
    Eigen::MatrixXd q(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(n));
    for (Eigen::Index i = 0; i < q.rows(); ++i) {
        for (Eigen::Index j = 0; j < q.cols(); ++j) q(i, j) = i == j ? 0.0 : u(rng);
        q(i, i) = -q.row(i).sum();
    }
    return validate_rate_matrix(q);
}

/// Interior point with entries bounded below by roughly `spread`-dependent mass.
inline SimplexVector random_interior(std::size_t n, RngStream& rng, double lo = 0.02) {
    std::uniform_real_distribution<double> u(lo, 1.0);
    Eigen::VectorXd w(static_cast<Eigen::Index>(n));
    for (Eigen::Index i = 0; i < w.size(); ++i) w(i) = u(rng);
    return SimplexVector::normalized(w);
}

inline RateMatrix three_state_q() {
    return validate_rate_matrix(vec_matrix({{-3, 1, 2}, {1, -3, 2}, {1.5, 1.5, -3}}));
}

inline RateMatrix two_state_q(double q = 1.0) {
    return validate_rate_matrix(vec_matrix({{-q, q}, {q, -q}}));
}

}  // namespace wonham::testing

#endif  // WONHAM_TESTS_SUPPORT_HPP

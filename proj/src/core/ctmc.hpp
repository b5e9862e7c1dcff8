#ifndef WONHAM_CORE_CTMC_HPP
#define WONHAM_CORE_CTMC_HPP

// Hidden-signal side of the model: generators, probability vectors on the
// finite state space, exact path sampling and the reference model builders.

#include <Eigen/Dense>

#include <cstddef>
#include <span>
#include <vector>

#include "core/rng.hpp"

namespace wonham {

/// Entries below this value do not count as "interior" of the simplex.
inline constexpr double kInteriorFloor = 1e-12;
inline constexpr double kRowSumTolerance = 1e-12;
inline constexpr double kSimplexSumTolerance = 1e-10;

/// Transition-intensity matrix of a continuous-time Markov chain.
///
/// Only obtainable through validate_rate_matrix(), so every instance has
/// nonnegative off-diagonals and zero row sums.
class RateMatrix {
public:
    std::size_t n_states() const noexcept { return static_cast<std::size_t>(q_.rows()); }
    const Eigen::MatrixXd& entries() const noexcept { return q_; }
    double operator()(std::size_t i, std::size_t j) const {
        return q_(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j));
    }
    /// True when every off-diagonal rate is > 0.
    bool strictly_positive() const noexcept { return strictly_positive_; }
    /// Total jump rate out of state i (that is, -q_ii).
    double exit_rate(std::size_t i) const { return -(*this)(i, i); }

private:
    RateMatrix(Eigen::MatrixXd q, bool strictly_positive)
        : q_(std::move(q)), strictly_positive_(strictly_positive) {}

    friend RateMatrix validate_rate_matrix(const Eigen::MatrixXd& entries);

    Eigen::MatrixXd q_;
    bool strictly_positive_;
};

/// Probability vector on n+1 states.
class SimplexVector {
public:
    /// Throws InvalidArgument unless entries are finite, >= 0 and sum to 1
    /// within kSimplexSumTolerance.
    explicit SimplexVector(Eigen::VectorXd probs);

    /// Renormalizes nonnegative weights with positive total mass.
    static SimplexVector normalized(const Eigen::VectorXd& weights);
    static SimplexVector uniform(std::size_t n_states);
    static SimplexVector vertex(std::size_t n_states, std::size_t index);

    std::size_t size() const noexcept { return static_cast<std::size_t>(p_.size()); }
    double operator[](std::size_t i) const { return p_(static_cast<Eigen::Index>(i)); }
    const Eigen::VectorXd& probs() const noexcept { return p_; }

    bool is_interior(double floor = kInteriorFloor) const noexcept;
    double min_entry() const noexcept { return p_.minCoeff(); }

private:
    Eigen::VectorXd p_;
};

/// Sensor function h evaluated at each state.
class SensorVector {
public:
    explicit SensorVector(Eigen::VectorXd values);

    std::size_t size() const noexcept { return static_cast<std::size_t>(h_.size()); }
    double operator[](std::size_t i) const { return h_(static_cast<Eigen::Index>(i)); }
    const Eigen::VectorXd& values() const noexcept { return h_; }
    double max_abs() const noexcept { return h_.cwiseAbs().maxCoeff(); }

private:
    Eigen::VectorXd h_;
};

/// Piecewise-constant trajectory of the chain on [0, horizon].
class CtmcPath {
public:
    CtmcPath(std::vector<double> jump_times, std::vector<int> states, double horizon,
             std::size_t n_states);

    const std::vector<double>& jump_times() const noexcept { return jump_times_; }
    const std::vector<int>& states() const noexcept { return states_; }
    double horizon() const noexcept { return horizon_; }
    std::size_t n_jumps() const noexcept { return jump_times_.size(); }

    /// State occupied at time t (right-continuous).
    int state_at(double t) const;

    /// Total time spent in each state over [0, horizon].
    Eigen::VectorXd occupation_times(std::size_t n_states) const;

private:
    std::vector<double> jump_times_;
    std::vector<int> states_;
    double horizon_;
};

struct TimeGrid {
    double t0 = 0.0;
    double dt = 1e-3;
    std::size_t n_steps = 0;

    TimeGrid() = default;
    TimeGrid(double t0_, double dt_, std::size_t n_steps_);

    /// Grid covering [0, horizon] with n_steps = round(horizon / dt).
    static TimeGrid covering(double horizon, double dt);

    double time(std::size_t k) const noexcept { return t0 + static_cast<double>(k) * dt; }
    double end() const noexcept { return time(n_steps); }
    std::size_t n_points() const noexcept { return n_steps + 1; }

    bool operator==(const TimeGrid&) const = default;
};

RateMatrix validate_rate_matrix(const Eigen::MatrixXd& entries);
RateMatrix validate_rate_matrix(std::size_t n_states, std::span<const double> row_major);

/// Strong connectivity of the jump graph (edges where q_ij > 0).
bool is_irreducible(const RateMatrix& q);

/// Solves Q^T pi = 0, sum(pi) = 1. Throws Reducible or SingularSystem.
SimplexVector stationary_distribution(const RateMatrix& q);

/// Exact event-driven sample: exponential holding times, embedded jump chain.
/// A state with zero exit rate absorbs the rest of the path.
CtmcPath sample_ctmc_path(const RateMatrix& q, const SimplexVector& init, double horizon,
                          RngStream& rng);

/// Reference generator on n+1 states: cyclic neighbours at rate n+1, every
/// other state at rate 1, diagonal -3n. For n = 2 all off-diagonals are 1.
RateMatrix appendix_b_rate_matrix(int n);

/// h^i = z_i + x_i with z_i uniform on {-10..10}, x_i uniform on [0,1);
/// n+1 entries.
SensorVector random_sensor(int n, RngStream& rng);

/// Shifts each entry by +/- min(mu)/2 (fair independent signs) and renormalizes.
SimplexVector perturb_initial(const SimplexVector& mu, RngStream& rng);
SimplexVector perturb_initial(const SimplexVector& mu, std::span<const bool> plus_signs);

}  // namespace wonham

#endif  // WONHAM_CORE_CTMC_HPP

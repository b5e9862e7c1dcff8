#ifndef WONHAM_CORE_RATES_HPP
#define WONHAM_CORE_RATES_HPP

// Contraction rates of the Hilbert error between two filters.

#include <cstddef>

#include "core/ctmc.hpp"

namespace wonham {

/// Exact subset enumeration is used up to this many states.
inline constexpr std::size_t kSubsetRateMaxStates = 15;

/// lambda = 2 min_{i != j} sqrt(q_ij q_ji).
double deterministic_rate(const RateMatrix& q);

/// 2 min_{i != k} sqrt(q_ik q_ki + sum_{j != i,k} min{q_ji q_ik / p^k, q_jk q_ki / p^i} p^j).
double pathwise_rate_simple(const RateMatrix& q, const SimplexVector& p);

struct SubsetRate {
    double value = 0.0;
    bool exact = true;  // false when the state count forced the simple fallback
};

/// Minimum over pairs and over subsets S of the remaining states. Above
/// kSubsetRateMaxStates this returns pathwise_rate_simple with exact = false.
SubsetRate pathwise_rate_subset(const RateMatrix& q, const SimplexVector& p);

/// Rate of the comparison ODE at level u in [0, 1). With mirror = true, the
/// exchanged form is evaluated on p (the exact filter), which classifies the
/// remaining states with the opposite inequality.
double state_dependent_rate(const RateMatrix& q, const SimplexVector& p, double u,
                            bool mirror = false);

}  // namespace wonham

#endif  // WONHAM_CORE_RATES_HPP

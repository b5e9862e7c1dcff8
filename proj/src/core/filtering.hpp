#ifndef WONHAM_CORE_FILTERING_HPP
#define WONHAM_CORE_FILTERING_HPP

// Observation synthesis and Euler integration of the Wonham filter and of
// general approximate filters d(pi~) = f~ dt + g~ dY.

#include <Eigen/Dense>

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "core/ctmc.hpp"

namespace wonham {

struct ObservationIncrements {
    TimeGrid grid;
    std::vector<double> dY;  // one per grid cell
    double sigma = 1.0;

    /// FNV-1a hash over the raw increment bytes.
    std::uint64_t checksum() const noexcept;
};

/// (t, pi~) -> (n+1)-vector. Must be pure: it is called concurrently.
using FilterField = std::function<Eigen::VectorXd(double, const Eigen::VectorXd&)>;

struct ApproximateFilterSpec {
    FilterField drift;
    FilterField gain;
    std::string label;
};

struct FilterTrajectory {
    TimeGrid grid;
    std::vector<SimplexVector> states;  // n_steps + 1 entries
    std::string spec_label;
    std::size_t floor_activations = 0;
    std::vector<double> projection_magnitude;  // l1 size of each post-step correction
    std::uint64_t obs_checksum = 0;

    std::size_t n_states() const { return states.front().size(); }
};

enum class WonhamScheme { Zakai, KushnerStratonovich };

ObservationIncrements simulate_observations(const CtmcPath& path, const SensorVector& h,
                                            double sigma, const TimeGrid& grid, RngStream& rng);

FilterTrajectory integrate_wonham(const RateMatrix& q, const SensorVector& h, double sigma,
                                  const ObservationIncrements& obs, const SimplexVector& init,
                                  WonhamScheme scheme = WonhamScheme::Zakai);

FilterTrajectory integrate_generic(const ApproximateFilterSpec& spec,
                                   const ObservationIncrements& obs, const SimplexVector& init);

/// Wonham filter written as drift/gain pair for parameters (Q~, h~).
ApproximateFilterSpec misspecified_wonham_spec(const RateMatrix& q_tilde,
                                               const SensorVector& h_tilde, double sigma);
ApproximateFilterSpec exact_wonham_spec(const RateMatrix& q, const SensorVector& h,
                                        double sigma);

/// Floors entries at kInteriorFloor and renormalizes in place. Returns the
/// number of floored entries.
std::size_t project_to_interior(Eigen::VectorXd& p);

}  // namespace wonham

#endif  // WONHAM_CORE_FILTERING_HPP

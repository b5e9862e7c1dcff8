#include "core/filtering.hpp"

#include <algorithm>
#include <cmath>
#include <cstring>
#include <sstream>

#include "core/error.hpp"

namespace wonham {

std::uint64_t ObservationIncrements::checksum() const noexcept {
    std::uint64_t hash = 0xcbf29ce484222325ULL;
    for (double v : dY) {
        unsigned char bytes[sizeof(double)];
        std::memcpy(bytes, &v, sizeof v);
        for (unsigned char b : bytes) {
            hash ^= b;
            hash *= 0x100000001b3ULL;
        }
    }
    return hash;
}

std::size_t project_to_interior(Eigen::VectorXd& p) {
    const Eigen::Index n = p.size();
    std::vector<bool> pinned(static_cast<std::size_t>(n), false);
    std::size_t activations = 0;
    // Pin entries at the floor, rescale the rest to the remaining mass, and
    // repeat in case rescaling pushed another entry under the floor.
    for (Eigen::Index round = 0; round <= n; ++round) {
        bool changed = false;
        double free_mass = 0.0;
        std::size_t n_pinned = 0;
        for (Eigen::Index i = 0; i < n; ++i) {
            auto idx = static_cast<std::size_t>(i);
            if (!pinned[idx] && !(p(i) >= kInteriorFloor)) {
                pinned[idx] = true;
                changed = true;
                ++activations;
            }
            if (pinned[idx]) {
                p(i) = kInteriorFloor;
                ++n_pinned;
            } else {
                free_mass += p(i);
            }
        }
        const double target = 1.0 - static_cast<double>(n_pinned) * kInteriorFloor;
        if (free_mass > 0.0) {
            const double scale = target / free_mass;
            for (Eigen::Index i = 0; i < n; ++i)
                if (!pinned[static_cast<std::size_t>(i)]) p(i) *= scale;
        } else {
            p.setConstant(1.0 / static_cast<double>(n));
            return activations;
        }
        if (!changed && round > 0) break;
    }
    return activations;
}

ObservationIncrements simulate_observations(const CtmcPath& path, const SensorVector& h,
                                            double sigma, const TimeGrid& grid, RngStream& rng) {
    if (!(sigma >= 0.0) || !std::isfinite(sigma))
        fail(ErrorCode::InvalidArgument, "sigma must be finite and nonnegative");
    if (grid.t0 < 0.0 || grid.end() > path.horizon() * (1.0 + 1e-12)) {
        std::ostringstream os;
        os << "grid end " << grid.end() << " exceeds path horizon " << path.horizon();
        fail(ErrorCode::GridExceedsPath, os.str());
    }
    const auto& jumps = path.jump_times();
    const auto& states = path.states();
    for (int s : states)
        if (static_cast<std::size_t>(s) >= h.size())
            fail(ErrorCode::DimensionMismatch, "sensor vector shorter than state space");

    ObservationIncrements obs;
    obs.grid = grid;
    obs.sigma = sigma;
    obs.dY.resize(grid.n_steps);

    // Exact integral of the piecewise-constant h(X) over each cell.
    std::size_t next = static_cast<std::size_t>(
        std::upper_bound(jumps.begin(), jumps.end(), grid.t0) - jumps.begin());
    for (std::size_t k = 0; k < grid.n_steps; ++k) {
        const double a = grid.time(k);
        const double b = grid.time(k + 1);
        double acc = 0.0;
        double left = a;
        while (next < jumps.size() && jumps[next] < b) {
            acc += h[static_cast<std::size_t>(states[next])] * (jumps[next] - left);
            left = jumps[next];
            ++next;
        }
        acc += h[static_cast<std::size_t>(states[next])] * (b - left);
        obs.dY[k] = acc;
    }

    // Noise drawn after the path, one normal per cell in time order.
    std::normal_distribution<double> normal(0.0, 1.0);
    const double scale = sigma * std::sqrt(grid.dt);
    for (std::size_t k = 0; k < grid.n_steps; ++k) obs.dY[k] += scale * normal(rng);
    return obs;
}

namespace {

void check_finite(const Eigen::VectorXd& p, std::size_t k) {
    if (!p.allFinite()) {
        std::ostringstream os;
        os << "NonFiniteState(" << k << "): step produced NaN/inf; reduce dt";
        fail(ErrorCode::NonFiniteState, os.str());
    }
}

void check_sigma(double sigma) {
    if (!(sigma > 0.0) || !std::isfinite(sigma))
        fail(ErrorCode::InvalidArgument, "filter sigma must be positive");
}

// Normalizes a raw post-step vector onto the interior of the simplex and
// records the correction.
SimplexVector finish_step(Eigen::VectorXd& raw, bool unnormalized, FilterTrajectory& out) {
    Eigen::VectorXd reference = raw;
    if (unnormalized) {
        const double total = raw.sum();
        if (total > 0.0) reference /= total;
    }
    out.floor_activations += project_to_interior(raw);
    out.projection_magnitude.push_back((raw - reference).cwiseAbs().sum());
    return SimplexVector(raw);
}

}  // namespace

FilterTrajectory integrate_wonham(const RateMatrix& q, const SensorVector& h, double sigma,
                                  const ObservationIncrements& obs, const SimplexVector& init,
                                  WonhamScheme scheme) {
    check_sigma(sigma);
    const std::size_t n = q.n_states();
    if (h.size() != n || init.size() != n)
        fail(ErrorCode::DimensionMismatch, "Q, h and initial law must have equal size");
    if (obs.dY.size() != obs.grid.n_steps)
        fail(ErrorCode::DimensionMismatch, "increment count does not match grid");

    FilterTrajectory out;
    out.grid = obs.grid;
    out.spec_label = scheme == WonhamScheme::Zakai ? "wonham-zakai" : "wonham-ks";
    out.obs_checksum = obs.checksum();
    out.states.reserve(obs.grid.n_points());
    out.projection_magnitude.reserve(obs.grid.n_steps);

    const Eigen::MatrixXd qt = q.entries().transpose();
    const Eigen::VectorXd& hv = h.values();
    const double inv_var = 1.0 / (sigma * sigma);
    const double dt = obs.grid.dt;

    Eigen::VectorXd p = init.probs();
    project_to_interior(p);
    out.states.emplace_back(p);
    Eigen::VectorXd next(static_cast<Eigen::Index>(n));
    for (std::size_t k = 0; k < obs.grid.n_steps; ++k) {
        const double dy = obs.dY[k];
        if (scheme == WonhamScheme::Zakai) {
            next = p + qt * p * dt + hv.cwiseProduct(p) * (dy * inv_var);
        } else {
            const double mean_h = p.dot(hv);
            const Eigen::VectorXd centred = (hv.array() - mean_h).matrix().cwiseProduct(p);
            next = p + qt * p * dt + centred * ((dy - mean_h * dt) * inv_var);
        }
        check_finite(next, k + 1);
        out.states.push_back(finish_step(next, scheme == WonhamScheme::Zakai, out));
        p = out.states.back().probs();
    }
    return out;
}

FilterTrajectory integrate_generic(const ApproximateFilterSpec& spec,
                                   const ObservationIncrements& obs, const SimplexVector& init) {
    if (!spec.drift || !spec.gain) fail(ErrorCode::InvalidArgument, "filter spec is incomplete");
    if (obs.dY.size() != obs.grid.n_steps)
        fail(ErrorCode::DimensionMismatch, "increment count does not match grid");

    FilterTrajectory out;
    out.grid = obs.grid;
    out.spec_label = spec.label;
    out.obs_checksum = obs.checksum();
    out.states.reserve(obs.grid.n_points());
    out.projection_magnitude.reserve(obs.grid.n_steps);

    const double dt = obs.grid.dt;
    Eigen::VectorXd p = init.probs();
    project_to_interior(p);
    out.states.emplace_back(p);
    for (std::size_t k = 0; k < obs.grid.n_steps; ++k) {
        const double t = obs.grid.time(k);
        const Eigen::VectorXd f = spec.drift(t, p);
        const Eigen::VectorXd g = spec.gain(t, p);
        if (f.size() != p.size() || g.size() != p.size())
            fail(ErrorCode::DimensionMismatch, "filter spec returned a vector of the wrong size");
        Eigen::VectorXd next = p + f * dt + g * obs.dY[k];
        check_finite(next, k + 1);
        out.states.push_back(finish_step(next, false, out));
        p = out.states.back().probs();
    }
    return out;
}

ApproximateFilterSpec misspecified_wonham_spec(const RateMatrix& q_tilde,
                                               const SensorVector& h_tilde, double sigma) {
    check_sigma(sigma);
    if (q_tilde.n_states() != h_tilde.size())
        fail(ErrorCode::DimensionMismatch, "Q~ and h~ must have equal size");
    const Eigen::MatrixXd qt = q_tilde.entries().transpose();
    const Eigen::VectorXd hv = h_tilde.values();
    const double inv_var = 1.0 / (sigma * sigma);

    ApproximateFilterSpec spec;
    spec.gain = [hv, inv_var](double, const Eigen::VectorXd& p) -> Eigen::VectorXd {
        const double mean_h = p.dot(hv);
        return (hv.array() - mean_h).matrix().cwiseProduct(p) * inv_var;
    };
    spec.drift = [qt, hv, inv_var](double, const Eigen::VectorXd& p) -> Eigen::VectorXd {
        const double mean_h = p.dot(hv);
        const Eigen::VectorXd centred = (hv.array() - mean_h).matrix().cwiseProduct(p);
        return qt * p - centred * (mean_h * inv_var);
    };
    std::ostringstream label;
    label << "wonham(Q~=[";
    for (Eigen::Index i = 0; i < qt.rows(); ++i) {
        if (i > 0) label << ';';
        for (Eigen::Index j = 0; j < qt.cols(); ++j) label << (j > 0 ? "," : "") << qt(j, i);
    }
    label << "],h~=[";
    for (Eigen::Index i = 0; i < hv.size(); ++i) label << (i > 0 ? "," : "") << hv(i);
    label << "],sigma=" << sigma << ')';
    spec.label = label.str();
    return spec;
}

ApproximateFilterSpec exact_wonham_spec(const RateMatrix& q, const SensorVector& h,
                                        double sigma) {
    return misspecified_wonham_spec(q, h, sigma);
}

}  // namespace wonham

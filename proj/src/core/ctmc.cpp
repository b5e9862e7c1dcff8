#include "core/ctmc.hpp"

#include <algorithm>
#include <cmath>
#include <memory>
#include <queue>
#include <sstream>

#include "core/error.hpp"

namespace wonham {

const char* error_code_name(ErrorCode code) noexcept {
    switch (code) {
        case ErrorCode::InvalidArgument: return "InvalidArgument";
        case ErrorCode::NegativeOffDiagonal: return "NegativeOffDiagonal";
        case ErrorCode::RowSumNonZero: return "RowSumNonZero";
        case ErrorCode::Reducible: return "Reducible";
        case ErrorCode::SingularSystem: return "SingularSystem";
        case ErrorCode::NonInteriorInput: return "NonInteriorInput";
        case ErrorCode::DimensionMismatch: return "DimensionMismatch";
        case ErrorCode::NonFiniteState: return "NonFiniteState";
        case ErrorCode::GridExceedsPath: return "GridExceedsPath";
        case ErrorCode::RankTooLarge: return "RankTooLarge";
        case ErrorCode::NegativeRate: return "NegativeRate";
        case ErrorCode::GridMismatch: return "GridMismatch";
        case ErrorCode::Config: return "Config";
        case ErrorCode::Io: return "Io";
    }
    return "Unknown";
}

namespace {

// Uniform draw on [0, 1) built from the raw 53 high bits, so results do not
// depend on the standard library's canonical-float implementation.
double unit_uniform(RngStream& rng) {
    return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

std::size_t draw_index(const Eigen::VectorXd& weights, double total, RngStream& rng) {
    const double target = unit_uniform(rng) * total;
    double acc = 0.0;
    const auto n = static_cast<std::size_t>(weights.size());
    std::size_t last_positive = 0;
    for (std::size_t i = 0; i < n; ++i) {
        const double w = weights(static_cast<Eigen::Index>(i));
        if (w <= 0.0) continue;
        last_positive = i;
        acc += w;
        if (target < acc) return i;
    }
    return last_positive;
}

}  // namespace

// ---------------------------------------------------------------------------
// Value types

SimplexVector::SimplexVector(Eigen::VectorXd probs) : p_(std::move(probs)) {
    if (p_.size() == 0) fail(ErrorCode::InvalidArgument, "simplex vector must be non-empty");
    for (Eigen::Index i = 0; i < p_.size(); ++i) {
        if (!std::isfinite(p_(i)) || p_(i) < 0.0) {
            std::ostringstream os;
            os << "simplex entry " << i << " = " << p_(i) << " is negative or non-finite";
            fail(ErrorCode::InvalidArgument, os.str());
        }
    }
    const double residual = std::abs(p_.sum() - 1.0);
    if (residual > kSimplexSumTolerance) {
        std::ostringstream os;
        os << "simplex entries sum to " << p_.sum() << " (residual " << residual << ")";
        fail(ErrorCode::InvalidArgument, os.str());
    }
}

SimplexVector SimplexVector::normalized(const Eigen::VectorXd& weights) {
    if (weights.size() == 0) fail(ErrorCode::InvalidArgument, "empty weight vector");
    if (!weights.allFinite() || (weights.array() < 0.0).any())
        fail(ErrorCode::InvalidArgument, "weights must be finite and nonnegative");
    const double total = weights.sum();
    if (!(total > 0.0)) fail(ErrorCode::InvalidArgument, "weights have zero mass");
    return SimplexVector(weights / total);
}

SimplexVector SimplexVector::uniform(std::size_t n_states) {
    if (n_states == 0) fail(ErrorCode::InvalidArgument, "uniform vector needs at least one state");
    return SimplexVector(Eigen::VectorXd::Constant(static_cast<Eigen::Index>(n_states),
                                                   1.0 / static_cast<double>(n_states)));
}

SimplexVector SimplexVector::vertex(std::size_t n_states, std::size_t index) {
    if (index >= n_states) fail(ErrorCode::InvalidArgument, "vertex index out of range");
    Eigen::VectorXd p = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(n_states));
    p(static_cast<Eigen::Index>(index)) = 1.0;
    return SimplexVector(std::move(p));
}

bool SimplexVector::is_interior(double floor) const noexcept {
    return p_.minCoeff() >= floor;
}

SensorVector::SensorVector(Eigen::VectorXd values) : h_(std::move(values)) {
    if (h_.size() == 0) fail(ErrorCode::InvalidArgument, "sensor vector must be non-empty");
    if (!h_.allFinite()) fail(ErrorCode::InvalidArgument, "sensor vector has non-finite entries");
}

CtmcPath::CtmcPath(std::vector<double> jump_times, std::vector<int> states, double horizon,
                   std::size_t n_states)
    : jump_times_(std::move(jump_times)), states_(std::move(states)), horizon_(horizon) {
    if (!(horizon_ > 0.0)) fail(ErrorCode::InvalidArgument, "path horizon must be positive");
    if (states_.size() != jump_times_.size() + 1)
        fail(ErrorCode::InvalidArgument, "path needs exactly one more state than jumps");
    for (std::size_t k = 0; k < jump_times_.size(); ++k) {
        const double prev = k == 0 ? 0.0 : jump_times_[k - 1];
        if (!(jump_times_[k] > prev) || jump_times_[k] > horizon_)
            fail(ErrorCode::InvalidArgument, "jump times must be strictly increasing in (0, T]");
    }
    for (std::size_t k = 0; k < states_.size(); ++k) {
        if (states_[k] < 0 || static_cast<std::size_t>(states_[k]) >= n_states)
            fail(ErrorCode::InvalidArgument, "path state out of range");
        if (k > 0 && states_[k] == states_[k - 1])
            fail(ErrorCode::InvalidArgument, "consecutive path states must differ");
    }
}

int CtmcPath::state_at(double t) const {
    const auto it = std::upper_bound(jump_times_.begin(), jump_times_.end(), t);
    return states_[static_cast<std::size_t>(it - jump_times_.begin())];
}

Eigen::VectorXd CtmcPath::occupation_times(std::size_t n_states) const {
    Eigen::VectorXd occ = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(n_states));
    double start = 0.0;
    for (std::size_t k = 0; k < states_.size(); ++k) {
        const double stop = k < jump_times_.size() ? jump_times_[k] : horizon_;
        occ(states_[k]) += stop - start;
        start = stop;
    }
    return occ;
}

TimeGrid::TimeGrid(double t0_, double dt_, std::size_t n_steps_)
    : t0(t0_), dt(dt_), n_steps(n_steps_) {
    if (!(dt > 0.0) || !std::isfinite(dt)) fail(ErrorCode::InvalidArgument, "grid step must be positive");
    if (!std::isfinite(t0)) fail(ErrorCode::InvalidArgument, "grid origin must be finite");
}

TimeGrid TimeGrid::covering(double horizon, double dt) {
    if (!(horizon > 0.0)) fail(ErrorCode::InvalidArgument, "horizon must be positive");
    if (!(dt > 0.0)) fail(ErrorCode::InvalidArgument, "grid step must be positive");
    const auto steps = static_cast<std::size_t>(std::llround(horizon / dt));
    return TimeGrid(0.0, dt, std::max<std::size_t>(steps, 1));
}

// ---------------------------------------------------------------------------
// Operations

RateMatrix validate_rate_matrix(const Eigen::MatrixXd& entries) {
    if (entries.rows() != entries.cols() || entries.rows() == 0)
        fail(ErrorCode::DimensionMismatch, "rate matrix must be square and non-empty");
    if (!entries.allFinite()) fail(ErrorCode::InvalidArgument, "rate matrix has non-finite entries");
    const Eigen::Index n = entries.rows();
    bool strictly_positive = true;
    for (Eigen::Index i = 0; i < n; ++i) {
        for (Eigen::Index j = 0; j < n; ++j) {
            if (i == j) continue;
            if (entries(i, j) < 0.0) {
                std::ostringstream os;
                os << "NegativeOffDiagonal(" << i << "," << j << "): " << entries(i, j);
                fail(ErrorCode::NegativeOffDiagonal, os.str());
            }
            if (!(entries(i, j) > 0.0)) strictly_positive = false;
        }
        const double residual = entries.row(i).sum();
        if (std::abs(residual) > kRowSumTolerance) {
            std::ostringstream os;
            os << "RowSumNonZero(" << i << ", " << residual << ")";
            fail(ErrorCode::RowSumNonZero, os.str());
        }
    }
    if (n == 1) strictly_positive = false;
    return RateMatrix(entries, strictly_positive);
}

RateMatrix validate_rate_matrix(std::size_t n_states, std::span<const double> row_major) {
    if (row_major.size() != n_states * n_states)
        fail(ErrorCode::DimensionMismatch, "rate matrix data does not match n_states^2");
    const auto n = static_cast<Eigen::Index>(n_states);
    Eigen::MatrixXd q(n, n);
    for (Eigen::Index i = 0; i < n; ++i)
        for (Eigen::Index j = 0; j < n; ++j)
            q(i, j) = row_major[static_cast<std::size_t>(i * n + j)];
    return validate_rate_matrix(q);
}

bool is_irreducible(const RateMatrix& q) {
    const std::size_t n = q.n_states();
    // Forward reachability from 0 on the jump graph and on its transpose.
    auto reaches_all = [&](bool transpose) {
        std::vector<bool> seen(n, false);
        std::queue<std::size_t> todo;
        todo.push(0);
        seen[0] = true;
        while (!todo.empty()) {
            const std::size_t i = todo.front();
            todo.pop();
            for (std::size_t j = 0; j < n; ++j) {
                const double rate = transpose ? q(j, i) : q(i, j);
                if (j != i && rate > 0.0 && !seen[j]) {
                    seen[j] = true;
                    todo.push(j);
                }
            }
        }
        return std::all_of(seen.begin(), seen.end(), [](bool b) { return b; });
    };
    return reaches_all(false) && reaches_all(true);
}

SimplexVector stationary_distribution(const RateMatrix& q) {
    const auto n = static_cast<Eigen::Index>(q.n_states());
    if (n == 1) return SimplexVector::uniform(1);
    if (!is_irreducible(q)) fail(ErrorCode::Reducible, "rate matrix is reducible");

    // Q^T pi = 0 has rank n-1; replace its last equation by the normalization.
    Eigen::MatrixXd system = q.entries().transpose();
    system.row(n - 1).setOnes();
    Eigen::VectorXd rhs = Eigen::VectorXd::Zero(n);
    rhs(n - 1) = 1.0;

    Eigen::FullPivLU<Eigen::MatrixXd> lu(system);
    if (!lu.isInvertible()) fail(ErrorCode::SingularSystem, "stationary system is singular");
    Eigen::VectorXd pi = lu.solve(rhs);

    // Round-off can leave tiny negative entries on nearly absorbing chains.
    pi = pi.cwiseMax(0.0);
    pi /= pi.sum();
    const double residual = (q.entries().transpose() * pi).cwiseAbs().maxCoeff();
    const double scale = std::max(1.0, q.entries().cwiseAbs().maxCoeff());
    if (residual > 1e-10 * scale) {
        std::ostringstream os;
        os << "stationary residual " << residual << " exceeds tolerance";
        fail(ErrorCode::SingularSystem, os.str());
    }
    return SimplexVector(std::move(pi));
}

CtmcPath sample_ctmc_path(const RateMatrix& q, const SimplexVector& init, double horizon,
                          RngStream& rng) {
    if (!(horizon > 0.0)) fail(ErrorCode::InvalidArgument, "horizon must be positive");
    const std::size_t n = q.n_states();
    if (init.size() != n) fail(ErrorCode::DimensionMismatch, "initial law does not match Q");

    std::vector<double> jumps;
    std::vector<int> states;
    std::size_t state = draw_index(init.probs(), 1.0, rng);
    states.push_back(static_cast<int>(state));

    Eigen::VectorXd weights(static_cast<Eigen::Index>(n));
    double t = 0.0;
    while (true) {
        const double rate = q.exit_rate(state);
        if (!(rate > 0.0)) break;  // absorbing
        // Inverse-CDF exponential; 1 - U lies in (0, 1].
        t += -std::log1p(-unit_uniform(rng)) / rate;
        if (t >= horizon) break;
        for (std::size_t j = 0; j < n; ++j)
            weights(static_cast<Eigen::Index>(j)) = j == state ? 0.0 : q(state, j);
        state = draw_index(weights, rate, rng);
        jumps.push_back(t);
        states.push_back(static_cast<int>(state));
    }
    return CtmcPath(std::move(jumps), std::move(states), horizon, n);
}

RateMatrix appendix_b_rate_matrix(int n) {
    if (n < 2) fail(ErrorCode::InvalidArgument, "appendix_b_rate_matrix needs n >= 2");
    const int states = n + 1;
    Eigen::MatrixXd q(states, states);
    if (n == 2) {
        q.setOnes();
    } else {
        for (int i = 0; i < states; ++i) {
            for (int j = 0; j < states; ++j) {
                const bool neighbour = j == (i + 1) % states || j == (i + states - 1) % states;
                q(i, j) = neighbour ? static_cast<double>(n + 1) : 1.0;
            }
        }
    }
    for (int i = 0; i < states; ++i) {
        q(i, i) = 0.0;
        q(i, i) = -q.row(i).sum();
    }
    return validate_rate_matrix(q);
}

SensorVector random_sensor(int n, RngStream& rng) {
    if (n < 1) fail(ErrorCode::InvalidArgument, "random_sensor needs n >= 1");
    std::uniform_int_distribution<int> integer_part(-10, 10);
    Eigen::VectorXd h(n + 1);
    for (int i = 0; i <= n; ++i) {
        const int z = integer_part(rng);
        h(i) = static_cast<double>(z) + unit_uniform(rng);
    }
    return SensorVector(std::move(h));
}

SimplexVector perturb_initial(const SimplexVector& mu, std::span<const bool> plus_signs) {
    if (!mu.is_interior()) fail(ErrorCode::NonInteriorInput, "perturb_initial needs an interior law");
    if (plus_signs.size() != mu.size()) fail(ErrorCode::DimensionMismatch, "one sign per state required");
    const double shift = 0.5 * mu.min_entry();
    Eigen::VectorXd w = mu.probs();
    for (std::size_t i = 0; i < plus_signs.size(); ++i)
        w(static_cast<Eigen::Index>(i)) += plus_signs[i] ? shift : -shift;
    return SimplexVector::normalized(w);
}

SimplexVector perturb_initial(const SimplexVector& mu, RngStream& rng) {
    if (!mu.is_interior()) fail(ErrorCode::NonInteriorInput, "perturb_initial needs an interior law");
    // std::vector<bool> is not contiguous, so use a plain array for the span.
    std::unique_ptr<bool[]> signs(new bool[mu.size()]);
    for (std::size_t i = 0; i < mu.size(); ++i) signs[i] = (rng() >> 63) != 0;
    return perturb_initial(mu, std::span<const bool>(signs.get(), mu.size()));
}

}  // namespace wonham

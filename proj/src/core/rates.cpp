#include "core/rates.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <vector>

#include "core/error.hpp"

namespace wonham {

namespace {

void require_interior(const RateMatrix& q, const SimplexVector& p) {
    if (p.size() != q.n_states()) fail(ErrorCode::DimensionMismatch, "pi~ does not match Q");
    if (!p.is_interior()) fail(ErrorCode::NonInteriorInput, "rate needs an interior pi~");
}

}  // namespace

double deterministic_rate(const RateMatrix& q) {
    const std::size_t n = q.n_states();
    if (n < 2) return 0.0;
    double best = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i + 1; j < n; ++j) best = std::min(best, q(i, j) * q(j, i));
    return 2.0 * std::sqrt(best);
}

double pathwise_rate_simple(const RateMatrix& q, const SimplexVector& p) {
    require_interior(q, p);
    const std::size_t n = q.n_states();
    if (n < 2) return 0.0;
    double best = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t k = 0; k < n; ++k) {
            if (i == k) continue;
            double radicand = q(i, k) * q(k, i);
            for (std::size_t j = 0; j < n; ++j) {
                if (j == i || j == k) continue;
                radicand += std::min(q(j, i) * q(i, k) / p[k], q(j, k) * q(k, i) / p[i]) * p[j];
            }
            best = std::min(best, radicand);
        }
    }
    return 2.0 * std::sqrt(best);
}

SubsetRate pathwise_rate_subset(const RateMatrix& q, const SimplexVector& p) {
    require_interior(q, p);
    const std::size_t n = q.n_states();
    if (n < 2) return {0.0, true};
    if (n > kSubsetRateMaxStates) return {pathwise_rate_simple(q, p), false};

    // The radicand factors as (a + B) (b + A) where, for j in S,
    // A collects q_ji p^j / p^i and, for l outside S, B collects q_lk p^l / p^k.
    double best = std::numeric_limits<double>::infinity();
    std::vector<double> to_i;
    std::vector<double> to_k;
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t k = 0; k < n; ++k) {
            if (i == k) continue;
            to_i.clear();
            to_k.clear();
            for (std::size_t j = 0; j < n; ++j) {
                if (j == i || j == k) continue;
                to_i.push_back(q(j, i) * p[j] / p[i]);
                to_k.push_back(q(j, k) * p[j] / p[k]);
            }
            const double a = q(i, k) * p[i] / p[k];
            const double b = q(k, i) * p[k] / p[i];
            const std::size_t m = to_i.size();
            const std::uint64_t n_subsets = std::uint64_t{1} << m;
            for (std::uint64_t mask = 0; mask < n_subsets; ++mask) {
                double in_s = 0.0;
                double out_s = 0.0;
                for (std::size_t j = 0; j < m; ++j) {
                    if (mask & (std::uint64_t{1} << j))
                        in_s += to_i[j];
                    else
                        out_s += to_k[j];
                }
                best = std::min(best, (a + out_s) * (b + in_s));
            }
        }
    }
    return {2.0 * std::sqrt(best), true};
}

double state_dependent_rate(const RateMatrix& q, const SimplexVector& p, double u, bool mirror) {
    require_interior(q, p);
    if (!(u >= 0.0) || !(u < 1.0)) fail(ErrorCode::InvalidArgument, "state_dependent_rate needs u in [0, 1)");
    const std::size_t n = q.n_states();
    if (n < 2) return 0.0;
    const double up = (1.0 + u) / (1.0 - u);
    const double down = (1.0 - u) / (1.0 + u);
    double best = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t k = 0; k < n; ++k) {
            if (i == k) continue;
            double value = 0.0;
            if (!mirror) {
                double toward_k = q(i, k) * p[i] / p[k];
                double toward_i = q(k, i) * p[k] / p[i];
                for (std::size_t j = 0; j < n; ++j) {
                    if (j == i || j == k) continue;
                    const bool in_j = q(j, k) / p[k] >= q(j, i) / p[i] * down * down;
                    if (in_j)
                        toward_i += q(j, i) * p[j] / p[i];
                    else
                        toward_k += q(j, k) * p[j] / p[k];
                }
                value = toward_k * up + toward_i * down;
            } else {
                double toward_k = q(i, k) * p[i] / p[k];
                double toward_i = q(k, i) * p[k] / p[i];
                for (std::size_t j = 0; j < n; ++j) {
                    if (j == i || j == k) continue;
                    const bool in_j = q(j, k) / p[k] <= q(j, i) / p[i] * up * up;
                    if (in_j)
                        toward_k += q(j, k) * p[j] / p[k];
                    else
                        toward_i += q(j, i) * p[j] / p[i];
                }
                value = toward_k * down + toward_i * up;
            }
            best = std::min(best, value);
        }
    }
    return best;
}

}  // namespace wonham

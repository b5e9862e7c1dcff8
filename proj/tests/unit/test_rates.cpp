#include <doctest.h>

#include <cmath>
#include <limits>

#include "core/error.hpp"
#include "core/rates.hpp"
#include "test_support.hpp"

using namespace wonham;
using namespace wonham::testing;

namespace {

// Literal four-sum radicand minimized over every subset S of the remaining states.
double subset_rate_oracle(const RateMatrix& q, const SimplexVector& p) {
    const std::size_t n = q.n_states();
    double best = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t k = 0; k < n; ++k) {
            if (i == k) continue;
            for (std::uint64_t s = 0; s < (std::uint64_t{1} << n); ++s) {
                auto in_s = [&](std::size_t j) { return (s >> j) & 1U; };
                double r = q(i, k) * q(k, i);
                for (std::size_t j = 0; j < n; ++j) {
                    if (j == i || j == k) continue;
                    if (in_s(j)) r += q(i, k) * q(j, i) * p[j] / p[k];
                    else r += q(k, i) * q(j, k) * p[j] / p[i];
                }
                for (std::size_t j = 0; j < n; ++j) {
                    if (j == i || j == k || !in_s(j)) continue;
                    for (std::size_t l = 0; l < n; ++l) {
                        if (l == i || l == k || in_s(l)) continue;
                        r += q(j, i) * q(l, k) * p[j] * p[l] / (p[i] * p[k]);
                    }
                }
                best = std::min(best, r);
            }
        }
    }
    return 2.0 * std::sqrt(best);
}

}  // namespace

TEST_CASE("deterministic rate examples") {
    CHECK(deterministic_rate(two_state_q()) == 2.0);
    CHECK(deterministic_rate(three_state_q()) == doctest::Approx(2.0));
    const RateMatrix gap = validate_rate_matrix(vec_matrix({{-1, 0, 1}, {1, -2, 1}, {1, 1, -2}}));
    CHECK(deterministic_rate(gap) == 0.0);
    for (int n : {2, 20, 50, 100}) CHECK(deterministic_rate(appendix_b_rate_matrix(n)) == 2.0);
}

TEST_CASE("pathwise rate examples") {
    const SimplexVector u3 = SimplexVector::uniform(3);
    CHECK(pathwise_rate_simple(three_state_q(), u3) == doctest::Approx(2.0 * std::sqrt(2.5)).epsilon(1e-12));
    const SubsetRate s = pathwise_rate_subset(three_state_q(), u3);
    CHECK(s.exact);
    CHECK(s.value == doctest::Approx(2.0 * std::sqrt(2.5)).epsilon(1e-12));

    RngStream rng(4);
    const RateMatrix q2 = random_rate_matrix(2, rng);
    const SimplexVector p2 = random_interior(2, rng);
    CHECK(pathwise_rate_simple(q2, p2) == doctest::Approx(deterministic_rate(q2)));
    CHECK(pathwise_rate_subset(q2, p2).value == doctest::Approx(deterministic_rate(q2)));

    CHECK_THROWS_AS(pathwise_rate_simple(three_state_q(), SimplexVector::vertex(3, 0)), Error);
}

TEST_CASE("subset rate agrees with the literal four-sum formula") {
    RngStream rng(71);
    for (int trial = 0; trial < 300; ++trial) {
        const std::size_t n = 2 + static_cast<std::size_t>(trial % 6);
        const RateMatrix q = random_rate_matrix(n, rng, 0.05, 4.0);
        const SimplexVector p = random_interior(n, rng, 0.01);
        const SubsetRate s = pathwise_rate_subset(q, p);
        CHECK(s.exact);
        CHECK(s.value == doctest::Approx(subset_rate_oracle(q, p)).epsilon(1e-12));
    }
}

TEST_CASE("subset rate falls back above the enumeration cap") {
    const RateMatrix q = appendix_b_rate_matrix(static_cast<int>(kSubsetRateMaxStates));
    const SimplexVector p = SimplexVector::uniform(kSubsetRateMaxStates + 1);
    const SubsetRate s = pathwise_rate_subset(q, p);
    CHECK_FALSE(s.exact);
    CHECK(s.value == pathwise_rate_simple(q, p));
}

TEST_CASE("rate chain on random models") {
    RngStream rng(2718);
    std::uniform_real_distribution<double> uniform_u(0.0, 0.999);
    for (int trial = 0; trial < 500; ++trial) {
        const std::size_t n = 2 + static_cast<std::size_t>(trial % 5);
        const RateMatrix q = random_rate_matrix(n, rng, 0.01, 5.0);
        const SimplexVector p = random_interior(n, rng, 0.001);
        const double lam = deterministic_rate(q);
        const double simple = pathwise_rate_simple(q, p);
        const double subset = pathwise_rate_subset(q, p).value;
        CHECK(lam <= simple * (1 + 1e-12));
        CHECK(simple <= subset * (1 + 1e-12));
        for (int s = 0; s < 10; ++s) {
            const double u = uniform_u(rng);
            CHECK(subset <= state_dependent_rate(q, p, u) * (1 + 1e-12));
        }
    }
}

TEST_CASE("state dependent rate") {
    const RateMatrix q = two_state_q();
    const SimplexVector half = SimplexVector::uniform(2);
    CHECK(state_dependent_rate(q, half, 0.0) == doctest::Approx(2.0));
    CHECK(state_dependent_rate(q, half, 0.999999) > 1e5);
    CHECK_THROWS_AS(state_dependent_rate(q, half, 1.0), Error);
    CHECK_THROWS_AS(state_dependent_rate(q, half, -0.1), Error);

    RngStream rng(8);
    for (int trial = 0; trial < 200; ++trial) {
        const std::size_t n = 2 + static_cast<std::size_t>(trial % 6);
        const RateMatrix qq = random_rate_matrix(n, rng);
        const SimplexVector p = random_interior(n, rng);
        const double u = 0.005 * trial;
        CHECK(state_dependent_rate(qq, p, u, true) == doctest::Approx(state_dependent_rate(qq, p, u, false)));
    }
}

#include <doctest.h>

#include <cmath>
#include <numbers>

#include "core/bound_series.hpp"
#include "core/error.hpp"
#include "core/error_terms.hpp"
#include "core/filtering.hpp"
#include "core/qapprox.hpp"
#include "core/smooth_max.hpp"
#include "test_support.hpp"

using namespace wonham;
using namespace wonham::testing;

namespace {

struct Run {
    RateMatrix q;
    SensorVector h;
    ObservationIncrements obs;
};

Run make_run(const RateMatrix& q, const SensorVector& h, double horizon, double dt, std::uint64_t seed,
             double sigma = 1.0) {
    RngStream rng(seed);
    const CtmcPath path = sample_ctmc_path(q, SimplexVector::uniform(q.n_states()), horizon, rng);
    return {q, h, simulate_observations(path, h, sigma, TimeGrid::covering(horizon, dt), rng)};
}

}  // namespace

TEST_CASE("exact coefficients leave no error terms") {
    // Sensors stay moderate so no state is pinned at the floor; there the
    // terms are divided by 1e-12 and only relative accuracy survives.
    RngStream models(55);
    std::uniform_real_distribution<double> sensor(-2.0, 2.0);
    for (int trial = 0; trial < 10; ++trial) {
        const std::size_t n = 2 + static_cast<std::size_t>(trial % 5);
        const RateMatrix q = random_rate_matrix(n, models);
        Eigen::VectorXd hv(static_cast<Eigen::Index>(n));
        for (auto& x : hv) x = sensor(models);
        const SensorVector h(hv);
        const double sigma = trial % 2 == 0 ? 1.0 : 2.5;
        const Run run = make_run(q, h, 0.5, 1e-3, 100 + trial, sigma);
        const ApproximateFilterSpec spec = exact_wonham_spec(q, h, sigma);
        const FilterTrajectory traj = integrate_generic(spec, run.obs, random_interior(n, models));
        REQUIRE(traj.floor_activations == 0);
        const ErrorTermSeries terms = error_terms(q, h, sigma, spec, traj);
        for (double d : combined_drift_error(terms)) CHECK(std::abs(d) <= 1e-8);
        for (double d : e3_differences(terms)) CHECK(std::abs(d) <= 1e-8);
    }
}

TEST_CASE("misspecified generator identity") {
    const RateMatrix q = three_state_q();
    const RateMatrix qt = paper_q_tilde(FixtureModel::ThreeState);
    const SensorVector h(vec({-1.0, 0.0, 1.0}));
    const Run run = make_run(q, h, 2.0, 1e-3, 8);
    const ApproximateFilterSpec spec = misspecified_wonham_spec(qt, h, 1.0);
    const FilterTrajectory traj = integrate_generic(spec, run.obs, SimplexVector(vec({0.2, 0.2, 0.6})));
    const ErrorTermSeries terms = error_terms(q, h, 1.0, spec, traj);
    const auto combined = combined_drift_error(terms);
    const auto identity = misspecified_drift_error(q, qt, traj);
    for (std::size_t k = 0; k < combined.size(); ++k) CHECK(std::abs(combined[k] - identity[k]) <= 1e-9);
    for (double d : e3_differences(terms)) CHECK(std::abs(d) <= 1e-9);
    for (std::size_t k = 0; k < terms.e2.size(); k += 97) {
        const Eigen::VectorXd g_over_p = h.values() - terms.e3[k];
        CHECK((terms.e2[k] - terms.e3[k].cwiseProduct(h.values() + g_over_p)).cwiseAbs().maxCoeff() <= 1e-9);
    }
}

TEST_CASE("zero coefficients expose the raw terms") {
    const RateMatrix q = three_state_q();
    const SensorVector h(vec({-1.0, 0.5, 2.0}));
    const Run run = make_run(q, h, 0.01, 1e-3, 3);
    ApproximateFilterSpec zero{
        [](double, const Eigen::VectorXd& p) { return Eigen::VectorXd::Zero(p.size()).eval(); },
        [](double, const Eigen::VectorXd& p) { return Eigen::VectorXd::Zero(p.size()).eval(); }, "zero"};
    const FilterTrajectory traj = integrate_generic(zero, run.obs, SimplexVector::uniform(3));
    const ErrorTermSeries terms = error_terms(q, h, 1.0, zero, traj);
    const Eigen::VectorXd col_sums = q.entries().colwise().sum().transpose();
    CHECK((terms.e1[0] - col_sums).cwiseAbs().maxCoeff() < 1e-12);
    CHECK((terms.e3[0] - h.values()).cwiseAbs().maxCoeff() < 1e-15);
    CHECK(spread(vec({3.0, -1.0, 2.0})) == 4.0);
    CHECK(spread(vec({3.0})) == 0.0);
}

TEST_CASE("exponential bound closed forms") {
    const TimeGrid grid = TimeGrid::covering(3.0, 1e-3);
    const std::vector<double> lam(grid.n_points(), 2.0);
    const BoundSeries pure = exponential_bound(0.7, lam, {}, grid, BoundScale::HilbertError);
    for (std::size_t k = 0; k < grid.n_points(); k += 50)
        CHECK(pure.values[k] == doctest::Approx(0.7 * std::exp(-2.0 * grid.time(k))).epsilon(1e-12));

    const std::vector<double> zero(grid.n_points(), 0.0);
    const std::vector<double> c(grid.n_points(), 0.3);
    const BoundSeries linear = exponential_bound(0.7, zero, c, grid, BoundScale::HilbertError);
    CHECK(linear.values.back() == doctest::Approx(0.7 + 0.3 * 3.0).epsilon(1e-12));

    const BoundSeries mixed = exponential_bound(0.7, lam, c, grid, BoundScale::HilbertError);
    for (std::size_t k = 0; k < grid.n_points(); ++k) {
        const double t = grid.time(k);
        REQUIRE(std::abs(mixed.values[k] - (0.7 * std::exp(-2 * t) + 0.15 * (1 - std::exp(-2 * t)))) <= 1e-6);
    }

    const BoundSeries tanh_scale = exponential_bound(0.7, lam, c, grid, BoundScale::TanhQuarter);
    CHECK(tanh_scale.values[0] == doctest::Approx(std::tanh(0.7 / 4)));
    CHECK(tanh_scale.values.back() ==
          doctest::Approx(std::tanh(0.175) * std::exp(-6.0) + 0.25 * 0.15 * (1 - std::exp(-6.0))).epsilon(1e-6));
    for (double v : tanh_scale.values) CHECK(v < 1.0);

    std::vector<double> negative = lam;
    negative[4] = -1.0;
    CHECK_THROWS_AS(exponential_bound(0.7, negative, {}, grid, BoundScale::HilbertError), Error);
    CHECK_THROWS_AS(exponential_bound(0.7, std::vector<double>(3, 1.0), {}, grid, BoundScale::HilbertError), Error);
}

TEST_CASE("tamed Euler and the comparison ODE") {
    const TimeGrid grid = TimeGrid::covering(2.0, 1e-3);
    const auto decay = tamed_euler(0.6, grid, [](std::size_t, double, double u) { return -2.0 * u; });
    for (std::size_t k = 0; k < grid.n_points(); ++k)
        REQUIRE(std::abs(decay[k] - 0.6 * std::exp(-2.0 * grid.time(k))) <= 1e-4);

    const auto wild = tamed_euler(0.5, grid, [](std::size_t, double, double u) { return 1e9 * (1 - u); });
    for (double u : wild) CHECK(u <= kOdeCeiling);

    const RateMatrix q = three_state_q();
    const SensorVector h(vec({-1.0, 0.0, 1.0}));
    const Run run = make_run(q, h, 2.0, 1e-3, 12);
    const FilterTrajectory traj = integrate_wonham(q, h, 1.0, run.obs, SimplexVector(vec({0.2, 0.2, 0.6})));
    const BoundSeries fixed = solve_bound_ode(q, traj, {}, 0.0);
    for (double v : fixed.values) CHECK(v == 0.0);

    const BoundSeries falling = solve_bound_ode(q, traj, {}, 0.4);
    CHECK(falling.scale == BoundScale::TanhQuarter);
    for (std::size_t k = 1; k < falling.values.size(); ++k) {
        REQUIRE(falling.values[k] <= falling.values[k - 1]);
        REQUIRE(falling.values[k] >= 0.0);
    }
    const BoundSeries mirrored = solve_bound_ode(q, traj, {}, 0.4, true);
    for (std::size_t k = 0; k < falling.values.size(); ++k)
        CHECK(mirrored.values[k] == doctest::Approx(falling.values[k]));

    const BoundSeries hs = to_hilbert_scale(falling);
    CHECK(hs.values[0] == doctest::Approx(4 * std::atanh(0.4)));
    CHECK_THROWS_AS(solve_bound_ode(q, traj, {}, 1.0), Error);
}

TEST_CASE("comparison check") {
    const TimeGrid grid(0.0, 0.1, 4);
    BoundSeries u{grid, {0.5, 0.4, 0.3, 0.2, 0.1}, BoundKind::OdeTanh, BoundScale::TanhQuarter};
    CHECK(comparison_check(u.values, u).ok);
    std::vector<double> shifted = u.values;
    for (double& v : shifted) v += 1.0;
    const ComparisonReport bad = comparison_check(shifted, u);
    CHECK_FALSE(bad.ok);
    CHECK(bad.first_violation == 0);
    std::vector<double> slack = u.values;
    slack[3] *= 1.04;
    CHECK(comparison_check(slack, u).ok);
    slack[3] = 0.2 * 1.06;
    const ComparisonReport late = comparison_check(slack, u);
    CHECK_FALSE(late.ok);
    CHECK(late.first_violation == 3);
}

TEST_CASE("robustness constants") {
    const RateMatrix q = three_state_q();
    const SensorVector h(vec({-1.0, 0.0, 1.0}));
    const RobustnessConstants same = robustness_constants(q, q, h, h);
    CHECK(same.k_q == 0.0);
    CHECK(same.k_h == 0.0);
    CHECK(same.lambda == doctest::Approx(2.0));

    const RobustnessConstants fixture =
        robustness_constants(q, paper_q_tilde(FixtureModel::ThreeState), h, h);
    CHECK(fixture.k_q == doctest::Approx(1.0));

    const RobustnessConstants sensor = robustness_constants(q, q, h, SensorVector(vec({-1.0, 0.0, 1.1})));
    CHECK(sensor.k_h == doctest::Approx(0.41));
    CHECK_THROWS_AS(robustness_constants(q, two_state_q(), h, h), Error);
}

TEST_CASE("expected error bounds") {
    const TimeGrid grid = TimeGrid::covering(2.0, 1e-3);
    const std::vector<double> zero(grid.n_points(), 0.0);
    const std::vector<double> one(grid.n_points(), 1.0);
    const BoundSeries bare = expected_distance_bound(2.0, 0.5, zero, zero, 3.0, std::nullopt, grid);
    CHECK(bare.values.back() == doctest::Approx(0.5 * std::exp(-4.0)).epsilon(1e-12));

    const BoundSeries unit = expected_distance_bound(2.0, 0.5, one, zero, 3.0, std::nullopt, grid);
    for (std::size_t k = 0; k < grid.n_points(); k += 37) {
        const double t = grid.time(k);
        CHECK(std::abs(unit.values[k] - (0.5 * std::exp(-2 * t) + 0.5 * (1 - std::exp(-2 * t)))) <= 1e-6);
    }
    const BoundSeries e3 = expected_distance_bound(2.0, 0.5, zero, one, 3.0, one, grid);
    CHECK(std::abs(e3.values.back() - (0.5 * std::exp(-4.0) + 1.5 * (1 - std::exp(-4.0)) + 0.25)) <= 1e-6);

    const RobustnessConstants c{1.0, 0.4, 2.0};
    const BoundSeries rob = robustness_bound(c, 0.5, one, std::nullopt, grid);
    CHECK(std::abs(rob.values.back() - (0.5 * std::exp(-4.0) + 1.4 * 0.5 * (1 - std::exp(-4.0)))) <= 1e-6);

    CHECK_THROWS_AS(expected_distance_bound(2.0, 0.5, std::vector<double>(5, 0.0), zero, 1.0, std::nullopt, grid),
                    Error);
}

TEST_CASE("discounted local-time increments") {
    const TimeGrid grid(0.0, 0.01, 200);
    std::vector<double> l(grid.n_points());
    for (std::size_t k = 0; k < l.size(); ++k) l[k] = grid.time(k);  // dL = dt
    const auto j = discounted_increments(l, 1.5, grid);
    CHECK(j[0] == 0.0);
    CHECK(j.back() == doctest::Approx((1 - std::exp(-1.5 * 2.0)) / 1.5).epsilon(1e-4));
}

TEST_CASE("smooth max") {
    CHECK(lse_alpha(vec({0.0, 0.0}), 1.0) == doctest::Approx(std::log(2.0)));
    CHECK(lse_alpha(vec({1000.0, 999.0}), 1.0) == doctest::Approx(1000.0 + std::log1p(std::exp(-1.0))));
    RngStream rng(10);
    std::normal_distribution<double> normal(0.0, 5.0);
    for (int trial = 0; trial < 1000; ++trial) {
        const std::size_t n = 1 + static_cast<std::size_t>(trial % 10);
        Eigen::VectorXd x(static_cast<Eigen::Index>(n));
        for (auto& v : x) v = normal(rng);
        for (double alpha : {1.0, 10.0, 100.0}) {
            const double l = lse_alpha(x, alpha);
            CHECK(x.maxCoeff() <= l);
            CHECK(l <= x.maxCoeff() + std::log(static_cast<double>(n)) / alpha);
        }
    }
    const Eigen::VectorXd x = vec({0.3, 0.0, 0.2, -1.0});
    const Eigen::VectorXd c = vec({7.0, 1.0, 2.0, 3.0});
    CHECK(std::abs(softargmax_alpha(x, c, 1e3) - 7.0) <= 1e-3);
    CHECK(softargmax_alpha(vec({0.0, 0.0}), vec({1.0, 3.0}), 1.0) == doctest::Approx(2.0));
}

TEST_CASE("local time estimator") {
    const TimeGrid grid = TimeGrid::covering(1.0, 1e-4);
    const double eps = 0.05;
    const std::vector<double> flat(grid.n_points(), 0.0);
    for (double v : estimate_local_time(flat, grid, eps).values) CHECK(v == 0.0);

    std::vector<double> ramp(grid.n_points());
    for (std::size_t k = 0; k < ramp.size(); ++k) ramp[k] = grid.time(k) - 0.5;
    CHECK(estimate_local_time(ramp, grid, eps).values.back() <= 1e-2);

    RngStream rng(1);
    std::normal_distribution<double> normal;
    std::vector<double> b(grid.n_points(), 0.0), neg(grid.n_points(), 0.0);
    for (std::size_t k = 1; k < b.size(); ++k) b[k] = b[k - 1] + std::sqrt(grid.dt) * normal(rng);
    for (std::size_t k = 0; k < b.size(); ++k) neg[k] = -b[k];
    const LocalTimeEstimate lb = estimate_local_time(b, grid, eps);
    const LocalTimeEstimate ln = estimate_local_time(neg, grid, eps);
    for (std::size_t k = 1; k < b.size(); ++k) {
        REQUIRE(lb.values[k] >= lb.values[k - 1]);
        REQUIRE(lb.values[k] == ln.values[k]);
    }
    CHECK(default_local_time_window(grid) == doctest::Approx(0.1));
    CHECK_THROWS_AS(estimate_local_time(b, grid, 0.0), Error);
}

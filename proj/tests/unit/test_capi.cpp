#include <doctest.h>

#include <wonham/wonham.h>

#include <cmath>
#include <filesystem>
#include <string>
#include <vector>

TEST_CASE("version and status names") {
    CHECK(std::string(wl_version()).size() > 0);
    CHECK(std::string(wl_status_name(WL_OK)) == "ok");
    CHECK(std::string(wl_status_name(WL_ERR_REDUCIBLE)) == "reducible");
    CHECK(std::string(wl_status_name(static_cast<wl_status>(99))) == "unknown");
}

TEST_CASE("rate matrix handles") {
    const double entries[] = {-3, 1, 2, 1, -3, 2, 1.5, 1.5, -3};
    wl_rate_matrix* q = nullptr;
    REQUIRE(wl_rate_matrix_create(3, entries, &q) == WL_OK);
    CHECK(wl_rate_matrix_size(q) == 3);
    CHECK(wl_rate_matrix_strictly_positive(q) == 1);

    double pi[3];
    REQUIRE(wl_stationary_distribution(q, pi, 3) == WL_OK);
    CHECK(pi[2] == doctest::Approx(0.4));
    CHECK(wl_stationary_distribution(q, pi, 2) == WL_ERR_BUFFER_TOO_SMALL);

    double lam = 0.0;
    REQUIRE(wl_deterministic_rate(q, &lam) == WL_OK);
    CHECK(lam == doctest::Approx(2.0));

    const double p[] = {1.0 / 3, 1.0 / 3, 1.0 / 3};
    double rate = 0.0;
    int exact = 0;
    REQUIRE(wl_pathwise_rate(q, p, 3, 1, &rate, &exact) == WL_OK);
    CHECK(rate == doctest::Approx(2 * std::sqrt(2.5)));
    CHECK(exact == 1);

    size_t required = 0;
    CHECK(wl_rate_matrix_to_text(q, nullptr, 0, &required) == WL_ERR_BUFFER_TOO_SMALL);
    std::vector<char> text(required);
    REQUIRE(wl_rate_matrix_to_text(q, text.data(), text.size(), &required) == WL_OK);
    wl_rate_matrix* back = nullptr;
    REQUIRE(wl_rate_matrix_from_text(text.data(), &back) == WL_OK);
    double round[9];
    REQUIRE(wl_rate_matrix_entries(back, round, 9) == WL_OK);
    for (int i = 0; i < 9; ++i) CHECK(round[i] == entries[i]);
    wl_rate_matrix_destroy(back);
    wl_rate_matrix_destroy(q);

    const double bad[] = {-1, 2, 1, -1};
    wl_rate_matrix* invalid = nullptr;
    CHECK(wl_rate_matrix_create(2, bad, &invalid) == WL_ERR_ROW_SUM_NONZERO);
    CHECK(invalid == nullptr);
    CHECK(std::string(wl_last_error()).find("RowSumNonZero") != std::string::npos);
    CHECK(wl_rate_matrix_create(2, nullptr, &invalid) == WL_ERR_INVALID_ARGUMENT);

    wl_rate_matrix* ab = nullptr;
    REQUIRE(wl_rate_matrix_appendix_b(20, &ab) == WL_OK);
    REQUIRE(wl_deterministic_rate(ab, &lam) == WL_OK);
    CHECK(lam == 2.0);
    wl_rate_matrix_destroy(ab);

    wl_rate_matrix* fx = nullptr;
    REQUIRE(wl_rate_matrix_fixture(WL_FIXTURE_SIX_STATE, 1, &fx) == WL_OK);
    CHECK(wl_rate_matrix_size(fx) == 6);
    wl_rate_matrix_destroy(fx);
}

TEST_CASE("hilbert distance through the C layer") {
    const double mu[] = {0.5, 0.5}, nu[] = {0.4, 0.6}, vertex[] = {1.0, 0.0};
    double d = 0.0;
    REQUIRE(wl_hilbert_distance(mu, nu, 2, &d) == WL_OK);
    CHECK(std::abs(d - std::log(1.5)) <= 1e-12);
    REQUIRE(wl_hilbert_distance(vertex, mu, 2, &d) == WL_OK);
    CHECK(std::isinf(d));
}

TEST_CASE("scenario lifecycle") {
    const char* cfg = R"({"model": {"explicit": [[-1, 1], [1, -1]]}, "sensor": {"explicit": [-1, 1]},
        "mu": {"explicit": [0.5, 0.5]}, "nu": {"explicit": [0.4, 0.6]}, "T": 0.5, "n_paths": 3,
        "master_seed": 4})";
    wl_scenario* s = nullptr;
    REQUIRE(wl_scenario_from_json(cfg, &s) == WL_OK);
    REQUIRE(wl_scenario_set_workers(s, 2) == WL_OK);
    wl_run_result* r = nullptr;
    REQUIRE(wl_scenario_run(s, &r) == WL_OK);
    CHECK(wl_run_result_paths(r) == 3);
    CHECK(wl_run_result_violations(r) == 0);

    size_t required = 0;
    CHECK(wl_run_result_manifest(r, nullptr, 0, &required) == WL_ERR_BUFFER_TOO_SMALL);
    std::string manifest(required, '\0');
    REQUIRE(wl_run_result_manifest(r, manifest.data(), manifest.size(), nullptr) == WL_OK);
    CHECK(manifest.find("master_seed") != std::string::npos);

    const auto dir = std::filesystem::temp_directory_path() / "wonham_capi_test";
    std::filesystem::create_directories(dir);
    const std::string csv = (dir / "run.csv").string();
    REQUIRE(wl_run_result_write_csv(r, csv.c_str()) == WL_OK);
    CHECK(std::filesystem::file_size(csv) > 0);
    wl_run_result_destroy(r);

    CHECK(wl_scenario_bounds(s, &r) == WL_ERR_CONFIG);
    wl_scenario_destroy(s);

    CHECK(wl_scenario_from_json("{not json", &s) == WL_ERR_CONFIG);
    CHECK(wl_scenario_from_json(R"({"model": {"explicit": [[-1, 1], [1, -1]]}, "bogus": 1})", &s) == WL_ERR_CONFIG);
    CHECK(wl_scenario_preset("fig3", 0, &s) != WL_OK);
    REQUIRE(wl_scenario_preset("fig4:3", 0, &s) == WL_OK);
    wl_scenario_destroy(s);
}

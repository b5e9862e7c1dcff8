#include "wonham/wonham.h"

#include <cstring>
#include <limits>
#include <new>
#include <optional>
#include <string>

#include "core/ctmc.hpp"
#include "core/error.hpp"
#include "core/hilbert.hpp"
#include "core/matrix_io.hpp"
#include "core/qapprox.hpp"
#include "core/rates.hpp"
#include "experiments/config.hpp"
#include "experiments/csv.hpp"
#include "experiments/figures.hpp"
#include "experiments/scenario.hpp"

struct wl_rate_matrix {
    wonham::RateMatrix q;
};

struct wl_scenario {
    wonham::ScenarioConfig config;
};

struct wl_run_result {
    wonham::RunResult result;
};

namespace {

thread_local std::string g_last_error;

wl_status status_of(wonham::ErrorCode code) {
    using wonham::ErrorCode;
    switch (code) {
        case ErrorCode::InvalidArgument: return WL_ERR_INVALID_ARGUMENT;
        case ErrorCode::NegativeOffDiagonal: return WL_ERR_NEGATIVE_OFF_DIAGONAL;
        case ErrorCode::RowSumNonZero: return WL_ERR_ROW_SUM_NONZERO;
        case ErrorCode::Reducible: return WL_ERR_REDUCIBLE;
        case ErrorCode::SingularSystem: return WL_ERR_SINGULAR_SYSTEM;
        case ErrorCode::NonInteriorInput: return WL_ERR_NON_INTERIOR;
        case ErrorCode::DimensionMismatch: return WL_ERR_DIMENSION_MISMATCH;
        case ErrorCode::NonFiniteState: return WL_ERR_NON_FINITE_STATE;
        case ErrorCode::GridExceedsPath: return WL_ERR_GRID_EXCEEDS_PATH;
        case ErrorCode::RankTooLarge: return WL_ERR_RANK_TOO_LARGE;
        case ErrorCode::NegativeRate: return WL_ERR_NEGATIVE_RATE;
        case ErrorCode::GridMismatch: return WL_ERR_GRID_MISMATCH;
        case ErrorCode::Config: return WL_ERR_CONFIG;
        case ErrorCode::Io: return WL_ERR_IO;
    }
    return WL_ERR_INTERNAL;
}

wl_status set_error(wl_status status, const std::string& message) {
    g_last_error = message;
    return status;
}

// Runs `body`, translating exceptions into status codes.
template <class F>
wl_status guarded(F&& body) {
    try {
        g_last_error.clear();
        return body();
    } catch (const wonham::Error& e) {
        return set_error(status_of(e.code()), e.what());
    } catch (const std::bad_alloc&) {
        return set_error(WL_ERR_INTERNAL, "out of memory");
    } catch (const std::exception& e) {
        return set_error(WL_ERR_INTERNAL, e.what());
    } catch (...) {
        return set_error(WL_ERR_INTERNAL, "unknown exception");
    }
}

wl_status null_argument(const char* name) {
    return set_error(WL_ERR_INVALID_ARGUMENT, std::string(name) + " must not be NULL");
}

wl_status copy_text(const std::string& text, char* buffer, size_t capacity, size_t* required) {
    if (required) *required = text.size() + 1;
    if (!buffer || capacity < text.size() + 1)
        return set_error(WL_ERR_BUFFER_TOO_SMALL, "buffer too small");
    std::memcpy(buffer, text.c_str(), text.size() + 1);
    return WL_OK;
}

wl_status emit_matrix(wonham::RateMatrix q, wl_rate_matrix** out) {
    *out = new wl_rate_matrix{std::move(q)};
    return WL_OK;
}

wonham::SimplexVector simplex_from(const double* p, size_t n) {
    Eigen::VectorXd v(static_cast<Eigen::Index>(n));
    for (size_t i = 0; i < n; ++i) v(static_cast<Eigen::Index>(i)) = p[i];
    return wonham::SimplexVector(std::move(v));
}

}  // namespace

extern "C" {

const char* wl_version(void) { return WONHAM_VERSION_STRING; }

const char* wl_status_name(wl_status status) {
    switch (status) {
        case WL_OK: return "ok";
        case WL_ERR_INVALID_ARGUMENT: return "invalid_argument";
        case WL_ERR_NEGATIVE_OFF_DIAGONAL: return "negative_off_diagonal";
        case WL_ERR_ROW_SUM_NONZERO: return "row_sum_nonzero";
        case WL_ERR_REDUCIBLE: return "reducible";
        case WL_ERR_SINGULAR_SYSTEM: return "singular_system";
        case WL_ERR_NON_INTERIOR: return "non_interior";
        case WL_ERR_DIMENSION_MISMATCH: return "dimension_mismatch";
        case WL_ERR_NON_FINITE_STATE: return "non_finite_state";
        case WL_ERR_GRID_EXCEEDS_PATH: return "grid_exceeds_path";
        case WL_ERR_RANK_TOO_LARGE: return "rank_too_large";
        case WL_ERR_NEGATIVE_RATE: return "negative_rate";
        case WL_ERR_GRID_MISMATCH: return "grid_mismatch";
        case WL_ERR_CONFIG: return "config";
        case WL_ERR_IO: return "io";
        case WL_ERR_BUFFER_TOO_SMALL: return "buffer_too_small";
        case WL_ERR_INTERNAL: return "internal";
    }
    return "unknown";
}

const char* wl_last_error(void) { return g_last_error.c_str(); }

wl_status wl_rate_matrix_create(size_t n_states, const double* row_major, wl_rate_matrix** out) {
    return guarded([&] {
        if (!out) return null_argument("out");
        if (!row_major) return null_argument("row_major");
        if (n_states == 0) return set_error(WL_ERR_INVALID_ARGUMENT, "n_states must be positive");
        return emit_matrix(wonham::validate_rate_matrix(
                               n_states, std::span<const double>(row_major, n_states * n_states)),
                           out);
    });
}

wl_status wl_rate_matrix_appendix_b(int n, wl_rate_matrix** out) {
    return guarded([&] {
        if (!out) return null_argument("out");
        return emit_matrix(wonham::appendix_b_rate_matrix(n), out);
    });
}

wl_status wl_rate_matrix_fixture(wl_fixture which, int approximate, wl_rate_matrix** out) {
    return guarded([&] {
        if (!out) return null_argument("out");
        if (which != WL_FIXTURE_THREE_STATE && which != WL_FIXTURE_SIX_STATE)
            return set_error(WL_ERR_INVALID_ARGUMENT, "unknown fixture");
        const auto model = which == WL_FIXTURE_THREE_STATE ? wonham::FixtureModel::ThreeState
                                                           : wonham::FixtureModel::SixState;
        return emit_matrix(approximate ? wonham::paper_q_tilde(model) : wonham::paper_q(model), out);
    });
}

wl_status wl_rate_matrix_from_text(const char* text, wl_rate_matrix** out) {
    return guarded([&] {
        if (!out) return null_argument("out");
        if (!text) return null_argument("text");
        return emit_matrix(wonham::validate_rate_matrix(wonham::parse_matrix_text(std::string(text))), out);
    });
}

void wl_rate_matrix_destroy(wl_rate_matrix* q) { delete q; }

size_t wl_rate_matrix_size(const wl_rate_matrix* q) { return q ? q->q.n_states() : 0; }

int wl_rate_matrix_strictly_positive(const wl_rate_matrix* q) {
    return q && q->q.strictly_positive() ? 1 : 0;
}

wl_status wl_rate_matrix_entries(const wl_rate_matrix* q, double* out, size_t capacity) {
    return guarded([&] {
        if (!q) return null_argument("q");
        if (!out) return null_argument("out");
        const size_t n = q->q.n_states();
        if (capacity < n * n) return set_error(WL_ERR_BUFFER_TOO_SMALL, "need n*n doubles");
        for (size_t i = 0; i < n; ++i)
            for (size_t j = 0; j < n; ++j) out[i * n + j] = q->q(i, j);
        return WL_OK;
    });
}

wl_status wl_rate_matrix_to_text(const wl_rate_matrix* q, char* buffer, size_t capacity,
                                 size_t* required) {
    return guarded([&] {
        if (!q) return null_argument("q");
        return copy_text(wonham::format_matrix_text(q->q.entries()), buffer, capacity, required);
    });
}

wl_status wl_stationary_distribution(const wl_rate_matrix* q, double* out, size_t capacity) {
    return guarded([&] {
        if (!q) return null_argument("q");
        if (!out) return null_argument("out");
        const size_t n = q->q.n_states();
        if (capacity < n) return set_error(WL_ERR_BUFFER_TOO_SMALL, "need n doubles");
        const wonham::SimplexVector pi = wonham::stationary_distribution(q->q);
        for (size_t i = 0; i < n; ++i) out[i] = pi[i];
        return WL_OK;
    });
}

wl_status wl_deterministic_rate(const wl_rate_matrix* q, double* out) {
    return guarded([&] {
        if (!q) return null_argument("q");
        if (!out) return null_argument("out");
        *out = wonham::deterministic_rate(q->q);
        return WL_OK;
    });
}

wl_status wl_pathwise_rate(const wl_rate_matrix* q, const double* p, size_t n, int subset,
                           double* out, int* exact) {
    return guarded([&] {
        if (!q) return null_argument("q");
        if (!p) return null_argument("p");
        if (!out) return null_argument("out");
        const wonham::SimplexVector pv = simplex_from(p, n);
        if (subset) {
            const wonham::SubsetRate r = wonham::pathwise_rate_subset(q->q, pv);
            *out = r.value;
            if (exact) *exact = r.exact ? 1 : 0;
        } else {
            *out = wonham::pathwise_rate_simple(q->q, pv);
            if (exact) *exact = 1;
        }
        return WL_OK;
    });
}

wl_status wl_hilbert_distance(const double* mu, const double* nu, size_t n, double* out) {
    return guarded([&] {
        if (!mu) return null_argument("mu");
        if (!nu) return null_argument("nu");
        if (!out) return null_argument("out");
        *out = wonham::hilbert_distance(simplex_from(mu, n), simplex_from(nu, n));
        return WL_OK;
    });
}

wl_status wl_scenario_load_file(const char* path, wl_scenario** out) {
    return guarded([&] {
        if (!out) return null_argument("out");
        if (!path) return null_argument("path");
        *out = new wl_scenario{wonham::load_config_file(path)};
        return WL_OK;
    });
}

wl_status wl_scenario_from_json(const char* json_text, wl_scenario** out) {
    return guarded([&] {
        if (!out) return null_argument("out");
        if (!json_text) return null_argument("json_text");
        nlohmann::json j;
        try {
            j = nlohmann::json::parse(json_text);
        } catch (const nlohmann::json::exception& e) {
            return set_error(WL_ERR_CONFIG, std::string("config: ") + e.what());
        }
        *out = new wl_scenario{wonham::config_from_json(j)};
        return WL_OK;
    });
}

wl_status wl_scenario_preset(const char* figure, int paper_scale, wl_scenario** out) {
    return guarded([&] {
        if (!out) return null_argument("out");
        if (!figure) return null_argument("figure");
        wonham::FigureRequest request = wonham::parse_figure(figure);
        request.paper_scale = paper_scale != 0;
        *out = new wl_scenario{wonham::figure_config(request)};
        return WL_OK;
    });
}

wl_status wl_scenario_set_workers(wl_scenario* scenario, int workers) {
    return guarded([&] {
        if (!scenario) return null_argument("scenario");
        if (workers < 0) return set_error(WL_ERR_INVALID_ARGUMENT, "workers must be nonnegative");
        scenario->config.workers = workers;
        return WL_OK;
    });
}

void wl_scenario_destroy(wl_scenario* scenario) { delete scenario; }

wl_status wl_scenario_run(const wl_scenario* scenario, wl_run_result** out) {
    return guarded([&] {
        if (!scenario) return null_argument("scenario");
        if (!out) return null_argument("out");
        *out = new wl_run_result{wonham::run_scenario(scenario->config)};
        return WL_OK;
    });
}

wl_status wl_scenario_bounds(const wl_scenario* scenario, wl_run_result** out) {
    return guarded([&] {
        if (!scenario) return null_argument("scenario");
        if (!out) return null_argument("out");
        *out = new wl_run_result{wonham::bounds_from_trajectory_csv(scenario->config)};
        return WL_OK;
    });
}

wl_status wl_run_result_write_csv(const wl_run_result* result, const char* csv_path) {
    return guarded([&] {
        if (!result) return null_argument("result");
        if (!csv_path) return null_argument("csv_path");
        wonham::write_run_files(result->result, csv_path);
        return WL_OK;
    });
}

size_t wl_run_result_paths(const wl_run_result* result) {
    return result ? result->result.paths.size() : 0;
}

size_t wl_run_result_violations(const wl_run_result* result) {
    return result ? result->result.violation_count() : 0;
}

wl_status wl_run_result_manifest(const wl_run_result* result, char* buffer, size_t capacity,
                                 size_t* required) {
    return guarded([&] {
        if (!result) return null_argument("result");
        const std::string text = wonham::run_manifest(result->result, "").dump(2);
        return copy_text(text, buffer, capacity, required);
    });
}

void wl_run_result_destroy(wl_run_result* result) { delete result; }

wl_status wl_reproduce_figure(const char* figure, const char* out_dir, int paper_scale,
                              int workers, size_t* violations) {
    return guarded([&] {
        if (!figure) return null_argument("figure");
        if (!out_dir) return null_argument("out_dir");
        wonham::FigureRequest request = wonham::parse_figure(figure);
        request.paper_scale = paper_scale != 0;
        const wonham::FigureOutput output = wonham::reproduce_figure(request, out_dir, workers);
        if (violations) *violations = output.result.violation_count();
        return WL_OK;
    });
}

}  // extern "C"

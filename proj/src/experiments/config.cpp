#include "experiments/config.hpp"

#include <algorithm>
#include <fstream>

#include "core/error.hpp"

namespace wonham {

using nlohmann::json;

namespace {

constexpr const char* kBoundNames[] = {"deterministic", "pathwise_simple", "pathwise_subset",
                                       "ode", "expected", "robustness"};

[[noreturn]] void bad(const std::string& what) { fail(ErrorCode::Config, what); }

Eigen::MatrixXd matrix_from_json(const json& j, const char* what) {
    if (!j.is_array() || j.empty()) bad(std::string(what) + ": expected an array of rows");
    const std::size_t rows = j.size();
    const std::size_t cols = j.front().size();
    Eigen::MatrixXd m(static_cast<Eigen::Index>(rows), static_cast<Eigen::Index>(cols));
    for (std::size_t i = 0; i < rows; ++i) {
        if (!j[i].is_array() || j[i].size() != cols) bad(std::string(what) + ": ragged rows");
        for (std::size_t c = 0; c < cols; ++c) {
            if (!j[i][c].is_number()) bad(std::string(what) + ": non-numeric entry");
            m(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(c)) = j[i][c].get<double>();
        }
    }
    return m;
}

Eigen::VectorXd vector_from_json(const json& j, const char* what) {
    if (!j.is_array() || j.empty()) bad(std::string(what) + ": expected a numeric array");
    Eigen::VectorXd v(static_cast<Eigen::Index>(j.size()));
    for (std::size_t i = 0; i < j.size(); ++i) {
        if (!j[i].is_number()) bad(std::string(what) + ": non-numeric entry");
        v(static_cast<Eigen::Index>(i)) = j[i].get<double>();
    }
    return v;
}

FixtureModel fixture_from_name(const std::string& name) {
    if (name == "three_state") return FixtureModel::ThreeState;
    if (name == "six_state") return FixtureModel::SixState;
    bad("unknown fixture '" + name + "' (three_state | six_state)");
}

const char* fixture_name(FixtureModel m) {
    return m == FixtureModel::ThreeState ? "three_state" : "six_state";
}

// {"kind": value} objects with exactly one key.
std::pair<std::string, json> single_key(const json& j, const char* what) {
    if (j.is_string()) return {j.get<std::string>(), json()};
    if (!j.is_object() || j.size() != 1) bad(std::string(what) + ": expected a one-key object");
    return {j.begin().key(), j.begin().value()};
}

std::uint64_t seed_of(const json& j, const char* what) {
    if (j.is_null()) return 0;
    if (j.is_number_unsigned()) return j.get<std::uint64_t>();
    if (j.is_object() && j.contains("seed") && j["seed"].is_number_unsigned())
        return j["seed"].get<std::uint64_t>();
    bad(std::string(what) + ": expected a nonnegative integer seed");
}

}  // namespace

const char* bound_request_name(BoundRequest b) noexcept {
    return kBoundNames[static_cast<int>(b)];
}

BoundRequest parse_bound_request(const std::string& name) {
    for (int i = 0; i < 6; ++i)
        if (name == kBoundNames[i]) return static_cast<BoundRequest>(i);
    bad("unknown bound '" + name + "'");
}

bool ScenarioConfig::wants(BoundRequest b) const {
    return std::find(bounds.begin(), bounds.end(), b) != bounds.end();
}

json matrix_to_json(const Eigen::MatrixXd& m) {
    json rows = json::array();
    for (Eigen::Index i = 0; i < m.rows(); ++i) {
        json row = json::array();
        for (Eigen::Index j = 0; j < m.cols(); ++j) row.push_back(m(i, j));
        rows.push_back(std::move(row));
    }
    return rows;
}

json vector_to_json(const Eigen::VectorXd& v) {
    json out = json::array();
    for (Eigen::Index i = 0; i < v.size(); ++i) out.push_back(v(i));
    return out;
}

ScenarioConfig config_from_json(const json& j) {
    if (!j.is_object()) bad("config must be a JSON object");
    static const char* known[] = {"run_id", "model", "sensor", "sigma", "mu", "nu", "approximate",
                                  "T", "dt", "n_paths", "master_seed", "bounds", "tolerance",
                                  "scheme", "mirror", "workers", "output_points",
                                  "export_trajectories", "trajectory_csv"};
    for (auto it = j.begin(); it != j.end(); ++it) {
        if (std::none_of(std::begin(known), std::end(known),
                         [&](const char* k) { return it.key() == k; }))
            bad("unknown config key '" + it.key() + "'");
    }

    ScenarioConfig cfg;
    try {
        cfg.run_id = j.value("run_id", cfg.run_id);

        if (!j.contains("model")) bad("missing 'model'");
        auto [model, model_arg] = single_key(j["model"], "model");
        if (model == "explicit") {
            cfg.model_kind = ScenarioConfig::ModelKind::Explicit;
            cfg.q_explicit = matrix_from_json(model_arg, "model.explicit");
        } else if (model == "appendix_b") {
            cfg.model_kind = ScenarioConfig::ModelKind::AppendixB;
            if (!model_arg.is_number_integer()) bad("model.appendix_b: expected integer n");
            cfg.appendix_n = model_arg.get<int>();
        } else if (model == "fixture") {
            cfg.model_kind = ScenarioConfig::ModelKind::Fixture;
            cfg.fixture = fixture_from_name(model_arg.get<std::string>());
        } else {
            bad("model: unknown source '" + model + "'");
        }

        if (!j.contains("sensor")) bad("missing 'sensor'");
        auto [sensor, sensor_arg] = single_key(j["sensor"], "sensor");
        if (sensor == "explicit") {
            cfg.sensor_kind = ScenarioConfig::SensorKind::Explicit;
            cfg.h_explicit = vector_from_json(sensor_arg, "sensor.explicit");
        } else if (sensor == "random") {
            cfg.sensor_kind = ScenarioConfig::SensorKind::Random;
            cfg.sensor_seed = seed_of(sensor_arg, "sensor.random");
        } else {
            bad("sensor: unknown source '" + sensor + "'");
        }

        cfg.sigma = j.value("sigma", cfg.sigma);

        auto [mu, mu_arg] = single_key(j.value("mu", json("stationary")), "mu");
        if (mu == "explicit") {
            cfg.mu_kind = ScenarioConfig::MuKind::Explicit;
            cfg.mu_explicit = vector_from_json(mu_arg, "mu.explicit");
        } else if (mu == "stationary") {
            cfg.mu_kind = ScenarioConfig::MuKind::Stationary;
        } else if (mu == "uniform") {
            cfg.mu_kind = ScenarioConfig::MuKind::Uniform;
        } else {
            bad("mu: unknown source '" + mu + "'");
        }

        if (!j.contains("nu")) bad("missing 'nu'");
        auto [nu, nu_arg] = single_key(j["nu"], "nu");
        if (nu == "explicit") {
            cfg.nu_kind = ScenarioConfig::NuKind::Explicit;
            cfg.nu_explicit = vector_from_json(nu_arg, "nu.explicit");
        } else if (nu == "perturb") {
            cfg.nu_kind = ScenarioConfig::NuKind::Perturb;
            cfg.nu_seed = seed_of(nu_arg, "nu.perturb");
        } else {
            bad("nu: unknown source '" + nu + "'");
        }

        auto [approx, approx_arg] = single_key(j.value("approximate", json("none")), "approximate");
        if (approx == "none") {
            cfg.approx_kind = ScenarioConfig::ApproxKind::None;
        } else if (approx == "misspecified") {
            cfg.approx_kind = ScenarioConfig::ApproxKind::Misspecified;
            if (!approx_arg.is_object()) bad("approximate.misspecified: expected an object");
            if (approx_arg.contains("q"))
                cfg.q_tilde_explicit = matrix_from_json(approx_arg["q"], "approximate.misspecified.q");
            if (approx_arg.contains("h"))
                cfg.h_tilde = vector_from_json(approx_arg["h"], "approximate.misspecified.h");
        } else if (approx == "fixture") {
            cfg.approx_kind = ScenarioConfig::ApproxKind::Fixture;
            cfg.fixture = fixture_from_name(approx_arg.get<std::string>());
        } else if (approx == "nmf") {
            cfg.approx_kind = ScenarioConfig::ApproxKind::Nmf;
            if (!approx_arg.is_object()) bad("approximate.nmf: expected an object");
            cfg.nmf_rank = approx_arg.value("rank", cfg.nmf_rank);
            cfg.nmf_iterations = approx_arg.value("iterations", cfg.nmf_iterations);
            cfg.nmf_seed = approx_arg.value("seed", cfg.nmf_seed);
        } else {
            bad("approximate: unknown source '" + approx + "'");
        }

        cfg.horizon = j.value("T", cfg.horizon);
        cfg.dt = j.value("dt", cfg.dt);
        cfg.n_paths = j.value("n_paths", cfg.n_paths);
        cfg.master_seed = j.value("master_seed", cfg.master_seed);
        if (j.contains("bounds")) {
            cfg.bounds.clear();
            for (const auto& b : j["bounds"]) cfg.bounds.push_back(parse_bound_request(b.get<std::string>()));
        }
        cfg.tolerance = j.value("tolerance", cfg.tolerance);
        const std::string scheme = j.value("scheme", std::string("zakai"));
        if (scheme == "zakai")
            cfg.scheme = WonhamScheme::Zakai;
        else if (scheme == "ks")
            cfg.scheme = WonhamScheme::KushnerStratonovich;
        else
            bad("scheme: expected 'zakai' or 'ks'");
        cfg.mirror = j.value("mirror", cfg.mirror);
        cfg.workers = j.value("workers", cfg.workers);
        cfg.output_points = j.value("output_points", cfg.output_points);
        cfg.export_trajectories = j.value("export_trajectories", cfg.export_trajectories);
        cfg.trajectory_csv = j.value("trajectory_csv", cfg.trajectory_csv);
    } catch (const json::exception& e) {
        bad(std::string("config: ") + e.what());
    }

    if (!(cfg.horizon > 0.0)) bad("T must be positive");
    if (!(cfg.dt > 0.0)) bad("dt must be positive");
    if (cfg.n_paths < 1) bad("n_paths must be at least 1");
    if (!(cfg.sigma > 0.0)) bad("sigma must be positive");
    if (!(cfg.tolerance >= 0.0)) bad("tolerance must be nonnegative");
    if (cfg.output_points < 2) bad("output_points must be at least 2");
    return cfg;
}

ScenarioConfig load_config_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) fail(ErrorCode::Io, "cannot open config " + path);
    json j;
    try {
        in >> j;
    } catch (const json::exception& e) {
        bad(path + ": " + e.what());
    }
    return config_from_json(j);
}

json config_to_json(const ScenarioConfig& cfg) {
    json j;
    j["run_id"] = cfg.run_id;
    switch (cfg.model_kind) {
        case ScenarioConfig::ModelKind::Explicit: j["model"] = {{"explicit", matrix_to_json(cfg.q_explicit)}}; break;
        case ScenarioConfig::ModelKind::AppendixB: j["model"] = {{"appendix_b", cfg.appendix_n}}; break;
        case ScenarioConfig::ModelKind::Fixture: j["model"] = {{"fixture", fixture_name(cfg.fixture)}}; break;
    }
    if (cfg.sensor_kind == ScenarioConfig::SensorKind::Explicit)
        j["sensor"] = {{"explicit", vector_to_json(cfg.h_explicit)}};
    else
        j["sensor"] = {{"random", {{"seed", cfg.sensor_seed}}}};
    j["sigma"] = cfg.sigma;
    switch (cfg.mu_kind) {
        case ScenarioConfig::MuKind::Explicit: j["mu"] = {{"explicit", vector_to_json(cfg.mu_explicit)}}; break;
        case ScenarioConfig::MuKind::Stationary: j["mu"] = "stationary"; break;
        case ScenarioConfig::MuKind::Uniform: j["mu"] = "uniform"; break;
    }
    if (cfg.nu_kind == ScenarioConfig::NuKind::Explicit)
        j["nu"] = {{"explicit", vector_to_json(cfg.nu_explicit)}};
    else
        j["nu"] = {{"perturb", {{"seed", cfg.nu_seed}}}};
    switch (cfg.approx_kind) {
        case ScenarioConfig::ApproxKind::None: j["approximate"] = "none"; break;
        case ScenarioConfig::ApproxKind::Misspecified: {
            json m = json::object();
            if (cfg.q_tilde_explicit.size() > 0) m["q"] = matrix_to_json(cfg.q_tilde_explicit);
            if (cfg.h_tilde) m["h"] = vector_to_json(*cfg.h_tilde);
            j["approximate"] = {{"misspecified", m}};
            break;
        }
        case ScenarioConfig::ApproxKind::Fixture: j["approximate"] = {{"fixture", fixture_name(cfg.fixture)}}; break;
        case ScenarioConfig::ApproxKind::Nmf:
            j["approximate"] = {{"nmf", {{"rank", cfg.nmf_rank}, {"iterations", cfg.nmf_iterations}, {"seed", cfg.nmf_seed}}}};
            break;
    }
    j["T"] = cfg.horizon;
    j["dt"] = cfg.dt;
    j["n_paths"] = cfg.n_paths;
    j["master_seed"] = cfg.master_seed;
    json bounds = json::array();
    for (auto b : cfg.bounds) bounds.push_back(bound_request_name(b));
    j["bounds"] = bounds;
    j["tolerance"] = cfg.tolerance;
    j["scheme"] = cfg.scheme == WonhamScheme::Zakai ? "zakai" : "ks";
    j["mirror"] = cfg.mirror;
    j["workers"] = cfg.workers;
    j["output_points"] = cfg.output_points;
    j["export_trajectories"] = cfg.export_trajectories;
    if (!cfg.trajectory_csv.empty()) j["trajectory_csv"] = cfg.trajectory_csv;
    return j;
}

ResolvedScenario resolve(const ScenarioConfig& cfg) {
    try {
        RateMatrix q = [&] {
            switch (cfg.model_kind) {
                case ScenarioConfig::ModelKind::AppendixB: return appendix_b_rate_matrix(cfg.appendix_n);
                case ScenarioConfig::ModelKind::Fixture: return paper_q(cfg.fixture);
                default: return validate_rate_matrix(cfg.q_explicit);
            }
        }();
        const std::size_t n = q.n_states();

        SensorVector h = [&] {
            if (cfg.sensor_kind == ScenarioConfig::SensorKind::Random) {
                RngStream rng(derive_seed(cfg.sensor_seed, 0));
                return random_sensor(static_cast<int>(n) - 1, rng);
            }
            return SensorVector(cfg.h_explicit);
        }();
        if (h.size() != n) bad("sensor has " + std::to_string(h.size()) + " entries, model has " + std::to_string(n) + " states");

        SimplexVector mu = [&] {
            switch (cfg.mu_kind) {
                case ScenarioConfig::MuKind::Stationary: return stationary_distribution(q);
                case ScenarioConfig::MuKind::Uniform: return SimplexVector::uniform(n);
                default: return SimplexVector(cfg.mu_explicit);
            }
        }();
        if (mu.size() != n) bad("mu does not match the model size");

        SimplexVector nu = [&] {
            if (cfg.nu_kind == ScenarioConfig::NuKind::Perturb) {
                RngStream rng(derive_seed(cfg.nu_seed, 0));
                return perturb_initial(mu, rng);
            }
            return SimplexVector(cfg.nu_explicit);
        }();
        if (nu.size() != n) bad("nu does not match the model size");

        std::optional<RateMatrix> q_tilde;
        std::optional<SensorVector> h_tilde;
        switch (cfg.approx_kind) {
            case ScenarioConfig::ApproxKind::None: break;
            case ScenarioConfig::ApproxKind::Misspecified:
                q_tilde = cfg.q_tilde_explicit.size() > 0 ? validate_rate_matrix(cfg.q_tilde_explicit) : q;
                break;
            case ScenarioConfig::ApproxKind::Fixture:
                if (cfg.model_kind != ScenarioConfig::ModelKind::Fixture && paper_q(cfg.fixture).n_states() != n)
                    bad("fixture approximation does not match the model size");
                q_tilde = paper_q_tilde(cfg.fixture);
                break;
            case ScenarioConfig::ApproxKind::Nmf: {
                RngStream rng(derive_seed(cfg.nmf_seed, 0));
                q_tilde = nmf_approximate_q(q, cfg.nmf_rank, cfg.nmf_iterations, rng);
                break;
            }
        }
        if (q_tilde) {
            if (q_tilde->n_states() != n) bad("approximate model does not match the model size");
            h_tilde = cfg.h_tilde ? SensorVector(*cfg.h_tilde) : h;
            if (h_tilde->size() != n) bad("approximate sensor does not match the model size");
        } else if (cfg.h_tilde) {
            bad("h~ given without an approximate filter");
        }

        return ResolvedScenario{std::move(q), std::move(h), std::move(mu), std::move(nu),
                                std::move(q_tilde), std::move(h_tilde),
                                TimeGrid::covering(cfg.horizon, cfg.dt)};
    } catch (const Error& e) {
        if (e.code() == ErrorCode::Config) throw;
        fail(e.code(), std::string("resolving config: ") + e.what());
    }
}

json resolved_to_json(const ResolvedScenario& r) {
    json j;
    j["q"] = matrix_to_json(r.q.entries());
    j["h"] = vector_to_json(r.h.values());
    j["mu"] = vector_to_json(r.mu.probs());
    j["nu"] = vector_to_json(r.nu.probs());
    if (r.q_tilde) j["q_tilde"] = matrix_to_json(r.q_tilde->entries());
    if (r.h_tilde) j["h_tilde"] = vector_to_json(r.h_tilde->values());
    j["grid"] = {{"t0", r.grid.t0}, {"dt", r.grid.dt}, {"n_steps", r.grid.n_steps}};
    return j;
}

}  // namespace wonham

#include "run_config.hpp"

#include <cmath>
#include <fstream>
#include <set>

#include <coalitiond/errors.hpp>
#include <coalitiond/exact.hpp>

namespace coalitiond::cli {

Scenario scenario_from_string(const std::string& s)
{
    if (s == "forecast")
        return Scenario::forecast;
    if (s == "electricity")
        return Scenario::electricity;
    if (s == "synthetic")
        return Scenario::synthetic;
    if (s == "custom-game-file" || s == "custom_game_file")
        return Scenario::custom_game_file;
    throw InputError("unknown scenario \"" + s + "\" (expected forecast, electricity, synthetic or custom-game-file)");
}

std::string to_string(Scenario s)
{
    switch (s) {
    case Scenario::forecast: return "forecast";
    case Scenario::electricity: return "electricity";
    case Scenario::synthetic: return "synthetic";
    case Scenario::custom_game_file: return "custom-game-file";
    }
    return "unknown";
}

TrackerKind tracker_from_string(const std::string& s)
{
    if (s == "shapley")
        return TrackerKind::shapley;
    if (s == "core")
        return TrackerKind::core;
    throw InputError("unknown tracker \"" + s + "\" (expected shapley or core)");
}

std::string to_string(TrackerKind t)
{
    return t == TrackerKind::shapley ? "shapley" : "core";
}

namespace {

using nlohmann::json;

class Reader
{
public:
    Reader(const json& j, std::string prefix, std::vector<std::string>& problems)
        : j_(j)
        , prefix_(std::move(prefix))
        , problems_(problems)
    {
        if (!j_.is_object())
            problems_.push_back((prefix_.empty() ? std::string("config") : prefix_) + " must be a JSON object");
    }

    template <typename T>
    void take(const std::string& key, T& out)
    {
        seen_.insert(key);
        if (!j_.is_object() || !j_.contains(key))
            return;
        try {
            out = j_.at(key).get<T>();
        } catch (const json::exception&) {
            problems_.push_back(name(key) + " has the wrong type");
        }
    }

    template <typename T, typename F>
    void take_enum(const std::string& key, T& out, F parse)
    {
        std::string s;
        seen_.insert(key);
        if (!j_.is_object() || !j_.contains(key))
            return;
        if (!j_.at(key).is_string()) {
            problems_.push_back(name(key) + " must be a string");
            return;
        }
        try {
            out = parse(j_.at(key).get<std::string>());
        } catch (const InputError& e) {
            problems_.push_back(name(key) + ": " + e.what());
        }
    }

    const json* child(const std::string& key)
    {
        seen_.insert(key);
        if (!j_.is_object() || !j_.contains(key))
            return nullptr;
        return &j_.at(key);
    }

    void reject_unknown()
    {
        if (!j_.is_object())
            return;
        for (const auto& [key, value] : j_.items())
            if (!seen_.contains(key))
                problems_.push_back("unknown key " + name(key));
    }

private:
    std::string name(const std::string& key) const { return prefix_.empty() ? key : prefix_ + "." + key; }

    const json& j_;
    std::string prefix_;
    std::vector<std::string>& problems_;
    std::set<std::string> seen_;
};

} // namespace

RunConfig run_config_from_json(const nlohmann::json& j, std::vector<std::string>& problems)
{
    RunConfig cfg;
    Reader r(j, "", problems);
    r.take_enum("scenario", cfg.scenario, scenario_from_string);
    r.take_enum("tracker", cfg.tracker, tracker_from_string);
    r.take("seed", cfg.seed);
    r.take("n_agents", cfg.n_agents);
    r.take("horizon", cfg.horizon);
    r.take("smoothness", cfg.smoothness);
    r.take("noise", cfg.noise);
    r.take("drift", cfg.drift);
    r.take("n_sellers", cfg.n_sellers);
    r.take("tag", cfg.tag);

    double lead = 0.0;
    if (j.is_object() && j.contains("lead_time_minutes") && !j.at("lead_time_minutes").is_null()) {
        r.take("lead_time_minutes", lead);
        cfg.lead_time_minutes = lead;
    } else {
        r.child("lead_time_minutes");
    }

    std::string path;
    if (j.is_object() && j.contains("input") && !j.at("input").is_null()) {
        r.take("input", path);
        cfg.input = path;
    } else {
        r.child("input");
    }
    if (j.is_object() && j.contains("output")) {
        r.take("output", path);
        cfg.output_root = path;
    } else {
        r.child("output");
    }

    bool network_seed_given = false;
    if (const json* n = r.child("network")) {
        Reader nr(*n, "network", problems);
        nr.take_enum("topology", cfg.network.topology, topology_from_string);
        nr.take("edge_prob", cfg.network.edge_prob);
        nr.take("time_varying", cfg.network.time_varying);
        network_seed_given = n->is_object() && n->contains("seed");
        nr.take("seed", cfg.network.seed);
        nr.reject_unknown();
    }
    if (!network_seed_given)
        cfg.network.seed = cfg.seed;

    if (const json* t = r.child("tracker_config")) {
        TrackerConfig& tc = cfg.tracking;
        Reader tr(*t, "tracker_config", problems);
        tr.take("alpha", tc.alpha);
        tr.take("gamma_reg", tc.gamma_reg);
        tr.take_enum("step_schedule", tc.schedule, step_schedule_from_string);
        tr.take_enum("init_policy", tc.init, init_policy_from_string);
        tr.take_enum("projection", tc.projection, projection_method_from_string);
        tr.take("projection_tol", tc.projection_tol);
        tr.take("projection_max_iter", tc.projection_max_iter);
        tr.take("projection_fallback", tc.projection_fallback);
        tr.take("iterations_per_sample", tc.iterations_per_sample);
        tr.take("tolerance", tc.tolerance);
        tr.take("max_iterations", tc.max_iterations);
        tr.take("reference_max_iterations", tc.reference_max_iterations);
        tr.take("reference_polish", tc.reference_polish);
        if (const json* init = tr.child("initial")) {
            try {
                const auto rows = init->get<std::vector<std::vector<double>>>();
                tc.initial.resize(static_cast<Eigen::Index>(rows.size()), static_cast<Eigen::Index>(rows.size()));
                for (std::size_t i = 0; i < rows.size(); ++i) {
                    if (rows[i].size() != rows.size())
                        throw InputError("not square");
                    for (std::size_t c = 0; c < rows[i].size(); ++c)
                        tc.initial(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(c)) = rows[i][c];
                }
            } catch (const std::exception&) {
                problems.push_back("tracker_config.initial must be a square matrix (list of rows)");
                tc.initial.resize(0, 0);
            }
        }
        tr.reject_unknown();
    }
    r.reject_unknown();
    return cfg;
}

nlohmann::json to_json(const RunConfig& cfg)
{
    const TrackerConfig& tc = cfg.tracking;
    json t = {
        {"alpha", tc.alpha},
        {"gamma_reg", tc.gamma_reg},
        {"step_schedule", to_string(tc.schedule)},
        {"init_policy", to_string(tc.init)},
        {"projection", to_string(tc.projection)},
        {"projection_tol", tc.projection_tol},
        {"projection_max_iter", tc.projection_max_iter},
        {"projection_fallback", tc.projection_fallback},
        {"iterations_per_sample", tc.iterations_per_sample},
        {"tolerance", tc.tolerance},
        {"max_iterations", tc.max_iterations},
        {"reference_max_iterations", tc.reference_max_iterations},
        {"reference_polish", tc.reference_polish},
    };
    if (tc.initial.size() > 0) {
        json rows = json::array();
        for (Eigen::Index i = 0; i < tc.initial.rows(); ++i) {
            json row = json::array();
            for (Eigen::Index c = 0; c < tc.initial.cols(); ++c)
                row.push_back(tc.initial(i, c));
            rows.push_back(row);
        }
        t["initial"] = rows;
    }
    return {
        {"scenario", to_string(cfg.scenario)},
        {"tracker", to_string(cfg.tracker)},
        {"seed", cfg.seed},
        {"n_agents", cfg.n_agents},
        {"horizon", cfg.horizon},
        {"smoothness", cfg.smoothness},
        {"noise", cfg.noise},
        {"drift", cfg.drift},
        {"n_sellers", cfg.n_sellers},
        {"lead_time_minutes", cfg.lead_time_minutes ? json(*cfg.lead_time_minutes) : json(nullptr)},
        {"input", cfg.input ? json(cfg.input->string()) : json(nullptr)},
        {"output", cfg.output_root.string()},
        {"tag", cfg.tag},
        {"network",
         {{"topology", to_string(cfg.network.topology)},
          {"edge_prob", cfg.network.edge_prob},
          {"time_varying", cfg.network.time_varying},
          {"seed", cfg.network.seed}}},
        {"tracker_config", t},
    };
}

std::vector<std::string> validate(const RunConfig& cfg)
{
    std::vector<std::string> out;
    for (auto& p : cfg.tracking.validate(cfg.tracker == TrackerKind::core))
        out.push_back("tracker_config: " + p);

    const bool market = cfg.scenario == Scenario::forecast || cfg.scenario == Scenario::electricity;
    if (cfg.lead_time_minutes) {
        if (!market)
            out.emplace_back("lead_time_minutes only applies to the forecast and electricity scenarios");
        const double lt = *cfg.lead_time_minutes;
        if (lt != 2.0 && lt != 5.0 && lt != 10.0)
            out.emplace_back("lead_time_minutes must be 2, 5 or 10");
    }
    if (cfg.scenario == Scenario::custom_game_file && !cfg.input)
        out.emplace_back("custom-game-file needs an input game JSON");
    if (cfg.scenario != Scenario::custom_game_file && cfg.n_agents < 1)
        out.emplace_back("n_agents must be >= 1");
    if (cfg.scenario != Scenario::custom_game_file && !cfg.input) {
        const std::size_t cap = cfg.tracker == TrackerKind::shapley ? kMaxShapleyAgents : kMaxDenseAgents;
        if (cfg.n_agents > cap)
            out.push_back("n_agents must be <= " + std::to_string(cap) + " for the " + to_string(cfg.tracker) +
                          " tracker");
    }
    if ((cfg.scenario == Scenario::synthetic || cfg.scenario == Scenario::custom_game_file) && cfg.horizon < 1)
        out.emplace_back("horizon must be >= 1 for synthetic and custom-game-file scenarios");
    if (cfg.scenario == Scenario::forecast && !cfg.input && cfg.horizon < 1)
        out.emplace_back("horizon must be >= 1 for a synthetic forecast series");
    if (!(cfg.smoothness > 0.0))
        out.emplace_back("smoothness must be > 0");
    if (!(cfg.noise >= 0.0) || !std::isfinite(cfg.noise))
        out.emplace_back("noise must be finite and >= 0");
    if (!(cfg.drift >= 0.0) || !std::isfinite(cfg.drift))
        out.emplace_back("drift must be finite and >= 0");
    if (cfg.scenario == Scenario::electricity && !cfg.input && (cfg.n_sellers < 1 || cfg.n_sellers >= cfg.n_agents))
        out.emplace_back("n_sellers must lie in [1, n_agents)");
    if (!(cfg.network.edge_prob >= 0.0 && cfg.network.edge_prob <= 1.0))
        out.emplace_back("network.edge_prob must lie in [0, 1]");
    if (cfg.network.time_varying && cfg.network.topology != Topology::random)
        out.emplace_back("network.time_varying requires the random topology");
    return out;
}

nlohmann::json read_json_file(const std::filesystem::path& path)
{
    std::ifstream in(path);
    if (!in)
        throw InputError("cannot open " + path.string());
    try {
        return nlohmann::json::parse(in);
    } catch (const nlohmann::json::parse_error& e) {
        throw InputError(path.string() + ": invalid JSON: " + e.what());
    }
}

RunConfig load_run_config(const std::filesystem::path& path)
{
    std::vector<std::string> problems;
    RunConfig cfg = run_config_from_json(read_json_file(path), problems);
    for (auto& p : validate(cfg))
        problems.push_back(std::move(p));
    if (!problems.empty()) {
        std::string msg = path.string() + ": invalid config";
        for (const auto& p : problems)
            msg += "\n  - " + p;
        throw InputError(msg);
    }
    return cfg;
}

} // namespace coalitiond::cli

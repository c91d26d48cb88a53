#include "commands.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>

#include <nlohmann/json.hpp>

#include <coalitiond/errors.hpp>
#include <coalitiond/exact.hpp>
#include <coalitiond/metrics.hpp>

#include "run_config.hpp"
#include "runner.hpp"

namespace coalitiond::cli {

namespace {

using nlohmann::json;

template <typename F>
int guarded(std::ostream& err, F&& body)
{
    try {
        return body();
    } catch (const ParseError& e) {
        err << "error: " << e.what() << "\n";
    } catch (const ConvergenceError& e) {
        err << "error: " << e.what() << " (residual " << e.residual() << ")\n";
    } catch (const std::exception& e) {
        err << "error: " << e.what() << "\n";
    }
    return 1;
}

void require_file(const std::filesystem::path& p)
{
    if (!std::filesystem::is_regular_file(p))
        throw InputError("file not found: " + p.string());
}

std::string fixed4(double v)
{
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.4f", v);
    return buf;
}

BenchmarkScenario benchmark_scenario_from_string(const std::string& s)
{
    if (s == "electricity-core" || s == "electricity_core")
        return BenchmarkScenario::electricity_core;
    if (s == "forecast-shapley" || s == "forecast_shapley")
        return BenchmarkScenario::forecast_shapley;
    throw InputError("unknown benchmark scenario \"" + s + "\" (expected electricity-core or forecast-shapley)");
}

} // namespace

std::vector<double> read_vector_csv(const std::filesystem::path& path)
{
    require_file(path);
    std::ifstream in(path);
    std::string line;
    std::size_t row = 0;
    std::vector<double> values;
    while (std::getline(in, line)) {
        ++row;
        if (!line.empty() && line.back() == '\r')
            line.pop_back();
        if (line.find_first_not_of(" \t") == std::string::npos)
            continue;
        std::vector<double> parsed;
        std::stringstream ss(line);
        std::string cell;
        bool numeric = true;
        while (std::getline(ss, cell, ',')) {
            try {
                std::size_t used = 0;
                parsed.push_back(std::stod(cell, &used));
                if (cell.find_first_not_of(" \t", used) != std::string::npos)
                    numeric = false;
            } catch (const std::exception&) {
                numeric = false;
            }
        }
        if (!numeric) {
            if (values.empty() && row == 1)
                continue;
            throw ParseError("malformed number in " + path.string(), row);
        }
        if (!values.empty())
            throw ParseError("expected a single payoff row in " + path.string(), row);
        values = std::move(parsed);
    }
    if (values.empty())
        throw ParseError("no payoff row in " + path.string());
    return values;
}

int cmd_run(const std::filesystem::path& config, const RunOverrides& overrides, std::ostream& out, std::ostream& err)
{
    return guarded(err, [&] {
        require_file(config);
        std::vector<std::string> problems;
        RunConfig cfg = run_config_from_json(read_json_file(config), problems);
        if (overrides.alpha)
            cfg.tracking.alpha = *overrides.alpha;
        if (overrides.seed) {
            if (cfg.network.seed == cfg.seed)
                cfg.network.seed = *overrides.seed;
            cfg.seed = *overrides.seed;
        }
        if (overrides.horizon)
            cfg.horizon = *overrides.horizon;
        if (overrides.tag)
            cfg.tag = *overrides.tag;
        if (overrides.out)
            cfg.output_root = *overrides.out;
        for (auto& p : validate(cfg))
            problems.push_back(std::move(p));
        if (!problems.empty()) {
            err << "error: " << config.string() << ": invalid config\n";
            for (const auto& p : problems)
                err << "  - " << p << "\n";
            return 2;
        }
        const RunResult r = run(cfg);
        out << r.directory.string() << "\n";
        out << r.summary.dump(2) << "\n";
        return 0;
    });
}

int cmd_shapley_exact(const std::filesystem::path& game, std::ostream& out, std::ostream& err)
{
    return guarded(err, [&] {
        require_file(game);
        const PayoffVector phi = shapley_exact(load_game(game));
        out << "[";
        for (Eigen::Index i = 0; i < phi.size(); ++i)
            out << (i > 0 ? ", " : "") << fixed4(phi[i]);
        out << "]\n";
        return 0;
    });
}

int cmd_core_check(const std::filesystem::path& game, const std::filesystem::path& x_csv, double tol,
                   std::ostream& out, std::ostream& err)
{
    return guarded(err, [&] {
        require_file(game);
        const InstantaneousGame g = load_game(game);
        const std::vector<double> values = read_vector_csv(x_csv);
        if (values.size() != g.n_agents())
            throw InputError(x_csv.string() + " has " + std::to_string(values.size()) + " entries, the game has " +
                             std::to_string(g.n_agents()) + " agents");
        const PayoffVector x = Eigen::Map<const PayoffVector>(values.data(), static_cast<Eigen::Index>(values.size()));
        const CoreCheck c = core_membership(g, x, tol);
        json j = {
            {"in_core", c.in_core},
            {"worst_violation", c.worst_violation},
            {"worst_coalition", c.worst_coalition.members()},
            {"efficiency_gap", c.efficiency_gap},
        };
        out << j.dump() << "\n";
        return 0;
    });
}

int cmd_benchmark(const std::filesystem::path& config, std::ostream& out, std::ostream& err)
{
    return guarded(err, [&] {
        require_file(config);
        const json j = read_json_file(config);
        const auto scenario = benchmark_scenario_from_string(j.value("scenario", std::string("electricity-core")));
        const auto n_values = j.value("n_values", std::vector<std::size_t>{4, 6, 8, 10});
        const auto reps = j.value("repetitions", std::size_t{10});
        const auto seed = j.value("seed", std::uint64_t{0});
        for (const auto& [key, value] : j.items())
            if (key != "scenario" && key != "n_values" && key != "repetitions" && key != "seed")
                throw InputError(config.string() + ": unknown key " + key);

        json rows = json::array();
        for (const StepCost& c : benchmark_step_cost(n_values, scenario, reps, seed)) {
            rows.push_back({{"n_agents", c.n_agents},
                            {"online_step_seconds", c.online_step_seconds},
                            {"exact_solution_seconds", c.exact_solution_seconds},
                            {"ratio", c.online_step_seconds > 0.0 ? c.exact_solution_seconds / c.online_step_seconds
                                                                  : 0.0}});
        }
        out << rows.dump(2) << "\n";
        return 0;
    });
}

int cmd_validate(const std::filesystem::path& config, std::ostream& out, std::ostream& err)
{
    return guarded(err, [&] {
        require_file(config);
        std::vector<std::string> problems;
        const RunConfig cfg = run_config_from_json(read_json_file(config), problems);
        for (auto& p : validate(cfg))
            problems.push_back(std::move(p));
        if (cfg.input && !std::filesystem::exists(*cfg.input))
            problems.push_back("input file not found: " + cfg.input->string());
        if (problems.empty()) {
            out << "ok\n";
            return 0;
        }
        for (const auto& p : problems)
            out << "- " << p << "\n";
        return 1;
    });
}

} // namespace coalitiond::cli

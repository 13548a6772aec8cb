#include "commands.hpp"

#include <chrono>
#include <fstream>
#include <functional>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>

#include "crowdctl/evaluation.hpp"
#include "crowdctl/json_format.hpp"
#include "crowdctl/oracle.hpp"
#include "crowdctl/scenario_io.hpp"
#include "crowdctl/selector.hpp"
#include "crowdctl/simulator.hpp"

namespace crowdctl::cli {

namespace {

using json = nlohmann::ordered_json;
using Clock = std::chrono::steady_clock;

json vector_json(std::span<const double> v) {
    json out = json::array();
    for (double x : v) out.push_back(json_real(x));
    return out;
}

json matrix_json(const Matrix& m) {
    json out = json::array();
    for (std::size_t r = 0; r < m.rows(); ++r) out.push_back(vector_json(m.row(r)));
    return out;
}

json index_matrix_json(const IndexMatrix& m) {
    json out = json::array();
    for (std::size_t r = 0; r < m.rows(); ++r) out.push_back(std::vector<std::size_t>(m.row(r).begin(), m.row(r).end()));
    return out;
}

json cost_json(const CostReport& c) {
    json out;
    out["total"] = c.total;
    out["kl_term"] = c.kl_term;
    out["reward_term"] = c.reward_term;
    out["per_stage_kl"] = vector_json(c.per_stage_kl);
    out["per_stage_reward"] = vector_json(c.per_stage_reward);
    return out;
}

json violations_json(const ValidationReport& report) {
    json list = json::array();
    for (const auto& v : report.violations) {
        json item;
        item["kind"] = to_string(v.kind);
        item["field"] = v.field;
        if (v.stage) item["stage"] = *v.stage;
        if (v.from) item["from"] = *v.from;
        if (v.to) item["to"] = *v.to;
        item["message"] = v.message;
        list.push_back(std::move(item));
    }
    json doc;
    doc["violations"] = std::move(list);
    return doc;
}

void emit(const std::string& text, const std::optional<std::filesystem::path>& path, std::ostream& out) {
    if (!path) {
        out << text;
        return;
    }
    std::ofstream file(*path, std::ios::binary);
    if (!file) throw IoError("cannot write '" + path->string() + "'");
    file << text;
    if (!file) throw IoError("failed writing '" + path->string() + "'");
}

// Loads and validates the scenario, runs `body`, and maps failures onto exit codes.
int with_scenario(const std::filesystem::path& path, std::ostream& err,
                  const std::function<void(const Scenario&)>& body) {
    try {
        const Scenario s = load_scenario(path);
        const auto report = validate_scenario(s);
        if (!report.ok()) {
            err << format_json(violations_json(report));
            return kInvalidInput;
        }
        body(s);
        return kOk;
    } catch (const IoError& e) {
        err << "error: " << e.what() << '\n';
        return kIoFailure;
    } catch (const ParseError& e) {
        json doc;
        doc["error"] = "parse";
        doc["field"] = e.field();
        doc["line"] = e.line();
        doc["column"] = e.column();
        doc["message"] = e.what();
        err << format_json(doc);
        return kInvalidInput;
    } catch (const SchemaVersionError& e) {
        json doc;
        doc["error"] = "schema_version";
        doc["message"] = e.what();
        err << format_json(doc);
        return kInvalidInput;
    } catch (const InvalidScenarioError& e) {
        err << format_json(violations_json(e.report()));
        return kInvalidInput;
    } catch (const Error& e) {
        err << "error: " << e.what() << '\n';
        return kInvalidInput;
    }
}

json envelope(const char* command, const Scenario& s, json parameters, json outputs, Clock::time_point started) {
    json doc;
    doc["command"] = command;
    doc["scenario_digest"] = scenario_digest(s);
    doc["parameters"] = std::move(parameters);
    doc["outputs"] = std::move(outputs);
    doc["wall_time_s"] = std::chrono::duration<double>(Clock::now() - started).count();
    return doc;
}

json scenario_parameters(const ScenarioCommand& cmd) {
    json p;
    p["scenario"] = cmd.scenario.string();
    if (cmd.out) p["out"] = cmd.out->string();
    return p;
}

} // namespace

int run_solve(const ScenarioCommand& cmd, std::ostream& out, std::ostream& err) {
    const auto started = Clock::now();
    return with_scenario(cmd.scenario, err, [&](const Scenario& s) {
        const auto policy = solve_selection(s);
        const auto report = cost(s, compose_agent_behavior(s, policy));
        json outputs;
        outputs["choice"] = index_matrix_json(policy.choice);
        json scores = json::array();
        for (const auto& stage : policy.scores) scores.push_back(matrix_json(stage.a));
        outputs["scores"] = std::move(scores);
        outputs["r_bar"] = matrix_json(policy.cumulative.r_bar);
        outputs["r_hat"] = matrix_json(policy.cumulative.r_hat);
        outputs["cost"] = cost_json(report);
        emit(format_json(envelope("solve", s, scenario_parameters(cmd), std::move(outputs), started)), cmd.out, out);
    });
}

int run_oracle(const ScenarioCommand& cmd, std::ostream& out, std::ostream& err) {
    const auto started = Clock::now();
    return with_scenario(cmd.scenario, err, [&](const Scenario& s) {
        const auto oracle = solve_oracle(s.target, s.reward, s.initial);
        json outputs;
        json kernels = json::array();
        for (const auto& kernel : oracle.behavior) kernels.push_back(matrix_json(kernel));
        outputs["kernels"] = std::move(kernels);
        outputs["optimal_cost"] = oracle.optimal_cost;
        outputs["rho_bar"] = matrix_json(oracle.recursion.rho_bar);
        outputs["rho_hat"] = matrix_json(oracle.recursion.rho_hat);
        emit(format_json(envelope("oracle", s, scenario_parameters(cmd), std::move(outputs), started)), cmd.out, out);
    });
}

int run_regret(const ScenarioCommand& cmd, std::ostream& out, std::ostream& err) {
    const auto started = Clock::now();
    return with_scenario(cmd.scenario, err, [&](const Scenario& s) {
        const auto policy = solve_selection(s);
        const auto report = regret_and_bound(s, policy);
        json outputs;
        outputs["regret"] = report.regret;
        outputs["bound"] = json_real(report.bound);
        outputs["selected_cost"] = report.selected_cost;
        outputs["oracle_cost"] = report.oracle_cost;
        json stages = json::array();
        for (const auto& st : report.per_stage) {
            json item;
            item["l"] = json_real(st.l);
            item["L"] = json_real(st.L);
            item["R"] = json_real(st.R);
            stages.push_back(std::move(item));
        }
        outputs["per_stage"] = std::move(stages);
        emit(format_json(envelope("regret", s, scenario_parameters(cmd), std::move(outputs), started)), cmd.out, out);
    });
}

int run_simulate(const SimulateCommand& cmd, std::ostream& out, std::ostream& err) {
    const auto started = Clock::now();
    return with_scenario(cmd.scenario, err, [&](const Scenario& s) {
        std::vector<Rollout> rollouts;
        if (cmd.behavior == SimulatedBehavior::selected) {
            const auto policy = solve_selection(s);
            rollouts = sample_rollouts(s.initial, compose_agent_behavior(s, policy), policy.choice, cmd.rollouts,
                                       cmd.seed);
        } else {
            rollouts = sample_rollouts(s.initial, solve_oracle(s.target, s.reward, s.initial).behavior, cmd.rollouts,
                                       cmd.seed);
        }
        std::ostringstream csv;
        write_rollout_csv(csv, rollouts);
        emit(csv.str(), cmd.out, out);

        const auto stats = rollout_statistics(rollouts, s.num_states(), &s.reward);
        json parameters;
        parameters["scenario"] = cmd.scenario.string();
        parameters["rollouts"] = cmd.rollouts;
        parameters["seed"] = cmd.seed;
        parameters["behavior"] = cmd.behavior == SimulatedBehavior::selected ? "selected" : "oracle";
        json outputs;
        outputs["rollout_file"] = cmd.out ? cmd.out->string() : std::string("-");
        outputs["visit_frequency"] = matrix_json(stats.visit_frequency);
        outputs["mean_reward"] = vector_json(stats.mean_reward);
        // stdout is reserved for the CSV when no --out is given.
        std::ostream& stats_stream = cmd.out ? out : err;
        stats_stream << format_json(envelope("simulate", s, std::move(parameters), std::move(outputs), started));
    });
}

int run_gridgen(const GridgenCommand& cmd, std::ostream& out, std::ostream& err) {
    try {
        GridSpec grid = cmd.grid;
        if (grid.source_profiles.empty()) grid.source_profiles = default_source_profiles(grid, cmd.sources, cmd.seed);
        const auto s = generate_grid_scenario(grid, cmd.seed, cmd.preset, cmd.rho);
        emit(serialize_scenario(s), cmd.out, out);
        return kOk;
    } catch (const IoError& e) {
        err << "error: " << e.what() << '\n';
        return kIoFailure;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << '\n';
        return kInvalidInput;
    }
}

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
    CLI::App app{"Source selection, oracle and regret tools for finite-horizon tracking problems", "crowdctl"};
    app.require_subcommand(1);

    ScenarioCommand solve_cmd, oracle_cmd, regret_cmd;
    auto add_scenario_command = [&](const char* name, const char* help, ScenarioCommand& cmd) {
        auto* sub = app.add_subcommand(name, help);
        sub->add_option("scenario", cmd.scenario, "Scenario JSON file")->required();
        sub->add_option("--out", cmd.out, "Write the result JSON here instead of stdout");
        return sub;
    };
    auto* solve = add_scenario_command("solve", "Optimal per-state source selection", solve_cmd);
    auto* oracle = add_scenario_command("oracle", "Unconstrained optimal behavior and its cost", oracle_cmd);
    auto* regret = add_scenario_command("regret", "Regret of the selection and its upper bound", regret_cmd);

    SimulateCommand sim_cmd;
    auto* simulate = app.add_subcommand("simulate", "Sample seeded rollouts");
    simulate->add_option("scenario", sim_cmd.scenario, "Scenario JSON file")->required();
    simulate->add_option("--out", sim_cmd.out, "Rollout CSV path (stats JSON then goes to stdout)");
    simulate->add_option("--rollouts", sim_cmd.rollouts, "Number of rollouts")->capture_default_str();
    simulate->add_option("--seed", sim_cmd.seed, "Seed of rollout 0; rollout m uses seed + m")->capture_default_str();
    simulate->add_option("--behavior", sim_cmd.behavior, "Behavior to sample: selected or oracle")
        ->transform(CLI::CheckedTransformer(
            std::map<std::string, SimulatedBehavior>{{"selected", SimulatedBehavior::selected},
                                                     {"oracle", SimulatedBehavior::oracle}}))
        ->capture_default_str();

    GridgenCommand grid_cmd;
    auto* gridgen = app.add_subcommand("gridgen", "Generate a grid navigation scenario");
    gridgen->add_option("--rows", grid_cmd.grid.rows)->capture_default_str();
    gridgen->add_option("--cols", grid_cmd.grid.cols)->capture_default_str();
    gridgen->add_option("--horizon", grid_cmd.grid.horizon)->capture_default_str();
    gridgen->add_option("--start", grid_cmd.grid.start)->capture_default_str();
    gridgen->add_option("--goal", grid_cmd.grid.goal)->capture_default_str();
    gridgen->add_option("--noise", grid_cmd.grid.noise, "Off-route mass")->capture_default_str();
    gridgen->add_option("--sources", grid_cmd.sources, "Number of sources")->capture_default_str();
    gridgen->add_option("--preset", grid_cmd.preset, "Agent reward: zero or penalty")
        ->transform(CLI::CheckedTransformer(
            std::map<std::string, RewardPreset>{{"zero", RewardPreset::zero}, {"penalty", RewardPreset::penalty}}))
        ->capture_default_str();
    gridgen->add_option("--rho", grid_cmd.rho, "Penalty/bonus magnitude")->capture_default_str();
    gridgen->add_option("--seed", grid_cmd.seed, "Seed for extra source waypoints")->capture_default_str();
    gridgen->add_option("--out", grid_cmd.out, "Write the scenario here instead of stdout");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e, out, err);
        return code == 0 ? kOk : kInvalidInput;
    }

    if (solve->parsed()) return run_solve(solve_cmd, out, err);
    if (oracle->parsed()) return run_oracle(oracle_cmd, out, err);
    if (regret->parsed()) return run_regret(regret_cmd, out, err);
    if (simulate->parsed()) return run_simulate(sim_cmd, out, err);
    if (gridgen->parsed()) return run_gridgen(grid_cmd, out, err);
    return kInvalidInput;
}

} // namespace crowdctl::cli

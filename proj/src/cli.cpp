#include "conlab/cli.hpp"

#include <algorithm>
#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <future>
#include <ostream>
#include <sstream>

#include <CLI11.hpp>

#include "conlab/errors.hpp"

namespace conlab {

namespace {

bool staircase_dependent(const std::string& criterion) {
    return criterion == "THM8" || criterion == "THM9" || criterion == "THM11";
}

std::string csv_real(double value) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", value);
    return buf;
}

std::string row_text(const Eigen::RowVectorXd& row) {
    std::string out;
    for (Eigen::Index j = 0; j < row.size(); ++j) {
        if (j) out += ' ';
        out += format_real(row(j));
    }
    return out;
}

std::filesystem::path prepare_dir(const std::string& requested) {
    std::filesystem::path dir = resolve_output_dir(requested);
    std::error_code ec;
    std::filesystem::create_directories(dir, ec);
    if (ec) throw InvalidInput("cannot create output directory '" + dir.string() + "': " + ec.message());
    return dir;
}

void write_file(const std::filesystem::path& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw InvalidInput("cannot write '" + path.string() + "'");
    out << text;
}

ConditionLine evaluate_one(const ScenarioConfig& config, const WeightedGraph& graph, const SystemState& initial,
                           const std::string& name, double r, bool with_r) {
    ConditionLine line;
    line.label = with_r ? name + "(r=" + format_real(r) + ")" : name;
    try {
        if (name == "GAIN")
            line.report = check_gain_constraints(config.protocol, config.weight, graph);
        else
            line.report =
                check_initial_condition(criterion_from_string(name), config.protocol, graph, config.weight, initial, r);
    } catch (const InvalidInput& e) {
        line.error = e.what();
    }
    return line;
}

SweepRow sweep_point(ScenarioConfig config, const std::string& parameter, double value, const RunOptions& options) {
    if (parameter == "d") {
        config.initial.spacing = value;
    } else if (parameter == "H") {
        auto cs = std::get<CuckerSmale>(config.weight.family());
        cs.H = value;
        config.weight = WeightFunction(cs);
    } else if (parameter == "staircase_r") {
        config.staircase_r = {value};
    } else if (parameter == "h") {
        config.protocol.gains.h = value;
    }
    SweepRow row;
    row.value = value;
    row.conditions = evaluate_conditions(config, {}, config.staircase_r);
    row.verdict = detect_consensus(run_trajectory(config), options.detection).kind;
    return row;
}

void check_sweep_parameter(const ScenarioConfig& config, const std::string& parameter) {
    if (parameter == "d") {
        if (config.initial.kind != InitialSpec::Kind::EvenlySpaced)
            throw InvalidInput("parameter d needs evenly spaced initial opinions");
    } else if (parameter == "H") {
        if (!std::holds_alternative<CuckerSmale>(config.weight.family()))
            throw InvalidInput("parameter H needs a Cucker-Smale weight");
    } else if (parameter == "staircase_r") {
        // applies everywhere; only THM8/THM9/THM11 and the W-based monitors read it
    } else if (parameter == "h") {
        if (config.protocol.law != Law::DT1Fixed && config.protocol.law != Law::DT1StateDep)
            throw InvalidInput("parameter h needs a discrete first-order law");
    } else {
        throw InvalidInput("unknown sweep parameter '" + parameter + "' (expected d, H, staircase_r or h)");
    }
}

void add_common_flags(CLI::App& cmd, RunOptions& options, std::optional<double>& pos_tol,
                      std::optional<double>& vel_tol) {
    cmd.add_option("--output", options.output_dir, "Output directory (default: $CONSENSUS_LAB_OUTPUT)");
    cmd.add_option("--dt", options.dt, "RK4 step for continuous-time laws");
    cmd.add_option("--horizon", options.horizon, "Duration (continuous time) or step count (discrete time)");
    cmd.add_option("--seed", options.seed, "Seed for random initial states");
    cmd.add_option("--pos-tol", pos_tol, "Position tolerance for the consensus verdict");
    cmd.add_option("--vel-tol", vel_tol, "Velocity tolerance for the consensus verdict");
    cmd.add_option("--staircase-r", options.staircase_r, "Staircase width (repeatable)");
}

}  // namespace

std::string ConditionLine::render() const {
    if (!report) return label + " error: " + error;
    return label + " " + report->to_json();
}

std::string RunSummary::text() const {
    std::ostringstream out;
    out << "scenario: " << scenario << '\n';
    out << "verdict: " << to_string(verdict.kind) << '\n';
    if (verdict.kind == VerdictKind::Consensus) out << "average_consensus: " << (verdict.average ? "yes" : "no") << '\n';
    if (verdict.kind == VerdictKind::Clustered) out << "clusters: " << verdict.clusters << '\n';
    out << "final_max_pairwise_dist: " << format_real(final_max_pairwise) << '\n';
    out << "predicted_consensus: " << (predicted ? row_text(*predicted) : "n/a") << '\n';
    out << "observed_consensus: " << row_text(observed) << '\n';
    out << "abs_error: " << (abs_error ? format_real(*abs_error) : "n/a") << '\n';
    for (const auto& line : conditions) out << "condition: " << line.render() << '\n';
    return out.str();
}

ScenarioConfig resolve_scenario(const std::string& name_or_path) {
    const auto& names = builtin_names();
    if (std::find(names.begin(), names.end(), name_or_path) != names.end()) return build_builtin(name_or_path);
    if (std::find(names.begin(), names.end(), name_or_path + "-pass") != names.end())
        return build_builtin(name_or_path + "-pass");
    if (std::filesystem::exists(name_or_path)) return load_scenario(name_or_path);
    throw InvalidInput("'" + name_or_path + "' is neither a builtin scenario nor a readable file");
}

void apply_overrides(ScenarioConfig& config, const RunOptions& options) {
    if (options.dt) config.protocol.dt = *options.dt;
    if (options.horizon) config.horizon = *options.horizon;
    if (options.seed) {
        if (config.initial.kind != InitialSpec::Kind::RandomBox &&
            config.initial.kind != InitialSpec::Kind::SymmetricRandom)
            throw InvalidInput("--seed applies only to random initial states");
        config.initial.seed = *options.seed;
    }
    if (!options.staircase_r.empty()) config.staircase_r = options.staircase_r;
    config.protocol.validate();
    if (!(config.horizon >= 0) || !std::isfinite(config.horizon)) throw InvalidInput("horizon must be nonnegative");
}

std::string resolve_output_dir(const std::string& requested) {
    if (!requested.empty()) return requested;
    if (const char* env = std::getenv("CONSENSUS_LAB_OUTPUT"); env && *env) return env;
    return "consensus_lab_out";
}

std::vector<ConditionLine> evaluate_conditions(const ScenarioConfig& config, const std::vector<std::string>& criteria,
                                               const std::vector<double>& staircase_r) {
    const WeightedGraph graph = config.build_graph();
    const SystemState initial = config.build_initial();
    const std::vector<std::string>& names = criteria.empty() ? config.conditions : criteria;
    std::vector<ConditionLine> lines;
    for (const auto& name : names) {
        if (staircase_dependent(name) && !staircase_r.empty()) {
            for (double r : staircase_r) lines.push_back(evaluate_one(config, graph, initial, name, r, true));
        } else {
            lines.push_back(evaluate_one(config, graph, initial, name, 0.0, false));
        }
    }
    return lines;
}

TrajectoryRecord run_trajectory(const ScenarioConfig& config) {
    SimulationOptions options;
    options.horizon = config.horizon;
    options.sample_every = config.sample_every;
    options.monitors = config.monitors;
    options.staircase_r = config.monitor_staircase_r();
    try {
        return simulate(config.protocol, config.build_graph(), config.weight, config.build_initial(), options);
    } catch (const IntegrationBlowup& blowup) {
        return blowup.partial();
    }
}

RunSummary summarize(const ScenarioConfig& config, const TrajectoryRecord& trajectory,
                     const DetectionOptions& detection) {
    RunSummary summary;
    summary.scenario = config.name;
    summary.verdict = detect_consensus(trajectory, detection);
    const SystemState& last = trajectory.final_state();
    summary.final_max_pairwise = max_pairwise_distance(last.x);
    summary.observed = summary.verdict.kind == VerdictKind::Consensus ? summary.verdict.value : agent_mean(last.x);
    try {
        summary.predicted = predict_consensus_state(config.protocol, trajectory.states.front());
        summary.abs_error = (summary.observed - *summary.predicted).cwiseAbs().maxCoeff();
    } catch (const InvalidInput&) {
        // no closed form for this law and initial state
    }
    summary.conditions = evaluate_conditions(config, {}, config.staircase_r);
    return summary;
}

void write_trajectory_csv(std::ostream& out, const TrajectoryRecord& trajectory) {
    if (trajectory.empty()) return;
    const SystemState& first = trajectory.states.front();
    const Eigen::Index n = first.agents(), m = first.dim();
    out << 't';
    for (Eigen::Index i = 0; i < n; ++i)
        for (Eigen::Index j = 0; j < m; ++j) out << ",x" << i << '_' << j;
    if (first.v)
        for (Eigen::Index i = 0; i < n; ++i)
            for (Eigen::Index j = 0; j < m; ++j) out << ",v" << i << '_' << j;
    for (const auto& name : trajectory.monitor_names) out << ',' << name;
    out << '\n';
    for (std::size_t k = 0; k < trajectory.states.size(); ++k) {
        const SystemState& s = trajectory.states[k];
        out << csv_real(trajectory.times[k]);
        for (Eigen::Index i = 0; i < n; ++i)
            for (Eigen::Index j = 0; j < m; ++j) out << ',' << csv_real(s.x(i, j));
        if (s.v)
            for (Eigen::Index i = 0; i < n; ++i)
                for (Eigen::Index j = 0; j < m; ++j) out << ',' << csv_real((*s.v)(i, j));
        if (k < trajectory.monitors.size())
            for (double value : trajectory.monitors[k]) out << ',' << csv_real(value);
        out << '\n';
    }
}

RunSummary cmd_run(const std::string& scenario, const RunOptions& options) {
    ScenarioConfig config = resolve_scenario(scenario);
    apply_overrides(config, options);
    const auto start = std::chrono::steady_clock::now();
    const TrajectoryRecord trajectory = run_trajectory(config);
    RunSummary summary = summarize(config, trajectory, options.detection);
    summary.wall_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();

    const auto dir = prepare_dir(options.output_dir);
    std::ostringstream csv;
    write_trajectory_csv(csv, trajectory);
    write_file(dir / "trajectory.csv", csv.str());
    write_file(dir / "summary.txt", summary.text());
    return summary;
}

std::vector<ConditionLine> cmd_check(const std::string& scenario, const std::vector<std::string>& criteria,
                                     const RunOptions& options) {
    for (const auto& name : criteria)
        if (name != "GAIN") criterion_from_string(name);
    ScenarioConfig config = resolve_scenario(scenario);
    apply_overrides(config, options);
    return evaluate_conditions(config, criteria, config.staircase_r);
}

std::vector<SweepRow> cmd_sweep(const std::string& scenario, const std::string& parameter, std::vector<double> values,
                                const RunOptions& options) {
    ScenarioConfig config = resolve_scenario(scenario);
    apply_overrides(config, options);
    check_sweep_parameter(config, parameter);
    std::sort(values.begin(), values.end());

    std::vector<std::future<SweepRow>> pending;
    for (double value : values)
        pending.push_back(std::async(std::launch::async, sweep_point, config, parameter, value, options));
    std::vector<SweepRow> rows;
    for (auto& f : pending) rows.push_back(f.get());

    const auto dir = prepare_dir(options.output_dir);
    std::ostringstream csv;
    csv << parameter;
    if (!rows.empty())
        for (const auto& line : rows.front().conditions) csv << ',' << line.label;
    csv << ",verdict\n";
    for (const auto& row : rows) {
        csv << csv_real(row.value);
        for (const auto& line : row.conditions)
            csv << ',' << (line.report ? (line.report->holds ? "holds" : "fails") : "error");
        csv << ',' << to_string(row.verdict) << '\n';
    }
    write_file(dir / "sweep.csv", csv.str());
    return rows;
}

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
    CLI::App app{"Consensus protocol laboratory: simulate multi-agent protocols and check consensus criteria"};
    app.require_subcommand(1);

    RunOptions options;
    std::optional<double> pos_tol, vel_tol;
    std::string scenario;
    std::vector<std::string> criteria;
    std::string parameter;
    std::vector<double> values;

    auto* list = app.add_subcommand("list", "List builtin scenarios");
    auto* show = app.add_subcommand("show", "Print a scenario in file form");
    show->add_option("scenario", scenario, "Builtin name or scenario file")->required();
    auto* run = app.add_subcommand("run", "Simulate a scenario and write trajectory.csv and summary.txt");
    auto* check = app.add_subcommand("check", "Evaluate consensus criteria on a scenario's initial state");
    auto* sweep = app.add_subcommand("sweep", "Vary one parameter and record criteria and verdicts in sweep.csv");
    for (auto* cmd : {run, check, sweep}) {
        cmd->add_option("scenario", scenario, "Builtin name or scenario file")->required();
        add_common_flags(*cmd, options, pos_tol, vel_tol);
    }
    check->add_option("--criterion", criteria, "COR1, THM4, THM5, THM8, THM9, THM10, THM11 or GAIN (repeatable)");
    sweep->add_option("--param", parameter, "d, H, staircase_r or h")->required();
    sweep->add_option("--values", values, "Comma-separated parameter values")->delimiter(',');

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e, out, err);
    }
    if (pos_tol) options.detection.pos_tol = *pos_tol;
    if (vel_tol) options.detection.vel_tol = *vel_tol;

    try {
        if (*list) {
            for (const auto& name : builtin_names()) out << name << "  " << build_builtin(name).notes << '\n';
        } else if (*show) {
            out << serialize(resolve_scenario(scenario));
        } else if (*run) {
            RunSummary summary = cmd_run(scenario, options);
            out << summary.text();
            out << "output: " << resolve_output_dir(options.output_dir) << '\n';
            out << "wall_clock_seconds: " << summary.wall_seconds << '\n';
        } else if (*check) {
            for (const auto& line : cmd_check(scenario, criteria, options)) out << line.render() << '\n';
        } else if (*sweep) {
            for (const auto& row : cmd_sweep(scenario, parameter, values, options)) {
                out << parameter << '=' << format_real(row.value) << " verdict=" << to_string(row.verdict);
                for (const auto& line : row.conditions)
                    out << ' ' << line.label << '=' << (line.report ? (line.report->holds ? "holds" : "fails") : "error");
                out << '\n';
            }
        }
    } catch (const InvalidInput& e) {
        err << "error: " << e.what() << '\n';
        return 2;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << '\n';
        return 1;
    }
    return 0;
}

}  // namespace conlab

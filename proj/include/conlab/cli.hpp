#pragma once

#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "conlab/conditions.hpp"
#include "conlab/monitors.hpp"
#include "conlab/scenarios.hpp"

namespace conlab {

struct RunOptions {
    std::string output_dir;  // empty: CONSENSUS_LAB_OUTPUT, then "consensus_lab_out"
    std::optional<double> dt;
    std::optional<double> horizon;
    std::optional<std::uint64_t> seed;
    std::vector<double> staircase_r;  // replaces the scenario's list when nonempty
    DetectionOptions detection;
};

/// One evaluated condition: a report, or the reason it could not be evaluated.
struct ConditionLine {
    std::string label;  // e.g. "THM11(r=0.1)"
    std::optional<ConditionReport> report;
    std::string error;

    std::string render() const;
};

struct RunSummary {
    std::string scenario;
    ConsensusVerdict verdict;
    double final_max_pairwise = 0.0;
    std::optional<Eigen::RowVectorXd> predicted;
    Eigen::RowVectorXd observed;
    std::optional<double> abs_error;
    std::vector<ConditionLine> conditions;
    double wall_seconds = 0.0;

    /// Deterministic text; the wall-clock duration is deliberately left out.
    std::string text() const;
};

struct SweepRow {
    double value = 0.0;
    std::vector<ConditionLine> conditions;
    VerdictKind verdict = VerdictKind::Undecided;
};

/// Builtin name, builtin family ("opinion-ct" resolves to "opinion-ct-pass") or scenario file path.
ScenarioConfig resolve_scenario(const std::string& name_or_path);
void apply_overrides(ScenarioConfig& config, const RunOptions& options);
std::string resolve_output_dir(const std::string& requested);

/// Evaluates `criteria` (scenario conditions when empty); staircase-dependent
/// criteria are evaluated once per width in `staircase_r`.
std::vector<ConditionLine> evaluate_conditions(const ScenarioConfig& config, const std::vector<std::string>& criteria,
                                               const std::vector<double>& staircase_r);

/// Simulates without touching the file system; blowups become a diverged record.
TrajectoryRecord run_trajectory(const ScenarioConfig& config);
RunSummary summarize(const ScenarioConfig& config, const TrajectoryRecord& trajectory,
                     const DetectionOptions& detection);

void write_trajectory_csv(std::ostream& out, const TrajectoryRecord& trajectory);

RunSummary cmd_run(const std::string& scenario, const RunOptions& options);
std::vector<ConditionLine> cmd_check(const std::string& scenario, const std::vector<std::string>& criteria,
                                     const RunOptions& options);
/// parameter: one of d, H, staircase_r, h. Rows come back sorted by value.
std::vector<SweepRow> cmd_sweep(const std::string& scenario, const std::string& parameter,
                                std::vector<double> values, const RunOptions& options);

/// Whole command line; returns the process exit status.
int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace conlab

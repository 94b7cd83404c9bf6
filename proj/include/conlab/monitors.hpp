#pragma once

#include <optional>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "conlab/dynamics.hpp"

namespace conlab {

enum class MonitorId {
    VHalfP2,        // ||p||^2 / 2
    VCt2Static,     // ||kx + v||^2 + ||v||^2 + sum_i sum_j int_0^{||x_ij||^2} G_ij alpha
    VCt2Dynamic,    // ||q||^2 + 1/2 sum_i sum_j int_0^{||p_ij||^2} G_ij alpha
    V1Integral,     // 1/2 sum_i sum_j int_0^{||x_ij||^2} G_ij alpha
    VDt2,           // ||k2 x + k1 v||^2 + k1 ||v||^2 + 1/2 k3 (k1 + 1 - k2) sum_i sum_j G_ij w(||x_ij||^2)
    WStaircase,     // 1/2 sum_i sum_j G_ij w(||x_ij||^2)
    Lambda2Current,
    MaxPairwiseDist,
    MaxSpeed,
};

std::string to_string(MonitorId id);
MonitorId monitor_from_string(const std::string& name);

/// Components orthogonal to the consensus subspace: each agent's offset from the agent mean.
struct DisagreementState {
    Eigen::MatrixXd p;
    std::optional<Eigen::MatrixXd> q;
};

DisagreementState disagreement(const SystemState& state);

/// Agent mean as a row vector.
Eigen::RowVectorXd agent_mean(const Eigen::MatrixXd& block);

double max_pairwise_distance(const Eigen::MatrixXd& x);
double max_speed(const SystemState& state);

/// Sum over unordered linked pairs of w(||x_i - x_j||^2) (equals 1/2 of the ordered double sum).
double pair_staircase_sum(const WeightedGraph& graph, const WeightFunction& weight, const Eigen::MatrixXd& x,
                          double staircase_r);
/// Sum over unordered linked pairs of int_0^{||x_i - x_j||^2} alpha.
double pair_integral_sum(const WeightedGraph& graph, const WeightFunction& weight, const Eigen::MatrixXd& x);

struct MonitorValue {
    MonitorId id;
    double value;
};

MonitorValue evaluate_monitor(MonitorId id, const WeightedGraph& graph, const WeightFunction& weight,
                              const ProtocolSpec& spec, const SystemState& state, double staircase_r = 0.0);

/// Rejects monitors that need quantities the protocol does not carry.
void check_monitor_compatible(MonitorId id, const ProtocolSpec& spec, const SystemState& state);

enum class VerdictKind { Consensus, Clustered, Diverged, Undecided };

std::string to_string(VerdictKind kind);

struct ConsensusVerdict {
    VerdictKind kind = VerdictKind::Undecided;
    bool average = false;         // consensus value equals the initial agent mean (within pos_tol)
    Eigen::RowVectorXd value;     // consensus value (final agent mean) when kind == Consensus
    int clusters = 0;             // cluster count when kind == Clustered
};

struct DetectionOptions {
    double pos_tol = 1e-3;
    double vel_tol = 1e-3;        // bound on each agent's deviation from the mean velocity
    double tail_fraction = 0.05;  // trailing share of samples that must all pass
};

ConsensusVerdict detect_consensus(const TrajectoryRecord& trajectory, const DetectionOptions& options = {});

/// Single-linkage cluster labels with link threshold `tol`.
std::vector<int> cluster_labels(const Eigen::MatrixXd& x, double tol);

}  // namespace conlab

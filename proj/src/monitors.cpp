#include "conlab/monitors.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>

#include "conlab/errors.hpp"

namespace conlab {

namespace {

const std::map<MonitorId, std::string>& monitor_names() {
    static const std::map<MonitorId, std::string> names{
        {MonitorId::VHalfP2, "V_half_p2"},
        {MonitorId::VCt2Static, "V_ct2_static"},
        {MonitorId::VCt2Dynamic, "V_ct2_dynamic"},
        {MonitorId::V1Integral, "V1_integral"},
        {MonitorId::VDt2, "V_dt2"},
        {MonitorId::WStaircase, "W_staircase"},
        {MonitorId::Lambda2Current, "lambda2_current"},
        {MonitorId::MaxPairwiseDist, "max_pairwise_dist"},
        {MonitorId::MaxSpeed, "max_speed"},
    };
    return names;
}

// Spread within groups and smallest gap between groups for a labelling.
std::pair<double, double> spread_and_gap(const Eigen::MatrixXd& x, const std::vector<int>& label) {
    double spread = 0.0;
    double gap = std::numeric_limits<double>::infinity();
    for (Eigen::Index i = 0; i < x.rows(); ++i) {
        for (Eigen::Index j = i + 1; j < x.rows(); ++j) {
            double d = (x.row(i) - x.row(j)).norm();
            if (label[i] == label[j])
                spread = std::max(spread, d);
            else
                gap = std::min(gap, d);
        }
    }
    return {spread, gap};
}

}  // namespace

std::string to_string(MonitorId id) { return monitor_names().at(id); }

MonitorId monitor_from_string(const std::string& name) {
    for (const auto& [id, text] : monitor_names())
        if (text == name) return id;
    throw InvalidInput("unknown monitor '" + name + "'");
}

Eigen::RowVectorXd agent_mean(const Eigen::MatrixXd& block) { return block.colwise().mean(); }

DisagreementState disagreement(const SystemState& state) {
    DisagreementState d;
    d.p = state.x.rowwise() - agent_mean(state.x);
    if (state.v) d.q = state.v->rowwise() - agent_mean(*state.v);
    return d;
}

double max_pairwise_distance(const Eigen::MatrixXd& x) {
    double best = 0.0;
    for (Eigen::Index i = 0; i < x.rows(); ++i)
        for (Eigen::Index j = i + 1; j < x.rows(); ++j) best = std::max(best, (x.row(i) - x.row(j)).norm());
    return best;
}

double max_speed(const SystemState& state) {
    if (!state.v || state.v->rows() == 0) return 0.0;
    return state.v->rowwise().norm().maxCoeff();
}

double pair_staircase_sum(const WeightedGraph& graph, const WeightFunction& weight, const Eigen::MatrixXd& x,
                          double staircase_r) {
    double total = 0.0;
    for (int i = 0; i < graph.size(); ++i)
        for (int j = i + 1; j < graph.size(); ++j)
            if (graph.linked(i, j)) total += staircase_w(weight, staircase_r, squared_distance(x, i, j));
    return total;
}

double pair_integral_sum(const WeightedGraph& graph, const WeightFunction& weight, const Eigen::MatrixXd& x) {
    return pair_staircase_sum(graph, weight, x, 0.0);
}

void check_monitor_compatible(MonitorId id, const ProtocolSpec& spec, const SystemState& state) {
    auto reject = [&](const char* need) {
        throw InvalidInput("monitor " + to_string(id) + " needs " + need + " (law " + to_string(spec.law) + ")");
    };
    switch (id) {
        case MonitorId::VCt2Static:
            if (spec.law != Law::CT2Static && spec.law != Law::CT2StateDep) reject("a static second-order law");
            if (!state.v) reject("velocities");
            break;
        case MonitorId::VCt2Dynamic:
            if (!second_order(spec.law) || !state.v) reject("a second-order law with velocities");
            break;
        case MonitorId::VDt2:
            if (spec.law != Law::DT2Fixed && spec.law != Law::DT2StateDep) reject("a discrete second-order law");
            if (!state.v) reject("velocities");
            break;
        default:
            break;
    }
}

MonitorValue evaluate_monitor(MonitorId id, const WeightedGraph& graph, const WeightFunction& weight,
                              const ProtocolSpec& spec, const SystemState& state, double staircase_r) {
    check_monitor_compatible(id, spec, state);
    if (state.agents() != graph.size()) throw InvalidInput("state agent count does not match the graph");
    const WeightedGraph g = effective_graph(spec, graph);
    const Gains& k = spec.gains;
    double value = 0.0;
    switch (id) {
        case MonitorId::VHalfP2:
            value = 0.5 * disagreement(state).p.squaredNorm();
            break;
        case MonitorId::VCt2Static:
            // Ordered double sum: every unordered pair counted twice.
            value = (k.k * state.x + *state.v).squaredNorm() + state.v->squaredNorm() +
                    2.0 * pair_integral_sum(g, weight, state.x);
            break;
        case MonitorId::VCt2Dynamic:
            value = disagreement(state).q->squaredNorm() + pair_integral_sum(g, weight, state.x);
            break;
        case MonitorId::V1Integral:
            value = pair_integral_sum(g, weight, state.x);
            break;
        case MonitorId::VDt2:
            value = (k.k2 * state.x + k.k1 * *state.v).squaredNorm() + k.k1 * state.v->squaredNorm() +
                    k.k3 * (k.k1 + 1.0 - k.k2) * pair_staircase_sum(g, weight, state.x, staircase_r);
            break;
        case MonitorId::WStaircase:
            value = pair_staircase_sum(g, weight, state.x, staircase_r);
            break;
        case MonitorId::Lambda2Current:
            value = algebraic_connectivity(build_laplacian(g, state.x, weight));
            break;
        case MonitorId::MaxPairwiseDist:
            value = max_pairwise_distance(state.x);
            break;
        case MonitorId::MaxSpeed:
            value = max_speed(state);
            break;
    }
    return {id, value};
}

std::string to_string(VerdictKind kind) {
    switch (kind) {
        case VerdictKind::Consensus:
            return "consensus";
        case VerdictKind::Clustered:
            return "clustered";
        case VerdictKind::Diverged:
            return "diverged";
        case VerdictKind::Undecided:
            return "undecided";
    }
    return "undecided";
}

std::vector<int> cluster_labels(const Eigen::MatrixXd& x, double tol) {
    const int n = static_cast<int>(x.rows());
    std::vector<WeightedGraph::Edge> edges;
    for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j)
            if ((x.row(i) - x.row(j)).norm() < tol) edges.emplace_back(i, j);
    if (n == 0) return {};
    return components(WeightedGraph(n, edges));
}

ConsensusVerdict detect_consensus(const TrajectoryRecord& trajectory, const DetectionOptions& options) {
    if (trajectory.empty()) throw InvalidInput("cannot classify an empty trajectory");
    ConsensusVerdict verdict;
    if (trajectory.diverged) {
        verdict.kind = VerdictKind::Diverged;
        return verdict;
    }

    const std::size_t total = trajectory.states.size();
    const auto tail = std::max<std::size_t>(
        1, static_cast<std::size_t>(std::ceil(options.tail_fraction * static_cast<double>(total))));
    const std::size_t first = total - std::min(tail, total);

    // Velocities must agree, not vanish: a flock may keep moving at a common velocity.
    auto settled = [&](const SystemState& s) {
        if (!s.v) return true;
        return (s.v->rowwise() - agent_mean(*s.v)).rowwise().norm().maxCoeff() < options.vel_tol;
    };

    bool consensus = true;
    for (std::size_t i = first; i < total && consensus; ++i) {
        const SystemState& s = trajectory.states[i];
        consensus = max_pairwise_distance(s.x) < options.pos_tol && settled(s);
    }
    if (consensus) {
        verdict.kind = VerdictKind::Consensus;
        verdict.value = agent_mean(trajectory.final_state().x);
        verdict.average =
            (verdict.value - agent_mean(trajectory.states.front().x)).norm() < options.pos_tol;
        return verdict;
    }

    int clusters = -1;
    for (std::size_t i = first; i < total; ++i) {
        const SystemState& s = trajectory.states[i];
        auto label = cluster_labels(s.x, options.pos_tol);
        int k = label.empty() ? 0 : *std::max_element(label.begin(), label.end()) + 1;
        auto [spread, gap] = spread_and_gap(s.x, label);
        bool ok = k >= 2 && spread < options.pos_tol && gap > 10.0 * options.pos_tol && settled(s) &&
                  (clusters < 0 || clusters == k);
        if (!ok) return verdict;  // undecided
        clusters = k;
    }
    verdict.kind = VerdictKind::Clustered;
    verdict.clusters = clusters;
    return verdict;
}

}  // namespace conlab

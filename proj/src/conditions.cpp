#include "conlab/conditions.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <vector>

#include <nlohmann/json.hpp>

#include "conlab/errors.hpp"
#include "conlab/monitors.hpp"

namespace conlab {

namespace {

const std::map<Criterion, std::string>& criterion_names() {
    static const std::map<Criterion, std::string> names{
        {Criterion::Cor1, "COR1"}, {Criterion::Thm4, "THM4"},   {Criterion::Thm5, "THM5"},   {Criterion::Thm8, "THM8"},
        {Criterion::Thm9, "THM9"}, {Criterion::Thm10, "THM10"}, {Criterion::Thm11, "THM11"},
    };
    return names;
}

double support_of(const WeightFunction& weight, Criterion c) {
    auto R2 = weight.support_sq();
    if (!R2)
        throw InvalidInput(to_string(c) + " needs a compactly supported weight; '" + weight.name() +
                           "' is positive everywhere");
    return *R2;
}

void require_velocities(const SystemState& s, Criterion c) {
    if (!s.v) throw InvalidInput(to_string(c) + " needs initial velocities");
}

void require_staircase(double r, double R2, Criterion c) {
    if (!(r >= 0) || !std::isfinite(r)) throw InvalidInput("staircase width must be finite and nonnegative");
    if (r >= R2)
        throw InvalidInput(to_string(c) + " needs staircase width r < R^2 = " + std::to_string(R2) +
                           "; at r >= R^2 the threshold w(R^2) collapses");
}

nlohmann::json number(double value) {
    if (std::isfinite(value)) return value;
    return value > 0 ? "inf" : (value < 0 ? "-inf" : "nan");
}

}  // namespace

std::string to_string(Criterion c) { return criterion_names().at(c); }

Criterion criterion_from_string(const std::string& name) {
    for (const auto& [c, text] : criterion_names())
        if (text == name) return c;
    throw InvalidInput("unknown criterion '" + name + "'");
}

std::string ConditionReport::to_json() const {
    nlohmann::ordered_json j;
    j["criterion"] = criterion;
    j["lhs"] = number(lhs);
    j["rhs"] = number(rhs);
    j["holds"] = holds;
    j["staircase_r"] = staircase_r;
    if (!parts.empty()) {
        auto& arr = j["parts"] = nlohmann::ordered_json::array();
        for (const auto& p : parts) arr.push_back({{"name", p.name}, {"lhs", number(p.lhs)}, {"rhs", number(p.rhs)}, {"holds", p.holds}});
    }
    if (!notes.empty()) j["notes"] = notes;
    return j.dump();
}

ConditionReport check_gain_constraints(const ProtocolSpec& spec, const WeightFunction& weight,
                                       const WeightedGraph& graph) {
    if (continuous_time(spec.law))
        throw InvalidInput("no gain bound applies to continuous-time law " + to_string(spec.law));
    const double a0 = weight.at_zero();
    const bool statedep = state_dependent_links(spec.law);
    const double degree = statedep ? graph.size() - 1 : graph.max_degree();
    const Gains& g = spec.gains;

    ConditionReport report;
    report.criterion = "GAIN";
    report.notes = statedep ? "degree bound n-1 (state-dependent links)" : "degree bound d_max of the link graph";

    if (!second_order(spec.law)) {
        double bound = 1.0 / (degree * a0);
        report.parts.push_back({"h", g.h, bound, g.h < bound});
    } else {
        double k2_bound = std::min(2.0, g.k1 + 1.0);
        double k3_first = g.k2 * (2.0 - g.k2) / (2.0 * degree * a0 * g.k1 * (g.k1 - g.k2 + 1.0));
        double k3_second = g.k2 / (degree * a0 * (g.k1 + 1.0));
        double k3_bound = std::min(k3_first, k3_second);
        report.parts.push_back({"k2", g.k2, k2_bound, g.k2 < k2_bound});
        report.parts.push_back({"k3", g.k3, k3_bound, g.k3 < k3_bound});
    }
    // Headline comparison is the last gain checked (h or k3).
    report.lhs = report.parts.back().lhs;
    report.rhs = report.parts.back().rhs;
    report.holds = std::all_of(report.parts.begin(), report.parts.end(), [](const SubResult& p) { return p.holds; });
    return report;
}

bool symmetrically_distributed(const SystemState& state, double tol) {
    if (state.dim() != 1) return false;
    std::vector<double> x(state.x.data(), state.x.data() + state.x.rows());
    std::sort(x.begin(), x.end());
    if (x.empty()) return true;
    const double ends = x.front() + x.back();
    for (std::size_t i = 0, j = x.size() - 1; i <= j; ++i, --j) {
        if (std::abs(x[i] + x[j] - ends) >= tol) return false;
        if (j == 0) break;
    }
    return true;
}

ConditionReport check_initial_condition(Criterion criterion, const ProtocolSpec& spec, const WeightedGraph& graph,
                                        const WeightFunction& weight, const SystemState& initial,
                                        double staircase_r) {
    const int n = static_cast<int>(initial.agents());
    if (n != graph.size()) throw InvalidInput("state agent count does not match the graph");
    const WeightedGraph all_pairs = WeightedGraph::state_dependent(n);
    const Eigen::MatrixXd& x = initial.x;

    ConditionReport report;
    report.criterion = to_string(criterion);
    report.staircase_r = staircase_r;

    switch (criterion) {
        case Criterion::Cor1: {
            require_velocities(initial, criterion);
            const DisagreementState d = disagreement(initial);
            const int kappa = vertex_connectivity(graph);
            const double tail = integral_weight(weight, std::numeric_limits<double>::infinity());
            report.lhs = d.q->squaredNorm() + pair_integral_sum(graph, weight, d.p);
            report.rhs = kappa * tail;
            report.staircase_r = 0.0;
            if (std::isinf(tail)) {
                report.holds = true;
                report.notes = "vacuously holds: the integral of alpha over [0, inf) diverges";
            } else {
                report.holds = report.lhs < report.rhs;
                report.notes = "k* = " + std::to_string(kappa);
            }
            return report;
        }
        case Criterion::Thm4:
        case Criterion::Thm5: {
            const double R2 = support_of(weight, criterion);
            report.lhs = pair_integral_sum(all_pairs, weight, x);
            if (criterion == Criterion::Thm5) {
                require_velocities(initial, criterion);
                report.lhs += initial.v->squaredNorm();
            }
            report.rhs = (n - 1) * integral_weight(weight, R2);
            report.staircase_r = 0.0;
            break;
        }
        case Criterion::Thm8: {
            const double R2 = support_of(weight, criterion);
            require_staircase(staircase_r, R2, criterion);
            report.lhs = pair_staircase_sum(all_pairs, weight, x, staircase_r);
            report.rhs = (n - 1) * staircase_w(weight, staircase_r, R2);
            break;
        }
        case Criterion::Thm9: {
            const double R2 = support_of(weight, criterion);
            require_velocities(initial, criterion);
            require_staircase(staircase_r, R2, criterion);
            const Gains& g = spec.gains;
            const Eigen::MatrixXd& v = *initial.v;
            const double c = (g.k1 + 1.0 - g.k2) * g.k3;
            report.lhs = (g.k2 * x).squaredNorm() + 2.0 * g.k1 * g.k2 * (x.array() * v.array()).sum() +
                         (g.k1 * g.k1 + g.k1) * v.squaredNorm() + c * pair_staircase_sum(all_pairs, weight, x, staircase_r);
            report.rhs = c * (n - 1) * staircase_w(weight, staircase_r, R2);
            break;
        }
        case Criterion::Thm10:
        case Criterion::Thm11: {
            const double R2 = support_of(weight, criterion);
            if (initial.dim() != 1) throw InvalidInput(to_string(criterion) + " needs scalar opinions");
            if (!symmetrically_distributed(initial))
                throw InvalidInput(to_string(criterion) + " needs symmetrically distributed initial opinions");
            const bool ct = criterion == Criterion::Thm10;
            if (!ct) require_staircase(staircase_r, R2, criterion);
            if (ct) report.staircase_r = 0.0;
            if (n <= 3) {
                // Small groups: consensus iff the initial communication graph is connected.
                report.lhs = static_cast<double>(count_disconnected_pairs(support_graph(x, weight)));
                report.rhs = 1.0;
                report.notes = "n <= 3: holds iff the initial communication graph is connected";
            } else if (ct) {
                report.lhs = pair_integral_sum(all_pairs, weight, x);
                report.rhs = (2 * n - 3) * integral_weight(weight, R2);
            } else {
                report.lhs = pair_staircase_sum(all_pairs, weight, x, staircase_r);
                report.rhs = (2 * n - 3) * staircase_w(weight, staircase_r, R2);
            }
            break;
        }
    }
    report.holds = report.lhs < report.rhs;
    return report;
}

Eigen::RowVectorXd predict_consensus_state(const ProtocolSpec& spec, const SystemState& initial) {
    const double n = static_cast<double>(initial.agents());
    if (initial.agents() == 0) throw InvalidInput("no agents");
    const Eigen::RowVectorXd sum_x = initial.x.colwise().sum();
    const Gains& g = spec.gains;
    auto velocity_sum = [&]() -> Eigen::RowVectorXd {
        if (!initial.v) throw InvalidInput("law " + to_string(spec.law) + " needs initial velocities");
        return initial.v->colwise().sum();
    };

    switch (spec.law) {
        case Law::CT1Fixed:
        case Law::CT1StateDep:
        case Law::DT1Fixed:
        case Law::DT1StateDep:
            return sum_x / n;
        case Law::CT2Static:
            // Conserved: sum v + k sum x.
            return (velocity_sum() + g.k * sum_x) / (n * g.k);
        case Law::DT2Fixed: {
            // Conserved: U = sum v / k3 + k2 sum x / (k1 k3); x* = k1 k3 U / (n k2).
            const Eigen::RowVectorXd U = velocity_sum() / g.k3 + g.k2 / (g.k1 * g.k3) * sum_x;
            return g.k1 * g.k3 / (n * g.k2) * U;
        }
        case Law::CT2Dynamic:
        case Law::CT2StateDep:
        case Law::DT2StateDep: {
            const Eigen::RowVectorXd sv = velocity_sum();
            const double scale = 1.0 + initial.v->cwiseAbs().maxCoeff();
            if (sv.cwiseAbs().maxCoeff() > 1e-12 * scale * n)
                throw InvalidInput("no closed-form consensus value for law " + to_string(spec.law) +
                                   " unless the initial velocities sum to zero");
            return sum_x / n;
        }
    }
    throw InvalidInput("unhandled law");
}

}  // namespace conlab

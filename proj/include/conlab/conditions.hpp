#pragma once

#include <string>
#include <vector>

#include <Eigen/Dense>

#include "conlab/dynamics.hpp"
#include "conlab/graph.hpp"
#include "conlab/state.hpp"
#include "conlab/weight.hpp"

namespace conlab {

// Initial-state consensus criteria. Each compares a left-hand side built from the
// initial state against a right-hand side threshold; all comparisons are strict.
enum class Criterion {
    Cor1,   // ||q0||^2 + 1/2 sum sum int_0^{||p_ij||^2} G_ij alpha  <  k* int_0^inf alpha
    Thm4,   // 1/2 sum sum int_0^{||x_ij||^2} alpha                  <  (n-1) int_0^{R^2} alpha
    Thm5,   // ||v0||^2 + 1/2 sum sum int_0^{||x_ij||^2} alpha       <  (n-1) int_0^{R^2} alpha
    Thm8,   // W(0)                                                  <  (n-1) w(R^2)
    Thm9,   // ||k2 x||^2 + 2 k1 k2 x.v + (k1^2+k1)||v||^2 + c W(0)   <  c (n-1) w(R^2),  c = (k1+1-k2) k3
    Thm10,  // symmetric scalar opinions, CT: as Thm4 with 2n-3; n <= 3: initial graph connected
    Thm11,  // symmetric scalar opinions, DT: as Thm8 with 2n-3; n <= 3: initial graph connected
};

std::string to_string(Criterion c);
Criterion criterion_from_string(const std::string& name);

struct SubResult {
    std::string name;
    double lhs = 0.0;
    double rhs = 0.0;
    bool holds = false;
};

struct ConditionReport {
    std::string criterion;
    double lhs = 0.0;
    double rhs = 0.0;
    bool holds = false;
    double staircase_r = 0.0;
    std::string notes;
    std::vector<SubResult> parts;  // per-constraint results for gain checks

    /// One-line key/value rendering: {"criterion": ..., "lhs": ..., ...}.
    std::string to_json() const;
};

/// Gain bounds for the discrete-time laws. State-dependent laws replace the maximum
/// degree by n - 1.
ConditionReport check_gain_constraints(const ProtocolSpec& spec, const WeightFunction& weight,
                                       const WeightedGraph& graph);

ConditionReport check_initial_condition(Criterion criterion, const ProtocolSpec& spec, const WeightedGraph& graph,
                                        const WeightFunction& weight, const SystemState& initial,
                                        double staircase_r = 0.0);

/// Sorted scalar opinions whose mirror pairs (i, n+1-i) share a midpoint within `tol`.
bool symmetrically_distributed(const SystemState& state, double tol = 1e-9);

/// Agreement point implied by the conserved quantities of the law.
Eigen::RowVectorXd predict_consensus_state(const ProtocolSpec& spec, const SystemState& initial);

}  // namespace conlab

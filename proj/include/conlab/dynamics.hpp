#pragma once

#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "conlab/graph.hpp"
#include "conlab/state.hpp"
#include "conlab/weight.hpp"

namespace conlab {

enum class Law {
    CT1Fixed,     // x' = u,            u = sum_j G_ij a_ij (x_j - x_i)
    CT2Static,    // x' = v, v' = u,    u = -k v + sum_j G_ij a_ij (x_j - x_i)
    CT2Dynamic,   // x' = v, v' = u,    u = sum_j G_ij a_ij (v_j - v_i) + sum_j G_ij a_ij (x_j - x_i)
    CT1StateDep,  // as CT1Fixed over every pair
    CT2StateDep,  // as CT2Static over every pair
    DT1Fixed,     // x+ = x + u,                 u = h sum_j G_ij a_ij (x_j - x_i)
    DT2Fixed,     // x+ = x + k1 v, v+ = v + u,  u = -k2 v + k3 sum_j G_ij a_ij (x_j - x_i)
    DT1StateDep,  // as DT1Fixed over every pair
    DT2StateDep,  // as DT2Fixed over every pair
};

std::string to_string(Law law);
Law law_from_string(const std::string& name);

bool continuous_time(Law law);
bool second_order(Law law);
/// State-dependent laws treat every pair as a potential link.
bool state_dependent_links(Law law);

struct Gains {
    double k = 1.0;
    double k1 = 1.0;
    double k2 = 1.0;
    double k3 = 1.0;
    double h = 1.0;

    bool operator==(const Gains&) const = default;
};

struct ProtocolSpec {
    Law law = Law::CT1Fixed;
    Gains gains;
    double dt = 0.01;  // continuous-time laws only

    void validate() const;
    bool operator==(const ProtocolSpec&) const = default;
};

struct TrajectoryRecord {
    std::vector<double> times;
    std::vector<SystemState> states;
    std::vector<std::string> monitor_names;
    std::vector<std::vector<double>> monitors;  // one row per sample, one column per monitor
    bool diverged = false;

    bool empty() const { return states.empty(); }
    const SystemState& final_state() const { return states.back(); }
};

/// Raised when a trajectory leaves the finite range; carries the samples recorded so far.
class IntegrationBlowup : public std::runtime_error {
public:
    IntegrationBlowup(double time, TrajectoryRecord partial);
    double time() const { return time_; }
    const TrajectoryRecord& partial() const { return partial_; }

private:
    double time_;
    TrajectoryRecord partial_;
};

/// Any coordinate beyond this magnitude aborts a simulation.
inline constexpr double kBlowupThreshold = 1e12;

/// The graph actually used by a law: complete for state-dependent laws, `graph` otherwise.
WeightedGraph effective_graph(const ProtocolSpec& spec, const WeightedGraph& graph);

Eigen::MatrixXd control_input(const ProtocolSpec& spec, const WeightedGraph& graph, const WeightFunction& weight,
                              const SystemState& state);

/// One classical RK4 step of size spec.dt; weights are re-evaluated at every stage.
/// `t` is the time at the start of the step, reported if the step blows up.
SystemState step_continuous(const ProtocolSpec& spec, const WeightedGraph& graph, const WeightFunction& weight,
                            const SystemState& state, double t = 0.0);

/// One application of the exact discrete-time map.
SystemState step_discrete(const ProtocolSpec& spec, const WeightedGraph& graph, const WeightFunction& weight,
                          const SystemState& state);

enum class MonitorId;

struct SimulationOptions {
    /// Duration for continuous-time laws, number of steps for discrete-time laws.
    double horizon = 10.0;
    /// Steps between recorded samples; the final state is always recorded.
    std::size_t sample_every = 1;
    std::vector<MonitorId> monitors;
    double staircase_r = 0.0;
};

std::size_t step_count(const ProtocolSpec& spec, double horizon);

TrajectoryRecord simulate(const ProtocolSpec& spec, const WeightedGraph& graph, const WeightFunction& weight,
                          const SystemState& initial, const SimulationOptions& options);

/// Rejects law/weight/state combinations the laws are not defined for.
void check_compatible(const ProtocolSpec& spec, const WeightedGraph& graph, const WeightFunction& weight,
                      const SystemState& state);

}  // namespace conlab

#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "conlab/dynamics.hpp"
#include "conlab/graph.hpp"
#include "conlab/monitors.hpp"
#include "conlab/state.hpp"
#include "conlab/weight.hpp"

namespace conlab {

struct GraphSpec {
    enum class Kind { Complete, EdgeList, StateDependent };
    Kind kind = Kind::Complete;
    std::vector<WeightedGraph::Edge> edges;  // EdgeList only

    bool operator==(const GraphSpec&) const = default;
};

struct InitialSpec {
    enum class Kind { Explicit, EvenlySpaced, RandomBox, SymmetricRandom };
    Kind kind = Kind::Explicit;
    int n = 1;
    int m = 1;
    // EvenlySpaced
    double spacing = 1.0;
    double origin = 0.0;
    // RandomBox
    double lo = 0.0;
    double hi = 1.0;
    bool with_velocities = false;
    double vel_lo = 0.0;
    double vel_hi = 0.0;
    // SymmetricRandom
    double center = 0.0;
    double half_width = 1.0;
    // RandomBox and SymmetricRandom
    std::uint64_t seed = 0;
    // Explicit
    Eigen::MatrixXd positions;
    Eigen::MatrixXd velocities;  // empty when absent

    bool operator==(const InitialSpec& other) const;
};

struct ScenarioConfig {
    std::string name;
    std::string notes;
    GraphSpec graph;
    WeightFunction weight;
    ProtocolSpec protocol;
    InitialSpec initial;
    double horizon = 10.0;  // time units for continuous-time laws, steps for discrete-time laws
    std::size_t sample_every = 1;
    std::vector<MonitorId> monitors;
    std::vector<double> staircase_r{0.0};
    std::vector<std::string> conditions;  // criterion names, plus "GAIN" for the gain bounds

    bool operator==(const ScenarioConfig&) const = default;

    WeightedGraph build_graph() const;
    SystemState build_initial() const;
    /// First configured staircase width (used by monitors), 0 when none.
    double monitor_staircase_r() const;
};

/// Names of the built-in experiments, in listing order.
const std::vector<std::string>& builtin_names();
ScenarioConfig build_builtin(const std::string& name);

SystemState evenly_spaced_opinions(int n, double spacing, double origin = 0.0);

/// Uniform draws per coordinate from mt19937_64 mapped through the top 53 bits
/// (generator "mt19937_64/v1"); positions first, agent by agent, then velocities.
SystemState random_initial(int n, int m, double lo, double hi, std::uint64_t seed, bool with_velocities = false,
                           double vel_lo = 0.0, double vel_hi = 0.0);

/// Scalar opinions mirrored about `center`: floor(n/2) offsets drawn from [0, half_width],
/// plus the center itself for odd n. Returned in ascending order.
SystemState symmetric_random(int n, std::uint64_t seed, double center = 0.0, double half_width = 1.0);

inline constexpr const char* kRandomGeneratorName = "mt19937_64/v1";

// Scenario files: INI-style "key = value" lines with [graph], [weight], [protocol],
// [initial] and [run] sections.
std::string serialize(const ScenarioConfig& config);
ScenarioConfig parse_scenario(const std::string& text);
ScenarioConfig load_scenario(const std::string& path);

std::uint32_t checksum(const std::string& text);

/// Shortest decimal text that parses back to exactly `value`.
std::string format_real(double value);

}  // namespace conlab

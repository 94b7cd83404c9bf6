#include "conlab/dynamics.hpp"

#include <cmath>
#include <map>

#include "conlab/errors.hpp"
#include "conlab/monitors.hpp"

namespace conlab {

namespace {

const std::map<Law, std::string>& law_names() {
    static const std::map<Law, std::string> names{
        {Law::CT1Fixed, "CT1-fixed"},       {Law::CT2Static, "CT2-static"},     {Law::CT2Dynamic, "CT2-dynamic"},
        {Law::CT1StateDep, "CT1-statedep"}, {Law::CT2StateDep, "CT2-statedep"}, {Law::DT1Fixed, "DT1-fixed"},
        {Law::DT2Fixed, "DT2-fixed"},       {Law::DT1StateDep, "DT1-statedep"}, {Law::DT2StateDep, "DT2-statedep"},
    };
    return names;
}

// Row i of the result is sum_j a_ij (y_j - y_i), i.e. -L y, computed from differences so that
// coincident rows give an exact zero.
Eigen::MatrixXd coupling(const Eigen::MatrixXd& a, const Eigen::MatrixXd& y) {
    const Eigen::Index n = y.rows();
    Eigen::MatrixXd out = Eigen::MatrixXd::Zero(n, y.cols());
    for (Eigen::Index i = 0; i < n; ++i)
        for (Eigen::Index j = 0; j < n; ++j)
            if (a(i, j) != 0.0) out.row(i) += a(i, j) * (y.row(j) - y.row(i));
    return out;
}

bool within_range(const SystemState& s) {
    auto ok = [](const Eigen::MatrixXd& m) { return m.allFinite() && m.cwiseAbs().maxCoeff() <= kBlowupThreshold; };
    if (s.x.size() > 0 && !ok(s.x)) return false;
    return !s.v || s.v->size() == 0 || ok(*s.v);
}

struct Derivative {
    Eigen::MatrixXd dx;
    std::optional<Eigen::MatrixXd> dv;
};

Derivative rhs(const ProtocolSpec& spec, const WeightedGraph& graph, const WeightFunction& weight,
               const SystemState& s) {
    Eigen::MatrixXd u = control_input(spec, graph, weight, s);
    if (second_order(spec.law)) return {*s.v, std::move(u)};
    return {std::move(u), std::nullopt};
}

SystemState advance(const SystemState& s, const Derivative& d, double step) {
    SystemState out(s.x + step * d.dx);
    if (d.dv) out.v = *s.v + step * *d.dv;
    return out;
}

}  // namespace

std::string to_string(Law law) { return law_names().at(law); }

Law law_from_string(const std::string& name) {
    for (const auto& [law, text] : law_names())
        if (text == name) return law;
    throw InvalidInput("unknown protocol law '" + name + "'");
}

bool continuous_time(Law law) {
    switch (law) {
        case Law::CT1Fixed:
        case Law::CT2Static:
        case Law::CT2Dynamic:
        case Law::CT1StateDep:
        case Law::CT2StateDep:
            return true;
        default:
            return false;
    }
}

bool second_order(Law law) {
    switch (law) {
        case Law::CT2Static:
        case Law::CT2Dynamic:
        case Law::CT2StateDep:
        case Law::DT2Fixed:
        case Law::DT2StateDep:
            return true;
        default:
            return false;
    }
}

bool state_dependent_links(Law law) {
    return law == Law::CT1StateDep || law == Law::CT2StateDep || law == Law::DT1StateDep || law == Law::DT2StateDep;
}

void ProtocolSpec::validate() const {
    auto positive = [](double g, const char* what) {
        if (!(g > 0) || !std::isfinite(g)) throw InvalidInput(std::string(what) + " must be positive");
    };
    switch (law) {
        case Law::CT2Static:
        case Law::CT2StateDep:
            positive(gains.k, "gain k");
            break;
        case Law::DT1Fixed:
        case Law::DT1StateDep:
            positive(gains.h, "gain h");
            break;
        case Law::DT2Fixed:
        case Law::DT2StateDep:
            positive(gains.k1, "gain k1");
            positive(gains.k2, "gain k2");
            positive(gains.k3, "gain k3");
            break;
        default:
            break;
    }
    if (continuous_time(law)) positive(dt, "time step dt");
}

IntegrationBlowup::IntegrationBlowup(double time, TrajectoryRecord partial)
    : std::runtime_error("trajectory left the finite range at t = " + std::to_string(time)),
      time_(time),
      partial_(std::move(partial)) {
    partial_.diverged = true;
}

WeightedGraph effective_graph(const ProtocolSpec& spec, const WeightedGraph& graph) {
    if (state_dependent_links(spec.law) && graph.mode() != TopologyMode::StateDependentLinks)
        return WeightedGraph::state_dependent(graph.size());
    return graph;
}

void check_compatible(const ProtocolSpec& spec, const WeightedGraph& graph, const WeightFunction& weight,
                      const SystemState& state) {
    spec.validate();
    if (state.agents() != graph.size()) throw InvalidInput("state agent count does not match the graph");
    if (state.dim() < 1) throw InvalidInput("state dimension must be at least 1");
    if (second_order(spec.law) && !state.v)
        throw InvalidInput("law " + to_string(spec.law) + " needs velocities");
    if (!second_order(spec.law) && state.v)
        throw InvalidInput("law " + to_string(spec.law) + " is first order but velocities were given");
    if (continuous_time(spec.law) && !weight.continuous())
        throw InvalidInput("discontinuous weight '" + weight.name() + "' is only supported by discrete-time laws");
    if (!state.finite()) throw InvalidInput("state contains non-finite entries");
}

Eigen::MatrixXd control_input(const ProtocolSpec& spec, const WeightedGraph& graph, const WeightFunction& weight,
                              const SystemState& state) {
    if (second_order(spec.law) && !state.v)
        throw InvalidInput("law " + to_string(spec.law) + " needs velocities");
    const WeightedGraph g = effective_graph(spec, graph);
    const Eigen::MatrixXd a = build_laplacian(g, state.x, weight).weights;
    const Gains& k = spec.gains;
    switch (spec.law) {
        case Law::CT1Fixed:
        case Law::CT1StateDep:
            return coupling(a, state.x);
        case Law::CT2Static:
        case Law::CT2StateDep:
            return -k.k * *state.v + coupling(a, state.x);
        case Law::CT2Dynamic:
            return coupling(a, *state.v) + coupling(a, state.x);
        case Law::DT1Fixed:
        case Law::DT1StateDep:
            return k.h * coupling(a, state.x);
        case Law::DT2Fixed:
        case Law::DT2StateDep:
            return -k.k2 * *state.v + k.k3 * coupling(a, state.x);
    }
    throw InvalidInput("unhandled law");
}

SystemState step_continuous(const ProtocolSpec& spec, const WeightedGraph& graph, const WeightFunction& weight,
                            const SystemState& state, double t) {
    if (!continuous_time(spec.law)) throw InvalidInput("step_continuous needs a continuous-time law");
    const double dt = spec.dt;
    auto checked = [t](SystemState s) {
        if (!within_range(s)) throw IntegrationBlowup(t, {});
        return s;
    };
    Derivative k1 = rhs(spec, graph, weight, state);
    Derivative k2 = rhs(spec, graph, weight, checked(advance(state, k1, dt / 2)));
    Derivative k3 = rhs(spec, graph, weight, checked(advance(state, k2, dt / 2)));
    Derivative k4 = rhs(spec, graph, weight, checked(advance(state, k3, dt)));

    SystemState out(state.x + dt / 6 * (k1.dx + 2 * k2.dx + 2 * k3.dx + k4.dx));
    if (state.v) out.v = *state.v + dt / 6 * (*k1.dv + 2 * *k2.dv + 2 * *k3.dv + *k4.dv);
    return checked(std::move(out));
}

SystemState step_discrete(const ProtocolSpec& spec, const WeightedGraph& graph, const WeightFunction& weight,
                          const SystemState& state) {
    if (continuous_time(spec.law)) throw InvalidInput("step_discrete needs a discrete-time law");
    Eigen::MatrixXd u = control_input(spec, graph, weight, state);
    if (!second_order(spec.law)) return SystemState(state.x + u);
    return SystemState(state.x + spec.gains.k1 * *state.v, *state.v + u);
}

std::size_t step_count(const ProtocolSpec& spec, double horizon) {
    if (!(horizon >= 0) || !std::isfinite(horizon)) throw InvalidInput("horizon must be finite and nonnegative");
    double steps = continuous_time(spec.law) ? horizon / spec.dt : horizon;
    return static_cast<std::size_t>(std::llround(steps));
}

TrajectoryRecord simulate(const ProtocolSpec& spec, const WeightedGraph& graph, const WeightFunction& weight,
                          const SystemState& initial, const SimulationOptions& options) {
    check_compatible(spec, graph, weight, initial);
    for (MonitorId id : options.monitors) check_monitor_compatible(id, spec, initial);
    if (options.sample_every == 0) throw InvalidInput("sample interval must be at least one step");

    const bool ct = continuous_time(spec.law);
    const std::size_t steps = step_count(spec, options.horizon);

    TrajectoryRecord record;
    for (MonitorId id : options.monitors) record.monitor_names.push_back(to_string(id));
    auto sample = [&](std::size_t s, const SystemState& state) {
        record.times.push_back(ct ? static_cast<double>(s) * spec.dt : static_cast<double>(s));
        record.states.push_back(state);
        std::vector<double> row;
        row.reserve(options.monitors.size());
        for (MonitorId id : options.monitors)
            row.push_back(evaluate_monitor(id, graph, weight, spec, state, options.staircase_r).value);
        record.monitors.push_back(std::move(row));
    };

    SystemState state = initial;
    sample(0, state);
    for (std::size_t s = 1; s <= steps; ++s) {
        const double t_prev = ct ? static_cast<double>(s - 1) * spec.dt : static_cast<double>(s - 1);
        try {
            state = ct ? step_continuous(spec, graph, weight, state, t_prev) : step_discrete(spec, graph, weight, state);
            if (!within_range(state)) throw IntegrationBlowup(t_prev, {});
        } catch (const IntegrationBlowup& e) {
            throw IntegrationBlowup(e.time(), std::move(record));
        }
        if (s % options.sample_every == 0 || s == steps) sample(s, state);
    }
    return record;
}

}  // namespace conlab

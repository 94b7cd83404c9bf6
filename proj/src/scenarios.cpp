#include "conlab/scenarios.hpp"

#include <algorithm>
#include <array>
#include <charconv>
#include <cmath>
#include <fstream>
#include <functional>
#include <limits>
#include <map>
#include <random>
#include <sstream>

#include <boost/crc.hpp>
#include <boost/property_tree/ini_parser.hpp>
#include <boost/property_tree/ptree.hpp>

#include "conlab/conditions.hpp"
#include "conlab/errors.hpp"

namespace conlab {

namespace pt = boost::property_tree;

namespace {

double uniform01(std::mt19937_64& gen) { return static_cast<double>(gen() >> 11) * 0x1.0p-53; }

// ---- builtins ---------------------------------------------------------------

ScenarioConfig random_box(std::string name, int n, int m, double lo, double hi, double vlo, double vhi,
                          std::uint64_t seed) {
    ScenarioConfig c;
    c.name = std::move(name);
    c.initial.kind = InitialSpec::Kind::RandomBox;
    c.initial.n = n;
    c.initial.m = m;
    c.initial.lo = lo;
    c.initial.hi = hi;
    c.initial.with_velocities = true;
    c.initial.vel_lo = vlo;
    c.initial.vel_hi = vhi;
    c.initial.seed = seed;
    return c;
}

ScenarioConfig opinions(std::string name, int n, double spacing) {
    ScenarioConfig c;
    c.name = std::move(name);
    c.graph.kind = GraphSpec::Kind::StateDependent;
    c.initial.kind = InitialSpec::Kind::EvenlySpaced;
    c.initial.n = n;
    c.initial.m = 1;
    c.initial.spacing = spacing;
    c.initial.origin = 0.0;
    return c;
}

ScenarioConfig cs_ct2_static() {
    auto c = random_box("cs-ct2-static", 6, 2, 0.0, 1.0, -0.5, 0.5, 11);
    c.notes = "Cucker-Smale flocking, static second-order protocol on the complete graph";
    c.weight = WeightFunction(CuckerSmale{1.0, 3.0});
    c.protocol.law = Law::CT2Static;
    c.protocol.gains.k = 1.0;
    c.horizon = 100.0;
    c.sample_every = 10;
    c.monitors = {MonitorId::VCt2Static, MonitorId::MaxPairwiseDist, MonitorId::MaxSpeed};
    return c;
}

ScenarioConfig cs_dt2() {
    auto c = random_box("cs-dt2", 6, 2, 0.0, 1.0, -0.5, 0.5, 12);
    c.notes = "Cucker-Smale flocking, discrete second-order protocol on the complete graph";
    c.weight = WeightFunction(CuckerSmale{1.0, 1.0});
    c.protocol.law = Law::DT2Fixed;
    c.protocol.gains.k1 = 1.0;
    c.protocol.gains.k2 = 1.5;
    c.protocol.gains.k3 = 0.14;
    c.horizon = 2000.0;
    c.monitors = {MonitorId::VDt2, MonitorId::MaxPairwiseDist, MonitorId::MaxSpeed};
    c.conditions = {"GAIN"};
    return c;
}

ScenarioConfig cs_ct2_dynamic(bool pass) {
    auto c = random_box(pass ? "cs-ct2-dynamic-pass" : "cs-ct2-dynamic-fail", 6, 2, 0.0, 0.5, -3.0, 3.0, 3);
    c.notes = pass ? "Cucker-Smale flocking, dynamic second-order protocol; strong coupling H = 150"
                   : "Cucker-Smale flocking, dynamic second-order protocol; weak coupling H = 1";
    c.weight = WeightFunction(CuckerSmale{pass ? 150.0 : 1.0, 3.0});
    c.protocol.law = Law::CT2Dynamic;
    // At H = 150 the Laplacian reaches 6 * 150 near agreement; RK4 needs dt * 900 < 2.78.
    c.protocol.dt = 0.002;
    c.horizon = 100.0;
    c.sample_every = 10;
    c.monitors = {MonitorId::VCt2Dynamic, MonitorId::MaxPairwiseDist, MonitorId::MaxSpeed};
    c.conditions = {"COR1"};
    if (pass) {
        auto report = check_initial_condition(Criterion::Cor1, c.protocol, c.build_graph(), c.weight,
                                              c.build_initial());
        if (!report.holds)
            throw InvalidInput("cs-ct2-dynamic-pass: pinned seed violates COR1 (lhs " + format_real(report.lhs) +
                               ", rhs " + format_real(report.rhs) + "); choose another seed");
    }
    return c;
}

ScenarioConfig opinion_ct(bool pass) {
    auto c = opinions(pass ? "opinion-ct-pass" : "opinion-ct-fail", 20, pass ? 0.05 : 0.2);
    c.notes = "continuous-time bounded confidence with a smoothed cutoff";
    c.weight = WeightFunction(SmoothedConfidence{1.0, 1.0, 0.1});
    c.protocol.law = Law::CT1StateDep;
    c.horizon = 50.0;
    c.sample_every = 10;
    c.monitors = {MonitorId::WStaircase, MonitorId::MaxPairwiseDist};
    c.conditions = {"THM10", "THM4"};
    return c;
}

ScenarioConfig opinion_dt(bool pass) {
    auto c = opinions(pass ? "opinion-dt-pass" : "opinion-dt-fail", 15, pass ? 0.08 : 0.35);
    c.notes = "discrete-time bounded confidence with a hard cutoff";
    c.weight = WeightFunction(StepConfidence{1.0});
    c.protocol.law = Law::DT1StateDep;
    c.protocol.gains.h = 1.0 / 15.0;
    c.horizon = 2000.0;
    c.sample_every = 10;
    c.monitors = {MonitorId::WStaircase, MonitorId::MaxPairwiseDist};
    c.staircase_r = {0.1};
    c.conditions = {"THM11", "THM8", "GAIN"};
    return c;
}

ScenarioConfig opinion_dt_linear() {
    auto c = opinions("opinion-dt-linear", 20, 0.07);
    c.notes =
        "linearly decaying weight alpha(s) = 25 - 10 s; its own root puts the support at s = 2.5, "
        "which differs from the confidence radius quoted alongside it; the formula's root is used";
    c.weight = WeightFunction(LinearDecay{25.0, 10.0, std::nullopt});
    c.protocol.law = Law::DT1StateDep;
    c.protocol.gains.h = 1.0 / (25.0 * 20.0);
    c.horizon = 2000.0;
    c.sample_every = 10;
    c.monitors = {MonitorId::WStaircase, MonitorId::MaxPairwiseDist};
    c.staircase_r = {0.0, 1.8};
    c.conditions = {"THM11", "GAIN"};
    return c;
}

ScenarioConfig rendezvous_ct() {
    auto c = random_box("rendezvous-ct", 6, 2, 0.0, 0.6, -0.1, 0.1, 21);
    c.notes = "rendezvous with proximity-limited sensing, continuous time";
    c.graph.kind = GraphSpec::Kind::StateDependent;
    c.weight = WeightFunction(SmoothedConfidence{1.0, 1.0, 0.1});
    c.protocol.law = Law::CT2StateDep;
    c.protocol.gains.k = 1.0;
    c.horizon = 100.0;
    c.sample_every = 10;
    c.monitors = {MonitorId::VCt2Static, MonitorId::MaxPairwiseDist, MonitorId::MaxSpeed};
    c.conditions = {"THM5"};
    return c;
}

ScenarioConfig rendezvous_dt() {
    auto c = random_box("rendezvous-dt", 6, 2, -0.1, 0.1, 0.0, 0.0, 22);
    c.notes = "rendezvous with proximity-limited sensing, discrete time";
    c.graph.kind = GraphSpec::Kind::StateDependent;
    c.weight = WeightFunction(StepConfidence{1.0});
    c.protocol.law = Law::DT2StateDep;
    c.protocol.gains.k1 = 1.0;
    c.protocol.gains.k2 = 1.5;
    c.protocol.gains.k3 = 0.14;
    c.horizon = 2000.0;
    c.sample_every = 10;
    c.monitors = {MonitorId::VDt2, MonitorId::MaxPairwiseDist, MonitorId::MaxSpeed};
    c.staircase_r = {0.1};
    c.conditions = {"THM9", "GAIN"};
    return c;
}

const std::vector<std::pair<std::string, std::function<ScenarioConfig()>>>& builtin_table() {
    static const std::vector<std::pair<std::string, std::function<ScenarioConfig()>>> table{
        {"cs-ct2-static", cs_ct2_static},
        {"cs-dt2", cs_dt2},
        {"cs-ct2-dynamic-fail", [] { return cs_ct2_dynamic(false); }},
        {"cs-ct2-dynamic-pass", [] { return cs_ct2_dynamic(true); }},
        {"opinion-ct-fail", [] { return opinion_ct(false); }},
        {"opinion-ct-pass", [] { return opinion_ct(true); }},
        {"opinion-dt-fail", [] { return opinion_dt(false); }},
        {"opinion-dt-pass", [] { return opinion_dt(true); }},
        {"opinion-dt-linear", opinion_dt_linear},
        {"rendezvous-ct", rendezvous_ct},
        {"rendezvous-dt", rendezvous_dt},
    };
    return table;
}

// ---- text format ------------------------------------------------------------

const std::array<std::pair<GraphSpec::Kind, const char*>, 3> kGraphKinds{{
    {GraphSpec::Kind::Complete, "complete"},
    {GraphSpec::Kind::EdgeList, "edge-list"},
    {GraphSpec::Kind::StateDependent, "state-dependent"},
}};

const std::array<std::pair<InitialSpec::Kind, const char*>, 4> kInitialKinds{{
    {InitialSpec::Kind::Explicit, "explicit"},
    {InitialSpec::Kind::EvenlySpaced, "evenly-spaced"},
    {InitialSpec::Kind::RandomBox, "random-box"},
    {InitialSpec::Kind::SymmetricRandom, "symmetric-random"},
}};

template <class Table, class Kind>
const char* kind_name(const Table& table, Kind kind) {
    for (const auto& [k, name] : table)
        if (k == kind) return name;
    throw InvalidInput("unhandled kind");
}

template <class Table>
auto kind_from(const Table& table, const std::string& name, const char* what) {
    for (const auto& [k, text] : table)
        if (name == text) return k;
    throw InvalidInput(std::string("unknown ") + what + " '" + name + "'");
}

double parse_real(const std::string& text) {
    std::string t = text;
    t.erase(0, t.find_first_not_of(" \t"));
    t.erase(t.find_last_not_of(" \t") + 1);
    if (t == "inf") return std::numeric_limits<double>::infinity();
    double value = 0.0;
    auto [end, ec] = std::from_chars(t.data(), t.data() + t.size(), value);
    if (ec != std::errc() || end != t.data() + t.size() || t.empty())
        throw InvalidInput("not a number: '" + text + "'");
    return value;
}

std::vector<std::string> split(const std::string& text, char sep) {
    std::vector<std::string> out;
    std::string item;
    std::istringstream in(text);
    while (std::getline(in, item, sep)) {
        item.erase(0, item.find_first_not_of(" \t"));
        item.erase(item.find_last_not_of(" \t") + 1);
        if (!item.empty()) out.push_back(item);
    }
    return out;
}

template <class T, class F>
std::string join(const std::vector<T>& items, F&& render, const char* sep = ", ") {
    std::string out;
    for (std::size_t i = 0; i < items.size(); ++i) {
        if (i) out += sep;
        out += render(items[i]);
    }
    return out;
}

std::string matrix_text(const Eigen::MatrixXd& m) {
    std::string out;
    for (Eigen::Index i = 0; i < m.rows(); ++i) {
        if (i) out += " | ";
        for (Eigen::Index j = 0; j < m.cols(); ++j) {
            if (j) out += ' ';
            out += format_real(m(i, j));
        }
    }
    return out;
}

Eigen::MatrixXd parse_matrix(const std::string& text) {
    std::vector<std::vector<double>> rows;
    for (const auto& row : split(text, '|')) {
        std::vector<double> values;
        for (const auto& cell : split(row, ' ')) values.push_back(parse_real(cell));
        if (!rows.empty() && values.size() != rows.front().size())
            throw InvalidInput("ragged matrix in scenario file");
        rows.push_back(std::move(values));
    }
    if (rows.empty()) return {};
    Eigen::MatrixXd m(rows.size(), rows.front().size());
    for (std::size_t i = 0; i < rows.size(); ++i)
        for (std::size_t j = 0; j < rows[i].size(); ++j) m(i, j) = rows[i][j];
    return m;
}

std::string require_key(const pt::ptree& tree, const std::string& path) {
    auto value = tree.get_optional<std::string>(path);
    if (!value) throw InvalidInput("scenario file is missing '" + path + "'");
    return *value;
}

double real_or(const pt::ptree& tree, const std::string& path, double fallback) {
    auto value = tree.get_optional<std::string>(path);
    return value ? parse_real(*value) : fallback;
}

std::uint64_t parse_seed(const std::string& text) {
    std::uint64_t seed = 0;
    auto [end, ec] = std::from_chars(text.data(), text.data() + text.size(), seed);
    if (ec != std::errc() || end != text.data() + text.size()) throw InvalidInput("bad seed '" + text + "'");
    return seed;
}

void write_weight(std::ostream& out, const WeightFunction& weight) {
    out << "[weight]\nfamily = " << weight.name() << '\n';
    const auto& f = weight.family();
    if (const auto* w = std::get_if<CuckerSmale>(&f)) {
        out << "H = " << format_real(w->H) << "\nbeta = " << format_real(w->beta) << '\n';
    } else if (const auto* w = std::get_if<SmoothedConfidence>(&f)) {
        out << "c = " << format_real(w->c) << "\nR = " << format_real(w->R) << "\neps = " << format_real(w->eps)
            << '\n';
    } else if (const auto* w = std::get_if<StepConfidence>(&f)) {
        out << "R = " << format_real(w->R) << '\n';
    } else if (const auto* w = std::get_if<LinearDecay>(&f)) {
        out << "intercept = " << format_real(w->intercept) << "\nslope = " << format_real(w->slope) << '\n';
        if (w->cutoff_sq) out << "cutoff_sq = " << format_real(*w->cutoff_sq) << '\n';
    } else if (const auto* w = std::get_if<Constant>(&f)) {
        out << "c = " << format_real(w->c) << '\n';
    }
}

WeightFunction read_weight(const pt::ptree& tree) {
    const std::string family = require_key(tree, "weight.family");
    auto get = [&](const char* key) { return parse_real(require_key(tree, std::string("weight.") + key)); };
    if (family == "cucker-smale") return WeightFunction(CuckerSmale{get("H"), get("beta")});
    if (family == "smoothed-confidence") return WeightFunction(SmoothedConfidence{get("c"), get("R"), get("eps")});
    if (family == "step-confidence") return WeightFunction(StepConfidence{get("R")});
    if (family == "linear-decay") {
        LinearDecay w{get("intercept"), get("slope"), std::nullopt};
        if (auto cut = tree.get_optional<std::string>("weight.cutoff_sq")) w.cutoff_sq = parse_real(*cut);
        return WeightFunction(w);
    }
    if (family == "constant") return WeightFunction(Constant{get("c")});
    throw InvalidInput("unknown weight family '" + family + "'");
}

}  // namespace

bool InitialSpec::operator==(const InitialSpec& o) const {
    if (kind != o.kind) return false;
    switch (kind) {
        case Kind::Explicit:
            return positions.rows() == o.positions.rows() && positions.cols() == o.positions.cols() &&
                   positions == o.positions && velocities.rows() == o.velocities.rows() &&
                   velocities.cols() == o.velocities.cols() && velocities == o.velocities;
        case Kind::EvenlySpaced:
            return n == o.n && spacing == o.spacing && origin == o.origin;
        case Kind::RandomBox:
            return n == o.n && m == o.m && lo == o.lo && hi == o.hi && with_velocities == o.with_velocities &&
                   vel_lo == o.vel_lo && vel_hi == o.vel_hi && seed == o.seed;
        case Kind::SymmetricRandom:
            return n == o.n && center == o.center && half_width == o.half_width && seed == o.seed;
    }
    return false;
}

WeightedGraph ScenarioConfig::build_graph() const {
    const int n = initial.kind == InitialSpec::Kind::Explicit ? static_cast<int>(initial.positions.rows())
                                                               : initial.n;
    switch (graph.kind) {
        case GraphSpec::Kind::Complete:
            return WeightedGraph::complete(n);
        case GraphSpec::Kind::EdgeList:
            return WeightedGraph(n, graph.edges);
        case GraphSpec::Kind::StateDependent:
            return WeightedGraph::state_dependent(n);
    }
    throw InvalidInput("unhandled graph kind");
}

SystemState ScenarioConfig::build_initial() const {
    const InitialSpec& s = initial;
    switch (s.kind) {
        case InitialSpec::Kind::Explicit:
            if (s.positions.rows() == 0) throw InvalidInput("explicit initial state has no agents");
            if (s.velocities.size() == 0) return SystemState(s.positions);
            return SystemState(s.positions, s.velocities);
        case InitialSpec::Kind::EvenlySpaced:
            return evenly_spaced_opinions(s.n, s.spacing, s.origin);
        case InitialSpec::Kind::RandomBox:
            return random_initial(s.n, s.m, s.lo, s.hi, s.seed, s.with_velocities, s.vel_lo, s.vel_hi);
        case InitialSpec::Kind::SymmetricRandom:
            return symmetric_random(s.n, s.seed, s.center, s.half_width);
    }
    throw InvalidInput("unhandled initial-state kind");
}

double ScenarioConfig::monitor_staircase_r() const { return staircase_r.empty() ? 0.0 : staircase_r.front(); }

const std::vector<std::string>& builtin_names() {
    static const std::vector<std::string> names = [] {
        std::vector<std::string> out;
        for (const auto& entry : builtin_table()) out.push_back(entry.first);
        return out;
    }();
    return names;
}

ScenarioConfig build_builtin(const std::string& name) {
    for (const auto& [id, make] : builtin_table())
        if (id == name) return make();
    throw InvalidInput("unknown builtin scenario '" + name + "'");
}

SystemState evenly_spaced_opinions(int n, double spacing, double origin) {
    if (n < 2) throw InvalidInput("evenly spaced opinions need n >= 2");
    if (!(spacing > 0)) throw InvalidInput("opinion spacing must be positive");
    Eigen::MatrixXd x(n, 1);
    for (int i = 0; i < n; ++i) x(i, 0) = origin + i * spacing;
    return SystemState(std::move(x));
}

SystemState random_initial(int n, int m, double lo, double hi, std::uint64_t seed, bool with_velocities,
                           double vel_lo, double vel_hi) {
    if (n < 1 || m < 1) throw InvalidInput("random initial state needs n >= 1 and m >= 1");
    if (!(lo <= hi) || !(vel_lo <= vel_hi)) throw InvalidInput("empty sampling box");
    std::mt19937_64 gen(seed);
    Eigen::MatrixXd x(n, m);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < m; ++j) x(i, j) = lo + (hi - lo) * uniform01(gen);
    if (!with_velocities) return SystemState(std::move(x));
    Eigen::MatrixXd v(n, m);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < m; ++j) v(i, j) = vel_lo + (vel_hi - vel_lo) * uniform01(gen);
    return SystemState(std::move(x), std::move(v));
}

SystemState symmetric_random(int n, std::uint64_t seed, double center, double half_width) {
    if (n < 1) throw InvalidInput("symmetric profile needs n >= 1");
    if (!(half_width > 0)) throw InvalidInput("symmetric profile needs a positive half width");
    std::mt19937_64 gen(seed);
    std::vector<double> values;
    for (int i = 0; i < n / 2; ++i) {
        double offset = half_width * uniform01(gen);
        values.push_back(center - offset);
        values.push_back(center + offset);
    }
    if (n % 2) values.push_back(center);
    std::sort(values.begin(), values.end());
    return SystemState(Eigen::Map<Eigen::MatrixXd>(values.data(), n, 1));
}

std::string format_real(double value) {
    if (std::isinf(value)) return value > 0 ? "inf" : "-inf";
    std::array<char, 32> buf{};
    auto [end, ec] = std::to_chars(buf.data(), buf.data() + buf.size(), value);
    return std::string(buf.data(), end);
}

std::string serialize(const ScenarioConfig& c) {
    std::ostringstream out;
    out << "# consensus_lab scenario\n";
    out << "[scenario]\nname = " << c.name << '\n';
    if (!c.notes.empty()) out << "notes = " << c.notes << '\n';

    out << "\n[graph]\nkind = " << kind_name(kGraphKinds, c.graph.kind) << '\n';
    if (c.graph.kind == GraphSpec::Kind::EdgeList)
        out << "edges = "
            << join(c.graph.edges, [](const auto& e) { return std::to_string(e.first) + "-" + std::to_string(e.second); })
            << '\n';

    out << '\n';
    write_weight(out, c.weight);

    const Gains& g = c.protocol.gains;
    out << "\n[protocol]\nlaw = " << to_string(c.protocol.law) << '\n';
    out << "k = " << format_real(g.k) << "\nk1 = " << format_real(g.k1) << "\nk2 = " << format_real(g.k2)
        << "\nk3 = " << format_real(g.k3) << "\nh = " << format_real(g.h) << "\ndt = " << format_real(c.protocol.dt)
        << '\n';

    const InitialSpec& s = c.initial;
    out << "\n[initial]\nkind = " << kind_name(kInitialKinds, s.kind) << '\n';
    switch (s.kind) {
        case InitialSpec::Kind::Explicit:
            out << "positions = " << matrix_text(s.positions) << '\n';
            if (s.velocities.size()) out << "velocities = " << matrix_text(s.velocities) << '\n';
            break;
        case InitialSpec::Kind::EvenlySpaced:
            out << "n = " << s.n << "\nspacing = " << format_real(s.spacing) << "\norigin = " << format_real(s.origin)
                << '\n';
            break;
        case InitialSpec::Kind::RandomBox:
            out << "n = " << s.n << "\nm = " << s.m << "\nlo = " << format_real(s.lo) << "\nhi = " << format_real(s.hi)
                << "\nwith_velocities = " << (s.with_velocities ? "true" : "false") << '\n';
            if (s.with_velocities)
                out << "vel_lo = " << format_real(s.vel_lo) << "\nvel_hi = " << format_real(s.vel_hi) << '\n';
            out << "seed = " << s.seed << '\n';
            break;
        case InitialSpec::Kind::SymmetricRandom:
            out << "n = " << s.n << "\ncenter = " << format_real(s.center)
                << "\nhalf_width = " << format_real(s.half_width) << "\nseed = " << s.seed << '\n';
            break;
    }

    out << "\n[run]\nhorizon = " << format_real(c.horizon) << "\nsample_every = " << c.sample_every << '\n';
    out << "monitors = " << join(c.monitors, [](MonitorId id) { return to_string(id); }) << '\n';
    out << "staircase_r = " << join(c.staircase_r, [](double r) { return format_real(r); }) << '\n';
    out << "conditions = " << join(c.conditions, [](const std::string& s) { return s; }) << '\n';
    return out.str();
}

ScenarioConfig parse_scenario(const std::string& text) {
    pt::ptree tree;
    try {
        std::istringstream in(text);
        pt::read_ini(in, tree);
    } catch (const pt::ini_parser_error& e) {
        throw InvalidInput(std::string("malformed scenario file: ") + e.what());
    }

    ScenarioConfig c;
    c.name = require_key(tree, "scenario.name");
    c.notes = tree.get<std::string>("scenario.notes", "");

    c.graph.kind = kind_from(kGraphKinds, require_key(tree, "graph.kind"), "graph kind");
    if (c.graph.kind == GraphSpec::Kind::EdgeList) {
        for (const auto& item : split(tree.get<std::string>("graph.edges", ""), ',')) {
            auto dash = item.find('-');
            if (dash == std::string::npos) throw InvalidInput("bad edge '" + item + "'");
            c.graph.edges.emplace_back(static_cast<int>(parse_real(item.substr(0, dash))),
                                       static_cast<int>(parse_real(item.substr(dash + 1))));
        }
    }

    c.weight = read_weight(tree);

    c.protocol.law = law_from_string(require_key(tree, "protocol.law"));
    Gains& g = c.protocol.gains;
    g.k = real_or(tree, "protocol.k", g.k);
    g.k1 = real_or(tree, "protocol.k1", g.k1);
    g.k2 = real_or(tree, "protocol.k2", g.k2);
    g.k3 = real_or(tree, "protocol.k3", g.k3);
    g.h = real_or(tree, "protocol.h", g.h);
    c.protocol.dt = real_or(tree, "protocol.dt", c.protocol.dt);

    InitialSpec& s = c.initial;
    s.kind = kind_from(kInitialKinds, require_key(tree, "initial.kind"), "initial-state kind");
    auto count = [&](const char* key) { return static_cast<int>(parse_real(require_key(tree, std::string("initial.") + key))); };
    auto real = [&](const char* key) { return parse_real(require_key(tree, std::string("initial.") + key)); };
    switch (s.kind) {
        case InitialSpec::Kind::Explicit:
            s.positions = parse_matrix(require_key(tree, "initial.positions"));
            s.velocities = parse_matrix(tree.get<std::string>("initial.velocities", ""));
            s.n = static_cast<int>(s.positions.rows());
            s.m = static_cast<int>(s.positions.cols());
            break;
        case InitialSpec::Kind::EvenlySpaced:
            s.n = count("n");
            s.spacing = real("spacing");
            s.origin = real_or(tree, "initial.origin", 0.0);
            break;
        case InitialSpec::Kind::RandomBox:
            s.n = count("n");
            s.m = count("m");
            s.lo = real("lo");
            s.hi = real("hi");
            s.with_velocities = tree.get<bool>("initial.with_velocities", false);
            if (s.with_velocities) {
                s.vel_lo = real("vel_lo");
                s.vel_hi = real("vel_hi");
            }
            s.seed = parse_seed(require_key(tree, "initial.seed"));
            break;
        case InitialSpec::Kind::SymmetricRandom:
            s.n = count("n");
            s.center = real_or(tree, "initial.center", 0.0);
            s.half_width = real_or(tree, "initial.half_width", 1.0);
            s.seed = parse_seed(require_key(tree, "initial.seed"));
            break;
    }

    c.horizon = parse_real(require_key(tree, "run.horizon"));
    c.sample_every = static_cast<std::size_t>(real_or(tree, "run.sample_every", 1.0));
    if (c.sample_every == 0) throw InvalidInput("sample_every must be positive");
    for (const auto& name : split(tree.get<std::string>("run.monitors", ""), ','))
        c.monitors.push_back(monitor_from_string(name));
    if (auto rs = tree.get_optional<std::string>("run.staircase_r")) {
        c.staircase_r.clear();
        for (const auto& r : split(*rs, ',')) c.staircase_r.push_back(parse_real(r));
    }
    c.conditions = split(tree.get<std::string>("run.conditions", ""), ',');
    for (const auto& name : c.conditions)
        if (name != "GAIN") criterion_from_string(name);
    c.protocol.validate();
    return c;
}

ScenarioConfig load_scenario(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw InvalidInput("cannot read scenario file '" + path + "'");
    std::ostringstream text;
    text << in.rdbuf();
    return parse_scenario(text.str());
}

std::uint32_t checksum(const std::string& text) {
    boost::crc_32_type crc;
    crc.process_bytes(text.data(), text.size());
    return crc.checksum();
}

}  // namespace conlab

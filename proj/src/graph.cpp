#include "conlab/graph.hpp"

#include <algorithm>
#include <istream>
#include <limits>
#include <numeric>
#include <ostream>
#include <queue>
#include <sstream>
#include <string>

#include "conlab/errors.hpp"

namespace conlab {

namespace {

void check_vertex(const WeightedGraph& g, int i) {
    if (i < 0 || i >= g.size()) throw InvalidInput("vertex index out of range");
}

// Edmonds-Karp on a dense capacity matrix; graphs here have at most a few dozen vertices.
int max_flow(std::vector<std::vector<int>> cap, int source, int sink) {
    const int nodes = static_cast<int>(cap.size());
    int flow = 0;
    std::vector<int> parent(nodes);
    while (true) {
        std::fill(parent.begin(), parent.end(), -1);
        parent[source] = source;
        std::queue<int> frontier;
        frontier.push(source);
        while (!frontier.empty() && parent[sink] < 0) {
            int u = frontier.front();
            frontier.pop();
            for (int w = 0; w < nodes; ++w) {
                if (parent[w] < 0 && cap[u][w] > 0) {
                    parent[w] = u;
                    frontier.push(w);
                }
            }
        }
        if (parent[sink] < 0) return flow;
        int bottleneck = std::numeric_limits<int>::max();
        for (int w = sink; w != source; w = parent[w]) bottleneck = std::min(bottleneck, cap[parent[w]][w]);
        for (int w = sink; w != source; w = parent[w]) {
            cap[parent[w]][w] -= bottleneck;
            cap[w][parent[w]] += bottleneck;
        }
        flow += bottleneck;
    }
}

}  // namespace

WeightedGraph::WeightedGraph(int n, const std::vector<Edge>& edges, TopologyMode mode) : n_(n), mode_(mode) {
    if (n < 1) throw InvalidInput("graph needs at least one vertex");
    links_ = Eigen::MatrixXi::Zero(n, n);
    if (mode == TopologyMode::StateDependentLinks) {
        links_.setOnes();
        links_.diagonal().setZero();
        return;
    }
    for (auto [i, j] : edges) {
        if (i < 0 || j < 0 || i >= n || j >= n) throw InvalidInput("edge endpoint out of range");
        if (i == j) throw InvalidInput("self-loops are not allowed");
        links_(i, j) = links_(j, i) = 1;
    }
}

WeightedGraph WeightedGraph::complete(int n) {
    std::vector<Edge> edges;
    for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j) edges.emplace_back(i, j);
    return WeightedGraph(n, edges);
}

WeightedGraph WeightedGraph::state_dependent(int n) { return WeightedGraph(n, {}, TopologyMode::StateDependentLinks); }

WeightedGraph WeightedGraph::path(int n) {
    std::vector<Edge> edges;
    for (int i = 0; i + 1 < n; ++i) edges.emplace_back(i, i + 1);
    return WeightedGraph(n, edges);
}

WeightedGraph WeightedGraph::from_indicator(const Eigen::MatrixXi& indicator) {
    if (indicator.rows() != indicator.cols()) throw InvalidInput("link indicator must be square");
    const int n = static_cast<int>(indicator.rows());
    std::vector<Edge> edges;
    for (int i = 0; i < n; ++i) {
        if (indicator(i, i) != 0) throw InvalidInput("link indicator must have a zero diagonal");
        for (int j = i + 1; j < n; ++j) {
            if (indicator(i, j) != indicator(j, i)) throw InvalidInput("link indicator must be symmetric");
            if (indicator(i, j) != 0) edges.emplace_back(i, j);
        }
    }
    return WeightedGraph(n, edges);
}

bool WeightedGraph::linked(int i, int j) const { return links_(i, j) != 0; }

int WeightedGraph::degree(int i) const { return links_.row(i).sum(); }

int WeightedGraph::max_degree() const { return n_ == 0 ? 0 : links_.rowwise().sum().maxCoeff(); }

std::vector<WeightedGraph::Edge> WeightedGraph::edges() const {
    std::vector<Edge> out;
    for (int i = 0; i < n_; ++i)
        for (int j = i + 1; j < n_; ++j)
            if (linked(i, j)) out.emplace_back(i, j);
    return out;
}

LaplacianMatrix build_laplacian(const WeightedGraph& graph, const Eigen::MatrixXd& positions,
                                const WeightFunction& weight) {
    const int n = graph.size();
    if (positions.rows() != n) throw InvalidInput("position block does not match the graph size");
    LaplacianMatrix L{Eigen::MatrixXd::Zero(n, n), Eigen::MatrixXd::Zero(n, n)};
    for (int i = 0; i < n; ++i) {
        for (int j = i + 1; j < n; ++j) {
            if (!graph.linked(i, j)) continue;
            double a = weight(squared_distance(positions, i, j));
            L.weights(i, j) = L.weights(j, i) = a;
            L.entries(i, j) = L.entries(j, i) = -a;
        }
    }
    L.entries.diagonal() = L.weights.rowwise().sum();
    return L;
}

LaplacianMatrix build_laplacian(const WeightedGraph& graph, const SystemState& state, const WeightFunction& weight) {
    return build_laplacian(graph, state.x, weight);
}

LaplacianMatrix unit_laplacian(const WeightedGraph& graph) {
    const int n = graph.size();
    LaplacianMatrix L{Eigen::MatrixXd::Zero(n, n), graph.indicator().cast<double>()};
    L.entries = -L.weights;
    L.entries.diagonal() = L.weights.rowwise().sum();
    return L;
}

WeightedGraph support_graph(const Eigen::MatrixXd& positions, const WeightFunction& weight) {
    const int n = static_cast<int>(positions.rows());
    std::vector<WeightedGraph::Edge> edges;
    for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j)
            if (weight(squared_distance(positions, i, j)) > 0.0) edges.emplace_back(i, j);
    return WeightedGraph(n, edges);
}

Eigen::VectorXd laplacian_spectrum(const Eigen::MatrixXd& L) {
    if (L.rows() != L.cols()) throw InvalidInput("Laplacian must be square");
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(L, Eigen::EigenvaluesOnly);
    if (solver.info() != Eigen::Success) throw InvalidInput("symmetric eigensolve failed");
    Eigen::VectorXd values = solver.eigenvalues();
    std::sort(values.begin(), values.end());
    return values;
}

double algebraic_connectivity(const Eigen::MatrixXd& L) {
    if (L.rows() < 2) return 0.0;
    return laplacian_spectrum(L)(1);
}

double algebraic_connectivity(const LaplacianMatrix& L) { return algebraic_connectivity(L.entries); }

double lambda2_lower_bound(const WeightedGraph& graph, const WeightFunction& weight, double distance_bound) {
    if (!(distance_bound >= 0)) throw InvalidInput("distance bound must be nonnegative");
    if (weight.compact_support())
        throw InvalidInput("lambda2 lower bound needs a weight that is positive everywhere");
    return weight(distance_bound * distance_bound) * algebraic_connectivity(unit_laplacian(graph));
}

int count_disjoint_paths(const WeightedGraph& graph, int i, int j) {
    check_vertex(graph, i);
    check_vertex(graph, j);
    if (i == j) throw InvalidInput("disjoint paths need two distinct vertices");
    const int n = graph.size();
    const int big = n + 1;
    // Vertex v splits into in-node 2v and out-node 2v+1 joined by a unit arc.
    std::vector<std::vector<int>> cap(2 * n, std::vector<int>(2 * n, 0));
    for (int v = 0; v < n; ++v) cap[2 * v][2 * v + 1] = (v == i || v == j) ? big : 1;
    for (int u = 0; u < n; ++u)
        for (int v = 0; v < n; ++v)
            if (u != v && graph.linked(u, v)) cap[2 * u + 1][2 * v] = 1;
    return max_flow(std::move(cap), 2 * i + 1, 2 * j);
}

int vertex_connectivity(const WeightedGraph& graph) {
    const int n = graph.size();
    if (n <= 1) return 0;
    int best = n - 1;  // complete graphs keep this value
    for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j)
            if (!graph.linked(i, j)) best = std::min(best, count_disjoint_paths(graph, i, j));
    return best;
}

std::vector<int> components(const WeightedGraph& graph) {
    const int n = graph.size();
    std::vector<int> label(n, -1);
    int next = 0;
    for (int s = 0; s < n; ++s) {
        if (label[s] >= 0) continue;
        std::queue<int> frontier;
        frontier.push(s);
        label[s] = next;
        while (!frontier.empty()) {
            int u = frontier.front();
            frontier.pop();
            for (int w = 0; w < n; ++w) {
                if (label[w] < 0 && graph.linked(u, w)) {
                    label[w] = next;
                    frontier.push(w);
                }
            }
        }
        ++next;
    }
    return label;
}

long long count_disconnected_pairs(const WeightedGraph& graph) {
    const auto label = components(graph);
    const long long n = graph.size();
    std::vector<long long> sizes(label.empty() ? 0 : *std::max_element(label.begin(), label.end()) + 1, 0);
    for (int c : label) ++sizes[c];
    long long within = 0;
    for (long long s : sizes) within += s * (s - 1) / 2;
    return n * (n - 1) / 2 - within;
}

bool connected(const WeightedGraph& graph) { return count_disconnected_pairs(graph) == 0; }

WeightedGraph read_edge_list(std::istream& in, int n) {
    std::vector<WeightedGraph::Edge> edges;
    int max_vertex = -1;
    std::string line;
    int line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
        if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
        std::istringstream fields(line);
        int i = 0, j = 0;
        std::string rest;
        if (!(fields >> i >> j) || (fields >> rest))
            throw InvalidInput("edge list line " + std::to_string(line_no) + ": expected two vertex indices");
        edges.emplace_back(i, j);
        max_vertex = std::max({max_vertex, i, j});
    }
    if (n < 0) n = max_vertex + 1;
    return WeightedGraph(n, edges);
}

void write_edge_list(std::ostream& out, const WeightedGraph& graph) {
    for (auto [i, j] : graph.edges()) out << i << ' ' << j << '\n';
}

}  // namespace conlab

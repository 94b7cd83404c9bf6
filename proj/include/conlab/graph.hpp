#pragma once

#include <cstddef>
#include <iosfwd>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "conlab/state.hpp"
#include "conlab/weight.hpp"

namespace conlab {

enum class TopologyMode {
    FixedLinks,           // links given by the indicator matrix, weights vary with state
    StateDependentLinks,  // every pair may link; a link exists wherever alpha > 0
};

/// Undirected communication graph: symmetric 0/1 link indicator with zero diagonal.
class WeightedGraph {
public:
    using Edge = std::pair<int, int>;

    WeightedGraph() = default;
    WeightedGraph(int n, const std::vector<Edge>& edges, TopologyMode mode = TopologyMode::FixedLinks);

    static WeightedGraph complete(int n);
    static WeightedGraph state_dependent(int n);
    static WeightedGraph path(int n);
    static WeightedGraph from_indicator(const Eigen::MatrixXi& indicator);

    int size() const { return n_; }
    TopologyMode mode() const { return mode_; }
    bool linked(int i, int j) const;
    int degree(int i) const;
    int max_degree() const;
    std::vector<Edge> edges() const;
    const Eigen::MatrixXi& indicator() const { return links_; }

private:
    int n_ = 0;
    TopologyMode mode_ = TopologyMode::FixedLinks;
    Eigen::MatrixXi links_;
};

/// L = diag(row sums of A) - A with a_ij = G_ij * alpha(||x_i - x_j||^2).
struct LaplacianMatrix {
    Eigen::MatrixXd entries;
    Eigen::MatrixXd weights;  // the a_ij snapshot used to build `entries`
};

LaplacianMatrix build_laplacian(const WeightedGraph& graph, const Eigen::MatrixXd& positions,
                                const WeightFunction& weight);
LaplacianMatrix build_laplacian(const WeightedGraph& graph, const SystemState& state, const WeightFunction& weight);

/// Laplacian of the unit-weight graph (a_ij = G_ij).
LaplacianMatrix unit_laplacian(const WeightedGraph& graph);

/// Graph whose links are the pairs with alpha(||x_i - x_j||^2) > 0 (exact, no tolerance).
WeightedGraph support_graph(const Eigen::MatrixXd& positions, const WeightFunction& weight);

/// Eigenvalues sorted ascending.
Eigen::VectorXd laplacian_spectrum(const Eigen::MatrixXd& L);
double algebraic_connectivity(const LaplacianMatrix& L);
double algebraic_connectivity(const Eigen::MatrixXd& L);

/// alpha(B^2) * lambda2(unit Laplacian): a lower bound on lambda2(L_x) valid whenever
/// every pairwise distance is at most B. Rejects compactly supported weights.
double lambda2_lower_bound(const WeightedGraph& graph, const WeightFunction& weight, double distance_bound);

int vertex_connectivity(const WeightedGraph& graph);
/// Maximum number of internally vertex-disjoint i-j paths.
int count_disjoint_paths(const WeightedGraph& graph, int i, int j);
/// Unordered pairs {i, j} with no path between them.
long long count_disconnected_pairs(const WeightedGraph& graph);
bool connected(const WeightedGraph& graph);
/// Component label per vertex, labels numbered from 0 in order of first appearance.
std::vector<int> components(const WeightedGraph& graph);

// Plain-text edge lists: one "i j" pair per line, 0-indexed, '#' starts a comment.
WeightedGraph read_edge_list(std::istream& in, int n = -1);
void write_edge_list(std::ostream& out, const WeightedGraph& graph);

}  // namespace conlab

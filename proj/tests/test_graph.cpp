#include <doctest.h>

#include <random>
#include <sstream>

#include "conlab/errors.hpp"
#include "conlab/graph.hpp"
#include "oracles.hpp"

using namespace conlab;

namespace {

WeightedGraph to_graph(const oracle::Adjacency& a) {
    const int n = static_cast<int>(a.size());
    std::vector<WeightedGraph::Edge> edges;
    for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j)
            if (a[i][j]) edges.emplace_back(i, j);
    return WeightedGraph(n, edges);
}

Eigen::MatrixXd scalar_positions(std::initializer_list<double> xs) {
    Eigen::MatrixXd x(xs.size(), 1);
    int i = 0;
    for (double v : xs) x(i++, 0) = v;
    return x;
}

oracle::Adjacency random_adjacency(int n, double p, std::mt19937_64& gen) {
    std::bernoulli_distribution coin(p);
    oracle::Adjacency a(n, std::vector<bool>(n, false));
    for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j) a[i][j] = a[j][i] = coin(gen);
    return a;
}

}  // namespace

TEST_CASE("graph construction validates its input") {
    CHECK_THROWS_AS(WeightedGraph(3, {{0, 0}}), InvalidInput);
    CHECK_THROWS_AS(WeightedGraph(3, {{0, 3}}), InvalidInput);
    CHECK_THROWS_AS(WeightedGraph(0, {}), InvalidInput);
    Eigen::MatrixXi asym = Eigen::MatrixXi::Zero(2, 2);
    asym(0, 1) = 1;
    CHECK_THROWS_AS(WeightedGraph::from_indicator(asym), InvalidInput);

    auto p = WeightedGraph::path(4);
    CHECK(p.linked(1, 2));
    CHECK_FALSE(p.linked(0, 2));
    CHECK(p.max_degree() == 2);
    CHECK(p.edges().size() == 3);
    CHECK(WeightedGraph::state_dependent(3).mode() == TopologyMode::StateDependentLinks);
}

TEST_CASE("laplacian of a path with constant weight is the combinatorial laplacian") {
    auto L = build_laplacian(WeightedGraph::path(3), scalar_positions({0.3, -2.0, 7.0}), WeightFunction(Constant{1.0}));
    Eigen::Matrix3d expected;
    expected << 1, -1, 0, -1, 2, -1, 0, -1, 1;
    CHECK((L.entries - expected).cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("laplacian entries for hand-evaluated weights") {
    auto L = build_laplacian(WeightedGraph::complete(2), scalar_positions({0.0, 1.0}), WeightFunction(CuckerSmale{1.0, 1.0}));
    CHECK(L.entries(0, 0) == doctest::Approx(0.5));
    CHECK(L.entries(0, 1) == doctest::Approx(-0.5));
    CHECK(L.weights(0, 1) == doctest::Approx(0.5));

    auto Z = build_laplacian(WeightedGraph::state_dependent(2), scalar_positions({0.0, 1.2}), WeightFunction(StepConfidence{1.0}));
    CHECK(Z.entries.cwiseAbs().maxCoeff() == 0.0);

    CHECK_THROWS_AS(build_laplacian(WeightedGraph::complete(3), scalar_positions({0.0, 1.0}), WeightFunction()),
                    InvalidInput);
}

TEST_CASE("laplacian invariants on random graphs and positions") {
    std::mt19937_64 gen(101);
    std::uniform_real_distribution<double> coord(-2.0, 2.0);
    const std::vector<WeightFunction> weights{WeightFunction(CuckerSmale{2.0, 1.5}),
                                              WeightFunction(SmoothedConfidence{1.0, 1.5, 0.3}),
                                              WeightFunction(StepConfidence{1.2}),
                                              WeightFunction(LinearDecay{3.0, 1.0, std::nullopt})};
    for (int trial = 0; trial < 200; ++trial) {
        const int n = 2 + trial % 7;
        auto graph = trial % 2 ? WeightedGraph::state_dependent(n) : to_graph(random_adjacency(n, 0.5, gen));
        Eigen::MatrixXd x(n, 2);
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < 2; ++j) x(i, j) = coord(gen);
        auto L = build_laplacian(graph, x, weights[trial % weights.size()]);
        CHECK(L.entries.rowwise().sum().cwiseAbs().maxCoeff() < 1e-10);
        CHECK(L.entries == L.entries.transpose());
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j)
                if (i != j) CHECK(L.entries(i, j) <= 0.0);
        CHECK(laplacian_spectrum(L.entries)(0) > -1e-9);
    }
}

TEST_CASE("spectrum agrees with a Jacobi eigensolver") {
    std::mt19937_64 gen(7);
    for (int trial = 0; trial < 100; ++trial) {
        const int n = 2 + trial % 8;
        auto graph = to_graph(random_adjacency(n, 0.6, gen));
        Eigen::MatrixXd x = Eigen::MatrixXd::Random(n, 2);
        auto L = build_laplacian(graph, x, WeightFunction(CuckerSmale{1.0, 1.0}));
        auto ours = laplacian_spectrum(L.entries);
        auto ref = oracle::jacobi_eigenvalues(L.entries);
        for (int k = 0; k < n; ++k) CHECK(ours(k) == doctest::Approx(ref[k]).epsilon(1e-10).scale(1.0));
    }
}

TEST_CASE("algebraic connectivity of small graphs") {
    CHECK(algebraic_connectivity(unit_laplacian(WeightedGraph::path(3))) == doctest::Approx(1.0));
    CHECK(algebraic_connectivity(unit_laplacian(WeightedGraph::complete(4))) == doctest::Approx(4.0));
    CHECK(algebraic_connectivity(Eigen::MatrixXd::Zero(2, 2)) == doctest::Approx(0.0));
    CHECK(oracle::jacobi_eigenvalues(unit_laplacian(WeightedGraph::path(3)).entries)[1] == doctest::Approx(1.0));
}

TEST_CASE("zero eigenvalue is simple exactly for connected graphs") {
    std::mt19937_64 gen(11);
    for (int trial = 0; trial < 300; ++trial) {
        const int n = 2 + trial % 6;
        auto a = random_adjacency(n, 0.4, gen);
        auto spectrum = laplacian_spectrum(unit_laplacian(to_graph(a)).entries);
        int zeros = 0;
        for (int k = 0; k < n; ++k) zeros += std::abs(spectrum(k)) < 1e-8;
        auto label = oracle::labels(a, std::vector<bool>(n, false));
        int comps = *std::max_element(label.begin(), label.end()) + 1;
        CHECK(zeros == comps);
    }
}

TEST_CASE("quadratic form bound by the second eigenvalue") {
    // x^T A x >= lambda2(A) ||x - projection onto the kernel of A||^2 for PSD A with a one-dimensional kernel.
    std::mt19937_64 gen(5);
    std::normal_distribution<double> normal;
    for (int trial = 0; trial < 200; ++trial) {
        const int n = 2 + trial % 7;
        Eigen::MatrixXd B(n, n);
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j) B(i, j) = normal(gen);
        Eigen::MatrixXd A = B.transpose() * B;
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(A);
        // Force a one-dimensional kernel along the first eigenvector.
        Eigen::VectorXd evals = solver.eigenvalues();
        evals(0) = 0.0;
        A = solver.eigenvectors() * evals.asDiagonal() * solver.eigenvectors().transpose();
        Eigen::VectorXd kernel = solver.eigenvectors().col(0);
        Eigen::VectorXd x = Eigen::VectorXd::NullaryExpr(n, [&] { return normal(gen); });
        Eigen::VectorXd perp = x - kernel * kernel.dot(x);
        double lambda2 = laplacian_spectrum(A)(1);
        CHECK(x.dot(A * x) >= lambda2 * perp.squaredNorm() - 1e-9);
    }
}

TEST_CASE("lambda2 lower bound for positive weights") {
    CHECK(lambda2_lower_bound(WeightedGraph::complete(2), WeightFunction(CuckerSmale{1.0, 1.0}), 1.0) ==
          doctest::Approx(1.0));
    CHECK(lambda2_lower_bound(WeightedGraph::complete(2), WeightFunction(Constant{3.0}), 17.0) == doctest::Approx(6.0));
    CHECK(lambda2_lower_bound(WeightedGraph::path(3), WeightFunction(CuckerSmale{1.0, 1.0}), 2.0) ==
          doctest::Approx(0.2));
    CHECK_THROWS_AS(lambda2_lower_bound(WeightedGraph::path(3), WeightFunction(StepConfidence{1.0}), 1.0), InvalidInput);

    std::mt19937_64 gen(17);
    std::uniform_real_distribution<double> coord(0.0, 1.0);
    const WeightFunction weight(CuckerSmale{1.0, 2.0});
    int tested = 0;
    while (tested < 100) {
        const int n = 3 + tested % 6;
        auto a = random_adjacency(n, 0.5, gen);
        if (!oracle::is_connected(a)) continue;
        Eigen::MatrixXd x(n, 2);
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < 2; ++j) x(i, j) = coord(gen);
        double B = 0.0;
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j) B = std::max(B, (x.row(i) - x.row(j)).norm());
        auto g = to_graph(a);
        CHECK(algebraic_connectivity(build_laplacian(g, x, weight)) >= lambda2_lower_bound(g, weight, B) - 1e-9);
        ++tested;
    }
}

TEST_CASE("vertex connectivity of named graphs") {
    CHECK(vertex_connectivity(WeightedGraph::complete(4)) == 3);
    CHECK(vertex_connectivity(WeightedGraph::path(4)) == 1);
    CHECK(vertex_connectivity(WeightedGraph(4, {{0, 1}, {2, 3}})) == 0);
    CHECK(vertex_connectivity(WeightedGraph::complete(1)) == 0);
    CHECK(vertex_connectivity(WeightedGraph::complete(2)) == 1);
}

TEST_CASE("disjoint path counts of named graphs") {
    auto k4 = WeightedGraph::complete(4);
    for (int i = 0; i < 4; ++i)
        for (int j = 0; j < 4; ++j)
            if (i != j) CHECK(count_disjoint_paths(k4, i, j) == 3);
    CHECK(count_disjoint_paths(WeightedGraph::path(4), 0, 3) == 1);
    CHECK(count_disjoint_paths(WeightedGraph(4, {{0, 1}, {2, 3}}), 0, 3) == 0);
    CHECK_THROWS_AS(count_disjoint_paths(k4, 2, 2), InvalidInput);
}

TEST_CASE("disconnected pair counts") {
    CHECK(count_disconnected_pairs(WeightedGraph::path(4)) == 0);
    CHECK(count_disconnected_pairs(WeightedGraph(4, {{0, 1}, {1, 2}, {0, 2}})) == 3);
    CHECK(count_disconnected_pairs(WeightedGraph(4, {})) == 6);
}

TEST_CASE("exhaustive agreement with brute-force oracles for n <= 5") {
    for (int n = 1; n <= 5; ++n) {
        for (unsigned mask = 0; mask < (1u << oracle::pair_count(n)); ++mask) {
            auto a = oracle::from_mask(n, mask);
            auto g = to_graph(a);
            REQUIRE(vertex_connectivity(g) == oracle::vertex_connectivity(a));
            REQUIRE(count_disconnected_pairs(g) == oracle::disconnected_pairs(a));
            REQUIRE(connected(g) == oracle::is_connected(a));
            for (int i = 0; i < n; ++i)
                for (int j = i + 1; j < n; ++j) REQUIRE(count_disjoint_paths(g, i, j) == oracle::disjoint_paths(a, i, j));
        }
    }
}

TEST_CASE("sampled agreement with path enumeration for n = 6 and 7") {
    std::mt19937_64 gen(23);
    for (int trial = 0; trial < 400; ++trial) {
        const int n = 6 + trial % 2;
        auto a = random_adjacency(n, 0.3 + 0.5 * (trial % 5) / 4.0, gen);
        auto g = to_graph(a);
        REQUIRE(vertex_connectivity(g) == oracle::vertex_connectivity(a));
        for (int i = 0; i < n; ++i)
            for (int j = i + 1; j < n; ++j) REQUIRE(count_disjoint_paths(g, i, j) == oracle::disjoint_paths(a, i, j));
    }
}

TEST_CASE("disjoint paths dominate vertex connectivity on random graphs up to n = 12") {
    std::mt19937_64 gen(29);
    for (int trial = 0; trial < 200; ++trial) {
        const int n = 2 + trial % 11;
        auto g = to_graph(random_adjacency(n, 0.5, gen));
        const int kappa = vertex_connectivity(g);
        for (int i = 0; i < n; ++i)
            for (int j = i + 1; j < n; ++j) CHECK(count_disjoint_paths(g, i, j) >= kappa);
    }
}

TEST_CASE("edge list text round trip") {
    auto g = WeightedGraph(5, {{0, 1}, {1, 4}, {2, 3}});
    std::stringstream text;
    write_edge_list(text, g);
    auto back = read_edge_list(text, 5);
    CHECK(back.indicator() == g.indicator());

    std::istringstream commented("# fixture\n0 1  # first\n\n2 1\n");
    auto h = read_edge_list(commented);
    CHECK(h.size() == 3);
    CHECK(h.linked(1, 2));

    std::istringstream bad("0 x\n");
    CHECK_THROWS_AS(read_edge_list(bad), InvalidInput);
}

TEST_CASE("support graph uses the exact support of the weight") {
    auto g = support_graph(scalar_positions({0.0, 0.999, 1.0, 3.0}), WeightFunction(StepConfidence{1.0}));
    CHECK(g.linked(0, 1));
    CHECK_FALSE(g.linked(0, 2));  // distance^2 == R^2 exactly
    CHECK(g.linked(1, 2));
    CHECK(g.degree(3) == 0);
}

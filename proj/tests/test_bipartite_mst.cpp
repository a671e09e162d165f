#include <cmath>
#include <set>
#include <stdexcept>
#include <tuple>

#include "doctest.h"

#include "bmst/bipartite_mst.hpp"
#include "bmst/geometry.hpp"
#include "bmst/graph.hpp"

using namespace bmst;

namespace {

std::set<std::pair<int, int>> edge_set(const SpanningTree& t) {
    std::set<std::pair<int, int>> s;
    for (const auto& e : t.edges) s.insert({std::min(e.u, e.v), std::max(e.u, e.v)});
    return s;
}

void check_is_spanning(const BipartiteInstance& inst, const SpanningTree& t) {
    REQUIRE(t.n == static_cast<int>(inst.n()));
    REQUIRE(t.edges.size() == inst.n() - 1);
    DisjointSet ds(t.n);
    int degree_sum = 0;
    for (const auto& e : t.edges) {
        CHECK(ds.unite(e.u, e.v) >= 0); // acyclic
        // every edge crosses colors
        const bool ur = e.u < static_cast<int>(inst.n_R());
        const bool vr = e.v < static_cast<int>(inst.n_R());
        CHECK(ur != vr);
    }
    for (int d : t.degree) degree_sum += d;
    CHECK(degree_sum == 2 * (t.n - 1));
}

} // namespace

TEST_CASE("grid solver matches brute force across dimensions and metrics") {
    int id = 0;
    for (int d : {1, 2, 3})
        for (auto metric : {MetricKind::UnitCube, MetricKind::FlatTorus})
            for (size_t n_R : {7, 25}) {
                const auto inst = sample_uniform(n_R, 40 - n_R, d, metric, 1000 + id++);
                const auto brute = bipartite_mst(inst, SolverKind::Brute);
                const auto grid = bipartite_mst(inst, SolverKind::GridBoruvka);
                check_is_spanning(inst, grid);
                CHECK(edge_set(brute) == edge_set(grid));
                CHECK(std::fabs(brute.cost(1.0) - grid.cost(1.0)) <= 1e-12);
                CHECK(brute.bottleneck == doctest::Approx(grid.bottleneck));
            }
}

TEST_CASE("bottleneck threshold equals the tree bottleneck") {
    for (uint64_t seed : {5u, 6u, 7u}) {
        const auto inst = sample_uniform(30, 35, 2, MetricKind::UnitCube, seed);
        const auto tree = bipartite_mst(inst, SolverKind::GridBoruvka);
        CHECK(bottleneck_threshold(inst) == doctest::Approx(tree.bottleneck).epsilon(1e-12));
    }
}

TEST_CASE("one-dimensional single-color tree is the sorted chain") {
    Points pts(1);
    for (double x : {0.5, 0.1, 0.2}) pts.push_back(&x);
    const auto tree = mono_mst(pts, MetricKind::UnitCube);
    CHECK(tree.cost(1.0) == doctest::Approx(0.4));
    CHECK(tree.edges.size() == 2);
}

TEST_CASE("wrap metric never costs more than the cube metric") {
    for (uint64_t seed : {21u, 22u}) {
        auto inst = sample_uniform(50, 50, 2, MetricKind::UnitCube, seed);
        const double cube = bipartite_mst(inst, SolverKind::GridBoruvka).cost(1.0);
        inst.metric = MetricKind::FlatTorus;
        const double torus = bipartite_mst(inst, SolverKind::GridBoruvka).cost(1.0);
        CHECK(torus <= cube + 1e-12);
    }
}

TEST_CASE("grid point statistics agree with the brute-force oracles") {
    for (int d : {1, 2, 3}) {
        const auto inst = sample_uniform(40, 60, d, MetricKind::UnitCube, 31 + d);
        for (auto metric : {MetricKind::UnitCube, MetricKind::FlatTorus}) {
            CHECK(grid_directed_nn_max(inst.red, inst.blue, metric) ==
                  doctest::Approx(directed_nn_max(inst.red, inst.blue, metric)).epsilon(1e-12));
            CHECK(grid_hausdorff(inst.red, inst.blue, metric) ==
                  doctest::Approx(hausdorff(inst.red, inst.blue, metric)).epsilon(1e-12));
        }
    }
}

TEST_CASE("unbalanced color counts still produce valid trees") {
    const auto inst = sample_uniform(3, 97, 2, MetricKind::UnitCube, 77);
    const auto brute = bipartite_mst(inst, SolverKind::Brute);
    const auto grid = bipartite_mst(inst, SolverKind::GridBoruvka);
    check_is_spanning(inst, grid);
    CHECK(edge_set(brute) == edge_set(grid));
}

TEST_CASE("brute solver refuses to materialize huge edge sets") {
    const auto inst = sample_uniform(2100, 2100, 2, MetricKind::UnitCube, 1);
    CHECK_THROWS_AS(bipartite_mst(inst, SolverKind::Brute), std::invalid_argument);
}

TEST_CASE("two-point instance") {
    Points r(1), b(1);
    double x = 0.2, y = 0.9;
    r.push_back(&x);
    b.push_back(&y);
    BipartiteInstance inst;
    inst.red = r;
    inst.blue = b;
    inst.metric = MetricKind::UnitCube;
    const auto tree = bipartite_mst(inst, SolverKind::GridBoruvka);
    REQUIRE(tree.edges.size() == 1);
    CHECK(tree.edges[0].length == doctest::Approx(0.7));
    CHECK(tree.bottleneck == doctest::Approx(0.7));
}

#include <cmath>
#include <stdexcept>

#include "doctest.h"

#include "bmst/geometry.hpp"
#include "bmst/rng.hpp"

using namespace bmst;

namespace {
Points points_1d(std::initializer_list<double> xs) {
    Points p(1);
    for (double x : xs) p.push_back(&x);
    return p;
}
} // namespace

TEST_CASE("metric names round-trip") {
    CHECK(metric_name(MetricKind::UnitCube) == "cube");
    CHECK(metric_name(MetricKind::FlatTorus) == "torus");
    CHECK(metric_from_name("cube") == MetricKind::UnitCube);
    CHECK(metric_from_name("torus") == MetricKind::FlatTorus);
    CHECK_THROWS_AS(metric_from_name("spherical"), std::invalid_argument);
}

TEST_CASE("point container bookkeeping") {
    Points p(3);
    CHECK(p.empty());
    p.push_back({0.1, 0.2, 0.3});
    p.push_back({0.4, 0.5, 0.6});
    CHECK(p.size() == 2);
    CHECK(p.ptr(1)[2] == 0.6);
}

TEST_CASE("sampling is deterministic, metric-agnostic, and in range") {
    const auto a = sample_uniform(10, 15, 2, MetricKind::UnitCube, 99);
    const auto b = sample_uniform(10, 15, 2, MetricKind::FlatTorus, 99);
    CHECK(a.n_R() == 10);
    CHECK(a.n_B() == 15);
    CHECK(a.d() == 2);
    CHECK(a.metric == MetricKind::UnitCube);
    CHECK(b.metric == MetricKind::FlatTorus);
    CHECK(a.seed == 99);
    CHECK(a.red.xs == b.red.xs);   // coordinates do not depend on the metric tag
    CHECK(a.blue.xs == b.blue.xs);
    for (double x : a.red.xs) {
        REQUIRE(x >= 0.0);
        REQUIRE(x < 1.0);
    }
    const auto c = sample_uniform(10, 15, 2, MetricKind::UnitCube, 100);
    CHECK(a.red.xs != c.red.xs);
}

TEST_CASE("distances: cube is euclidean, torus wraps") {
    const double x[2] = {0.1, 0.5};
    const double y[2] = {0.9, 0.5};
    CHECK(dist(MetricKind::UnitCube, x, y, 2) == doctest::Approx(0.8));
    CHECK(dist(MetricKind::FlatTorus, x, y, 2) == doctest::Approx(0.2));

    Rng rng(11);
    for (int i = 0; i < 200; ++i) {
        double a[3], b[3];
        for (int k = 0; k < 3; ++k) {
            a[k] = rng.uniform01();
            b[k] = rng.uniform01();
        }
        CHECK(dist(MetricKind::FlatTorus, a, b, 3) <= dist(MetricKind::UnitCube, a, b, 3) + 1e-15);
    }
}

TEST_CASE("directed and symmetric nearest-point statistics") {
    const Points R = points_1d({0.0, 0.5});
    const Points B = points_1d({0.4});
    CHECK(directed_nn_max(R, B, MetricKind::UnitCube) == doctest::Approx(0.4));
    CHECK(directed_nn_max(B, R, MetricKind::UnitCube) == doctest::Approx(0.1));
    CHECK(hausdorff(R, B, MetricKind::UnitCube) == doctest::Approx(0.4));
    CHECK(hausdorff(B, R, MetricKind::UnitCube) == doctest::Approx(0.4)); // symmetric

    const Points pts = points_1d({0.1, 0.2, 0.9});
    CHECK(nn_max(pts, MetricKind::UnitCube) == doctest::Approx(0.7));
}

TEST_CASE("occupancy scan counts dyadic cells") {
    const Points pts = points_1d({0.25, 0.75, 0.9});
    const auto scan = occupancy_scan(pts, 1);
    CHECK(scan.counts.size() == 2);
    CHECK(scan.counts[0] == 1);
    CHECK(scan.counts[1] == 2);
    CHECK(scan.max_count == 2);
    CHECK(scan.min_count == 1);

    const Points edge = points_1d({1.0}); // boundary point clamps into the last cell
    const auto scan2 = occupancy_scan(edge, 1);
    CHECK(scan2.counts[1] == 1);

    CHECK_THROWS_AS(occupancy_scan(pts, 27), std::invalid_argument);
}

TEST_CASE("occupancy scan in 2d covers all quadrants") {
    Points pts(2);
    pts.push_back({0.2, 0.2});
    pts.push_back({0.2, 0.8});
    pts.push_back({0.8, 0.2});
    pts.push_back({0.8, 0.8});
    const auto scan = occupancy_scan(pts, 1);
    CHECK(scan.counts.size() == 4);
    CHECK(scan.max_count == 1);
    CHECK(scan.min_count == 1);
}

TEST_CASE("unit ball volumes") {
    CHECK(unit_ball_volume(1) == doctest::Approx(2.0));
    CHECK(unit_ball_volume(2) == doctest::Approx(3.14159265358979));
    CHECK(unit_ball_volume(3) == doctest::Approx(4.18879020478639));
    CHECK(unit_ball_volume(4) == doctest::Approx(4.93480220054468));
}

#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace bmst {

enum class MetricKind { UnitCube, FlatTorus };

std::string metric_name(MetricKind m);
MetricKind metric_from_name(const std::string& name);

// Flat row-major point container; dimension fixed per container.
struct Points {
    int d = 1;
    std::vector<double> xs; // size() * d coordinates

    Points() = default;
    explicit Points(int dim) : d(dim) {}

    size_t size() const { return d == 0 ? 0 : xs.size() / static_cast<size_t>(d); }
    bool empty() const { return xs.empty(); }
    const double* ptr(size_t i) const { return xs.data() + i * static_cast<size_t>(d); }
    double* ptr(size_t i) { return xs.data() + i * static_cast<size_t>(d); }

    void push_back(const double* coords) { xs.insert(xs.end(), coords, coords + d); }
    void push_back(const std::vector<double>& coords);
};

struct BipartiteInstance {
    Points red;
    Points blue;
    MetricKind metric = MetricKind::UnitCube;
    uint64_t seed = 0;

    int d() const { return red.d; }
    size_t n_R() const { return red.size(); }
    size_t n_B() const { return blue.size(); }
    size_t n() const { return n_R() + n_B(); }
};

struct OccupancyScan {
    int level = 0;
    std::vector<uint32_t> counts; // 2^{level*d} dyadic cells, row-major
    uint32_t max_count = 0;
    uint32_t min_count = 0;
};

// n_R red + n_B blue i.i.d. uniform points in [0,1]^d; deterministic in seed,
// independent of the metric tag.
BipartiteInstance sample_uniform(size_t n_R, size_t n_B, int d, MetricKind metric,
                                 uint64_t seed);

double dist(MetricKind metric, const double* x, const double* y, int d);
double dist(MetricKind metric, const Points& a, size_t i, const Points& b, size_t j);

// Symmetric Hausdorff distance: max over both directed sup-inf distances.
double hausdorff(const Points& R, const Points& B, MetricKind metric);

// Directed variant: max over points of A of the distance to the nearest point of B.
double directed_nn_max(const Points& A, const Points& B, MetricKind metric);

// Max over points of the distance to the nearest *other* point of the same list.
double nn_max(const Points& pts, MetricKind metric);

// Per-dyadic-cell counts at the given level; half-open cells, boundary points
// go to the lower-index cell. Refuses levels whose cell table exceeds 2^26 cells.
OccupancyScan occupancy_scan(const Points& pts, int level);

// Volume of the d-dimensional unit ball, pi^{d/2} / Gamma(d/2 + 1).
double unit_ball_volume(int d);

} // namespace bmst

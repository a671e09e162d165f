#include "bmst/geometry.hpp"

#include <cmath>
#include <cstring>
#include <limits>
#include <stdexcept>

#include "bmst/rng.hpp"

namespace bmst {

std::string metric_name(MetricKind m) {
    return m == MetricKind::UnitCube ? "cube" : "torus";
}

MetricKind metric_from_name(const std::string& name) {
    if (name == "cube") return MetricKind::UnitCube;
    if (name == "torus") return MetricKind::FlatTorus;
    throw std::invalid_argument("unknown metric '" + name + "' (expected cube|torus)");
}

void Points::push_back(const std::vector<double>& coords) {
    if (static_cast<int>(coords.size()) != d)
        throw std::invalid_argument("point dimension mismatch");
    xs.insert(xs.end(), coords.begin(), coords.end());
}

BipartiteInstance sample_uniform(size_t n_R, size_t n_B, int d, MetricKind metric,
                                 uint64_t seed) {
    if (n_R == 0 || n_B == 0)
        throw std::invalid_argument("invalid instance: both color classes must be nonempty");
    if (d < 1) throw std::invalid_argument("invalid instance: dimension must be >= 1");
    BipartiteInstance inst;
    inst.metric = metric;
    inst.seed = seed;
    inst.red = Points(d);
    inst.blue = Points(d);
    inst.red.xs.resize(n_R * static_cast<size_t>(d));
    inst.blue.xs.resize(n_B * static_cast<size_t>(d));
    Rng rng(seed);
    for (auto& x : inst.red.xs) x = rng.uniform01();
    for (auto& x : inst.blue.xs) x = rng.uniform01();
    return inst;
}

double dist(MetricKind metric, const double* x, const double* y, int d) {
    double s = 0.0;
    if (metric == MetricKind::UnitCube) {
        for (int i = 0; i < d; ++i) {
            const double dx = x[i] - y[i];
            s += dx * dx;
        }
    } else {
        // Torus metric factorizes per coordinate: min(|dx|, 1-|dx|).
        for (int i = 0; i < d; ++i) {
            double dx = std::fabs(x[i] - y[i]);
            if (dx > 0.5) dx = 1.0 - dx;
            s += dx * dx;
        }
    }
    return std::sqrt(s);
}

double dist(MetricKind metric, const Points& a, size_t i, const Points& b, size_t j) {
    if (a.d != b.d) throw std::invalid_argument("dimension mismatch");
    return dist(metric, a.ptr(i), b.ptr(j), a.d);
}

double directed_nn_max(const Points& A, const Points& B, MetricKind metric) {
    if (A.empty() || B.empty()) throw std::invalid_argument("empty point list");
    double worst = 0.0;
    for (size_t i = 0; i < A.size(); ++i) {
        double best = std::numeric_limits<double>::infinity();
        for (size_t j = 0; j < B.size(); ++j) {
            const double w = dist(metric, A, i, B, j);
            if (w < best) best = w;
        }
        if (best > worst) worst = best;
    }
    return worst;
}

double hausdorff(const Points& R, const Points& B, MetricKind metric) {
    return std::max(directed_nn_max(R, B, metric), directed_nn_max(B, R, metric));
}

double nn_max(const Points& pts, MetricKind metric) {
    if (pts.size() < 2) throw std::invalid_argument("nn_max needs at least 2 points");
    double worst = 0.0;
    for (size_t i = 0; i < pts.size(); ++i) {
        double best = std::numeric_limits<double>::infinity();
        for (size_t j = 0; j < pts.size(); ++j) {
            if (j == i) continue;
            const double w = dist(metric, pts, i, pts, j);
            if (w < best) best = w;
        }
        if (best > worst) worst = best;
    }
    return worst;
}

OccupancyScan occupancy_scan(const Points& pts, int level) {
    if (level < 0) throw std::invalid_argument("occupancy level must be >= 0");
    const int d = pts.d;
    const long bits = static_cast<long>(level) * d;
    if (bits > 26) throw std::invalid_argument("occupancy level too large for memory budget");
    const uint64_t side = 1ULL << level;
    const size_t cells = static_cast<size_t>(1) << bits;
    OccupancyScan scan;
    scan.level = level;
    scan.counts.assign(cells, 0);
    for (size_t i = 0; i < pts.size(); ++i) {
        const double* x = pts.ptr(i);
        size_t idx = 0;
        for (int a = 0; a < d; ++a) {
            // Half-open cells [m 2^-k, (m+1) 2^-k); the right boundary point 1.0
            // lands in the last cell deterministically.
            uint64_t c = static_cast<uint64_t>(std::floor(x[a] * static_cast<double>(side)));
            if (c >= side) c = side - 1;
            idx = idx * side + c;
        }
        ++scan.counts[idx];
    }
    scan.max_count = 0;
    scan.min_count = std::numeric_limits<uint32_t>::max();
    for (uint32_t c : scan.counts) {
        scan.max_count = std::max(scan.max_count, c);
        scan.min_count = std::min(scan.min_count, c);
    }
    if (scan.counts.empty()) scan.min_count = 0;
    return scan;
}

double unit_ball_volume(int d) {
    if (d < 1) throw std::invalid_argument("dimension must be >= 1");
    return std::pow(M_PI, 0.5 * d) / std::tgamma(0.5 * d + 1.0);
}

} // namespace bmst

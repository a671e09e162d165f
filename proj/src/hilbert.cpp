#include "bmst/hilbert.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

namespace bmst {

namespace {

constexpr int kDepth = 10; // bits per axis

// Skilling's transpose algorithm: converts per-axis coordinates into the
// Hilbert transpose form in place, then the index is the bit-interleave.
void axes_to_transpose(uint32_t* X, int bits, int n) {
    uint32_t M = 1u << (bits - 1);
    // Inverse undo
    for (uint32_t Q = M; Q > 1; Q >>= 1) {
        const uint32_t P = Q - 1;
        for (int i = 0; i < n; ++i) {
            if (X[i] & Q) {
                X[0] ^= P; // invert
            } else {
                const uint32_t t = (X[0] ^ X[i]) & P;
                X[0] ^= t;
                X[i] ^= t;
            }
        }
    }
    // Gray encode
    for (int i = 1; i < n; ++i) X[i] ^= X[i - 1];
    uint32_t t = 0;
    for (uint32_t Q = M; Q > 1; Q >>= 1)
        if (X[n - 1] & Q) t ^= Q - 1;
    for (int i = 0; i < n; ++i) X[i] ^= t;
}

uint64_t interleave_transpose(const uint32_t* X, int bits, int n) {
    uint64_t key = 0;
    for (int b = bits - 1; b >= 0; --b)
        for (int i = 0; i < n; ++i)
            key = (key << 1) | ((X[i] >> b) & 1u);
    return key;
}

} // namespace

uint64_t hilbert_index(const double* x, int d) {
    if (d < 1 || d > 3) throw std::invalid_argument("hilbert_index supports d in {1,2,3}");
    const uint32_t side = 1u << kDepth;
    uint32_t X[3] = {0, 0, 0};
    for (int a = 0; a < d; ++a) {
        double v = x[a];
        if (v < 0.0) v = 0.0;
        long c = static_cast<long>(std::floor(v * side));
        if (c >= side) c = side - 1;
        X[a] = static_cast<uint32_t>(c);
    }
    if (d == 1) return X[0];
    axes_to_transpose(X, kDepth, d);
    return interleave_transpose(X, kDepth, d);
}

std::vector<int> hilbert_order(const Points& pts) {
    std::vector<uint64_t> keys(pts.size());
    for (size_t i = 0; i < pts.size(); ++i) keys[i] = hilbert_index(pts.ptr(i), pts.d);
    std::vector<int> order(pts.size());
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(), [&](int a, int b) {
        if (keys[a] != keys[b]) return keys[a] < keys[b];
        return a < b; // equal-cell ties broken by point index
    });
    return order;
}

double hilbert_chain_cost(const Points& pts, double p) {
    const auto order = hilbert_order(pts);
    double s = 0.0;
    for (size_t i = 1; i < order.size(); ++i)
        s += std::pow(dist(MetricKind::UnitCube, pts, order[i - 1], pts, order[i]), p);
    return s;
}

} // namespace bmst

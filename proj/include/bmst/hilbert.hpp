#pragma once

#include <cstdint>
#include <vector>

#include "bmst/geometry.hpp"

namespace bmst {

// Hilbert-curve index of a point of [0,1]^d at recursion depth 10 per axis
// (grid 2^10 cells per side), d in {1,2,3}. Bijective on grid cells; points
// mapping to the same cell are ordered by point index at the call sites.
uint64_t hilbert_index(const double* x, int d);

// Point indices sorted by (hilbert index, point index).
std::vector<int> hilbert_order(const Points& pts);

// Cost of the path visiting the points in Hilbert order, edge lengths to the
// power p (cube metric).
double hilbert_chain_cost(const Points& pts, double p);

} // namespace bmst

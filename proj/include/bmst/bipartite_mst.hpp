#pragma once

#include <cstdint>
#include <vector>

#include "bmst/geometry.hpp"
#include "bmst/graph.hpp"

namespace bmst {

enum class SolverKind { Brute, GridBoruvka };

// Exact bipartite MST over the complete red/blue graph with Euclidean (or
// torus) edge lengths. Vertex ids: reds 0..n_R-1, blues n_R..n-1.
//   Brute        materializes all n_R*n_B edges (refuses beyond 4e6 edges)
//   GridBoruvka  answers nearest-opposite-color-outside-component queries
//                through a uniform grid; never materializes the edge set
SpanningTree bipartite_mst(const BipartiteInstance& inst, SolverKind solver);

// Geometric MST over one point list, all pairs allowed (mono variant of the
// same grid engine). Used by the chain bound and the mono-vs-bipartite check.
SpanningTree mono_mst(const Points& pts, MetricKind metric);

// Minimum z such that the bipartite graph with edges {dist <= z} is connected;
// binary search over the sorted candidate distances. Equals the MST bottleneck.
double bottleneck_threshold(const BipartiteInstance& inst);

// Grid-accelerated point-set statistics (exact; brute-force equivalents live
// in geometry.hpp and are used as oracles in tests).
double grid_directed_nn_max(const Points& A, const Points& B, MetricKind metric);
double grid_hausdorff(const Points& R, const Points& B, MetricKind metric);

} // namespace bmst

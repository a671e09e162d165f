#pragma once

#include <cstdint>
#include <string>
#include <utility>

#include "bmst/bipartite_mst.hpp"
#include "bmst/geometry.hpp"
#include "bmst/graph.hpp"

namespace bmst {

struct LemmaReport {
    std::string lemma_id;
    std::string instance_desc;
    bool pass = true;
    std::string witness; // present iff fail
    double slack = 0.0;  // how far the inequality is from tight (>= 0 on pass)
    std::string note;    // e.g. "vacuous" qualifiers
};

// Cut property: every vertex whose minimum incident cross-color edge is unique
// must see that edge in the tree.
LemmaReport check_cut_property(const BipartiteInstance& inst, const SpanningTree& tree);

// Empty-lens exclusion: for every tree edge {r,b} with length delta >
// hausdorff(R,B), the lens {x : dist(x,r) < delta-H and dist(x,b) < delta}
// contains no red point, and symmetrically with colors swapped. Strict
// inequalities; reports the minimum observed clearance. Cube metric only.
LemmaReport check_empty_cone(const BipartiteInstance& inst, const SpanningTree& tree);

// Exponent invariance + bottleneck optimality: the MST edge set computed from
// weights dist^p is identical for p in {0.5, 1, 2} and equals the claimed
// tree's; the claimed bottleneck equals bottleneck_threshold exactly.
LemmaReport check_p_invariance(const BipartiteInstance& inst, const SpanningTree& claimed);

// Mono-to-bipartite bound with explicit constant C = max(1, 2^{p-1}):
//   C^p(R,B) <= C * (C^p(R) + sum_r dist(B,r)^p + sum_b dist(R,b)^p).
// claimed_bipartite_cost < 0 means "solve honestly".
LemmaReport check_mono_to_bi_bound(const Points& R, const Points& B, double p,
                                   MetricKind metric = MetricKind::UnitCube,
                                   double claimed_bipartite_cost = -1.0);

// Torus/cube transfer: C^p_cube(R,B) <= C^p_torus(R,B) + C^p_cube(R_delta,B_delta)
// where the shells hold the points within delta of the boundary. Requires
// bottleneck <= delta < 1/2 (throws otherwise). If either shell is empty, no
// torus edge can wrap, the costs coincide, and the check reports vacuous.
// torus_scale rescales the torus-side cost and exists for the corruption demo.
LemmaReport check_torus_cube_transfer(const BipartiteInstance& inst, double delta,
                                      double p, double torus_scale = 1.0);

// Space-filling-curve chain bound: MST cost <= Hilbert chain cost; returns the
// chain cost and a report carrying the empirical constant chain/n^{1-p/d}.
std::pair<double, LemmaReport> hilbert_chain_bound(const Points& pts, double p);

// Bounded-difference premise (p <= 1): resampling one uniformly chosen point
// changes the cost by at most d^{p/2} * (maxdeg(T) + maxdeg(T')). Throws an
// unsupported-regime error for p > 1.
LemmaReport check_bounded_difference(const BipartiteInstance& inst, double p, uint64_t seed);

// Core of the bounded-difference check for two instances differing in one point.
LemmaReport bounded_difference_pair_report(const BipartiteInstance& a,
                                           const BipartiteInstance& b, double p);

// Same inequality evaluated on caller-supplied trees (claimed costs and
// degrees), so dishonest claims can be fed through the identical code path.
LemmaReport bounded_difference_tree_report(const BipartiteInstance& a,
                                           const BipartiteInstance& b, double p,
                                           const SpanningTree& tree_a,
                                           const SpanningTree& tree_b);

// --- corruption constructors (documented fail-path inputs for every check) ---

// Removes one vertex's unique minimum incident edge from the tree and
// reconnects the two sides through a strictly longer pair: violates the cut
// property at that vertex.
SpanningTree corrupt_cut_property(const BipartiteInstance& inst, const SpanningTree& tree);

// Swaps the longest tree edge for the farthest cross pair bridging the same
// split: a valid spanning tree that is not the MST (p-invariance fails).
SpanningTree corrupt_edge_swap(const BipartiteInstance& inst, const SpanningTree& tree);

// Two-cluster fixture whose MST carries one long bridge; the corrupted tree
// swaps the bridge for a deeper pair so same-color points land in its lens.
std::pair<BipartiteInstance, SpanningTree> empty_cone_corruption_fixture();

// Maximum-weight bipartite spanning tree (anti-MST), used as a decisively bad
// "claimed" tree for the mono-to-bi corruption demo.
SpanningTree bipartite_max_tree(const BipartiteInstance& inst);

// Alternating red/blue path ordered to stretch across the cube (reds by
// ascending first coordinate, blues descending), leftovers of the longer color
// attached as leaves round-robin. Low maximum degree but huge cost: feeding it
// as a claimed tree breaks the bounded-difference inequality decisively.
SpanningTree bipartite_zigzag_path(const BipartiteInstance& inst);

} // namespace bmst

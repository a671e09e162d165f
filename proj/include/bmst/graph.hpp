#pragma once

#include <cstdint>
#include <limits>
#include <vector>

namespace bmst {

struct GraphEdge {
    int u = 0;
    int v = 0;
    double w = 0.0; // +infinity encodes an absent edge
};

struct WeightedGraph {
    int m = 0; // vertex count
    std::vector<GraphEdge> edges;
};

inline double inf_weight() { return std::numeric_limits<double>::infinity(); }

class DisjointSet {
public:
    explicit DisjointSet(int n) : parent_(n), size_(n, 1) {
        for (int i = 0; i < n; ++i) parent_[i] = i;
    }
    int find(int x) {
        while (parent_[x] != x) {
            parent_[x] = parent_[parent_[x]];
            x = parent_[x];
        }
        return x;
    }
    // Returns the new root, or -1 if already united.
    int unite(int a, int b) {
        a = find(a);
        b = find(b);
        if (a == b) return -1;
        if (size_[a] < size_[b]) std::swap(a, b);
        parent_[b] = a;
        size_[a] += size_[b];
        return a;
    }
    int size(int x) { return size_[find(x)]; }
    int raw_size(int root) const { return size_[root]; }

private:
    std::vector<int> parent_;
    std::vector<int> size_;
};

struct TreeEdge {
    int u = 0;
    int v = 0;
    double length = 0.0;
};

struct SpanningTree {
    int n = 0;
    std::vector<TreeEdge> edges;   // canonical order: (length, u, v) ascending, u < v
    std::vector<int> degree;
    double bottleneck = 0.0;

    // Total cost under exponent p (edge lengths are stored un-exponentiated).
    double cost(double p) const;
    int max_degree() const;
};

struct MergeEvent {
    double z = 0.0; // threshold at which the union happens
    int size_a = 0; // sizes of the two components being merged
    int size_b = 0;
};

struct MergeProfile {
    int n = 0;
    std::vector<MergeEvent> events; // nondecreasing in z
};

// Kruskal on an explicit weighted graph. Absent (+inf) edges never participate.
// Ties broken by (weight, lower vertex pair) lexicographically. Throws
// std::runtime_error naming two unreachable vertices if disconnected.
std::pair<SpanningTree, MergeProfile> kruskal(const WeightedGraph& g);

// Replays a spanning tree's edges in sorted order through a union-find; for a
// tree that is the graph's MST under distinct weights this reproduces the full
// Kruskal merge profile.
MergeProfile profile_from_tree(const SpanningTree& tree);

// Sum of merge thresholds = integral of (C(z) - 1) dz; equals the MST cost.
double component_integral(const MergeProfile& profile);

// Integral of (C_k(z) - 1) dz from the same sweep: merges of two size->=k
// components are down-jumps (+z), merges of two size-<k components into a
// size->=k one are up-jumps (-z), everything else is neutral. k=1 reduces to
// component_integral.
double ck_integral(const MergeProfile& profile, int k);

struct GkReduction {
    int k = 0;
    std::vector<std::vector<int>> classes;    // disjoint cover, every class >= k
    std::vector<int> class_of;                // vertex -> class index
    WeightedGraph reduced;                    // min cross-class weights
    double reduced_mst_cost = 0.0;
};

// Partition into classes of size >= k seeded at the Kruskal sweep's up-jumps;
// later vertices are absorbed into the smallest-index class of the component
// they join. Duplicate weights are perturbed deterministically by edge index
// at relative scale 1e-12 before the sweep.
GkReduction gk_reduction(const WeightedGraph& g, int k);

} // namespace bmst

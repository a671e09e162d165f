#include "bmst/graph.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>
#include <string>

namespace bmst {

double SpanningTree::cost(double p) const {
    double s = 0.0;
    for (const auto& e : edges) s += std::pow(e.length, p);
    return s;
}

int SpanningTree::max_degree() const {
    int best = 0;
    for (int d : degree) best = std::max(best, d);
    return best;
}

namespace {

struct SortableEdge {
    double w;
    int u, v;   // normalized u < v
    bool operator<(const SortableEdge& o) const {
        if (w != o.w) return w < o.w;
        if (u != o.u) return u < o.u;
        return v < o.v;
    }
};

std::vector<SortableEdge> finite_sorted_edges(const WeightedGraph& g) {
    std::vector<SortableEdge> es;
    es.reserve(g.edges.size());
    for (const auto& e : g.edges) {
        if (!std::isfinite(e.w)) continue; // absent edge
        if (e.u == e.v) throw std::invalid_argument("self-loop in graph");
        SortableEdge s{e.w, std::min(e.u, e.v), std::max(e.u, e.v)};
        es.push_back(s);
    }
    std::sort(es.begin(), es.end());
    return es;
}

void finalize_tree(SpanningTree& t) {
    std::sort(t.edges.begin(), t.edges.end(), [](const TreeEdge& a, const TreeEdge& b) {
        if (a.length != b.length) return a.length < b.length;
        if (a.u != b.u) return a.u < b.u;
        return a.v < b.v;
    });
    t.degree.assign(t.n, 0);
    t.bottleneck = 0.0;
    for (const auto& e : t.edges) {
        ++t.degree[e.u];
        ++t.degree[e.v];
        t.bottleneck = std::max(t.bottleneck, e.length);
    }
}

} // namespace

std::pair<SpanningTree, MergeProfile> kruskal(const WeightedGraph& g) {
    auto es = finite_sorted_edges(g);
    DisjointSet dsu(g.m);
    SpanningTree tree;
    tree.n = g.m;
    MergeProfile profile;
    profile.n = g.m;
    for (const auto& e : es) {
        const int ra = dsu.find(e.u);
        const int rb = dsu.find(e.v);
        if (ra == rb) continue;
        profile.events.push_back({e.w, dsu.raw_size(ra), dsu.raw_size(rb)});
        dsu.unite(ra, rb);
        tree.edges.push_back({e.u, e.v, e.w});
    }
    if (static_cast<int>(tree.edges.size()) != g.m - 1) {
        // Name two unreachable vertices for the error message.
        int a = 0;
        int b = -1;
        const int ra = dsu.find(0);
        for (int i = 1; i < g.m; ++i)
            if (dsu.find(i) != ra) { b = i; break; }
        throw std::runtime_error("graph disconnected: no finite-weight path between vertices " +
                                 std::to_string(a) + " and " + std::to_string(b));
    }
    finalize_tree(tree);
    return {tree, profile};
}

MergeProfile profile_from_tree(const SpanningTree& tree) {
    std::vector<TreeEdge> es = tree.edges;
    std::sort(es.begin(), es.end(), [](const TreeEdge& a, const TreeEdge& b) {
        if (a.length != b.length) return a.length < b.length;
        const int au = std::min(a.u, a.v), av = std::max(a.u, a.v);
        const int bu = std::min(b.u, b.v), bv = std::max(b.u, b.v);
        if (au != bu) return au < bu;
        return av < bv;
    });
    DisjointSet dsu(tree.n);
    MergeProfile profile;
    profile.n = tree.n;
    for (const auto& e : es) {
        const int ra = dsu.find(e.u);
        const int rb = dsu.find(e.v);
        if (ra == rb) throw std::invalid_argument("edge list contains a cycle");
        profile.events.push_back({e.length, dsu.raw_size(ra), dsu.raw_size(rb)});
        dsu.unite(ra, rb);
    }
    return profile;
}

double component_integral(const MergeProfile& profile) {
    double s = 0.0;
    for (const auto& ev : profile.events) s += ev.z;
    return s;
}

double ck_integral(const MergeProfile& profile, int k) {
    if (k < 1) throw std::invalid_argument("k must be >= 1");
    double down = 0.0, up = 0.0;
    for (const auto& ev : profile.events) {
        const bool a_big = ev.size_a >= k;
        const bool b_big = ev.size_b >= k;
        if (a_big && b_big) {
            down += ev.z;
        } else if (!a_big && !b_big && ev.size_a + ev.size_b >= k) {
            up += ev.z;
        }
    }
    return down - up;
}

GkReduction gk_reduction(const WeightedGraph& g, int k) {
    if (k < 2) throw std::invalid_argument("gk_reduction requires k >= 2");
    if (k > g.m) throw std::invalid_argument("no valid partition: k exceeds vertex count");

    auto es = finite_sorted_edges(g);
    // Perturb duplicate weights deterministically: within each equal-weight run
    // (already ordered by vertex pair), add rank * 1e-12 * max(1,|w|).
    for (size_t i = 0; i < es.size();) {
        size_t j = i + 1;
        while (j < es.size() && es[j].w == es[i].w) ++j;
        if (j - i > 1) {
            const double scale = 1e-12 * std::max(1.0, std::fabs(es[i].w));
            for (size_t r = i + 1; r < j; ++r) es[r].w += static_cast<double>(r - i) * scale;
            std::sort(es.begin() + static_cast<long>(i), es.end());
            // Re-scan from i in case the perturbed run now interleaves with later weights.
            continue;
        }
        i = j;
    }
    std::sort(es.begin(), es.end());

    DisjointSet dsu(g.m);
    // Per-root bookkeeping: members of still-unseeded components (small-to-large),
    // and the smallest class index present in seeded components.
    std::vector<std::vector<int>> members(g.m);
    std::vector<int> min_class(g.m, -1); // -1 = unseeded
    for (int i = 0; i < g.m; ++i) members[i] = {i};

    std::vector<int> class_of(g.m, -1);
    int next_class = 0;
    int united = 0;

    for (const auto& e : es) {
        int ra = dsu.find(e.u);
        int rb = dsu.find(e.v);
        if (ra == rb) continue;
        const int sa = dsu.raw_size(ra), sb = dsu.raw_size(rb);
        const int ca = min_class[ra], cb = min_class[rb];
        const int nr = dsu.unite(ra, rb);
        ++united;
        if (ca < 0 && cb < 0) {
            if (sa + sb >= k) {
                // Up-jump: both halves' members seed a fresh class.
                const int cls = next_class++;
                for (int r : {ra, rb})
                    for (int vtx : members[r]) class_of[vtx] = cls;
                members[ra].clear();
                members[rb].clear();
                members[nr].clear();
                min_class[nr] = cls;
            } else {
                // Still sub-k: merge member lists small-to-large.
                auto& small = members[ra].size() < members[rb].size() ? members[ra] : members[rb];
                auto& big = members[ra].size() < members[rb].size() ? members[rb] : members[ra];
                big.insert(big.end(), small.begin(), small.end());
                small.clear();
                if (&big != &members[nr]) members[nr] = std::move(big);
                min_class[nr] = -1;
            }
        } else if (ca >= 0 && cb >= 0) {
            min_class[nr] = std::min(ca, cb);
        } else {
            // Sub-k component absorbed by a seeded one: its members join the
            // smallest-index class of the seeded side.
            const int cls = std::max(ca, cb);
            const int unseeded = (ca < 0) ? ra : rb;
            for (int vtx : members[unseeded]) class_of[vtx] = cls;
            members[unseeded].clear();
            members[ra].clear();
            members[rb].clear();
            members[nr].clear();
            min_class[nr] = cls;
        }
    }
    if (united != g.m - 1) throw std::runtime_error("gk_reduction: graph disconnected");

    GkReduction red;
    red.k = k;
    red.class_of = class_of;
    red.classes.assign(next_class, {});
    for (int v = 0; v < g.m; ++v) {
        if (class_of[v] < 0) throw std::runtime_error("gk_reduction: unassigned vertex");
        red.classes[class_of[v]].push_back(v);
    }

    // Reduced graph: min cross-class weight per class pair.
    red.reduced.m = next_class;
    std::vector<double> minw(static_cast<size_t>(next_class) * next_class, inf_weight());
    for (const auto& e : es) {
        const int ca = class_of[e.u], cb = class_of[e.v];
        if (ca == cb) continue;
        auto& slot = minw[static_cast<size_t>(std::min(ca, cb)) * next_class + std::max(ca, cb)];
        slot = std::min(slot, e.w);
    }
    for (int a = 0; a < next_class; ++a)
        for (int b = a + 1; b < next_class; ++b) {
            const double w = minw[static_cast<size_t>(a) * next_class + b];
            if (std::isfinite(w)) red.reduced.edges.push_back({a, b, w});
        }
    if (next_class == 1) {
        red.reduced_mst_cost = 0.0;
    } else {
        red.reduced_mst_cost = kruskal(red.reduced).first.cost(1.0);
    }
    return red;
}

} // namespace bmst

#include "bmst/bipartite_mst.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>

namespace bmst {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// Uniform cell grid over [0,1]^d in CSR layout. Cell width is exactly 1/G so
// torus ring arithmetic tiles the box with no gap at the wrap seam.
struct CellGrid {
    int d = 1;
    int G = 1;
    double cellw = 1.0;
    bool torus = false;
    std::vector<int> start; // size G^d + 1
    std::vector<int> ids;   // point ids grouped by cell

    static CellGrid build(const Points& pts, MetricKind metric, double per_cell) {
        CellGrid g;
        g.d = pts.d;
        const double n = static_cast<double>(pts.size());
        g.G = std::max(1, static_cast<int>(std::floor(std::pow(n / per_cell, 1.0 / g.d))));
        g.cellw = 1.0 / g.G;
        g.torus = metric == MetricKind::FlatTorus;
        const size_t ncells = static_cast<size_t>(std::pow(static_cast<double>(g.G), g.d) + 0.5);
        std::vector<int> count(ncells, 0);
        std::vector<int> cell(pts.size());
        for (size_t i = 0; i < pts.size(); ++i) {
            cell[i] = g.cell_of(pts.ptr(i));
            ++count[cell[i]];
        }
        g.start.assign(ncells + 1, 0);
        for (size_t c = 0; c < ncells; ++c) g.start[c + 1] = g.start[c] + count[c];
        g.ids.resize(pts.size());
        std::vector<int> cursor(g.start.begin(), g.start.end() - 1);
        for (size_t i = 0; i < pts.size(); ++i) g.ids[cursor[cell[i]]++] = static_cast<int>(i);
        return g;
    }

    int axis_cell(double x) const {
        int c = static_cast<int>(std::floor(x * G));
        if (c < 0) c = 0;
        if (c >= G) c = G - 1;
        return c;
    }

    int cell_of(const double* x) const {
        int idx = 0;
        for (int a = 0; a < d; ++a) idx = idx * G + axis_cell(x[a]);
        return idx;
    }

    void coords_of(const double* x, int* c) const {
        for (int a = 0; a < d; ++a) c[a] = axis_cell(x[a]);
    }

    int wrap(int c) const {
        if (!torus) return c;
        c %= G;
        return c < 0 ? c + G : c;
    }

    bool in_range(int c) const { return torus || (c >= 0 && c < G); }

    int max_ring() const { return torus ? G / 2 : G - 1; }

    // Visit every cell whose Chebyshev cell-distance from `c` is exactly r.
    // May visit a wrapped cell more than once when 2r+1 > G (harmless).
    template <class F>
    void visit_ring(const int* c, int r, F&& f) const {
        if (r == 0) {
            int idx = 0;
            for (int a = 0; a < d; ++a) idx = idx * G + c[a];
            f(idx);
            return;
        }
        auto cellid1 = [&](int x0) { return wrap(x0); };
        auto cellid2 = [&](int x0, int x1) { return wrap(x0) * G + wrap(x1); };
        auto cellid3 = [&](int x0, int x1, int x2) {
            return (wrap(x0) * G + wrap(x1)) * G + wrap(x2);
        };
        if (d == 1) {
            for (int s : {-r, r})
                if (in_range(c[0] + s)) f(cellid1(c[0] + s));
        } else if (d == 2) {
            for (int s : {-r, r}) {
                if (in_range(c[0] + s))
                    for (int y = c[1] - r; y <= c[1] + r; ++y)
                        if (in_range(y)) f(cellid2(c[0] + s, y));
            }
            for (int x = c[0] - r + 1; x <= c[0] + r - 1; ++x) {
                if (!in_range(x)) continue;
                for (int s : {-r, r})
                    if (in_range(c[1] + s)) f(cellid2(x, c[1] + s));
            }
        } else if (d == 3) {
            for (int s : {-r, r}) {
                if (!in_range(c[0] + s)) continue;
                for (int y = c[1] - r; y <= c[1] + r; ++y) {
                    if (!in_range(y)) continue;
                    for (int z = c[2] - r; z <= c[2] + r; ++z)
                        if (in_range(z)) f(cellid3(c[0] + s, y, z));
                }
            }
            for (int x = c[0] - r + 1; x <= c[0] + r - 1; ++x) {
                if (!in_range(x)) continue;
                for (int s : {-r, r}) {
                    if (in_range(c[1] + s))
                        for (int z = c[2] - r; z <= c[2] + r; ++z)
                            if (in_range(z)) f(cellid3(x, c[1] + s, z));
                }
                for (int y = c[1] - r + 1; y <= c[1] + r - 1; ++y) {
                    if (!in_range(y)) continue;
                    for (int s : {-r, r})
                        if (in_range(c[2] + s)) f(cellid3(x, y, c[2] + s));
                }
            }
        } else {
            throw std::invalid_argument("grid supports d in {1,2,3}");
        }
    }
};

struct Candidate {
    int target = -1;
    double w = kInf;
};

// Borůvka over a geometric point set: per round every component adopts its
// minimum outgoing edge under the strict total order (w, min id, max id).
// Candidate targets persist across rounds: a previously found nearest point
// outside v's component stays nearest as long as it is still outside, because
// components only grow.
SpanningTree boruvka_grid(const Points& pts, const std::vector<uint8_t>& color,
                          bool bipartite, MetricKind metric) {
    const int n = static_cast<int>(pts.size());
    if (n < 2) throw std::invalid_argument("need at least 2 points");
    const int d = pts.d;
    CellGrid grid = CellGrid::build(pts, metric, 2.0);

    DisjointSet dsu(n);
    std::vector<Candidate> cand(n);
    SpanningTree tree;
    tree.n = n;
    tree.edges.reserve(n - 1);

    std::vector<int> order(n);
    std::iota(order.begin(), order.end(), 0);
    std::vector<double> sort_key(n, 0.0);
    std::vector<double> best_w(n, kInf);
    std::vector<int> best_u(n, -1), best_v(n, -1);
    std::vector<int> touched;
    touched.reserve(n);

    auto edge_better = [](double w, int a, int b, double bw, int ba, int bb) {
        if (w != bw) return w < bw;
        const int lo = std::min(a, b), hi = std::max(a, b);
        const int blo = std::min(ba, bb), bhi = std::max(ba, bb);
        if (lo != blo) return lo < blo;
        return hi < bhi;
    };

    int components = n;
    std::vector<int> ccoord(3, 0);
    while (components > 1) {
        // Phase 1: against the frozen partition, give every point an exact
        // nearest valid target (or a certificate that it cannot beat its
        // component's current best edge).
        for (int v = 0; v < n; ++v) {
            const Candidate& c = cand[v];
            const bool valid = c.target >= 0 && dsu.find(c.target) != dsu.find(v);
            sort_key[v] = valid ? c.w : kInf;
            if (!valid) cand[v].target = -1;
        }
        std::sort(order.begin(), order.end(), [&](int a, int b) {
            if (sort_key[a] != sort_key[b]) return sort_key[a] < sort_key[b];
            return a < b;
        });

        for (int v : order) {
            const int rv = dsu.find(v);
            int u_loc = cand[v].target;
            double w_loc = u_loc >= 0 ? cand[v].w : kInf;
            if (u_loc < 0) {
                // Ring search outward from v's cell. Ring r's points are at
                // distance >= (r-1)*cellw. Two stop conditions:
                //   - bound exceeds the local best: v's nearest is certified
                //     exact (safe to cache for later rounds);
                //   - bound exceeds the component's current best edge: v
                //     cannot improve this round, but its own nearest is NOT
                //     certified, so nothing may be cached.
                grid.coords_of(pts.ptr(v), ccoord.data());
                const int rmax = grid.max_ring();
                bool exact = true;
                for (int r = 0; r <= rmax; ++r) {
                    const double lower = (r - 1) * grid.cellw;
                    if (lower > w_loc) break;
                    if (lower > best_w[rv]) {
                        exact = false;
                        break;
                    }
                    grid.visit_ring(ccoord.data(), r, [&](int cellidx) {
                        for (int k = grid.start[cellidx]; k < grid.start[cellidx + 1]; ++k) {
                            const int u = grid.ids[k];
                            if (u == v) continue;
                            if (bipartite && color[u] == color[v]) continue;
                            if (dsu.find(u) == rv) continue;
                            const double w = dist(metric, pts.ptr(v), pts.ptr(u), d);
                            if (w < w_loc || (w == w_loc && u < u_loc)) {
                                w_loc = w;
                                u_loc = u;
                            }
                        }
                    });
                }
                if (u_loc >= 0 && exact) cand[v] = {u_loc, w_loc};
            }
            if (u_loc >= 0 && edge_better(w_loc, v, u_loc, best_w[rv], best_u[rv], best_v[rv])) {
                if (best_u[rv] < 0) touched.push_back(rv);
                best_w[rv] = w_loc;
                best_u[rv] = v;
                best_v[rv] = u_loc;
            }
        }

        // Phase 2: apply the collected component-best edges.
        for (int rv : touched) {
            const int a = best_u[rv], b = best_v[rv];
            if (dsu.unite(a, b) >= 0) {
                tree.edges.push_back({std::min(a, b), std::max(a, b), best_w[rv]});
                --components;
            }
            best_w[rv] = kInf;
            best_u[rv] = best_v[rv] = -1;
        }
        if (touched.empty())
            throw std::runtime_error("geometric MST: no outgoing edge found (disconnected?)");
        touched.clear();
    }

    std::sort(tree.edges.begin(), tree.edges.end(), [](const TreeEdge& a, const TreeEdge& b) {
        if (a.length != b.length) return a.length < b.length;
        if (a.u != b.u) return a.u < b.u;
        return a.v < b.v;
    });
    tree.degree.assign(n, 0);
    tree.bottleneck = 0.0;
    for (const auto& e : tree.edges) {
        ++tree.degree[e.u];
        ++tree.degree[e.v];
        tree.bottleneck = std::max(tree.bottleneck, e.length);
    }
    return tree;
}

std::vector<uint8_t> merged_colors(const BipartiteInstance& inst) {
    std::vector<uint8_t> color(inst.n(), 0);
    std::fill(color.begin() + static_cast<long>(inst.n_R()), color.end(), uint8_t{1});
    return color;
}

Points merged_points(const BipartiteInstance& inst) {
    Points all(inst.d());
    all.xs = inst.red.xs;
    all.xs.insert(all.xs.end(), inst.blue.xs.begin(), inst.blue.xs.end());
    return all;
}

SpanningTree brute_bipartite(const BipartiteInstance& inst) {
    const size_t nedges = inst.n_R() * inst.n_B();
    if (nedges > 4000000)
        throw std::invalid_argument("Brute solver refuses > 4e6 edges; use GridBoruvka");
    WeightedGraph g;
    g.m = static_cast<int>(inst.n());
    g.edges.reserve(nedges);
    const int nR = static_cast<int>(inst.n_R());
    for (size_t i = 0; i < inst.n_R(); ++i)
        for (size_t j = 0; j < inst.n_B(); ++j)
            g.edges.push_back({static_cast<int>(i), nR + static_cast<int>(j),
                               dist(inst.metric, inst.red, i, inst.blue, j)});
    return kruskal(g).first;
}

} // namespace

SpanningTree bipartite_mst(const BipartiteInstance& inst, SolverKind solver) {
    if (inst.n_R() == 0 || inst.n_B() == 0)
        throw std::invalid_argument("invalid instance: both color classes must be nonempty");
    if (solver == SolverKind::Brute) return brute_bipartite(inst);
    return boruvka_grid(merged_points(inst), merged_colors(inst), true, inst.metric);
}

SpanningTree mono_mst(const Points& pts, MetricKind metric) {
    if (pts.size() == 1) {
        SpanningTree t;
        t.n = 1;
        t.degree = {0};
        return t;
    }
    return boruvka_grid(pts, std::vector<uint8_t>(pts.size(), 0), false, metric);
}

double bottleneck_threshold(const BipartiteInstance& inst) {
    const size_t nedges = inst.n_R() * inst.n_B();
    if (nedges > 4000000)
        throw std::invalid_argument("bottleneck_threshold materializes all candidate distances; instance too large");
    const int nR = static_cast<int>(inst.n_R());
    const int n = static_cast<int>(inst.n());
    struct Cand {
        double w;
        int u, v;
    };
    std::vector<Cand> cands;
    cands.reserve(nedges);
    for (size_t i = 0; i < inst.n_R(); ++i)
        for (size_t j = 0; j < inst.n_B(); ++j)
            cands.push_back({dist(inst.metric, inst.red, i, inst.blue, j),
                             static_cast<int>(i), nR + static_cast<int>(j)});
    std::sort(cands.begin(), cands.end(), [](const Cand& a, const Cand& b) { return a.w < b.w; });

    auto connected_at = [&](size_t hi) {
        // All edges with index <= hi present.
        DisjointSet dsu(n);
        int unions = 0;
        for (size_t k = 0; k <= hi; ++k)
            if (dsu.unite(cands[k].u, cands[k].v) >= 0 && ++unions == n - 1) return true;
        return unions == n - 1;
    };

    size_t lo = static_cast<size_t>(n) - 2; // need at least n-1 edges
    size_t hi = cands.size() - 1;
    if (!connected_at(hi)) throw std::runtime_error("bipartite graph disconnected");
    while (lo < hi) {
        const size_t mid = lo + (hi - lo) / 2;
        if (connected_at(mid))
            hi = mid;
        else
            lo = mid + 1;
    }
    return cands[hi].w;
}

namespace {

double grid_nn_query(const CellGrid& grid, const Points& B, const double* x,
                     MetricKind metric) {
    int c[3] = {0, 0, 0};
    grid.coords_of(x, c);
    double best = kInf;
    const int rmax = grid.max_ring();
    for (int r = 0; r <= rmax; ++r) {
        const double lower = (r - 1) * grid.cellw;
        if (lower > best) break;
        grid.visit_ring(c, r, [&](int cellidx) {
            for (int k = grid.start[cellidx]; k < grid.start[cellidx + 1]; ++k) {
                const double w = dist(metric, x, B.ptr(grid.ids[k]), B.d);
                if (w < best) best = w;
            }
        });
    }
    return best;
}

} // namespace

double grid_directed_nn_max(const Points& A, const Points& B, MetricKind metric) {
    if (A.empty() || B.empty()) throw std::invalid_argument("empty point list");
    CellGrid grid = CellGrid::build(B, metric, 2.0);
    double worst = 0.0;
    for (size_t i = 0; i < A.size(); ++i)
        worst = std::max(worst, grid_nn_query(grid, B, A.ptr(i), metric));
    return worst;
}

double grid_hausdorff(const Points& R, const Points& B, MetricKind metric) {
    return std::max(grid_directed_nn_max(R, B, metric),
                    grid_directed_nn_max(B, R, metric));
}

} // namespace bmst

#include "bmst/structure_checks.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <set>
#include <sstream>
#include <stdexcept>

#include "bmst/hilbert.hpp"
#include "bmst/rng.hpp"

namespace bmst {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

std::string describe(const BipartiteInstance& inst) {
    std::ostringstream os;
    os << "n_R=" << inst.n_R() << " n_B=" << inst.n_B() << " d=" << inst.d()
       << " metric=" << metric_name(inst.metric) << " seed=" << inst.seed;
    return os.str();
}

void require_match(const BipartiteInstance& inst, const SpanningTree& tree) {
    if (tree.n != static_cast<int>(inst.n()))
        throw std::invalid_argument("tree/instance mismatch: vertex counts differ");
}

// Position of vertex id within the instance (reds first, blues after).
const double* vertex_ptr(const BipartiteInstance& inst, int id) {
    const int nR = static_cast<int>(inst.n_R());
    return id < nR ? inst.red.ptr(id) : inst.blue.ptr(id - nR);
}

bool is_red(const BipartiteInstance& inst, int id) {
    return id < static_cast<int>(inst.n_R());
}

std::set<std::pair<int, int>> edge_set(const SpanningTree& t) {
    std::set<std::pair<int, int>> s;
    for (const auto& e : t.edges) s.insert({std::min(e.u, e.v), std::max(e.u, e.v)});
    return s;
}

} // namespace

LemmaReport check_cut_property(const BipartiteInstance& inst, const SpanningTree& tree) {
    require_match(inst, tree);
    LemmaReport rep;
    rep.lemma_id = "cut_property";
    rep.instance_desc = describe(inst);
    const int nR = static_cast<int>(inst.n_R());
    const int n = static_cast<int>(inst.n());
    const auto in_tree = edge_set(tree);
    double min_gap = kInf;
    for (int v = 0; v < n; ++v) {
        // Minimum incident cross-color edge of v, plus the runner-up weight.
        int best = -1;
        double bw = kInf, second = kInf;
        const int lo = is_red(inst, v) ? nR : 0;
        const int hi = is_red(inst, v) ? n : nR;
        for (int u = lo; u < hi; ++u) {
            const double w = dist(inst.metric, vertex_ptr(inst, v), vertex_ptr(inst, u), inst.d());
            if (w < bw) {
                second = bw;
                bw = w;
                best = u;
            } else if (w < second) {
                second = w;
            }
        }
        if (best < 0 || !(bw < second)) continue; // not unique: nothing enforced
        min_gap = std::min(min_gap, second - bw);
        if (!in_tree.count({std::min(v, best), std::max(v, best)})) {
            rep.pass = false;
            std::ostringstream os;
            os << "vertex " << v << ": unique minimum incident edge (" << v << "," << best
               << ") of length " << bw << " missing from tree";
            rep.witness = os.str();
            rep.slack = -(second - bw);
            return rep;
        }
    }
    rep.slack = std::isfinite(min_gap) ? min_gap : 0.0;
    return rep;
}

LemmaReport check_empty_cone(const BipartiteInstance& inst, const SpanningTree& tree) {
    require_match(inst, tree);
    if (inst.metric != MetricKind::UnitCube)
        throw std::invalid_argument("empty-lens check is stated for the cube metric");
    LemmaReport rep;
    rep.lemma_id = "empty_lens";
    rep.instance_desc = describe(inst);
    const double H = hausdorff(inst.red, inst.blue, inst.metric);
    const int nR = static_cast<int>(inst.n_R());
    double clearance = kInf;
    int checked = 0;
    for (const auto& e : tree.edges) {
        const double delta = e.length;
        if (!(delta > H)) continue;
        ++checked;
        const int r = is_red(inst, e.u) ? e.u : e.v;
        const int b = is_red(inst, e.u) ? e.v : e.u;
        const double* pr = vertex_ptr(inst, r);
        const double* pb = vertex_ptr(inst, b);
        // Same-color exclusion near both endpoints; margins are positive when
        // a point is safely outside the (strict-inequality) lens.
        auto scan = [&](int lo, int hi, int self, const double* near_pt, const double* far_pt) {
            for (int x = lo; x < hi; ++x) {
                if (x == self) continue;
                const double a = dist(inst.metric, vertex_ptr(inst, x), near_pt, inst.d()) - (delta - H);
                const double c = dist(inst.metric, vertex_ptr(inst, x), far_pt, inst.d()) - delta;
                const double margin = std::max(a, c);
                clearance = std::min(clearance, margin);
                if (margin < 0.0) {
                    rep.pass = false;
                    std::ostringstream os;
                    os << "point " << x << " lies in the lens of edge (" << r << "," << b
                       << ") with length " << delta << " (hausdorff " << H << ")";
                    rep.witness = os.str();
                    rep.slack = margin;
                }
            }
        };
        scan(0, nR, r, pr, pb);   // no red near r
        scan(nR, tree.n, b, pb, pr); // no blue near b
        if (!rep.pass) return rep;
    }
    if (checked == 0) {
        rep.note = "vacuous (no edge exceeds the Hausdorff distance)";
        rep.slack = 0.0;
    } else {
        rep.slack = clearance;
    }
    return rep;
}

LemmaReport check_p_invariance(const BipartiteInstance& inst, const SpanningTree& claimed) {
    require_match(inst, claimed);
    LemmaReport rep;
    rep.lemma_id = "p_invariance_bottleneck";
    rep.instance_desc = describe(inst);
    const auto claimed_set = edge_set(claimed);
    const int nR = static_cast<int>(inst.n_R());
    for (double p : {0.5, 1.0, 2.0}) {
        WeightedGraph g;
        g.m = static_cast<int>(inst.n());
        g.edges.reserve(inst.n_R() * inst.n_B());
        for (size_t i = 0; i < inst.n_R(); ++i)
            for (size_t j = 0; j < inst.n_B(); ++j)
                g.edges.push_back({static_cast<int>(i), nR + static_cast<int>(j),
                                   std::pow(dist(inst.metric, inst.red, i, inst.blue, j), p)});
        const auto solved_set = edge_set(kruskal(g).first);
        if (solved_set != claimed_set) {
            rep.pass = false;
            std::ostringstream os;
            for (const auto& e : solved_set)
                if (!claimed_set.count(e)) {
                    os << "MST under exponent " << p << " uses edge (" << e.first << ","
                       << e.second << ") absent from the claimed tree";
                    break;
                }
            rep.witness = os.str();
            return rep;
        }
    }
    const double thr = bottleneck_threshold(inst);
    if (claimed.bottleneck != thr) {
        rep.pass = false;
        std::ostringstream os;
        os << "claimed bottleneck " << claimed.bottleneck
           << " != connectivity threshold " << thr;
        rep.witness = os.str();
        rep.slack = thr - claimed.bottleneck;
        return rep;
    }
    return rep;
}

LemmaReport check_mono_to_bi_bound(const Points& R, const Points& B, double p,
                                   MetricKind metric, double claimed_bipartite_cost) {
    if (R.empty() || B.empty()) throw std::invalid_argument("both colors must be nonempty");
    LemmaReport rep;
    rep.lemma_id = "mono_to_bi_bound";
    {
        std::ostringstream os;
        os << "n_R=" << R.size() << " n_B=" << B.size() << " d=" << R.d << " p=" << p;
        rep.instance_desc = os.str();
    }
    BipartiteInstance inst;
    inst.red = R;
    inst.blue = B;
    inst.metric = metric;
    const double lhs = claimed_bipartite_cost >= 0.0
                           ? claimed_bipartite_cost
                           : bipartite_mst(inst, SolverKind::GridBoruvka).cost(p);
    const double mono = R.size() >= 2 ? mono_mst(R, metric).cost(p) : 0.0;
    double sum_r = 0.0, sum_b = 0.0;
    for (size_t i = 0; i < R.size(); ++i) {
        double best = kInf;
        for (size_t j = 0; j < B.size(); ++j) best = std::min(best, dist(metric, R, i, B, j));
        sum_r += std::pow(best, p);
    }
    for (size_t j = 0; j < B.size(); ++j) {
        double best = kInf;
        for (size_t i = 0; i < R.size(); ++i) best = std::min(best, dist(metric, R, i, B, j));
        sum_b += std::pow(best, p);
    }
    const double C = std::max(1.0, std::pow(2.0, p - 1.0));
    const double rhs = C * (mono + sum_r + sum_b);
    rep.slack = rhs - lhs;
    if (!(lhs <= rhs + 1e-12 * std::max(1.0, rhs))) {
        rep.pass = false;
        std::ostringstream os;
        os << "bipartite cost " << lhs << " exceeds bound " << rhs << " (C=" << C << ")";
        rep.witness = os.str();
    }
    return rep;
}

LemmaReport check_torus_cube_transfer(const BipartiteInstance& inst, double delta,
                                      double p, double torus_scale) {
    if (!(delta < 0.5)) throw std::invalid_argument("transfer check requires delta < 1/2");
    if (inst.metric != MetricKind::UnitCube)
        throw std::invalid_argument("pass the cube-metric instance; the torus variant is derived");
    const double bneck = bottleneck_threshold(inst);
    if (bneck > delta)
        throw std::invalid_argument("precondition violated: bottleneck exceeds delta");

    LemmaReport rep;
    rep.lemma_id = "torus_cube_transfer";
    rep.instance_desc = describe(inst);

    const double cube_cost = bipartite_mst(inst, SolverKind::GridBoruvka).cost(p);
    BipartiteInstance torus = inst;
    torus.metric = MetricKind::FlatTorus;
    const double torus_cost =
        torus_scale * bipartite_mst(torus, SolverKind::GridBoruvka).cost(p);

    auto shell_of = [&](const Points& pts) {
        Points shell(pts.d);
        for (size_t i = 0; i < pts.size(); ++i) {
            const double* x = pts.ptr(i);
            for (int a = 0; a < pts.d; ++a)
                if (x[a] < delta || x[a] > 1.0 - delta) {
                    shell.push_back(x);
                    break;
                }
        }
        return shell;
    };
    const Points shellR = shell_of(inst.red);
    const Points shellB = shell_of(inst.blue);

    double shell_cost = 0.0;
    if (shellR.empty() || shellB.empty()) {
        // A wrapping torus edge (length <= bottleneck <= delta) crosses the
        // boundary, so both its endpoints sit within delta of it, one per
        // color. An empty shell therefore means no wrap at all: the torus tree
        // is a cube-metric spanning tree of the same cost.
        rep.note = "vacuous (empty boundary shell: torus and cube costs coincide)";
    } else {
        BipartiteInstance shell;
        shell.red = shellR;
        shell.blue = shellB;
        shell.metric = MetricKind::UnitCube;
        shell_cost = bipartite_mst(shell, SolverKind::GridBoruvka).cost(p);
    }

    const double rhs = torus_cost + shell_cost;
    rep.slack = rhs - cube_cost;
    if (!(cube_cost <= rhs + 1e-9 * std::max(1.0, cube_cost))) {
        rep.pass = false;
        std::ostringstream os;
        os << "cube cost " << cube_cost << " exceeds torus " << torus_cost << " + shell "
           << shell_cost;
        rep.witness = os.str();
    }
    return rep;
}

std::pair<double, LemmaReport> hilbert_chain_bound(const Points& pts, double p) {
    LemmaReport rep;
    rep.lemma_id = "hilbert_chain_bound";
    {
        std::ostringstream os;
        os << "n=" << pts.size() << " d=" << pts.d << " p=" << p;
        rep.instance_desc = os.str();
    }
    const double chain = hilbert_chain_cost(pts, p);
    const double mst = pts.size() >= 2 ? mono_mst(pts, MetricKind::UnitCube).cost(p) : 0.0;
    rep.slack = chain - mst;
    if (!(mst <= chain + 1e-12 * std::max(1.0, chain))) {
        rep.pass = false;
        std::ostringstream os;
        os << "MST cost " << mst << " exceeds chain cost " << chain;
        rep.witness = os.str();
    }
    const double rate = std::pow(static_cast<double>(pts.size()),
                                 1.0 - p / static_cast<double>(pts.d));
    std::ostringstream os;
    os << "empirical_constant=" << (chain / rate);
    rep.note = os.str();
    return {chain, rep};
}

LemmaReport bounded_difference_tree_report(const BipartiteInstance& a,
                                           const BipartiteInstance& b, double p,
                                           const SpanningTree& tree_a,
                                           const SpanningTree& tree_b) {
    if (p > 1.0) throw std::invalid_argument("unsupported regime: the resampling bound needs p <= 1");
    const double fa = tree_a.cost(p), fb = tree_b.cost(p);
    const double bound =
        std::pow(static_cast<double>(a.d()), 0.5 * p) *
        (static_cast<double>(tree_a.max_degree()) + static_cast<double>(tree_b.max_degree()));
    LemmaReport rep;
    rep.lemma_id = "bounded_difference";
    rep.instance_desc = describe(a);
    (void)b;
    rep.slack = bound - std::fabs(fa - fb);
    if (!(std::fabs(fa - fb) <= bound + 1e-12 * std::max(1.0, bound))) {
        rep.pass = false;
        std::ostringstream os;
        os << "|" << fa << " - " << fb << "| exceeds d^{p/2}(deg+deg') = " << bound;
        rep.witness = os.str();
    }
    return rep;
}

LemmaReport bounded_difference_pair_report(const BipartiteInstance& a,
                                           const BipartiteInstance& b, double p) {
    if (p > 1.0) throw std::invalid_argument("unsupported regime: the resampling bound needs p <= 1");
    const auto ta = bipartite_mst(a, SolverKind::GridBoruvka);
    const auto tb = bipartite_mst(b, SolverKind::GridBoruvka);
    return bounded_difference_tree_report(a, b, p, ta, tb);
}

LemmaReport check_bounded_difference(const BipartiteInstance& inst, double p, uint64_t seed) {
    if (p > 1.0) throw std::invalid_argument("unsupported regime: the resampling bound needs p <= 1");
    Rng rng = Rng::substream(seed, 0x9d);
    BipartiteInstance other = inst;
    const size_t idx = rng.uniform_index(inst.n());
    Points& target = idx < inst.n_R() ? other.red : other.blue;
    const size_t local = idx < inst.n_R() ? idx : idx - inst.n_R();
    for (int a = 0; a < inst.d(); ++a) target.ptr(local)[a] = rng.uniform01();
    return bounded_difference_pair_report(inst, other, p);
}

SpanningTree corrupt_cut_property(const BipartiteInstance& inst, const SpanningTree& tree) {
    require_match(inst, tree);
    const int n = static_cast<int>(inst.n());
    const int nR = static_cast<int>(inst.n_R());
    const auto in_tree = edge_set(tree);
    for (int v = 0; v < n; ++v) {
        int best = -1;
        double bw = kInf, second = kInf;
        const int lo = is_red(inst, v) ? nR : 0;
        const int hi = is_red(inst, v) ? n : nR;
        for (int u = lo; u < hi; ++u) {
            const double w = dist(inst.metric, vertex_ptr(inst, v), vertex_ptr(inst, u), inst.d());
            if (w < bw) {
                second = bw;
                bw = w;
                best = u;
            } else if (w < second) {
                second = w;
            }
        }
        if (best < 0 || !(bw < second)) continue;
        const std::pair<int, int> e{std::min(v, best), std::max(v, best)};
        if (!in_tree.count(e)) continue; // already violated (cannot happen on an MST)

        // Split the tree at e and reconnect through the cheapest other pair.
        DisjointSet dsu(n);
        for (const auto& te : tree.edges) {
            if (std::min(te.u, te.v) == e.first && std::max(te.u, te.v) == e.second) continue;
            dsu.unite(te.u, te.v);
        }
        const int side = dsu.find(e.first);
        int au = -1, av = -1;
        double aw = kInf;
        for (int r = 0; r < nR; ++r)
            for (int b = nR; b < n; ++b) {
                if ((std::min(r, b) == e.first && std::max(r, b) == e.second)) continue;
                if ((dsu.find(r) == side) == (dsu.find(b) == side)) continue; // not crossing
                const double w = dist(inst.metric, vertex_ptr(inst, r), vertex_ptr(inst, b), inst.d());
                if (w < aw) {
                    aw = w;
                    au = r;
                    av = b;
                }
            }
        if (au < 0) continue; // no alternative pair across this cut; try another vertex
        SpanningTree bad = tree;
        bad.edges.erase(std::remove_if(bad.edges.begin(), bad.edges.end(),
                                       [&](const TreeEdge& te) {
                                           return std::min(te.u, te.v) == e.first &&
                                                  std::max(te.u, te.v) == e.second;
                                       }),
                        bad.edges.end());
        bad.edges.push_back({std::min(au, av), std::max(au, av), aw});
        bad.degree.assign(n, 0);
        bad.bottleneck = 0.0;
        for (const auto& te : bad.edges) {
            ++bad.degree[te.u];
            ++bad.degree[te.v];
            bad.bottleneck = std::max(bad.bottleneck, te.length);
        }
        return bad;
    }
    throw std::runtime_error("no corruptible vertex found (degenerate instance)");
}

SpanningTree corrupt_edge_swap(const BipartiteInstance& inst, const SpanningTree& tree) {
    require_match(inst, tree);
    const int n = static_cast<int>(inst.n());
    const int nR = static_cast<int>(inst.n_R());
    // Remove the longest tree edge, reconnect through the FARTHEST crossing pair.
    const auto longest = std::max_element(
        tree.edges.begin(), tree.edges.end(),
        [](const TreeEdge& a, const TreeEdge& b) { return a.length < b.length; });
    DisjointSet dsu(n);
    for (const auto& te : tree.edges)
        if (&te != &*longest) dsu.unite(te.u, te.v);
    const int side = dsu.find(longest->u);
    int au = -1, av = -1;
    double aw = -1.0;
    for (int r = 0; r < nR; ++r)
        for (int b = nR; b < n; ++b) {
            if ((dsu.find(r) == side) == (dsu.find(b) == side)) continue;
            if (std::min(r, b) == std::min(longest->u, longest->v) &&
                std::max(r, b) == std::max(longest->u, longest->v))
                continue;
            const double w = dist(inst.metric, vertex_ptr(inst, r), vertex_ptr(inst, b), inst.d());
            if (w > aw) {
                aw = w;
                au = r;
                av = b;
            }
        }
    if (au < 0) throw std::runtime_error("no alternative crossing pair (degenerate instance)");
    SpanningTree bad = tree;
    bad.edges.erase(bad.edges.begin() + (longest - tree.edges.begin()));
    bad.edges.push_back({std::min(au, av), std::max(au, av), aw});
    bad.degree.assign(n, 0);
    bad.bottleneck = 0.0;
    for (const auto& te : bad.edges) {
        ++bad.degree[te.u];
        ++bad.degree[te.v];
        bad.bottleneck = std::max(bad.bottleneck, te.length);
    }
    return bad;
}

std::pair<BipartiteInstance, SpanningTree> empty_cone_corruption_fixture() {
    // Two tightly alternating clusters joined by one long bridge. The honest
    // MST passes the lens check with margin; swapping the bridge for the
    // outermost pair puts whole clusters inside the new lens.
    BipartiteInstance inst;
    inst.metric = MetricKind::UnitCube;
    inst.seed = 0;
    inst.red = Points(1);
    inst.blue = Points(1);
    for (double x : {0.00, 0.04, 0.08, 0.12, 0.86, 0.90, 0.94, 0.98}) inst.red.push_back(&x);
    for (double x : {0.02, 0.06, 0.10, 0.14, 0.88, 0.92, 0.96, 1.00}) inst.blue.push_back(&x);
    SpanningTree honest = bipartite_mst(inst, SolverKind::Brute);
    SpanningTree bad = honest;
    // Bridge = the longest edge (red 0.86 <-> blue 0.14). Replace with the
    // deepest pair (red 0.98 <-> blue 0.02).
    const auto longest = std::max_element(
        bad.edges.begin(), bad.edges.end(),
        [](const TreeEdge& a, const TreeEdge& b) { return a.length < b.length; });
    const int red_deep = 7;   // red id of 0.98
    const int blue_deep = 8;  // blue 0.02 is blues[0] -> id n_R + 0
    *longest = {red_deep, blue_deep, std::fabs(0.98 - 0.02)};
    bad.degree.assign(bad.n, 0);
    bad.bottleneck = 0.0;
    for (const auto& te : bad.edges) {
        ++bad.degree[te.u];
        ++bad.degree[te.v];
        bad.bottleneck = std::max(bad.bottleneck, te.length);
    }
    return {inst, bad};
}

SpanningTree bipartite_zigzag_path(const BipartiteInstance& inst) {
    const int nR = static_cast<int>(inst.n_R());
    const int nB = static_cast<int>(inst.n_B());
    if (nR < 1 || nB < 1) throw std::invalid_argument("both colors must be nonempty");
    std::vector<int> reds(nR), blues(nB);
    for (int i = 0; i < nR; ++i) reds[i] = i;
    for (int j = 0; j < nB; ++j) blues[j] = j;
    std::sort(reds.begin(), reds.end(), [&](int a, int b) {
        return inst.red.ptr(a)[0] < inst.red.ptr(b)[0];
    });
    std::sort(blues.begin(), blues.end(), [&](int a, int b) {
        return inst.blue.ptr(a)[0] > inst.blue.ptr(b)[0];
    });
    SpanningTree t;
    t.n = static_cast<int>(inst.n());
    const int common = std::min(nR, nB);
    auto add_edge = [&](int r, int b) {
        const int gu = r, gv = nR + b;
        t.edges.push_back({std::min(gu, gv), std::max(gu, gv),
                           dist(inst.metric, inst.red.ptr(r), inst.blue.ptr(b), inst.d())});
    };
    // r0 b0 r1 b1 ...: opposite sort orders make consecutive hops span the cube.
    for (int i = 0; i < common; ++i) {
        add_edge(reds[i], blues[i]);
        if (i + 1 < common) add_edge(reds[i + 1], blues[i]);
    }
    // Leftovers of the longer color become leaves spread over distinct hosts.
    for (int i = common; i < nR; ++i) add_edge(reds[i], blues[(i - common) % nB]);
    for (int j = common; j < nB; ++j) add_edge(reds[(j - common) % nR], blues[j]);
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
    return t;
}

SpanningTree bipartite_max_tree(const BipartiteInstance& inst) {
    const size_t nedges = inst.n_R() * inst.n_B();
    if (nedges > 4000000) throw std::invalid_argument("max tree: instance too large");
    WeightedGraph g;
    g.m = static_cast<int>(inst.n());
    const int nR = static_cast<int>(inst.n_R());
    for (size_t i = 0; i < inst.n_R(); ++i)
        for (size_t j = 0; j < inst.n_B(); ++j)
            g.edges.push_back({static_cast<int>(i), nR + static_cast<int>(j),
                               -dist(inst.metric, inst.red, i, inst.blue, j)});
    SpanningTree t = kruskal(g).first;
    for (auto& e : t.edges) e.length = -e.length;
    std::sort(t.edges.begin(), t.edges.end(), [](const TreeEdge& a, const TreeEdge& b) {
        if (a.length != b.length) return a.length < b.length;
        if (a.u != b.u) return a.u < b.u;
        return a.v < b.v;
    });
    t.bottleneck = t.edges.empty() ? 0.0 : t.edges.back().length;
    return t;
}

} // namespace bmst

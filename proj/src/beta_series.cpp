#include "bmst/beta_series.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "bmst/parallel.hpp"

namespace bmst {

namespace {

double factorial(int n) {
    double f = 1.0;
    for (int i = 2; i <= n; ++i) f *= i;
    return f;
}

// Exact length of a union of unit intervals [x-1, x+1] on the line.
double interval_union_length(const Points& pts) {
    std::vector<double> xs = pts.xs;
    std::sort(xs.begin(), xs.end());
    double total = 2.0;
    for (size_t i = 1; i < xs.size(); ++i) total += std::min(xs[i] - xs[i - 1], 2.0);
    return total;
}

// Connectivity of the cross-color unit-distance graph over two point sets.
bool theta_connected(const Points& reds, const Points& blues) {
    const int kR = static_cast<int>(reds.size());
    const int kB = static_cast<int>(blues.size());
    const int k = kR + kB;
    if (k == 1) return true;
    if (kR == 0 || kB == 0) return false;
    const int d = reds.d;
    std::vector<int> parent(k);
    for (int i = 0; i < k; ++i) parent[i] = i;
    auto find = [&](int x) {
        while (parent[x] != x) x = parent[x] = parent[parent[x]];
        return x;
    };
    int comps = k;
    for (int i = 0; i < kR; ++i)
        for (int j = 0; j < kB; ++j)
            if (dist(MetricKind::UnitCube, reds.ptr(i), blues.ptr(j), d) < 1.0) {
                const int a = find(i), b = find(kR + j);
                if (a != b) {
                    parent[a] = b;
                    --comps;
                }
            }
    return comps == 1;
}

struct VolPair {
    double full = 0.0;
    double quarter = 0.0; // same estimate from the first quarter of the inner samples
};

// Union volume with a quarter-sample checkpoint, 0 for an empty set. Exact
// cases (d=1, or a single ball) return identical full/quarter values, so the
// bias probe reports 0 there.
VolPair union_volume_probe(const Points& pts, uint64_t m, Rng& rng) {
    if (pts.empty()) return {0.0, 0.0};
    if (pts.d == 1) {
        const double v = interval_union_length(pts);
        return {v, v};
    }
    if (pts.size() == 1) {
        const double v = unit_ball_volume(pts.d);
        return {v, v};
    }
    const int d = pts.d;
    std::vector<double> lo(d), hi(d);
    for (int a = 0; a < d; ++a) {
        lo[a] = pts.xs[a];
        hi[a] = pts.xs[a];
    }
    for (size_t i = 1; i < pts.size(); ++i)
        for (int a = 0; a < d; ++a) {
            lo[a] = std::min(lo[a], pts.ptr(i)[a]);
            hi[a] = std::max(hi[a], pts.ptr(i)[a]);
        }
    double box = 1.0;
    for (int a = 0; a < d; ++a) box *= (hi[a] - lo[a] + 2.0);
    if (m == 0) m = 1;
    const uint64_t checkpoint = std::max<uint64_t>(1, m / 4);
    uint64_t hits = 0, hits_q = 0;
    std::vector<double> q(d);
    for (uint64_t s = 0; s < m; ++s) {
        for (int a = 0; a < d; ++a) q[a] = rng.uniform(lo[a] - 1.0, hi[a] + 1.0);
        bool hit = false;
        for (size_t i = 0; i < pts.size() && !hit; ++i) {
            const double* c = pts.ptr(i);
            double r2 = 0.0;
            for (int a = 0; a < d; ++a) r2 += (q[a] - c[a]) * (q[a] - c[a]);
            hit = r2 < 1.0;
        }
        if (hit) {
            ++hits;
            if (s < checkpoint) ++hits_q;
        }
    }
    return {box * static_cast<double>(hits) / static_cast<double>(m),
            box * static_cast<double>(hits_q) / static_cast<double>(checkpoint)};
}

struct TermSpec {
    int k_R = 1, k_B = 1, d = 1;
    double alpha_R = 0.5;
    double wR = 1.0, wB = 1.0; // pinned-branch weights
    double exponent = 1.0;     // negative power applied to the weighted volume
};

struct Accum {
    double sum = 0.0, sumsq = 0.0, sum_quarter = 0.0;
    uint64_t accepted = 0;
};

constexpr uint64_t kBatchSize = 8192;

// Shared Monte Carlo core for the cluster integrals: pin one point at the
// origin (branch chosen proportionally to wR/wB and reweighted), propose the
// k-1 free points uniformly in [-k, k]^d, reject configurations whose
// cross-color unit-distance graph is disconnected, and average
//   (wR + wB) * (2k)^{d(k-1)} * (alpha_R |D(blues)| + alpha_B |D(reds)|)^{-exponent}.
SeriesTermEstimate run_term_mc(const TermSpec& ts, uint64_t samples, uint64_t seed,
                               const VolumeOpts& opts, int workers) {
    const int d = ts.d;
    const int k = ts.k_R + ts.k_B;
    const double alpha_B = 1.0 - ts.alpha_R;
    const double wtot = ts.wR + ts.wB;
    const double p_red = ts.wR / wtot;
    const double half = static_cast<double>(k);
    const double vol_weight = std::pow(2.0 * half, static_cast<double>(d) * (k - 1));
    const bool rotated = !opts.rotation.empty();
    if (rotated && opts.rotation.size() != static_cast<size_t>(d) * d)
        throw std::invalid_argument("rotation matrix must be d x d");

    const uint64_t nbatches = (samples + kBatchSize - 1) / kBatchSize;
    std::vector<Accum> accs(nbatches);

    parallel_batches(samples, kBatchSize, workers, [&](uint64_t b, uint64_t begin, uint64_t end) {
        Rng rng = Rng::substream(seed, b);
        Accum& acc = accs[b];
        Points reds(d), blues(d);
        std::vector<double> u(d), y(d);
        const std::vector<double> origin(d, 0.0);
        for (uint64_t s = begin; s < end; ++s) {
            const bool red_branch = ts.wB == 0.0 || (ts.wR > 0.0 && rng.uniform01() < p_red);
            reds.xs.clear();
            blues.xs.clear();
            if (red_branch) reds.push_back(origin.data());
            else blues.push_back(origin.data());
            const int free_r = ts.k_R - (red_branch ? 1 : 0);
            const int free_b = ts.k_B - (red_branch ? 0 : 1);
            auto propose = [&](Points& out) {
                for (int a = 0; a < d; ++a) u[a] = rng.uniform(-half, half);
                if (rotated) {
                    for (int a = 0; a < d; ++a) {
                        y[a] = 0.0;
                        for (int c = 0; c < d; ++c) y[a] += opts.rotation[a * d + c] * u[c];
                    }
                    out.push_back(y.data());
                } else {
                    out.push_back(u.data());
                }
            };
            for (int i = 0; i < free_r; ++i) propose(reds);
            for (int i = 0; i < free_b; ++i) propose(blues);

            if (!theta_connected(reds, blues)) continue; // contributes 0

            ++acc.accepted;
            const VolPair vb = union_volume_probe(blues, opts.inner_samples, rng);
            const VolPair vr = union_volume_probe(reds, opts.inner_samples, rng);
            const double base_f = ts.alpha_R * vb.full + alpha_B * vr.full;
            const double base_q = ts.alpha_R * vb.quarter + alpha_B * vr.quarter;
            const double value = wtot * vol_weight * std::pow(base_f, -ts.exponent);
            acc.sum += value;
            acc.sumsq += value * value;
            acc.sum_quarter += wtot * vol_weight * std::pow(base_q, -ts.exponent);
        }
    });

    double sum = 0.0, sumsq = 0.0, sum_q = 0.0;
    uint64_t accepted = 0;
    for (const Accum& a : accs) {
        sum += a.sum;
        sumsq += a.sumsq;
        sum_q += a.sum_quarter;
        accepted += a.accepted;
    }
    const double n = static_cast<double>(samples);
    const double mean = sum / n;
    const double var = std::max(0.0, sumsq / n - mean * mean);

    SeriesTermEstimate est;
    est.k_R = ts.k_R;
    est.k_B = ts.k_B;
    est.E_estimate = mean;
    est.std_error = std::sqrt(var / n);
    est.samples = samples;
    est.acceptance_rate = static_cast<double>(accepted) / n;
    est.unreliable = est.acceptance_rate < 1e-4;
    est.inner_bias = std::fabs(sum_q / n - mean) / std::max(std::fabs(mean), 1e-300);
    return est;
}

} // namespace

bool theta_membership(const Configuration& config) {
    if (config.reds.empty() && config.blues.empty())
        throw std::invalid_argument("empty configuration");
    if (!config.reds.empty() && !config.blues.empty() && config.reds.d != config.blues.d)
        throw std::invalid_argument("mixed dimensions in configuration");
    return theta_connected(config.reds, config.blues);
}

std::pair<double, double> union_ball_volume(const Points& points, uint64_t mc_samples,
                                            uint64_t seed) {
    Rng rng(seed);
    return union_ball_volume(points, mc_samples, rng);
}

std::pair<double, double> union_ball_volume(const Points& points, uint64_t mc_samples,
                                            Rng& rng) {
    if (points.empty()) throw std::invalid_argument("union_ball_volume: empty point list");
    if (points.d == 1) return {interval_union_length(points), 0.0};
    if (points.size() == 1) return {unit_ball_volume(points.d), 0.0};
    if (mc_samples == 0) throw std::invalid_argument("union_ball_volume: need mc_samples >= 1");

    const int d = points.d;
    std::vector<double> lo(d), hi(d);
    for (int a = 0; a < d; ++a) lo[a] = hi[a] = points.xs[a];
    for (size_t i = 1; i < points.size(); ++i)
        for (int a = 0; a < d; ++a) {
            lo[a] = std::min(lo[a], points.ptr(i)[a]);
            hi[a] = std::max(hi[a], points.ptr(i)[a]);
        }
    double box = 1.0;
    for (int a = 0; a < d; ++a) box *= (hi[a] - lo[a] + 2.0);
    uint64_t hits = 0;
    std::vector<double> q(d);
    for (uint64_t s = 0; s < mc_samples; ++s) {
        for (int a = 0; a < d; ++a) q[a] = rng.uniform(lo[a] - 1.0, hi[a] + 1.0);
        for (size_t i = 0; i < points.size(); ++i) {
            const double* c = points.ptr(i);
            double r2 = 0.0;
            for (int a = 0; a < d; ++a) r2 += (q[a] - c[a]) * (q[a] - c[a]);
            if (r2 < 1.0) {
                ++hits;
                break;
            }
        }
    }
    const double phat = static_cast<double>(hits) / static_cast<double>(mc_samples);
    return {box * phat, box * std::sqrt(phat * (1.0 - phat) / static_cast<double>(mc_samples))};
}

SeriesTermEstimate estimate_E(int k_R, int k_B, double alpha_R, int d, uint64_t samples,
                              uint64_t seed, const VolumeOpts& opts, int workers) {
    if (k_R < 1 || k_B < 1) throw std::invalid_argument("estimate_E needs k_R, k_B >= 1");
    if (!(alpha_R > 0.0 && alpha_R < 1.0))
        throw std::invalid_argument("alpha_R must lie strictly between 0 and 1");
    if (d < 1) throw std::invalid_argument("dimension must be positive");
    if (samples == 0) throw std::invalid_argument("need samples >= 1");
    TermSpec ts;
    ts.k_R = k_R;
    ts.k_B = k_B;
    ts.d = d;
    ts.alpha_R = alpha_R;
    ts.wR = k_R / alpha_R;
    ts.wB = k_B / (1.0 - alpha_R);
    ts.exponent = static_cast<double>(k_R + k_B) / d;
    return run_term_mc(ts, samples, seed, opts, workers);
}

double series_weight(int d, double p, double alpha_R, int k_R, int k_B) {
    if (k_R < 0 || k_B < 0 || k_R + k_B < 1) throw std::invalid_argument("bad series order");
    if (d < 1) throw std::invalid_argument("dimension must be positive");
    const int k = k_R + k_B;
    const double alpha_B = 1.0 - alpha_R;
    const double x = k - 1 + p / d;
    return (p / d) * std::pow(alpha_R, k_R) / factorial(k_R) * std::pow(alpha_B, k_B) /
           factorial(k_B) * std::tgamma(x) / k;
}

double series_tail_bound(int d, double p, double alpha_R, int K_max) {
    const int k1 = K_max + 1;
    const double alpha_B = 1.0 - alpha_R;
    double sum = 0.0;
    for (int kr = 1; kr < k1; ++kr) {
        const int kb = k1 - kr;
        // Spanning trees of the complete bipartite graph on (kr, kb): every
        // connected configuration is covered by at least one of them.
        const double trees = std::pow(kr, kb - 1) * std::pow(kb, kr - 1);
        sum += std::pow(alpha_R, kr) / factorial(kr) * std::pow(alpha_B, kb) / factorial(kb) *
               trees;
    }
    return (p / d) * std::tgamma(K_max + p / d) * std::pow(unit_ball_volume(d), -p / d) * sum;
}

BetaEstimate estimate_beta(int d, double p, double alpha_R, int K_max,
                           uint64_t samples_per_term, uint64_t seed, const VolumeOpts& opts,
                           int workers) {
    if (d < 1) throw std::invalid_argument("dimension must be positive");
    if (!(alpha_R > 0.0 && alpha_R < 1.0))
        throw std::invalid_argument("alpha_R must lie strictly between 0 and 1");
    if (!(p > 0.0 && p < d))
        throw std::invalid_argument("out-of-regime: the series requires 0 < p < d");
    if (K_max < 2) throw std::invalid_argument("K_max must be at least 2");
    if (samples_per_term == 0) throw std::invalid_argument("need samples_per_term >= 1");

    const double alpha_B = 1.0 - alpha_R;
    const double omega = unit_ball_volume(d);

    BetaEstimate out;
    out.d = d;
    out.p = p;
    out.alpha_R = alpha_R;
    out.K_max = K_max;

    auto add_term = [&](const SeriesTermEstimate& est) {
        BetaTerm t;
        t.estimate = est;
        t.weight = series_weight(d, p, alpha_R, est.k_R, est.k_B);
        t.contribution = t.weight * est.E_estimate;
        out.terms.push_back(t);
    };

    // Single-point orders have no free points: the cluster integral collapses
    // to the ball-volume power and needs no sampling. Orders with two or more
    // points of one color and none of the other are never connected, so they
    // carry no mass and are omitted.
    SeriesTermEstimate single;
    single.samples = 0;
    single.std_error = 0.0;
    single.acceptance_rate = 1.0;
    single.k_R = 1;
    single.k_B = 0;
    single.E_estimate = std::pow(alpha_B * omega, -p / d);
    add_term(single);
    single.k_R = 0;
    single.k_B = 1;
    single.E_estimate = std::pow(alpha_R * omega, -p / d);
    add_term(single);

    for (int k = 2; k <= K_max; ++k)
        for (int kr = 1; kr < k; ++kr) {
            const int kb = k - kr;
            TermSpec ts;
            ts.k_R = kr;
            ts.k_B = kb;
            ts.d = d;
            ts.alpha_R = alpha_R;
            ts.wR = kr;
            ts.wB = kb;
            ts.exponent = k - 1 + p / d;
            const uint64_t term_seed =
                Rng::derive_seed(seed, (static_cast<uint64_t>(kr) << 32) | static_cast<uint64_t>(kb));
            add_term(run_term_mc(ts, samples_per_term, term_seed, opts, workers));
        }

    double value = 0.0, var = 0.0;
    for (const BetaTerm& t : out.terms) {
        value += t.contribution;
        var += t.weight * t.weight * t.estimate.std_error * t.estimate.std_error;
    }
    out.value = value;
    out.std_error = std::sqrt(var);
    out.tail_bound = series_tail_bound(d, p, alpha_R, K_max);
    return out;
}

} // namespace bmst

#pragma once

#include <cstdint>
#include <utility>
#include <vector>

#include "bmst/geometry.hpp"
#include "bmst/rng.hpp"

namespace bmst {

// One cluster of k_R red and k_B blue points in R^d with a single point pinned
// at the origin: reds[0] when pinned_red, blues[0] otherwise.
struct Configuration {
    Points reds{1};
    Points blues{1};
    bool pinned_red = true;
};

// True iff the cross-color graph with edges {|r_i - b_j| < 1} connects all
// k_R + k_B points. A lone point is connected; two or more points of a single
// color never are (there are no same-color edges).
bool theta_membership(const Configuration& config);

// Lebesgue measure of the union of unit balls centered at the given points.
// d = 1 is exact interval arithmetic (std_error 0, mc_samples ignored); d >= 2
// uses hit-or-miss Monte Carlo in the bounding box of the balls. Returns
// (volume, std_error); throws on an empty list.
std::pair<double, double> union_ball_volume(const Points& points, uint64_t mc_samples,
                                            uint64_t seed);
std::pair<double, double> union_ball_volume(const Points& points, uint64_t mc_samples,
                                            Rng& rng);

struct VolumeOpts {
    // Hit-or-miss samples per union-volume evaluation (only d >= 2 uses them).
    uint64_t inner_samples = 10000;
    // Optional row-major d x d rotation applied to cube proposals; used to
    // check rotation invariance of the cluster integrals. Empty = identity.
    std::vector<double> rotation;
};

struct SeriesTermEstimate {
    int k_R = 0;
    int k_B = 0;
    double E_estimate = 0.0;
    double std_error = 0.0;
    uint64_t samples = 0;       // 0 marks a closed-form (non-sampled) value
    double acceptance_rate = 0.0;
    bool unreliable = false;    // acceptance below 1e-4: too few effective samples
    double inner_bias = 0.0;    // relative shift when the inner volume MC uses
                                // a quarter of its samples (nested-MC bias probe)
};

// Normalized cluster integral E(k_R, k_B, alpha_R): the two pinned branches
// carry weights k_R/alpha_R and k_B/alpha_B, the k-1 free points are proposed
// uniformly in [-(k_R+k_B), k_R+k_B]^d (which covers the whole connected set,
// since a spanning structure of unit-threshold edges keeps every point within
// k-1 of the origin), and the integrand on the connected set is
// (alpha_R |D(blues)| + alpha_B |D(reds)|)^{-(k_R+k_B)/d} with D the union of
// unit balls. Requires k_R, k_B >= 1 and 0 < alpha_R < 1.
SeriesTermEstimate estimate_E(int k_R, int k_B, double alpha_R, int d, uint64_t samples,
                              uint64_t seed, const VolumeOpts& opts = {}, int workers = 1);

struct BetaTerm {
    SeriesTermEstimate estimate;
    double weight = 0.0;        // series kernel multiplying the cluster integral
    double contribution = 0.0;  // weight * E_estimate
};

struct BetaEstimate {
    int d = 1;
    double p = 0.0;
    double alpha_R = 0.5;
    double value = 0.0;
    double std_error = 0.0;
    int K_max = 0;
    double tail_bound = 0.0;    // heuristic first-omitted-order mass, deliberately coarse
    std::vector<BetaTerm> terms;
};

// Kernel weight of the series order (k_R, k_B):
//   (p/d) * (alpha_R^{k_R}/k_R!) * (alpha_B^{k_B}/k_B!) * Gamma(k-1+p/d) / k.
// The Gamma argument and the volume exponent inside the matching cluster
// integral are tied by the identity  int_0^inf t^{X-1} e^{-tV} dt = Gamma(X) V^{-X}
// with X = k - 1 + p/d, which is how the scale variable of the cost integrates out.
double series_weight(int d, double p, double alpha_R, int k_R, int k_B);

// Heuristic mass of the first omitted order k = K_max + 1: bounds |Theta| by the
// spanning-tree count of the complete bipartite graph and the integrand by its
// minimal-volume value. A coarse diagnostic, not a certified truncation error.
double series_tail_bound(int d, double p, double alpha_R, int K_max);

// Series estimate of the bipartite MST cost constant at exponent p in
// dimension d: single-point orders evaluated in closed form, mixed orders with
// k_R + k_B <= K_max by Monte Carlo (volume exponent k - 1 + p/d, branch
// weights k_R and k_B), term errors propagated in quadrature. Requires
// 0 < p < d (out-of-regime otherwise) and K_max >= 2. Deterministic for a
// fixed seed at any worker count.
BetaEstimate estimate_beta(int d, double p, double alpha_R, int K_max,
                           uint64_t samples_per_term, uint64_t seed,
                           const VolumeOpts& opts = {}, int workers = 1);

} // namespace bmst

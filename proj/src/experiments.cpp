#include "bmst/experiments.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <limits>
#include <sstream>
#include <stdexcept>

#include "bmst/bipartite_mst.hpp"
#include "bmst/graph.hpp"
#include "bmst/parallel.hpp"
#include "bmst/rng.hpp"

namespace bmst {

namespace {

double seconds_since(std::chrono::steady_clock::time_point t0) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

uint64_t fnv1a(const std::string& s) {
    uint64_t h = 1469598103934665603ULL;
    for (unsigned char c : s) {
        h ^= c;
        h *= 1099511628211ULL;
    }
    return h;
}

uint64_t mix(uint64_t a, uint64_t b) {
    uint64_t s = a ^ (b + 0x9E3779B97F4A7C15ULL);
    return splitmix64_next(s);
}

} // namespace

void validate_plan(const ExperimentPlan& plan) {
    if (plan.d < 1) throw std::invalid_argument("plan: dimension must be positive");
    if (plan.trials < 1) throw std::invalid_argument("plan: need at least one trial");
    if (!(plan.alpha_R > 0.0 && plan.alpha_R < 1.0))
        throw std::invalid_argument("plan: alpha_R must lie strictly between 0 and 1");
    if (plan.schedule.empty()) throw std::invalid_argument("plan: empty n schedule");
    for (size_t i = 1; i < plan.schedule.size(); ++i)
        if (plan.schedule[i] <= plan.schedule[i - 1])
            throw std::invalid_argument("plan: n schedule must be strictly increasing");
}

uint64_t derive_trial_seed(uint64_t master, const std::string& id, uint64_t n, uint64_t trial) {
    return mix(mix(mix(master, fnv1a(id)), n), trial);
}

std::vector<ExperimentRecord> run_plan(const ExperimentPlan& plan, int workers) {
    validate_plan(plan);
    const size_t jobs = plan.schedule.size() * static_cast<size_t>(plan.trials);
    std::vector<ExperimentRecord> records(jobs);
    parallel_batches(jobs, 1, workers, [&](uint64_t job, uint64_t, uint64_t) {
        const size_t si = job / static_cast<size_t>(plan.trials);
        const size_t trial = job % static_cast<size_t>(plan.trials);
        const size_t n = plan.schedule[si];
        const size_t n_R = static_cast<size_t>(std::llround(plan.alpha_R * static_cast<double>(n)));
        if (n_R == 0 || n_R >= n) {
            std::ostringstream os;
            os << "plan: empty color class at n=" << n << " with alpha_R=" << plan.alpha_R;
            throw std::invalid_argument(os.str());
        }
        const uint64_t seed = derive_trial_seed(plan.seed, plan.id, n, trial);
        const auto t0 = std::chrono::steady_clock::now();
        const BipartiteInstance inst = sample_uniform(n_R, n - n_R, plan.d, plan.metric, seed);
        const SpanningTree tree = bipartite_mst(inst, SolverKind::GridBoruvka);
        ExperimentRecord& rec = records[job];
        rec.n = n;
        rec.n_R = n_R;
        rec.n_B = n - n_R;
        rec.d = plan.d;
        rec.p = plan.p;
        rec.alpha_R = plan.alpha_R;
        rec.metric = plan.metric;
        rec.seed = seed;
        rec.cost_p = tree.cost(plan.p);
        rec.max_degree = tree.max_degree();
        rec.bottleneck = tree.bottleneck;
        rec.hausdorff = grid_hausdorff(inst.red, inst.blue, plan.metric);
        rec.nn_max_red = grid_directed_nn_max(inst.red, inst.blue, plan.metric);
        rec.wall_time = seconds_since(t0);
    });
    return records;
}

double median(std::vector<double> values) {
    if (values.empty()) throw std::invalid_argument("median of empty list");
    std::sort(values.begin(), values.end());
    const size_t m = values.size() / 2;
    return values.size() % 2 ? values[m] : 0.5 * (values[m - 1] + values[m]);
}

std::pair<double, double> mean_and_stderr(const std::vector<double>& values) {
    if (values.empty()) throw std::invalid_argument("mean of empty list");
    double sum = 0.0;
    for (double v : values) sum += v;
    const double mean = sum / static_cast<double>(values.size());
    if (values.size() < 2) return {mean, 0.0};
    double ss = 0.0;
    for (double v : values) ss += (v - mean) * (v - mean);
    const double var = ss / static_cast<double>(values.size() - 1);
    return {mean, std::sqrt(var / static_cast<double>(values.size()))};
}

LineFit linear_fit(const std::vector<double>& xs, const std::vector<double>& ys) {
    if (xs.size() != ys.size() || xs.size() < 2)
        throw std::invalid_argument("linear_fit needs two or more paired points");
    const double n = static_cast<double>(xs.size());
    double sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0, syy = 0.0;
    for (size_t i = 0; i < xs.size(); ++i) {
        sx += xs[i];
        sy += ys[i];
        sxx += xs[i] * xs[i];
        sxy += xs[i] * ys[i];
        syy += ys[i] * ys[i];
    }
    const double det = n * sxx - sx * sx;
    if (det == 0.0) throw std::invalid_argument("linear_fit: degenerate x values");
    LineFit fit;
    fit.slope = (n * sxy - sx * sy) / det;
    fit.intercept = (sy - fit.slope * sx) / n;
    double ss_res = 0.0;
    const double mean_y = sy / n;
    double ss_tot = 0.0;
    for (size_t i = 0; i < xs.size(); ++i) {
        const double e = ys[i] - (fit.intercept + fit.slope * xs[i]);
        ss_res += e * e;
        ss_tot += (ys[i] - mean_y) * (ys[i] - mean_y);
    }
    fit.r_squared = ss_tot > 0.0 ? 1.0 - ss_res / ss_tot : 1.0;
    return fit;
}

bool trend_decreasing(const std::vector<double>& values, int allowed_inversions) {
    if (values.size() < 2) throw std::invalid_argument("trend undefined for fewer than 2 points");
    int inversions = 0;
    for (size_t i = 1; i < values.size(); ++i)
        if (values[i] > values[i - 1]) ++inversions;
    return inversions <= allowed_inversions;
}

FriezeCalibration frieze_calibration(size_t n, int trials, uint64_t seed, int workers) {
    if (n < 2) throw std::invalid_argument("frieze_calibration needs n >= 2");
    if (trials < 1) throw std::invalid_argument("frieze_calibration needs trials >= 1");
    std::vector<double> costs(trials);
    parallel_batches(static_cast<uint64_t>(trials), 1, workers,
                     [&](uint64_t trial, uint64_t, uint64_t) {
                         Rng rng = Rng::substream(seed, trial);
                         WeightedGraph g;
                         g.m = static_cast<int>(n);
                         g.edges.reserve(n * (n - 1) / 2);
                         for (size_t i = 0; i < n; ++i)
                             for (size_t j = i + 1; j < n; ++j)
                                 g.edges.push_back({static_cast<int>(i), static_cast<int>(j),
                                                    rng.uniform01()});
                         costs[trial] = kruskal(g).first.cost(1.0);
                     });
    const auto [mean, se] = mean_and_stderr(costs);
    return {n, trials, mean, se};
}

namespace {

// Groups records (already ordered schedule-major) and applies fn per n.
template <typename Fn>
void per_n(const std::vector<ExperimentRecord>& records, Fn&& fn) {
    size_t i = 0;
    while (i < records.size()) {
        size_t j = i;
        while (j < records.size() && records[j].n == records[i].n) ++j;
        fn(records[i].n, i, j);
        i = j;
    }
}

} // namespace

std::vector<DegreeRow> degree_summary(const std::vector<ExperimentRecord>& records) {
    std::vector<DegreeRow> rows;
    per_n(records, [&](size_t n, size_t i, size_t j) {
        const double logn = std::log(static_cast<double>(n));
        std::vector<double> degs, ratios;
        for (size_t r = i; r < j; ++r) {
            degs.push_back(records[r].max_degree);
            ratios.push_back(records[r].max_degree / logn);
        }
        DegreeRow row;
        row.n = n;
        row.median_degree = median(degs);
        row.median_ratio = median(ratios);
        row.min_ratio = *std::min_element(ratios.begin(), ratios.end());
        row.max_ratio = *std::max_element(ratios.begin(), ratios.end());
        rows.push_back(row);
    });
    return rows;
}

ScalingScan scaling_scan(const ExperimentPlan& plan, int workers) {
    validate_plan(plan);
    if (!(plan.p < plan.d))
        throw std::invalid_argument("out-of-regime: scaling_scan requires p < d");
    ScalingScan scan;
    ExperimentPlan cube = plan;
    cube.metric = MetricKind::UnitCube;
    ExperimentPlan torus = plan;
    torus.metric = MetricKind::FlatTorus;
    // Identical trial seeds: both runs solve the same point sets.
    scan.cube_records = run_plan(cube, workers);
    scan.torus_records = run_plan(torus, workers);
    const double rate_exp = 1.0 - plan.p / plan.d;
    per_n(scan.cube_records, [&](size_t n, size_t i, size_t j) {
        const double rate = std::pow(static_cast<double>(n), rate_exp);
        std::vector<double> nc, nt;
        for (size_t r = i; r < j; ++r) {
            nc.push_back(scan.cube_records[r].cost_p / rate);
            nt.push_back(scan.torus_records[r].cost_p / rate);
        }
        ScalingRow row;
        row.n = n;
        std::tie(row.mean_cube, row.se_cube) = mean_and_stderr(nc);
        std::tie(row.mean_torus, row.se_torus) = mean_and_stderr(nt);
        scan.rows.push_back(row);
    });
    return scan;
}

PlateauFit plateau_fit(const std::vector<double>& ns, const std::vector<double>& means,
                       const std::vector<double>& ses) {
    if (ns.size() != means.size() || ns.size() != ses.size())
        throw std::invalid_argument("plateau_fit: mismatched inputs");
    if (ns.size() < 3) throw std::invalid_argument("plateau_fit: schedule too short (< 3 points)");

    std::vector<double> w(ns.size(), 1.0);
    for (size_t i = 0; i < ses.size(); ++i)
        if (ses[i] > 0.0) w[i] = 1.0 / (ses[i] * ses[i]);

    struct Solution {
        double a = 0.0, b = 0.0, sse = std::numeric_limits<double>::infinity(), var_a = 0.0;
        bool ok = false;
    };
    auto solve_at = [&](double gamma) {
        Solution s;
        double S00 = 0.0, S01 = 0.0, S11 = 0.0, T0 = 0.0, T1 = 0.0;
        for (size_t i = 0; i < ns.size(); ++i) {
            const double x = std::pow(ns[i], -gamma);
            S00 += w[i];
            S01 += w[i] * x;
            S11 += w[i] * x * x;
            T0 += w[i] * means[i];
            T1 += w[i] * x * means[i];
        }
        const double det = S00 * S11 - S01 * S01;
        if (!(std::fabs(det) > 1e-30 * S00 * S11)) return s;
        s.a = (S11 * T0 - S01 * T1) / det;
        s.b = (S00 * T1 - S01 * T0) / det;
        s.var_a = S11 / det;
        s.sse = 0.0;
        for (size_t i = 0; i < ns.size(); ++i) {
            const double x = std::pow(ns[i], -gamma);
            const double e = means[i] - s.a - s.b * x;
            s.sse += w[i] * e * e;
        }
        s.ok = std::isfinite(s.a) && std::isfinite(s.b) && std::isfinite(s.sse);
        return s;
    };

    double best_gamma = 0.0;
    Solution best;
    for (double g = 0.05; g <= 3.0 + 1e-12; g += 0.05) {
        const Solution s = solve_at(g);
        if (s.ok && s.sse < best.sse) {
            best = s;
            best_gamma = g;
        }
    }
    if (best.ok) {
        // Golden-section refinement of gamma inside the winning grid cell.
        const double phi = 0.5 * (std::sqrt(5.0) - 1.0);
        double lo = std::max(0.05, best_gamma - 0.05), hi = std::min(3.0, best_gamma + 0.05);
        double x1 = hi - phi * (hi - lo), x2 = lo + phi * (hi - lo);
        Solution s1 = solve_at(x1), s2 = solve_at(x2);
        for (int it = 0; it < 40; ++it) {
            if (s1.sse < s2.sse) {
                hi = x2;
                x2 = x1;
                s2 = s1;
                x1 = hi - phi * (hi - lo);
                s1 = solve_at(x1);
            } else {
                lo = x1;
                x1 = x2;
                s1 = s2;
                x2 = lo + phi * (hi - lo);
                s2 = solve_at(x2);
            }
        }
        const double g = s1.sse < s2.sse ? x1 : x2;
        const Solution s = solve_at(g);
        if (s.ok && s.sse <= best.sse) {
            best = s;
            best_gamma = g;
        }
    }

    PlateauFit fit;
    if (best.ok && best.a > 0.0) {
        fit.a = best.a;
        fit.a_se = std::sqrt(std::max(0.0, best.var_a));
        fit.b = best.b;
        fit.gamma = best_gamma;
        fit.fit_ok = true;
    } else {
        fit.a = means.back();
        fit.a_se = ses.back();
        fit.b = 0.0;
        fit.gamma = 0.0;
        fit.fit_ok = false;
    }
    return fit;
}

BetaEstimate direct_beta(int d, double p, double alpha_R, const std::vector<size_t>& schedule,
                         int trials, uint64_t seed, int workers) {
    if (!(p > 0.0 && p < d))
        throw std::invalid_argument("out-of-regime: direct estimate requires 0 < p < d");
    if (schedule.size() < 3)
        throw std::invalid_argument("direct estimate: schedule too short (< 3 points)");
    if (trials < 1) throw std::invalid_argument("direct estimate: need trials >= 1");

    ExperimentPlan plan;
    plan.id = "beta-direct";
    plan.schedule = schedule;
    plan.d = d;
    plan.p = p;
    plan.alpha_R = alpha_R;
    plan.metric = MetricKind::FlatTorus;
    plan.trials = trials;
    plan.seed = seed;
    return direct_beta_from_records(run_plan(plan, workers), d, p, alpha_R);
}

BetaEstimate direct_beta_from_records(const std::vector<ExperimentRecord>& records, int d,
                                      double p, double alpha_R) {
    if (records.empty()) throw std::invalid_argument("direct estimate: no records");
    std::vector<double> ns, means, ses;
    const double rate_exp = 1.0 - p / d;
    per_n(records, [&](size_t n, size_t i, size_t j) {
        const double rate = std::pow(static_cast<double>(n), rate_exp);
        std::vector<double> norm;
        for (size_t r = i; r < j; ++r) norm.push_back(records[r].cost_p / rate);
        const auto [m, se] = mean_and_stderr(norm);
        ns.push_back(static_cast<double>(n));
        means.push_back(m);
        ses.push_back(se);
    });
    const PlateauFit fit = plateau_fit(ns, means, ses);

    BetaEstimate est;
    est.d = d;
    est.p = p;
    est.alpha_R = alpha_R;
    est.value = fit.a;
    est.std_error = fit.a_se;
    est.K_max = 0;
    est.tail_bound = 0.0;
    return est;
}

std::vector<RateRow> rate_summary(const std::vector<ExperimentRecord>& records) {
    std::vector<RateRow> rows;
    per_n(records, [&](size_t n, size_t i, size_t j) {
        const double scale = std::pow(static_cast<double>(n) / std::log(static_cast<double>(n)),
                                      1.0 / records[i].d);
        std::vector<double> hs, nn;
        for (size_t r = i; r < j; ++r) {
            hs.push_back(records[r].hausdorff * scale);
            nn.push_back(records[r].nn_max_red * scale);
        }
        rows.push_back({n, median(hs), median(nn)});
    });
    return rows;
}

std::vector<TailCheck> occupancy_tail_check(size_t n, int d, int level,
                                            const std::vector<double>& t_values, int trials,
                                            uint64_t seed, int workers) {
    if (n < 1 || d < 1 || level < 0) throw std::invalid_argument("bad occupancy parameters");
    if (trials < 1) throw std::invalid_argument("need trials >= 1");
    for (double t : t_values)
        if (!(t > 0.0) || t == 1.0)
            throw std::invalid_argument("t must be positive and != 1 (the bound is vacuous at 1)");

    // Count of points in the first dyadic cell [0, 2^-level)^d, per trial.
    const double cell_edge = std::pow(2.0, -level);
    std::vector<uint32_t> counts(trials, 0);
    parallel_batches(static_cast<uint64_t>(trials), 8, workers,
                     [&](uint64_t, uint64_t begin, uint64_t end) {
                         for (uint64_t trial = begin; trial < end; ++trial) {
                             Rng rng = Rng::substream(seed, trial);
                             uint32_t c = 0;
                             for (size_t i = 0; i < n; ++i) {
                                 bool inside = true;
                                 for (int a = 0; a < d; ++a)
                                     inside = rng.uniform01() < cell_edge && inside;
                                 if (inside) ++c;
                             }
                             counts[trial] = c;
                         }
                     });

    const double volume = std::pow(2.0, -static_cast<double>(level) * d);
    std::vector<TailCheck> checks;
    for (double t : t_values) {
        TailCheck tc;
        tc.t = t;
        tc.lower_tail = t < 1.0;
        tc.region_volume = volume;
        tc.threshold = t * static_cast<double>(n) * volume;
        tc.trials = static_cast<uint64_t>(trials);
        for (uint32_t c : counts) {
            const bool exceed = tc.lower_tail ? (c < tc.threshold) : (c > tc.threshold);
            if (exceed) ++tc.exceedances;
        }
        tc.frequency = static_cast<double>(tc.exceedances) / static_cast<double>(trials);
        const double F = t * std::log(t) - t + 1.0;
        tc.bound = std::exp(-static_cast<double>(n) * volume * F);
        tc.sigma = std::sqrt(tc.bound * (1.0 - tc.bound) / static_cast<double>(trials));
        tc.pass = tc.frequency <= tc.bound + 3.0 * tc.sigma;
        checks.push_back(tc);
    }
    return checks;
}

ConcentrationScan concentration_scan(const ExperimentPlan& plan, int workers) {
    validate_plan(plan);
    if (plan.schedule.size() < 2)
        throw std::invalid_argument("trend undefined: concentration needs >= 2 schedule points");
    ConcentrationScan scan;
    scan.records = run_plan(plan, workers);
    const double rate_exp = 1.0 - plan.p / plan.d;
    per_n(scan.records, [&](size_t n, size_t i, size_t j) {
        const double rate = std::pow(static_cast<double>(n), rate_exp);
        std::vector<double> norm;
        for (size_t r = i; r < j; ++r) norm.push_back(scan.records[r].cost_p / rate);
        double sum = 0.0;
        for (double v : norm) sum += v;
        const double mean = sum / static_cast<double>(norm.size());
        double ss = 0.0;
        for (double v : norm) ss += (v - mean) * (v - mean);
        const double sd =
            norm.size() > 1 ? std::sqrt(ss / static_cast<double>(norm.size() - 1)) : 0.0;
        scan.rows.push_back({n, mean, sd, mean != 0.0 ? sd / mean : 0.0});
    });
    scan.in_regime = plan.d <= 2 ? plan.p < plan.d / 2.0 : plan.p < plan.d;
    std::ostringstream os;
    os << (scan.in_regime ? "inside" : "outside")
       << " the summable-deviation regime (p < d/2 for d <= 2, p < d for d >= 3)";
    scan.regime_note = os.str();
    return scan;
}

} // namespace bmst

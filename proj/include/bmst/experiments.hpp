#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "bmst/beta_series.hpp"
#include "bmst/geometry.hpp"

namespace bmst {

struct ExperimentPlan {
    std::string id;                 // experiment name, folded into trial seeds
    std::vector<size_t> schedule;   // strictly increasing n values
    int d = 2;
    double p = 1.0;
    double alpha_R = 0.5;
    MetricKind metric = MetricKind::UnitCube;
    int trials = 1;
    uint64_t seed = 1;
    std::string out_dir = "out";
};

// Throws invalid_argument when the schedule is not strictly increasing,
// trials < 1, alpha_R outside (0,1), or d < 1.
void validate_plan(const ExperimentPlan& plan);

struct ExperimentRecord {
    size_t n = 0, n_R = 0, n_B = 0;
    int d = 1;
    double p = 1.0;
    double alpha_R = 0.5;
    MetricKind metric = MetricKind::UnitCube;
    uint64_t seed = 0;      // per-trial seed; the record is reproducible from it
    double cost_p = 0.0;
    int max_degree = 0;
    double bottleneck = 0.0;
    double hausdorff = 0.0;
    double nn_max_red = 0.0; // worst red point's nearest-blue distance
    double wall_time = 0.0;  // seconds; diagnostic only, never written to artifacts
};

// Trial seed derived from (master seed, experiment id, n, trial index) so any
// record can be regenerated in isolation.
uint64_t derive_trial_seed(uint64_t master, const std::string& id, uint64_t n, uint64_t trial);

// Runs every (n, trial) job of the plan and returns records ordered by
// schedule position then trial index, independent of the worker count.
std::vector<ExperimentRecord> run_plan(const ExperimentPlan& plan, int workers = 0);

// --- small statistics helpers shared by the drivers and their tests ---
double median(std::vector<double> values);
std::pair<double, double> mean_and_stderr(const std::vector<double>& values);
// Least-squares line fit; returns {slope, intercept, r_squared}.
struct LineFit {
    double slope = 0.0, intercept = 0.0, r_squared = 0.0;
};
LineFit linear_fit(const std::vector<double>& xs, const std::vector<double>& ys);
// True when values decrease along the sequence with at most
// `allowed_inversions` adjacent increases.
bool trend_decreasing(const std::vector<double>& values, int allowed_inversions);

struct FriezeCalibration {
    size_t n = 0;
    int trials = 0;
    double mean = 0.0;
    double std_error = 0.0;
};

// Mean MST cost of the complete graph K_n with i.i.d. uniform(0,1) weights.
FriezeCalibration frieze_calibration(size_t n, int trials, uint64_t seed, int workers = 0);

struct DegreeRow {
    size_t n = 0;
    double median_degree = 0.0;
    double median_ratio = 0.0; // max_degree / log n
    double min_ratio = 0.0;
    double max_ratio = 0.0;
};
std::vector<DegreeRow> degree_summary(const std::vector<ExperimentRecord>& records);

struct ScalingRow {
    size_t n = 0;
    double mean_cube = 0.0, se_cube = 0.0;   // cost_p / n^{1-p/d}, cube metric
    double mean_torus = 0.0, se_torus = 0.0; // same trials under the wrap metric
};
struct ScalingScan {
    std::vector<ExperimentRecord> cube_records;
    std::vector<ExperimentRecord> torus_records; // same coordinates, wrap metric
    std::vector<ScalingRow> rows;
};
// Solves each sampled point set under both metrics. Requires p < d.
ScalingScan scaling_scan(const ExperimentPlan& plan, int workers = 0);

struct PlateauFit {
    double a = 0.0;     // extrapolated plateau value
    double a_se = 0.0;
    double b = 0.0;
    double gamma = 0.0; // fitted correction exponent of a + b * n^{-gamma}
    bool fit_ok = true; // false = fell back to the largest-n mean
};
// Weighted fit of a + b * n^{-gamma} with gamma scanned then refined inside
// [0.05, 3]; needs at least 3 schedule points.
PlateauFit plateau_fit(const std::vector<double>& ns, const std::vector<double>& means,
                       const std::vector<double>& ses);

// Direct estimate of the cost constant: normalized torus costs extrapolated to
// the n -> infinity plateau. Requires p < d, schedule length >= 3, trials >= 1.
BetaEstimate direct_beta(int d, double p, double alpha_R, const std::vector<size_t>& schedule,
                         int trials, uint64_t seed, int workers = 0);

// Same extrapolation applied to records that were produced elsewhere (e.g. by
// a run_plan call whose raw records are also being written out).
BetaEstimate direct_beta_from_records(const std::vector<ExperimentRecord>& records, int d,
                                      double p, double alpha_R);

struct RateRow {
    size_t n = 0;
    double median_hausdorff_scaled = 0.0; // hausdorff * (n / log n)^{1/d}
    double median_nn_scaled = 0.0;        // nn_max_red * (n / log n)^{1/d}
};
std::vector<RateRow> rate_summary(const std::vector<ExperimentRecord>& records);

struct TailCheck {
    double t = 0.0;
    bool lower_tail = false; // t < 1: deficiency instead of excess
    double region_volume = 0.0;
    double threshold = 0.0; // t * n * |A|
    uint64_t exceedances = 0;
    uint64_t trials = 0;
    double frequency = 0.0;
    double bound = 0.0; // exp(-n |A| F(t)), F(t) = t log t - t + 1
    double sigma = 0.0; // binomial stderr of the bound
    bool pass = true;   // frequency <= bound + 3 sigma
};
// Occupancy of the first dyadic cell at the given level versus the
// large-deviation bound. Throws on t = 1 (the bound is vacuous there).
std::vector<TailCheck> occupancy_tail_check(size_t n, int d, int level,
                                            const std::vector<double>& t_values, int trials,
                                            uint64_t seed, int workers = 0);

struct ConcentrationRow {
    size_t n = 0;
    double mean_norm = 0.0;
    double sd_norm = 0.0;
    double rel_dev = 0.0; // sd / mean of the normalized cost
};
struct ConcentrationScan {
    std::vector<ExperimentRecord> records;
    std::vector<ConcentrationRow> rows;
    bool in_regime = false; // p < d/2 for d <= 2, p < d for d >= 3
    std::string regime_note;
};
// Requires a schedule of length >= 2 (a single point has no trend).
ConcentrationScan concentration_scan(const ExperimentPlan& plan, int workers = 0);

} // namespace bmst

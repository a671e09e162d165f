// Benchmark of the parallel kernels against their serial reference paths.
// Every comparison also asserts bit-identical results, which is the central
// reproducibility claim of the batching scheme.

#include <chrono>
#include <iomanip>
#include <iostream>

#include "bmst/beta_series.hpp"
#include "bmst/bipartite_mst.hpp"
#include "bmst/experiments.hpp"
#include "bmst/geometry.hpp"
#include "bmst/parallel.hpp"

using namespace bmst;

namespace {

template <typename Fn>
double timed(Fn&& fn) {
    const auto start = std::chrono::steady_clock::now();
    fn();
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
}

int g_failures = 0;

void expect(bool ok, const std::string& what) {
    if (!ok) {
        std::cerr << "MISMATCH: " << what << "\n";
        ++g_failures;
    }
}

void report(const std::string& name, double serial_s, double parallel_s) {
    std::cout << std::left << std::setw(34) << name << " serial " << std::setw(9) << serial_s
              << "s  parallel " << std::setw(9) << parallel_s << "s  speedup "
              << serial_s / parallel_s << "x\n";
}

} // namespace

int main() {
    const int threads = resolve_workers(0);
    std::cout << "worker threads available: " << threads << "\n\n";
    std::cout << std::setprecision(3);

    {
        SeriesTermEstimate serial_est, parallel_est;
        const double ts =
            timed([&] { serial_est = estimate_E(2, 2, 0.5, 2, 400000, 42, {}, 1); });
        const double tp =
            timed([&] { parallel_est = estimate_E(2, 2, 0.5, 2, 400000, 42, {}, 0); });
        report("cluster integral (2,2) d=2", ts, tp);
        expect(serial_est.E_estimate == parallel_est.E_estimate &&
                   serial_est.std_error == parallel_est.std_error,
               "cluster integral results differ between serial and parallel runs");
    }

    {
        ExperimentPlan plan;
        plan.id = "bench";
        plan.schedule = {4096, 8192};
        plan.d = 2;
        plan.p = 1.0;
        plan.trials = 8;
        plan.seed = 7;
        std::vector<ExperimentRecord> serial_rec, parallel_rec;
        const double ts = timed([&] { serial_rec = run_plan(plan, 1); });
        const double tp = timed([&] { parallel_rec = run_plan(plan, 0); });
        report("experiment plan 2x8 solves d=2", ts, tp);
        bool same = serial_rec.size() == parallel_rec.size();
        for (size_t i = 0; same && i < serial_rec.size(); ++i)
            same = serial_rec[i].cost_p == parallel_rec[i].cost_p &&
                   serial_rec[i].seed == parallel_rec[i].seed;
        expect(same, "experiment records differ between serial and parallel runs");
    }

    {
        std::vector<TailCheck> serial_tc, parallel_tc;
        const double ts = timed(
            [&] { serial_tc = occupancy_tail_check(10000, 1, 6, {0.5, 2.0}, 2000, 3, 1); });
        const double tp = timed(
            [&] { parallel_tc = occupancy_tail_check(10000, 1, 6, {0.5, 2.0}, 2000, 3, 0); });
        report("occupancy tails 2000 trials", ts, tp);
        bool same = serial_tc.size() == parallel_tc.size();
        for (size_t i = 0; same && i < serial_tc.size(); ++i)
            same = serial_tc[i].exceedances == parallel_tc[i].exceedances;
        expect(same, "tail exceedance counts differ between serial and parallel runs");
    }

    {
        const auto inst = sample_uniform(1000, 1000, 2, MetricKind::UnitCube, 99);
        SpanningTree brute, grid;
        const double tb = timed([&] { brute = bipartite_mst(inst, SolverKind::Brute); });
        const double tg = timed([&] { grid = bipartite_mst(inst, SolverKind::GridBoruvka); });
        report("solver n=2000 d=2 (brute vs grid)", tb, tg);
        expect(std::abs(brute.cost(1.0) - grid.cost(1.0)) <= 1e-9,
               "solver costs differ between brute force and the grid engine");
    }

    if (g_failures > 0) {
        std::cerr << g_failures << " benchmark consistency failures\n";
        return 1;
    }
    std::cout << "\nall benchmark consistency checks passed\n";
    return 0;
}

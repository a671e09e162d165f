#include <cmath>
#include <stdexcept>
#include <vector>

#include "doctest.h"

#include "bmst/bipartite_mst.hpp"
#include "bmst/experiments.hpp"
#include "bmst/geometry.hpp"

using namespace bmst;

namespace {

ExperimentPlan small_plan() {
    ExperimentPlan plan;
    plan.id = "unit";
    plan.schedule = {32, 64};
    plan.d = 1;
    plan.p = 0.5;
    plan.alpha_R = 0.5;
    plan.metric = MetricKind::UnitCube;
    plan.trials = 3;
    plan.seed = 11;
    return plan;
}

} // namespace

TEST_CASE("trial seeds separate experiments, sizes, and trials") {
    const uint64_t base = derive_trial_seed(1, "exp-a", 100, 0);
    CHECK(base == derive_trial_seed(1, "exp-a", 100, 0));
    CHECK(base != derive_trial_seed(1, "exp-b", 100, 0));
    CHECK(base != derive_trial_seed(1, "exp-a", 101, 0));
    CHECK(base != derive_trial_seed(1, "exp-a", 100, 1));
    CHECK(base != derive_trial_seed(2, "exp-a", 100, 0));
}

TEST_CASE("plan validation") {
    auto plan = small_plan();
    validate_plan(plan);
    plan.schedule = {64, 64};
    CHECK_THROWS_AS(validate_plan(plan), std::invalid_argument);
    plan = small_plan();
    plan.schedule = {};
    CHECK_THROWS_AS(validate_plan(plan), std::invalid_argument);
    plan = small_plan();
    plan.trials = 0;
    CHECK_THROWS_AS(validate_plan(plan), std::invalid_argument);
    plan = small_plan();
    plan.alpha_R = 1.0;
    CHECK_THROWS_AS(validate_plan(plan), std::invalid_argument);
}

TEST_CASE("plan runs are ordered, reproducible, and worker-independent") {
    const auto plan = small_plan();
    const auto records = run_plan(plan, 1);
    REQUIRE(records.size() == 6);
    CHECK(records[0].n == 32);
    CHECK(records[2].n == 32);
    CHECK(records[3].n == 64);
    CHECK(records[0].n_R == 16);
    for (const auto& r : records) {
        CHECK(r.cost_p > 0.0);
        CHECK(r.max_degree >= 1);
        CHECK(r.bottleneck > 0.0);
        CHECK(r.hausdorff >= r.nn_max_red - 1e-15);
    }

    const auto again = run_plan(plan, 1);
    const auto parallel = run_plan(plan, 4);
    for (size_t i = 0; i < records.size(); ++i) {
        CHECK(records[i].cost_p == again[i].cost_p);
        CHECK(records[i].cost_p == parallel[i].cost_p);
        CHECK(records[i].seed == parallel[i].seed);
    }
}

TEST_CASE("any record can be regenerated from its own seed") {
    const auto records = run_plan(small_plan(), 0);
    const auto& rec = records[4];
    const auto inst = sample_uniform(rec.n_R, rec.n_B, rec.d, rec.metric, rec.seed);
    const auto tree = bipartite_mst(inst, SolverKind::GridBoruvka);
    CHECK(tree.cost(rec.p) == doctest::Approx(rec.cost_p).epsilon(1e-12));
    CHECK(tree.max_degree() == rec.max_degree);
}

TEST_CASE("statistics helpers") {
    CHECK(median({3.0, 1.0, 2.0}) == doctest::Approx(2.0));
    CHECK(median({4.0, 1.0, 2.0, 3.0}) == doctest::Approx(2.5));
    const auto [m, se] = mean_and_stderr({1.0, 2.0, 3.0});
    CHECK(m == doctest::Approx(2.0));
    CHECK(se == doctest::Approx(1.0 / std::sqrt(3.0)));

    const auto fit = linear_fit({1.0, 2.0, 3.0}, {2.0, 4.0, 6.0});
    CHECK(fit.slope == doctest::Approx(2.0));
    CHECK(fit.intercept == doctest::Approx(0.0));
    CHECK(fit.r_squared == doctest::Approx(1.0));
    CHECK_THROWS_AS(linear_fit({1.0, 1.0}, {2.0, 3.0}), std::invalid_argument);

    CHECK(trend_decreasing({3.0, 2.0, 1.0}, 0));
    CHECK(trend_decreasing({3.0, 2.0, 2.5, 1.0}, 1));
    CHECK_FALSE(trend_decreasing({3.0, 2.0, 2.5, 1.0}, 0));
    CHECK_FALSE(trend_decreasing({1.0, 2.0, 3.0}, 1));
    CHECK_THROWS_AS(trend_decreasing({1.0}, 0), std::invalid_argument);
}

TEST_CASE("plateau fit recovers a synthetic correction curve") {
    const double a = 1.1, b = 0.8, gamma = 0.7;
    std::vector<double> ns, means, ses;
    for (double n : {256.0, 512.0, 1024.0, 2048.0, 4096.0, 8192.0}) {
        ns.push_back(n);
        means.push_back(a + b * std::pow(n, -gamma));
        ses.push_back(0.01);
    }
    const auto fit = plateau_fit(ns, means, ses);
    CHECK(fit.fit_ok);
    CHECK(fit.a == doctest::Approx(a).epsilon(0.02));
    CHECK(fit.gamma == doctest::Approx(gamma).epsilon(0.1));
}

TEST_CASE("complete-graph calibration at the smallest size") {
    // K_2 has a single uniform(0,1) edge, so the mean tree cost is 1/2.
    const auto res = frieze_calibration(2, 4000, 3);
    CHECK(res.n == 2);
    CHECK(res.trials == 4000);
    REQUIRE(res.std_error > 0.0);
    CHECK(std::fabs(res.mean - 0.5) <= 4.0 * res.std_error);
    const auto again = frieze_calibration(2, 4000, 3);
    CHECK(res.mean == again.mean);
    const auto parallel = frieze_calibration(2, 4000, 3, 4);
    CHECK(res.mean == parallel.mean);
}

TEST_CASE("occupancy tail check math and validation") {
    CHECK_THROWS_AS(occupancy_tail_check(100, 1, 2, {1.0}, 10, 1), std::invalid_argument);
    CHECK_THROWS_AS(occupancy_tail_check(100, 1, 2, {-0.5}, 10, 1), std::invalid_argument);

    const auto checks = occupancy_tail_check(100, 1, 2, {0.25, 2.0}, 400, 5);
    REQUIRE(checks.size() == 2);
    const auto& low = checks[0];
    CHECK(low.t == 0.25);
    CHECK(low.lower_tail);
    CHECK(low.region_volume == doctest::Approx(0.25));
    CHECK(low.threshold == doctest::Approx(0.25 * 100 * 0.25));
    const auto& high = checks[1];
    CHECK_FALSE(high.lower_tail);
    const double F2 = 2.0 * std::log(2.0) - 1.0;
    CHECK(high.bound == doctest::Approx(std::exp(-100.0 * 0.25 * F2)).epsilon(1e-12));
    CHECK(high.trials == 400);
    CHECK(high.frequency ==
          doctest::Approx(static_cast<double>(high.exceedances) / 400.0).epsilon(1e-12));

    const auto serial = occupancy_tail_check(100, 1, 2, {0.25, 2.0}, 400, 5, 1);
    const auto parallel = occupancy_tail_check(100, 1, 2, {0.25, 2.0}, 400, 5, 4);
    for (size_t i = 0; i < serial.size(); ++i)
        CHECK(serial[i].exceedances == parallel[i].exceedances);
}

TEST_CASE("scaling scan solves the same points under both metrics") {
    ExperimentPlan plan;
    plan.id = "unit-scaling";
    plan.schedule = {48, 96};
    plan.d = 2;
    plan.p = 1.0;
    plan.alpha_R = 0.5;
    plan.trials = 4;
    plan.seed = 21;
    const auto scan = scaling_scan(plan, 0);
    REQUIRE(scan.cube_records.size() == scan.torus_records.size());
    for (size_t i = 0; i < scan.cube_records.size(); ++i) {
        CHECK(scan.cube_records[i].seed == scan.torus_records[i].seed);
        CHECK(scan.torus_records[i].cost_p <= scan.cube_records[i].cost_p + 1e-12);
    }
    REQUIRE(scan.rows.size() == 2);
    CHECK(scan.rows[0].n == 48);
    CHECK(scan.rows[0].mean_torus <= scan.rows[0].mean_cube + 1e-12);

    plan.p = 3.0; // p >= d leaves the normalization regime
    CHECK_THROWS_AS(scaling_scan(plan, 0), std::invalid_argument);
}

TEST_CASE("direct plateau estimate runs end to end") {
    const auto est = direct_beta(1, 0.5, 0.5, {64, 128, 256}, 5, 7);
    CHECK(est.d == 1);
    CHECK(est.p == 0.5);
    CHECK(est.K_max == 0);
    CHECK(est.value > 0.0);
    CHECK(std::isfinite(est.std_error));
    CHECK_THROWS_AS(direct_beta(1, 1.5, 0.5, {64, 128, 256}, 5, 7), std::invalid_argument);
    CHECK_THROWS_AS(direct_beta(1, 0.5, 0.5, {64, 128}, 5, 7), std::invalid_argument);
}

TEST_CASE("summaries group records by schedule point") {
    const auto records = run_plan(small_plan(), 0);
    const auto deg = degree_summary(records);
    REQUIRE(deg.size() == 2);
    CHECK(deg[0].n == 32);
    CHECK(deg[0].median_ratio == doctest::Approx(deg[0].median_degree / std::log(32.0)));
    CHECK(deg[0].min_ratio <= deg[0].median_ratio);
    CHECK(deg[0].max_ratio >= deg[0].median_ratio);

    const auto rates = rate_summary(records);
    REQUIRE(rates.size() == 2);
    CHECK(rates[1].n == 64);
    CHECK(rates[0].median_hausdorff_scaled > 0.0);
    CHECK(rates[0].median_nn_scaled > 0.0);
}

TEST_CASE("concentration scan computes relative deviations in regime") {
    ExperimentPlan plan;
    plan.id = "unit-conc";
    plan.schedule = {64, 128};
    plan.d = 1;
    plan.p = 0.4;
    plan.alpha_R = 0.5;
    plan.trials = 6;
    plan.seed = 31;
    const auto scan = concentration_scan(plan, 0);
    REQUIRE(scan.rows.size() == 2);
    CHECK(scan.in_regime); // p = 0.4 < d/2 = 0.5
    CHECK_FALSE(scan.regime_note.empty());
    for (const auto& row : scan.rows) {
        CHECK(row.mean_norm > 0.0);
        CHECK(row.sd_norm >= 0.0);
        CHECK(row.rel_dev == doctest::Approx(row.sd_norm / row.mean_norm));
    }

    plan.p = 0.8; // still p < d but outside the declared concentration window
    const auto out = concentration_scan(plan, 0);
    CHECK_FALSE(out.in_regime);

    plan.schedule = {64};
    CHECK_THROWS_AS(concentration_scan(plan, 0), std::invalid_argument);
}

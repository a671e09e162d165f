// Command-line surface of the bipartite-MST toolkit. Every subcommand is
// deterministic for a fixed (argv, seed) pair within one build: worker count
// changes execution order but never the artifacts.

#include <cstdint>
#include <iostream>
#include <set>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"

#include "bmst/beta_series.hpp"
#include "bmst/bipartite_mst.hpp"
#include "bmst/experiments.hpp"
#include "bmst/geometry.hpp"
#include "bmst/graph.hpp"
#include "bmst/io.hpp"
#include "bmst/parallel.hpp"
#include "bmst/rng.hpp"
#include "bmst/structure_checks.hpp"

namespace {

using bmst::Table;
using ojson = nlohmann::ordered_json;

struct Common {
    uint64_t seed = 1;
    std::string out = "out";
    int workers = 0;
    std::string format = "csv";
    std::string config_path;
    CLI::Option* seed_opt = nullptr;
    CLI::Option* out_opt = nullptr;
    CLI::Option* workers_opt = nullptr;
    CLI::Option* format_opt = nullptr;
};

void add_common(CLI::App* cmd, Common& c) {
    c.seed_opt = cmd->add_option("--seed", c.seed, "Master RNG seed (default 1)");
    c.out_opt = cmd->add_option("--out", c.out, "Output directory (default out)");
    c.workers_opt = cmd->add_option("--workers", c.workers, "Worker threads, 0 = auto");
    c.format_opt = cmd->add_option("--format", c.format, "Table format: csv or json");
    cmd->add_option("--config", c.config_path,
                    "JSON config file; explicit flags take precedence over it");
}

std::vector<size_t> parse_schedule(const std::string& s) {
    std::vector<size_t> out;
    std::stringstream ss(s);
    std::string item;
    while (std::getline(ss, item, ','))
        if (!item.empty()) out.push_back(static_cast<size_t>(std::stoull(item)));
    if (out.empty()) throw std::invalid_argument("empty n schedule");
    return out;
}

std::vector<double> parse_double_list(const std::string& s) {
    std::vector<double> out;
    std::stringstream ss(s);
    std::string item;
    while (std::getline(ss, item, ','))
        if (!item.empty()) out.push_back(std::stod(item));
    if (out.empty()) throw std::invalid_argument("empty value list");
    return out;
}

// Flags > config file > defaults: any option the user did not pass on the
// command line is looked up in the config object before the default stands.
class ConfigFill {
public:
    explicit ConfigFill(const std::string& path) {
        if (path.empty()) return;
        obj_ = ojson::parse(bmst::read_text_file(path));
        if (!obj_.is_object())
            throw std::invalid_argument("config file must hold a JSON object");
    }

    template <typename T>
    void fill(CLI::Option* opt, const char* key, T& value) {
        used_.insert(key);
        if (opt != nullptr && opt->count() > 0) return;
        if (obj_.contains(key)) value = obj_.at(key).get<T>();
    }

    void fill_list_u(CLI::Option* opt, const char* key, std::string& value) {
        used_.insert(key);
        if (opt != nullptr && opt->count() > 0) return;
        if (!obj_.contains(key)) return;
        const auto& v = obj_.at(key);
        if (v.is_string()) {
            value = v.get<std::string>();
            return;
        }
        if (!v.is_array()) throw std::invalid_argument(std::string("config key ") + key +
                                                       " must be an array or a string");
        std::string joined;
        for (const auto& e : v) {
            if (!joined.empty()) joined += ',';
            joined += e.dump();
        }
        value = joined;
    }

    void finish(const Common& c) const {
        for (const auto& [k, v] : obj_.items())
            if (!used_.count(k))
                throw std::invalid_argument("unknown config key: " + k);
        if (c.format != "csv" && c.format != "json")
            throw std::invalid_argument("format must be csv or json");
        if (c.workers < 0) throw std::invalid_argument("workers must be >= 0");
    }

private:
    ojson obj_ = ojson::object();
    std::set<std::string> used_;
};

void fill_common(ConfigFill& cfg, Common& c) {
    cfg.fill(c.seed_opt, "seed", c.seed);
    cfg.fill(c.out_opt, "out", c.out);
    cfg.fill(c.workers_opt, "workers", c.workers);
    cfg.fill(c.format_opt, "format", c.format);
}

// Collects written paths, renders tables in the chosen format, writes the
// effective config next to the outputs, and echoes everything as JSON.
struct ArtifactSink {
    std::string out_dir;
    std::string format;
    std::string comment; // single-line effective config, used as CSV header
    std::vector<std::string> paths;

    void write_table(const std::string& stem, const Table& t) {
        const std::string path =
            out_dir + "/" + stem + (format == "json" ? ".json" : ".csv");
        bmst::write_text_file(path, format == "json" ? bmst::to_json_records(t)
                                                     : bmst::to_csv(t, comment));
        paths.push_back(path);
    }

    void write_json(const std::string& name, const std::string& payload) {
        const std::string path = out_dir + "/" + name;
        bmst::write_text_file(path, payload + "\n");
        paths.push_back(path);
    }

    void echo(const std::string& command) const {
        std::vector<std::string> items;
        items.reserve(paths.size());
        for (const auto& p : paths) items.push_back("\"" + bmst::json_escape(p) + "\"");
        bmst::JsonObject o;
        o.str("command", command).str("out", out_dir).raw("artifacts", bmst::json_array(items));
        std::cout << o.dump() << "\n";
    }
};

ArtifactSink make_sink(const std::string& command, const Common& c, ojson effective) {
    effective["command"] = command;
    effective["seed"] = c.seed;
    effective["out"] = c.out;
    effective["workers"] = c.workers;
    effective["format"] = c.format;
    effective["version"] = bmst::kToolkitVersion;
    ArtifactSink sink;
    sink.out_dir = c.out;
    sink.format = c.format;
    sink.comment = effective.dump();
    bmst::write_text_file(c.out + "/effective_config.json", effective.dump(2) + "\n");
    sink.paths.push_back(c.out + "/effective_config.json");
    return sink;
}

std::pair<size_t, size_t> split_counts(size_t n, double alpha_R) {
    const auto n_R = static_cast<size_t>(std::llround(alpha_R * static_cast<double>(n)));
    if (n_R == 0 || n_R >= n)
        throw std::invalid_argument("n and alpha leave one color class empty");
    return {n_R, n - n_R};
}

// ---------------------------------------------------------------- gen / solve

struct GenOpts {
    size_t n = 100;
    int d = 2;
    double alpha = 0.5;
    std::string metric = "cube";
    double p = 1.0;
    std::string solver = "grid";
    CLI::Option *n_opt = nullptr, *d_opt = nullptr, *alpha_opt = nullptr, *metric_opt = nullptr,
                *p_opt = nullptr, *solver_opt = nullptr;
};

void add_gen_opts(CLI::App* cmd, GenOpts& g, bool with_solver) {
    g.n_opt = cmd->add_option("--n", g.n, "Total point count (default 100)");
    g.d_opt = cmd->add_option("--d", g.d, "Dimension (default 2)");
    g.alpha_opt = cmd->add_option("--alpha", g.alpha, "Red fraction alpha_R (default 0.5)");
    g.metric_opt = cmd->add_option("--metric", g.metric, "cube or torus (default cube)");
    if (with_solver) {
        g.p_opt = cmd->add_option("--p", g.p, "Cost exponent p (default 1)");
        g.solver_opt = cmd->add_option("--solver", g.solver, "grid or brute (default grid)");
    }
}

void fill_gen_opts(ConfigFill& cfg, GenOpts& g, bool with_solver) {
    cfg.fill(g.n_opt, "n", g.n);
    cfg.fill(g.d_opt, "d", g.d);
    cfg.fill(g.alpha_opt, "alpha", g.alpha);
    cfg.fill(g.metric_opt, "metric", g.metric);
    if (with_solver) {
        cfg.fill(g.p_opt, "p", g.p);
        cfg.fill(g.solver_opt, "solver", g.solver);
    }
}

int run_gen(const Common& c, const GenOpts& g) {
    const auto metric = bmst::metric_from_name(g.metric);
    const auto [n_R, n_B] = split_counts(g.n, g.alpha);
    const auto inst = bmst::sample_uniform(n_R, n_B, g.d, metric, c.seed);
    ojson eff{{"n", g.n}, {"d", g.d}, {"alpha", g.alpha}, {"metric", g.metric}};
    ArtifactSink sink = make_sink("gen", c, eff);
    sink.write_table("instance", bmst::instance_table(inst));
    sink.echo("gen");
    return 0;
}

int run_solve(const Common& c, const GenOpts& g) {
    const auto metric = bmst::metric_from_name(g.metric);
    bmst::SolverKind solver;
    if (g.solver == "grid") solver = bmst::SolverKind::GridBoruvka;
    else if (g.solver == "brute") solver = bmst::SolverKind::Brute;
    else throw std::invalid_argument("solver must be grid or brute");
    const auto [n_R, n_B] = split_counts(g.n, g.alpha);
    const auto inst = bmst::sample_uniform(n_R, n_B, g.d, metric, c.seed);
    const auto tree = bmst::bipartite_mst(inst, solver);

    ojson eff{{"n", g.n},         {"d", g.d},   {"alpha", g.alpha},
              {"metric", g.metric}, {"p", g.p}, {"solver", g.solver}};
    ArtifactSink sink = make_sink("solve", c, eff);
    sink.write_table("instance", bmst::instance_table(inst));
    sink.write_table("tree", bmst::tree_table(tree));
    bmst::JsonObject o;
    o.num("n", g.n)
        .num("n_R", n_R)
        .num("n_B", n_B)
        .num("d", g.d)
        .num("p", g.p)
        .num("alpha_R", g.alpha)
        .str("metric", g.metric)
        .num("seed", c.seed)
        .str("solver", g.solver)
        .num("cost_p", tree.cost(g.p))
        .num("bottleneck", tree.bottleneck)
        .num("max_degree", tree.max_degree())
        .num("hausdorff", bmst::grid_hausdorff(inst.red, inst.blue, metric))
        .num("nn_max_red", bmst::grid_directed_nn_max(inst.red, inst.blue, metric));
    sink.write_json("summary.json", o.dump());
    sink.echo("solve");
    return 0;
}

// --------------------------------------------------------------------- verify

struct VerifyOpts {
    size_t n = 200;
    int d = 2;
    double alpha = 0.5;
    double p = 0.5;
    int instances = 20;
    std::string checks = "all";
    std::string corrupt;
    CLI::Option *n_opt = nullptr, *d_opt = nullptr, *alpha_opt = nullptr, *p_opt = nullptr,
                *instances_opt = nullptr, *checks_opt = nullptr, *corrupt_opt = nullptr;
};

const std::vector<std::string> kAllChecks = {"cut", "lens", "pinv", "mono", "transfer", "bdiff"};

bmst::LemmaReport run_corruption(const std::string& which, const VerifyOpts& v, uint64_t seed) {
    using namespace bmst;
    if (which == "lens") {
        const auto [inst, bad] = empty_cone_corruption_fixture();
        return check_empty_cone(inst, bad);
    }
    if (which == "transfer") {
        // Fixed low-dimension fixture: shrinking the torus-side cost by 4x
        // breaks the transfer inequality by a wide margin.
        const auto inst = sample_uniform(100, 100, 1, MetricKind::UnitCube, seed);
        const double bneck = bottleneck_threshold(inst);
        const double delta = std::max(2.0 * bneck, 0.06);
        return check_torus_cube_transfer(inst, delta, 0.5, 0.25);
    }
    const auto [n_R, n_B] = split_counts(v.n, v.alpha);
    const auto inst = sample_uniform(n_R, n_B, v.d, MetricKind::UnitCube, seed);
    if (which == "cut") {
        const auto tree = bipartite_mst(inst, SolverKind::GridBoruvka);
        return check_cut_property(inst, corrupt_cut_property(inst, tree));
    }
    if (which == "pinv") {
        const auto tree = bipartite_mst(inst, SolverKind::GridBoruvka);
        return check_p_invariance(inst, corrupt_edge_swap(inst, tree));
    }
    if (which == "mono") {
        const auto bad = bipartite_max_tree(inst);
        return check_mono_to_bi_bound(inst.red, inst.blue, v.p, inst.metric, bad.cost(v.p));
    }
    if (which == "bdiff") {
        BipartiteInstance twin = inst;
        Rng rng = Rng::substream(seed, 1);
        for (int a = 0; a < twin.d(); ++a) twin.red.ptr(0)[a] = rng.uniform01();
        const auto claimed = bipartite_zigzag_path(inst);
        const auto honest = bipartite_mst(twin, SolverKind::GridBoruvka);
        return bounded_difference_tree_report(inst, twin, v.p, claimed, honest);
    }
    throw std::invalid_argument("unknown corruption: " + which);
}

int run_verify(const Common& c, const VerifyOpts& v) {
    using namespace bmst;
    std::vector<std::string> selected;
    if (v.checks == "all") {
        selected = kAllChecks;
    } else {
        std::stringstream ss(v.checks);
        std::string item;
        while (std::getline(ss, item, ','))
            if (!item.empty()) selected.push_back(item);
        for (const auto& s : selected)
            if (std::find(kAllChecks.begin(), kAllChecks.end(), s) == kAllChecks.end())
                throw std::invalid_argument("unknown check: " + s);
        if (selected.empty()) throw std::invalid_argument("no checks selected");
    }

    ojson eff{{"n", v.n},           {"d", v.d},         {"alpha", v.alpha}, {"p", v.p},
              {"instances", v.instances}, {"checks", v.checks}, {"corrupt", v.corrupt}};
    ArtifactSink sink = make_sink("verify", c, eff);

    std::vector<LemmaReport> reports;
    if (!v.corrupt.empty()) {
        if (std::find(kAllChecks.begin(), kAllChecks.end(), v.corrupt) == kAllChecks.end())
            throw std::invalid_argument("unknown corruption: " + v.corrupt);
        reports.push_back(run_corruption(v.corrupt, v, c.seed));
    } else {
        if (v.instances < 1) throw std::invalid_argument("need instances >= 1");
        const bool wants_transfer =
            std::find(selected.begin(), selected.end(), "transfer") != selected.end();
        const size_t transfer_floor = v.d == 1 ? 40 : (v.d == 2 ? 60 : 300);
        if (wants_transfer && v.n < transfer_floor) {
            std::ostringstream os;
            os << "transfer check at d=" << v.d << " needs n >= " << transfer_floor
               << " to keep the bottleneck below 1/2";
            throw std::invalid_argument(os.str());
        }
        for (int i = 0; i < v.instances; ++i) {
            const uint64_t seed = derive_trial_seed(c.seed, "verify", v.n, i);
            const auto [n_R, n_B] = split_counts(v.n, v.alpha);
            const auto inst = sample_uniform(n_R, n_B, v.d, MetricKind::UnitCube, seed);
            const auto tree = bipartite_mst(inst, SolverKind::GridBoruvka);
            for (const auto& chk : selected) {
                if (chk == "cut") reports.push_back(check_cut_property(inst, tree));
                else if (chk == "lens") reports.push_back(check_empty_cone(inst, tree));
                else if (chk == "pinv") reports.push_back(check_p_invariance(inst, tree));
                else if (chk == "mono")
                    reports.push_back(check_mono_to_bi_bound(inst.red, inst.blue, v.p,
                                                             inst.metric, tree.cost(v.p)));
                else if (chk == "transfer") {
                    const double bneck = tree.bottleneck;
                    const double delta = std::min(2.0 * bneck, 0.5 * (bneck + 0.49));
                    reports.push_back(check_torus_cube_transfer(inst, delta, v.p));
                } else if (chk == "bdiff")
                    reports.push_back(check_bounded_difference(inst, v.p, seed));
            }
        }
    }

    size_t failures = 0;
    for (const auto& r : reports)
        if (!r.pass) ++failures;
    sink.write_json("reports.json", lemma_reports_json(reports));
    JsonObject o;
    o.num("reports", reports.size())
        .num("failures", failures)
        .str("checks", v.checks)
        .str("corrupt", v.corrupt);
    sink.write_json("summary.json", o.dump());
    sink.echo("verify");
    return failures == 0 ? 0 : 1;
}

// ------------------------------------------------------------- beta commands

struct BetaSeriesOpts {
    int d = 1;
    double p = 0.5;
    double alpha = 0.5;
    int kmax = 8;
    uint64_t samples = 100000;
    uint64_t inner = 10000;
    CLI::Option *d_opt = nullptr, *p_opt = nullptr, *alpha_opt = nullptr, *kmax_opt = nullptr,
                *samples_opt = nullptr, *inner_opt = nullptr;
};

int run_beta_series(const Common& c, const BetaSeriesOpts& b) {
    bmst::VolumeOpts opts;
    opts.inner_samples = b.inner;
    const auto est =
        bmst::estimate_beta(b.d, b.p, b.alpha, b.kmax, b.samples, c.seed, opts, c.workers);
    ojson eff{{"d", b.d},       {"p", b.p},           {"alpha", b.alpha},
              {"kmax", b.kmax}, {"samples", b.samples}, {"inner", b.inner}};
    ArtifactSink sink = make_sink("beta-series", c, eff);
    sink.write_table("terms", bmst::term_table(est));
    sink.write_json("beta.json", bmst::beta_json(est));
    sink.echo("beta-series");
    return 0;
}

struct BetaDirectOpts {
    int d = 1;
    double p = 0.5;
    double alpha = 0.5;
    std::string schedule = "2048,4096,8192,16384,32768";
    int trials = 50;
    CLI::Option *d_opt = nullptr, *p_opt = nullptr, *alpha_opt = nullptr, *schedule_opt = nullptr,
                *trials_opt = nullptr;
};

int run_beta_direct(const Common& c, const BetaDirectOpts& b) {
    bmst::ExperimentPlan plan;
    plan.id = "beta-direct";
    plan.schedule = parse_schedule(b.schedule);
    plan.d = b.d;
    plan.p = b.p;
    plan.alpha_R = b.alpha;
    plan.metric = bmst::MetricKind::FlatTorus;
    plan.trials = b.trials;
    plan.seed = c.seed;
    if (!(b.p > 0.0 && b.p < b.d))
        throw std::invalid_argument("out-of-regime: direct estimate requires 0 < p < d");
    const auto records = bmst::run_plan(plan, c.workers);
    const auto est = bmst::direct_beta_from_records(records, b.d, b.p, b.alpha);

    ojson eff{{"d", b.d},
              {"p", b.p},
              {"alpha", b.alpha},
              {"schedule", ojson(plan.schedule)},
              {"trials", b.trials}};
    ArtifactSink sink = make_sink("beta-direct", c, eff);
    sink.write_table("records", bmst::records_table(records));
    sink.write_json("beta.json", bmst::beta_json(est));
    sink.echo("beta-direct");
    return 0;
}

// ------------------------------------------------------------ scan commands

struct ScanOpts {
    std::string schedule = "1024,2048,4096,8192,16384,32768";
    int trials = 20;
    int d = 2;
    double p = 1.0;
    double alpha = 0.5;
    std::string metric = "cube";
    CLI::Option *schedule_opt = nullptr, *trials_opt = nullptr, *d_opt = nullptr,
                *p_opt = nullptr, *alpha_opt = nullptr, *metric_opt = nullptr;
};

void add_scan_opts(CLI::App* cmd, ScanOpts& s, bool with_p, bool with_metric) {
    s.schedule_opt = cmd->add_option("--schedule", s.schedule, "Comma-separated n values");
    s.trials_opt = cmd->add_option("--trials", s.trials, "Trials per n");
    s.d_opt = cmd->add_option("--d", s.d, "Dimension");
    if (with_p) s.p_opt = cmd->add_option("--p", s.p, "Cost exponent");
    s.alpha_opt = cmd->add_option("--alpha", s.alpha, "Red fraction alpha_R");
    if (with_metric) s.metric_opt = cmd->add_option("--metric", s.metric, "cube or torus");
}

void fill_scan_opts(ConfigFill& cfg, ScanOpts& s, bool with_p, bool with_metric) {
    cfg.fill_list_u(s.schedule_opt, "schedule", s.schedule);
    cfg.fill(s.trials_opt, "trials", s.trials);
    cfg.fill(s.d_opt, "d", s.d);
    if (with_p) cfg.fill(s.p_opt, "p", s.p);
    cfg.fill(s.alpha_opt, "alpha", s.alpha);
    if (with_metric) cfg.fill(s.metric_opt, "metric", s.metric);
}

bmst::ExperimentPlan scan_plan(const std::string& id, const Common& c, const ScanOpts& s) {
    bmst::ExperimentPlan plan;
    plan.id = id;
    plan.schedule = parse_schedule(s.schedule);
    plan.d = s.d;
    plan.p = s.p;
    plan.alpha_R = s.alpha;
    plan.metric = bmst::metric_from_name(s.metric);
    plan.trials = s.trials;
    plan.seed = c.seed;
    plan.out_dir = c.out;
    return plan;
}

ojson scan_eff(const ScanOpts& s, bool with_p, bool with_metric) {
    ojson eff{{"schedule", ojson(parse_schedule(s.schedule))}, {"trials", s.trials}, {"d", s.d}};
    if (with_p) eff["p"] = s.p;
    eff["alpha"] = s.alpha;
    if (with_metric) eff["metric"] = s.metric;
    return eff;
}

int run_scan_degree(const Common& c, const ScanOpts& s) {
    const auto plan = scan_plan("scan-degree", c, s);
    const auto records = bmst::run_plan(plan, c.workers);
    const auto rows = bmst::degree_summary(records);
    std::vector<double> logn, med;
    double min_ratio = rows.front().median_ratio, max_ratio = rows.front().median_ratio;
    for (const auto& r : rows) {
        logn.push_back(std::log(static_cast<double>(r.n)));
        med.push_back(r.median_degree);
        min_ratio = std::min(min_ratio, r.median_ratio);
        max_ratio = std::max(max_ratio, r.median_ratio);
    }
    ArtifactSink sink = make_sink("scan-degree", c, scan_eff(s, false, true));
    sink.write_table("records", bmst::records_table(records));
    sink.write_table("degree", bmst::degree_table(rows));
    bmst::JsonObject o;
    o.num("band_ratio", max_ratio / min_ratio)
        .num("endpoint_growth", rows.back().median_degree - rows.front().median_degree);
    if (rows.size() >= 2) {
        const auto fit = bmst::linear_fit(logn, med);
        o.num("fit_slope", fit.slope).num("fit_intercept", fit.intercept).num("r_squared",
                                                                              fit.r_squared);
    }
    sink.write_json("summary.json", o.dump());
    sink.echo("scan-degree");
    return 0;
}

int run_scan_scaling(const Common& c, const ScanOpts& s) {
    auto plan = scan_plan("scan-scaling", c, s);
    const auto scan = bmst::scaling_scan(plan, c.workers);
    ArtifactSink sink = make_sink("scan-scaling", c, scan_eff(s, true, false));
    sink.write_table("records_cube", bmst::records_table(scan.cube_records));
    sink.write_table("records_torus", bmst::records_table(scan.torus_records));
    sink.write_table("scaling", bmst::scaling_table(scan.rows));
    const auto& rows = scan.rows;
    bmst::JsonObject o;
    if (rows.size() >= 2) {
        const auto& a = rows[rows.size() - 2];
        const auto& b = rows.back();
        o.num("plateau_ratio_cube", b.mean_cube / a.mean_cube)
            .num("plateau_ratio_torus", b.mean_torus / a.mean_torus)
            .num("drift_cube", std::fabs(rows.back().mean_cube - rows.front().mean_cube))
            .num("drift_torus", std::fabs(rows.back().mean_torus - rows.front().mean_torus));
    }
    sink.write_json("summary.json", o.dump());
    sink.echo("scan-scaling");
    return 0;
}

int run_scan_rates(const Common& c, const ScanOpts& s) {
    const auto plan = scan_plan("scan-rates", c, s);
    const auto records = bmst::run_plan(plan, c.workers);
    const auto rows = bmst::rate_summary(records);
    ArtifactSink sink = make_sink("scan-rates", c, scan_eff(s, false, true));
    sink.write_table("records", bmst::records_table(records));
    sink.write_table("rates", bmst::rate_table(rows));
    double h_min = rows.front().median_hausdorff_scaled, h_max = h_min;
    double n_min = rows.front().median_nn_scaled, n_max = n_min;
    for (const auto& r : rows) {
        h_min = std::min(h_min, r.median_hausdorff_scaled);
        h_max = std::max(h_max, r.median_hausdorff_scaled);
        n_min = std::min(n_min, r.median_nn_scaled);
        n_max = std::max(n_max, r.median_nn_scaled);
    }
    bmst::JsonObject o;
    o.num("hausdorff_band_ratio", h_max / h_min).num("nn_band_ratio", n_max / n_min);
    sink.write_json("summary.json", o.dump());
    sink.echo("scan-rates");
    return 0;
}

int run_scan_concentration(const Common& c, const ScanOpts& s) {
    auto plan = scan_plan("scan-concentration", c, s);
    const auto scan = bmst::concentration_scan(plan, c.workers);
    ArtifactSink sink = make_sink("scan-concentration", c, scan_eff(s, true, true));
    sink.write_table("records", bmst::records_table(scan.records));
    sink.write_table("concentration", bmst::concentration_table(scan.rows));
    std::vector<double> devs;
    for (const auto& r : scan.rows) devs.push_back(r.rel_dev);
    bmst::JsonObject o;
    o.boolean("in_regime", scan.in_regime)
        .str("regime_note", scan.regime_note)
        .boolean("trend_decreasing", bmst::trend_decreasing(devs, 1))
        .num("initial_rel_dev", devs.front())
        .num("final_rel_dev", devs.back());
    sink.write_json("summary.json", o.dump());
    sink.echo("scan-concentration");
    return 0;
}

// ------------------------------------------------------- frieze / tail-check

struct FriezeOpts {
    size_t n = 200;
    int trials = 200;
    CLI::Option *n_opt = nullptr, *trials_opt = nullptr;
};

int run_frieze(const Common& c, const FriezeOpts& f) {
    const auto res = bmst::frieze_calibration(f.n, f.trials, c.seed, c.workers);
    ojson eff{{"n", f.n}, {"trials", f.trials}};
    ArtifactSink sink = make_sink("calibrate-frieze", c, eff);
    const double zeta3 = 1.2020569031595943;
    bmst::JsonObject o;
    o.num("n", res.n)
        .num("trials", res.trials)
        .num("mean", res.mean)
        .num("std_error", res.std_error)
        .num("zeta3", zeta3)
        .num("relative_gap", std::fabs(res.mean - zeta3) / zeta3);
    sink.write_json("summary.json", o.dump());
    sink.echo("calibrate-frieze");
    return 0;
}

struct TailOpts {
    size_t n = 10000;
    int d = 1;
    int level = 6;
    int trials = 1000;
    std::string t = "0.25,0.5,2,4";
    CLI::Option *n_opt = nullptr, *d_opt = nullptr, *level_opt = nullptr, *trials_opt = nullptr,
                *t_opt = nullptr;
};

int run_tail_check(const Common& c, const TailOpts& t) {
    const auto checks =
        bmst::occupancy_tail_check(t.n, t.d, t.level, parse_double_list(t.t), t.trials, c.seed,
                                   c.workers);
    ojson eff{{"n", t.n}, {"d", t.d}, {"level", t.level}, {"trials", t.trials}, {"t", t.t}};
    ArtifactSink sink = make_sink("tail-check", c, eff);
    sink.write_table("tails", bmst::tail_table(checks));
    size_t failures = 0;
    for (const auto& chk : checks)
        if (!chk.pass) ++failures;
    bmst::JsonObject o;
    o.num("checks", checks.size()).num("failures", failures);
    sink.write_json("summary.json", o.dump());
    sink.echo("tail-check");
    return failures == 0 ? 0 : 1;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Bipartite Euclidean MST simulation and verification toolkit"};
    app.require_subcommand(1);

    Common c_gen, c_solve, c_verify, c_bser, c_bdir, c_deg, c_scal, c_conc, c_rate, c_frieze,
        c_tail;
    GenOpts gen_opts, solve_opts;
    VerifyOpts verify_opts;
    BetaSeriesOpts bser_opts;
    BetaDirectOpts bdir_opts;
    ScanOpts deg_opts, scal_opts, conc_opts, rate_opts;
    FriezeOpts frieze_opts;
    TailOpts tail_opts;

    auto* gen_cmd = app.add_subcommand("gen", "Sample a bipartite instance");
    add_common(gen_cmd, c_gen);
    add_gen_opts(gen_cmd, gen_opts, false);

    auto* solve_cmd = app.add_subcommand("solve", "Sample and solve one instance");
    add_common(solve_cmd, c_solve);
    add_gen_opts(solve_cmd, solve_opts, true);

    auto* verify_cmd = app.add_subcommand("verify", "Run structural checks on random instances");
    add_common(verify_cmd, c_verify);
    verify_opts.n_opt = verify_cmd->add_option("--n", verify_opts.n, "Points per instance");
    verify_opts.d_opt = verify_cmd->add_option("--d", verify_opts.d, "Dimension");
    verify_opts.alpha_opt = verify_cmd->add_option("--alpha", verify_opts.alpha, "Red fraction");
    verify_opts.p_opt = verify_cmd->add_option("--p", verify_opts.p, "Cost exponent");
    verify_opts.instances_opt =
        verify_cmd->add_option("--instances", verify_opts.instances, "Instance count");
    verify_opts.checks_opt = verify_cmd->add_option(
        "--checks", verify_opts.checks, "all or comma list of cut,lens,pinv,mono,transfer,bdiff");
    verify_opts.corrupt_opt = verify_cmd->add_option(
        "--corrupt", verify_opts.corrupt, "Run the corruption demo for one check (expects fail)");

    auto* bser_cmd = app.add_subcommand("beta-series", "Series estimate of the cost constant");
    add_common(bser_cmd, c_bser);
    bser_opts.d_opt = bser_cmd->add_option("--d", bser_opts.d, "Dimension");
    bser_opts.p_opt = bser_cmd->add_option("--p", bser_opts.p, "Cost exponent (0 < p < d)");
    bser_opts.alpha_opt = bser_cmd->add_option("--alpha", bser_opts.alpha, "Red fraction");
    bser_opts.kmax_opt = bser_cmd->add_option("--kmax", bser_opts.kmax, "Truncation order");
    bser_opts.samples_opt =
        bser_cmd->add_option("--samples", bser_opts.samples, "Monte Carlo samples per term");
    bser_opts.inner_opt =
        bser_cmd->add_option("--inner", bser_opts.inner, "Inner volume samples (d >= 2)");

    auto* bdir_cmd =
        app.add_subcommand("beta-direct", "Direct estimate from torus cost extrapolation");
    add_common(bdir_cmd, c_bdir);
    bdir_opts.d_opt = bdir_cmd->add_option("--d", bdir_opts.d, "Dimension");
    bdir_opts.p_opt = bdir_cmd->add_option("--p", bdir_opts.p, "Cost exponent (0 < p < d)");
    bdir_opts.alpha_opt = bdir_cmd->add_option("--alpha", bdir_opts.alpha, "Red fraction");
    bdir_opts.schedule_opt =
        bdir_cmd->add_option("--schedule", bdir_opts.schedule, "Comma-separated n values");
    bdir_opts.trials_opt = bdir_cmd->add_option("--trials", bdir_opts.trials, "Trials per n");

    auto* deg_cmd = app.add_subcommand("scan-degree", "Max-degree growth experiment");
    add_common(deg_cmd, c_deg);
    add_scan_opts(deg_cmd, deg_opts, false, true);

    auto* scal_cmd = app.add_subcommand("scan-scaling", "Normalized cost plateau, cube vs torus");
    add_common(scal_cmd, c_scal);
    scal_opts.trials = 32;
    add_scan_opts(scal_cmd, scal_opts, true, false);

    auto* conc_cmd = app.add_subcommand("scan-concentration", "Relative-deviation trend");
    add_common(conc_cmd, c_conc);
    conc_opts.schedule = "1024,2048,4096,8192,16384";
    conc_opts.trials = 48;
    conc_opts.d = 3;
    conc_opts.p = 1.0;
    add_scan_opts(conc_cmd, conc_opts, true, true);

    auto* rate_cmd = app.add_subcommand("scan-rates", "Hausdorff / nearest-neighbor rates");
    add_common(rate_cmd, c_rate);
    add_scan_opts(rate_cmd, rate_opts, false, true);

    auto* frieze_cmd = app.add_subcommand("calibrate-frieze", "Complete-graph MST calibration");
    add_common(frieze_cmd, c_frieze);
    frieze_opts.n_opt = frieze_cmd->add_option("--n", frieze_opts.n, "Vertex count");
    frieze_opts.trials_opt = frieze_cmd->add_option("--trials", frieze_opts.trials, "Trials");

    auto* tail_cmd = app.add_subcommand("tail-check", "Occupancy large-deviation check");
    add_common(tail_cmd, c_tail);
    tail_opts.n_opt = tail_cmd->add_option("--n", tail_opts.n, "Points per trial");
    tail_opts.d_opt = tail_cmd->add_option("--d", tail_opts.d, "Dimension");
    tail_opts.level_opt = tail_cmd->add_option("--level", tail_opts.level, "Dyadic level");
    tail_opts.trials_opt = tail_cmd->add_option("--trials", tail_opts.trials, "Trials");
    tail_opts.t_opt = tail_cmd->add_option("--t", tail_opts.t, "Comma-separated t values (t != 1)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    try {
        if (gen_cmd->parsed()) {
            ConfigFill cfg(c_gen.config_path);
            fill_common(cfg, c_gen);
            fill_gen_opts(cfg, gen_opts, false);
            cfg.finish(c_gen);
            return run_gen(c_gen, gen_opts);
        }
        if (solve_cmd->parsed()) {
            ConfigFill cfg(c_solve.config_path);
            fill_common(cfg, c_solve);
            fill_gen_opts(cfg, solve_opts, true);
            cfg.finish(c_solve);
            return run_solve(c_solve, solve_opts);
        }
        if (verify_cmd->parsed()) {
            ConfigFill cfg(c_verify.config_path);
            fill_common(cfg, c_verify);
            cfg.fill(verify_opts.n_opt, "n", verify_opts.n);
            cfg.fill(verify_opts.d_opt, "d", verify_opts.d);
            cfg.fill(verify_opts.alpha_opt, "alpha", verify_opts.alpha);
            cfg.fill(verify_opts.p_opt, "p", verify_opts.p);
            cfg.fill(verify_opts.instances_opt, "instances", verify_opts.instances);
            cfg.fill(verify_opts.checks_opt, "checks", verify_opts.checks);
            cfg.fill(verify_opts.corrupt_opt, "corrupt", verify_opts.corrupt);
            cfg.finish(c_verify);
            return run_verify(c_verify, verify_opts);
        }
        if (bser_cmd->parsed()) {
            ConfigFill cfg(c_bser.config_path);
            fill_common(cfg, c_bser);
            cfg.fill(bser_opts.d_opt, "d", bser_opts.d);
            cfg.fill(bser_opts.p_opt, "p", bser_opts.p);
            cfg.fill(bser_opts.alpha_opt, "alpha", bser_opts.alpha);
            cfg.fill(bser_opts.kmax_opt, "kmax", bser_opts.kmax);
            cfg.fill(bser_opts.samples_opt, "samples", bser_opts.samples);
            cfg.fill(bser_opts.inner_opt, "inner", bser_opts.inner);
            cfg.finish(c_bser);
            return run_beta_series(c_bser, bser_opts);
        }
        if (bdir_cmd->parsed()) {
            ConfigFill cfg(c_bdir.config_path);
            fill_common(cfg, c_bdir);
            cfg.fill(bdir_opts.d_opt, "d", bdir_opts.d);
            cfg.fill(bdir_opts.p_opt, "p", bdir_opts.p);
            cfg.fill(bdir_opts.alpha_opt, "alpha", bdir_opts.alpha);
            cfg.fill_list_u(bdir_opts.schedule_opt, "schedule", bdir_opts.schedule);
            cfg.fill(bdir_opts.trials_opt, "trials", bdir_opts.trials);
            cfg.finish(c_bdir);
            return run_beta_direct(c_bdir, bdir_opts);
        }
        if (deg_cmd->parsed()) {
            ConfigFill cfg(c_deg.config_path);
            fill_common(cfg, c_deg);
            fill_scan_opts(cfg, deg_opts, false, true);
            cfg.finish(c_deg);
            return run_scan_degree(c_deg, deg_opts);
        }
        if (scal_cmd->parsed()) {
            ConfigFill cfg(c_scal.config_path);
            fill_common(cfg, c_scal);
            fill_scan_opts(cfg, scal_opts, true, false);
            cfg.finish(c_scal);
            return run_scan_scaling(c_scal, scal_opts);
        }
        if (conc_cmd->parsed()) {
            ConfigFill cfg(c_conc.config_path);
            fill_common(cfg, c_conc);
            fill_scan_opts(cfg, conc_opts, true, true);
            cfg.finish(c_conc);
            return run_scan_concentration(c_conc, conc_opts);
        }
        if (rate_cmd->parsed()) {
            ConfigFill cfg(c_rate.config_path);
            fill_common(cfg, c_rate);
            fill_scan_opts(cfg, rate_opts, false, true);
            cfg.finish(c_rate);
            return run_scan_rates(c_rate, rate_opts);
        }
        if (frieze_cmd->parsed()) {
            ConfigFill cfg(c_frieze.config_path);
            fill_common(cfg, c_frieze);
            cfg.fill(frieze_opts.n_opt, "n", frieze_opts.n);
            cfg.fill(frieze_opts.trials_opt, "trials", frieze_opts.trials);
            cfg.finish(c_frieze);
            return run_frieze(c_frieze, frieze_opts);
        }
        if (tail_cmd->parsed()) {
            ConfigFill cfg(c_tail.config_path);
            fill_common(cfg, c_tail);
            cfg.fill(tail_opts.n_opt, "n", tail_opts.n);
            cfg.fill(tail_opts.d_opt, "d", tail_opts.d);
            cfg.fill(tail_opts.level_opt, "level", tail_opts.level);
            cfg.fill(tail_opts.trials_opt, "trials", tail_opts.trials);
            cfg.fill(tail_opts.t_opt, "t", tail_opts.t);
            cfg.finish(c_tail);
            return run_tail_check(c_tail, tail_opts);
        }
        throw std::invalid_argument("no subcommand selected");
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
}

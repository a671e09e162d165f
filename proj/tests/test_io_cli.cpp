#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <string>
#include <vector>

#include <sys/wait.h>

#include "doctest.h"

#include "bmst/bipartite_mst.hpp"
#include "bmst/geometry.hpp"
#include "bmst/io.hpp"

using namespace bmst;
namespace fs = std::filesystem;

namespace {

std::string cli_path() {
    const char* p = std::getenv("BMST_CLI_PATH");
    return p == nullptr ? std::string() : std::string(p);
}

fs::path fresh_dir(const std::string& tag) {
    static int counter = 0;
    const fs::path dir =
        fs::temp_directory_path() / "bmst_cli_tests" / (tag + "_" + std::to_string(counter++));
    fs::create_directories(dir);
    return dir;
}

int run_cli(const std::string& args, const fs::path& scratch, std::string* out = nullptr) {
    const fs::path out_file = scratch / "stdout.txt";
    const fs::path err_file = scratch / "stderr.txt";
    const std::string cmd =
        cli_path() + " " + args + " > " + out_file.string() + " 2> " + err_file.string();
    const int status = std::system(cmd.c_str());
    if (out != nullptr && fs::exists(out_file)) *out = read_text_file(out_file.string());
    if (WIFEXITED(status)) return WEXITSTATUS(status);
    return -1;
}

size_t data_lines(const std::string& text) {
    size_t n = 0;
    size_t pos = 0;
    while (pos < text.size()) {
        size_t next = text.find('\n', pos);
        if (next == std::string::npos) next = text.size();
        if (next > pos) ++n;
        pos = next + 1;
    }
    return n;
}

} // namespace

TEST_CASE("doubles format to their shortest round-trip form") {
    CHECK(fmt_double(0.5) == "0.5");
    CHECK(fmt_double(1.0) == "1");
    CHECK(fmt_double(-2.25) == "-2.25");
    const double third = 1.0 / 3.0;
    CHECK(std::strtod(fmt_double(third).c_str(), nullptr) == third);
    const double big = 6.02214076e23;
    CHECK(std::strtod(fmt_double(big).c_str(), nullptr) == big);
    CHECK(fmt_double(std::numeric_limits<double>::infinity()) == "inf");
    CHECK(fmt_double(std::nan("")) == "nan");
}

TEST_CASE("tables enforce their width") {
    Table t;
    t.columns = {"a", "b"};
    t.add_row({"1", "2"});
    CHECK_THROWS_AS(t.add_row({"only-one"}), std::invalid_argument);
}

TEST_CASE("csv rendering quotes what needs quoting") {
    Table t;
    t.columns = {"name", "value"};
    t.add_row({"plain", "1.5"});
    t.add_row({"with,comma", "say \"hi\""});
    const std::string csv = to_csv(t, "run metadata");
    CHECK(csv.find("# run metadata\n") == 0);
    CHECK(csv.find("name,value\n") != std::string::npos);
    CHECK(csv.find("\"with,comma\"") != std::string::npos);
    CHECK(csv.find("\"say \"\"hi\"\"\"") != std::string::npos);
    CHECK_THROWS_AS(to_csv(t, "two\nlines"), std::invalid_argument);
    // no comment line when no comment is given
    const std::string bare = to_csv(t);
    CHECK(bare.find("name,value\n") == 0);
}

TEST_CASE("json rendering keeps numbers numeric and strings quoted") {
    Table t;
    t.columns = {"n", "label"};
    t.add_row({"1.5", "abc"});
    t.add_row({"-2", "x\"y"});
    const std::string json = to_json_records(t);
    CHECK(json.find("\"n\":1.5") != std::string::npos);
    CHECK(json.find("\"label\":\"abc\"") != std::string::npos);
    CHECK(json.find("\"n\":-2") != std::string::npos);
    CHECK(json.find("x\\\"y") != std::string::npos);
    Table empty;
    empty.columns = {"a"};
    CHECK(to_json_records(empty) == "[]\n");
}

TEST_CASE("json object builder") {
    JsonObject o;
    o.num("a", 1).str("b", "x\"y").boolean("c", true).raw("d", "[1,2]").num("e", 0.5);
    CHECK(o.dump() == "{\"a\":1,\"b\":\"x\\\"y\",\"c\":true,\"d\":[1,2],\"e\":0.5}");
    CHECK(json_escape("line\nbreak\ttab") == "line\\nbreak\\ttab");
    CHECK(json_array({"1", "2"}) == "[1,2]");
}

TEST_CASE("text files round-trip through nested directories") {
    const fs::path dir = fresh_dir("io");
    const std::string path = (dir / "nested" / "file.txt").string();
    write_text_file(path, "payload\n");
    CHECK(read_text_file(path) == "payload\n");
    CHECK_THROWS_AS(read_text_file((dir / "missing.txt").string()), std::runtime_error);
}

TEST_CASE("artifact tables have the documented shapes") {
    const auto inst = sample_uniform(5, 7, 2, MetricKind::UnitCube, 3);
    const auto itab = instance_table(inst);
    CHECK(itab.rows.size() == 12);
    CHECK(itab.columns[0] == "color");

    const auto tree = bipartite_mst(inst, SolverKind::Brute);
    const auto ttab = tree_table(tree);
    CHECK(ttab.rows.size() == 11);

    BetaEstimate est;
    est.terms.push_back({});
    const auto terms = term_table(est);
    const std::vector<std::string> expected = {"k_R", "k_B", "E", "stderr", "acceptance",
                                               "samples"};
    CHECK(terms.columns == expected);
}

TEST_CASE("report serialization carries the verdict") {
    LemmaReport rep;
    rep.lemma_id = "cut";
    rep.instance_desc = "n_R=3";
    rep.pass = false;
    rep.witness = "vertex 2";
    const std::string json = lemma_report_json(rep);
    CHECK(json.find("\"lemma_id\":\"cut\"") != std::string::npos);
    CHECK(json.find("\"pass\":false") != std::string::npos);
    CHECK(json.find("vertex 2") != std::string::npos);
    const std::string arr = lemma_reports_json({rep, rep});
    CHECK(arr.rfind("[", 0) == 0);
    size_t hits = 0, pos = 0;
    while ((pos = arr.find("\"lemma_id\"", pos)) != std::string::npos) {
        ++hits;
        ++pos;
    }
    CHECK(hits == 2);
}

TEST_CASE("command line: generation artifacts and determinism") {
    if (cli_path().empty()) {
        WARN("BMST_CLI_PATH not set; skipping command-line tests");
        return;
    }
    const fs::path scratch = fresh_dir("gen");
    const fs::path out = scratch / "out";
    const std::string base =
        "gen --n 20 --d 1 --seed 7 --out " + out.string();
    std::string echoed;
    REQUIRE(run_cli(base, scratch, &echoed) == 0);
    CHECK(echoed.find("\"artifacts\"") != std::string::npos);
    CHECK(echoed.find("instance.csv") != std::string::npos);
    REQUIRE(fs::exists(out / "instance.csv"));
    REQUIRE(fs::exists(out / "effective_config.json"));
    const std::string first = read_text_file((out / "instance.csv").string());
    CHECK(data_lines(first) == 22); // comment + header + 20 points
    CHECK(first.rfind("# ", 0) == 0);

    // identical invocation rewrites identical bytes
    REQUIRE(run_cli(base, scratch) == 0);
    CHECK(read_text_file((out / "instance.csv").string()) == first);

    // json table format
    const fs::path out2 = scratch / "out_json";
    REQUIRE(run_cli("gen --n 20 --d 1 --seed 7 --format json --out " + out2.string(), scratch) ==
            0);
    const std::string json = read_text_file((out2 / "instance.json").string());
    CHECK(json.rfind("[", 0) == 0);
    CHECK(json.find("\"color\":\"red\"") != std::string::npos);
    CHECK(json.find("\"index\":0") != std::string::npos);
}

TEST_CASE("command line: solve writes tree and summary") {
    if (cli_path().empty()) return;
    const fs::path scratch = fresh_dir("solve");
    const fs::path out = scratch / "out";
    REQUIRE(run_cli("solve --n 40 --d 2 --p 0.5 --seed 9 --out " + out.string(), scratch) == 0);
    CHECK(fs::exists(out / "tree.csv"));
    const std::string summary = read_text_file((out / "summary.json").string());
    CHECK(summary.find("\"cost_p\":") != std::string::npos);
    CHECK(summary.find("\"bottleneck\":") != std::string::npos);
}

TEST_CASE("command line: verification exit codes") {
    if (cli_path().empty()) return;
    const fs::path scratch = fresh_dir("verify");
    const fs::path out = scratch / "honest";
    REQUIRE(run_cli("verify --n 60 --d 1 --p 0.5 --instances 2 --checks cut,pinv --seed 3 --out " +
                        out.string(),
                    scratch) == 0);
    const std::string reports = read_text_file((out / "reports.json").string());
    CHECK(reports.find("\"pass\":true") != std::string::npos);
    CHECK(reports.find("\"pass\":false") == std::string::npos);

    const fs::path bad = scratch / "corrupt";
    REQUIRE(run_cli("verify --n 60 --d 1 --p 0.5 --corrupt cut --seed 3 --out " + bad.string(),
                    scratch) == 1);
    const std::string bad_reports = read_text_file((bad / "reports.json").string());
    CHECK(bad_reports.find("\"pass\":false") != std::string::npos);
}

TEST_CASE("command line: usage and regime errors exit 2") {
    if (cli_path().empty()) return;
    const fs::path scratch = fresh_dir("errors");
    CHECK(run_cli("gen --definitely-not-a-flag", scratch) == 2);
    CHECK(run_cli("beta-series --d 1 --p 2 --samples 10 --out " + (scratch / "o").string(),
                  scratch) == 2);
    CHECK(run_cli("no-such-command", scratch) == 2);
}

TEST_CASE("command line: config file fills unset flags only") {
    if (cli_path().empty()) return;
    const fs::path scratch = fresh_dir("config");
    const fs::path cfg = scratch / "cfg.json";
    write_text_file(cfg.string(), "{\"n\": 24, \"d\": 1}\n");

    const fs::path out1 = scratch / "from_config";
    REQUIRE(run_cli("gen --config " + cfg.string() + " --seed 5 --out " + out1.string(),
                    scratch) == 0);
    CHECK(data_lines(read_text_file((out1 / "instance.csv").string())) == 26);

    const fs::path out2 = scratch / "flag_wins";
    REQUIRE(run_cli("gen --config " + cfg.string() + " --n 10 --seed 5 --out " + out2.string(),
                    scratch) == 0);
    CHECK(data_lines(read_text_file((out2 / "instance.csv").string())) == 12);

    const fs::path bad_cfg = scratch / "bad.json";
    write_text_file(bad_cfg.string(), "{\"bogus\": 1}\n");
    CHECK(run_cli("gen --config " + bad_cfg.string() + " --out " + (scratch / "o3").string(),
                  scratch) == 2);
}

TEST_CASE("command line: quick series and tail runs") {
    if (cli_path().empty()) return;
    const fs::path scratch = fresh_dir("quick");
    const fs::path out = scratch / "series";
    REQUIRE(run_cli("beta-series --d 1 --p 0.5 --kmax 2 --samples 2000 --seed 2 --out " +
                        out.string(),
                    scratch) == 0);
    CHECK(fs::exists(out / "terms.csv"));
    const std::string beta = read_text_file((out / "beta.json").string());
    CHECK(beta.find("\"value\":") != std::string::npos);
    CHECK(beta.find("\"terms\":") != std::string::npos);

    const fs::path tails = scratch / "tails";
    REQUIRE(run_cli("tail-check --n 500 --d 1 --level 2 --trials 50 --t 4 --seed 2 --out " +
                        tails.string(),
                    scratch) == 0);
    CHECK(fs::exists(tails / "tails.csv"));
}

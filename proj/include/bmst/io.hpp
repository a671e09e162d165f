#pragma once

#include <string>
#include <vector>

#include "bmst/beta_series.hpp"
#include "bmst/experiments.hpp"
#include "bmst/graph.hpp"
#include "bmst/structure_checks.hpp"

namespace bmst {

inline constexpr const char* kToolkitVersion = "0.1.0";

// Shortest decimal form that round-trips; "inf"/"nan" for non-finite values.
std::string fmt_double(double v);

// Rectangular table of preformatted cells, the common shape of all artifacts.
struct Table {
    std::vector<std::string> columns;
    std::vector<std::vector<std::string>> rows;
    void add_row(std::vector<std::string> cells);
};

// CSV with an optional leading "# ..." comment line (comment must be one line).
std::string to_csv(const Table& t, const std::string& header_comment = "");
// The same payload as a JSON array of objects with identical field names;
// cells that are valid finite JSON numbers are emitted unquoted.
std::string to_json_records(const Table& t);

// Minimal insertion-ordered JSON object builder; all numbers go through
// fmt_double so artifacts are byte-stable.
class JsonObject {
public:
    JsonObject& num(const std::string& key, double v);
    JsonObject& num(const std::string& key, uint64_t v);
    JsonObject& num(const std::string& key, int64_t v);
    JsonObject& num(const std::string& key, int v) { return num(key, static_cast<int64_t>(v)); }
    JsonObject& str(const std::string& key, const std::string& v);
    JsonObject& boolean(const std::string& key, bool v);
    JsonObject& raw(const std::string& key, const std::string& json);
    std::string dump() const; // single line, keys in insertion order

private:
    std::vector<std::pair<std::string, std::string>> items_;
};

std::string json_escape(const std::string& s);
std::string json_array(const std::vector<std::string>& items); // items are raw JSON

void write_text_file(const std::string& path, const std::string& content);
std::string read_text_file(const std::string& path);

// Artifact tables.
Table instance_table(const BipartiteInstance& inst);
Table tree_table(const SpanningTree& tree);
Table term_table(const BetaEstimate& est); // k_R,k_B,E,stderr,acceptance,samples
Table records_table(const std::vector<ExperimentRecord>& records);
Table degree_table(const std::vector<DegreeRow>& rows);
Table scaling_table(const std::vector<ScalingRow>& rows);
Table rate_table(const std::vector<RateRow>& rows);
Table tail_table(const std::vector<TailCheck>& checks);
Table concentration_table(const std::vector<ConcentrationRow>& rows);

// Full-fidelity JSON forms.
std::string beta_json(const BetaEstimate& est);
std::string lemma_report_json(const LemmaReport& rep);
std::string lemma_reports_json(const std::vector<LemmaReport>& reports);

} // namespace bmst

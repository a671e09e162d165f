#include "bmst/io.hpp"

#include <cctype>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace bmst {

std::string fmt_double(double v) {
    if (std::isnan(v)) return "nan";
    if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
    char buf[64];
    const auto res = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, res.ptr);
}

void Table::add_row(std::vector<std::string> cells) {
    if (cells.size() != columns.size())
        throw std::invalid_argument("table row width does not match the column count");
    rows.push_back(std::move(cells));
}

namespace {

std::string csv_escape(const std::string& cell) {
    if (cell.find_first_of(",\"\n") == std::string::npos) return cell;
    std::string out = "\"";
    for (char c : cell) {
        if (c == '"') out += '"';
        out += c;
    }
    out += '"';
    return out;
}

bool is_json_number(const std::string& s) {
    if (s.empty()) return false;
    for (char c : s)
        if (!(std::isdigit(static_cast<unsigned char>(c)) || c == '-' || c == '+' || c == '.' ||
              c == 'e' || c == 'E'))
            return false;
    char* end = nullptr;
    const double v = std::strtod(s.c_str(), &end);
    return end == s.c_str() + s.size() && std::isfinite(v);
}

std::string json_cell(const std::string& cell) {
    if (is_json_number(cell)) return cell;
    if (cell == "true" || cell == "false") return cell;
    return "\"" + json_escape(cell) + "\"";
}

} // namespace

std::string to_csv(const Table& t, const std::string& header_comment) {
    std::string out;
    if (!header_comment.empty()) {
        if (header_comment.find('\n') != std::string::npos)
            throw std::invalid_argument("header comment must be a single line");
        out += "# " + header_comment + "\n";
    }
    for (size_t c = 0; c < t.columns.size(); ++c) {
        if (c) out += ',';
        out += csv_escape(t.columns[c]);
    }
    out += '\n';
    for (const auto& row : t.rows) {
        for (size_t c = 0; c < row.size(); ++c) {
            if (c) out += ',';
            out += csv_escape(row[c]);
        }
        out += '\n';
    }
    return out;
}

std::string to_json_records(const Table& t) {
    std::string out = "[";
    for (size_t r = 0; r < t.rows.size(); ++r) {
        out += r ? ",\n " : "\n ";
        out += '{';
        for (size_t c = 0; c < t.columns.size(); ++c) {
            if (c) out += ',';
            out += "\"" + json_escape(t.columns[c]) + "\":" + json_cell(t.rows[r][c]);
        }
        out += '}';
    }
    out += t.rows.empty() ? "]\n" : "\n]\n";
    return out;
}

std::string json_escape(const std::string& s) {
    std::string out;
    for (char c : s) {
        switch (c) {
            case '"': out += "\\\""; break;
            case '\\': out += "\\\\"; break;
            case '\n': out += "\\n"; break;
            case '\r': out += "\\r"; break;
            case '\t': out += "\\t"; break;
            default:
                if (static_cast<unsigned char>(c) < 0x20) {
                    char buf[8];
                    std::snprintf(buf, sizeof buf, "\\u%04x", c);
                    out += buf;
                } else {
                    out += c;
                }
        }
    }
    return out;
}

std::string json_array(const std::vector<std::string>& items) {
    std::string out = "[";
    for (size_t i = 0; i < items.size(); ++i) {
        if (i) out += ',';
        out += items[i];
    }
    out += ']';
    return out;
}

JsonObject& JsonObject::num(const std::string& key, double v) {
    // Non-finite values have no JSON number form; fall back to strings.
    items_.emplace_back(key, std::isfinite(v) ? fmt_double(v) : "\"" + fmt_double(v) + "\"");
    return *this;
}

JsonObject& JsonObject::num(const std::string& key, uint64_t v) {
    items_.emplace_back(key, std::to_string(v));
    return *this;
}

JsonObject& JsonObject::num(const std::string& key, int64_t v) {
    items_.emplace_back(key, std::to_string(v));
    return *this;
}

JsonObject& JsonObject::str(const std::string& key, const std::string& v) {
    items_.emplace_back(key, "\"" + json_escape(v) + "\"");
    return *this;
}

JsonObject& JsonObject::boolean(const std::string& key, bool v) {
    items_.emplace_back(key, v ? "true" : "false");
    return *this;
}

JsonObject& JsonObject::raw(const std::string& key, const std::string& json) {
    items_.emplace_back(key, json);
    return *this;
}

std::string JsonObject::dump() const {
    std::string out = "{";
    for (size_t i = 0; i < items_.size(); ++i) {
        if (i) out += ',';
        out += "\"" + json_escape(items_[i].first) + "\":" + items_[i].second;
    }
    out += '}';
    return out;
}

void write_text_file(const std::string& path, const std::string& content) {
    const std::filesystem::path p(path);
    if (p.has_parent_path()) std::filesystem::create_directories(p.parent_path());
    std::ofstream f(p, std::ios::binary);
    if (!f) throw std::runtime_error("cannot open for writing: " + path);
    f.write(content.data(), static_cast<std::streamsize>(content.size()));
    if (!f) throw std::runtime_error("write failed: " + path);
}

std::string read_text_file(const std::string& path) {
    std::ifstream f(path, std::ios::binary);
    if (!f) throw std::runtime_error("cannot open for reading: " + path);
    std::ostringstream os;
    os << f.rdbuf();
    return os.str();
}

Table instance_table(const BipartiteInstance& inst) {
    Table t;
    t.columns = {"color", "index"};
    for (int a = 0; a < inst.d(); ++a) t.columns.push_back("x" + std::to_string(a));
    auto emit = [&](const Points& pts, const char* color) {
        for (size_t i = 0; i < pts.size(); ++i) {
            std::vector<std::string> row{color, std::to_string(i)};
            for (int a = 0; a < pts.d; ++a) row.push_back(fmt_double(pts.ptr(i)[a]));
            t.add_row(std::move(row));
        }
    };
    emit(inst.red, "red");
    emit(inst.blue, "blue");
    return t;
}

Table tree_table(const SpanningTree& tree) {
    Table t;
    t.columns = {"u", "v", "length"};
    for (const auto& e : tree.edges)
        t.add_row({std::to_string(e.u), std::to_string(e.v), fmt_double(e.length)});
    return t;
}

Table term_table(const BetaEstimate& est) {
    Table t;
    t.columns = {"k_R", "k_B", "E", "stderr", "acceptance", "samples"};
    for (const auto& term : est.terms)
        t.add_row({std::to_string(term.estimate.k_R), std::to_string(term.estimate.k_B),
                   fmt_double(term.estimate.E_estimate), fmt_double(term.estimate.std_error),
                   fmt_double(term.estimate.acceptance_rate),
                   std::to_string(term.estimate.samples)});
    return t;
}

Table records_table(const std::vector<ExperimentRecord>& records) {
    Table t;
    t.columns = {"n",    "n_R",    "n_B",        "d",         "p",
                 "alpha_R", "metric", "seed",       "cost_p",    "max_degree",
                 "bottleneck", "hausdorff", "nn_max_red"};
    for (const auto& r : records)
        t.add_row({std::to_string(r.n), std::to_string(r.n_R), std::to_string(r.n_B),
                   std::to_string(r.d), fmt_double(r.p), fmt_double(r.alpha_R),
                   metric_name(r.metric), std::to_string(r.seed), fmt_double(r.cost_p),
                   std::to_string(r.max_degree), fmt_double(r.bottleneck),
                   fmt_double(r.hausdorff), fmt_double(r.nn_max_red)});
    return t;
}

Table degree_table(const std::vector<DegreeRow>& rows) {
    Table t;
    t.columns = {"n", "median_degree", "median_ratio", "min_ratio", "max_ratio"};
    for (const auto& r : rows)
        t.add_row({std::to_string(r.n), fmt_double(r.median_degree), fmt_double(r.median_ratio),
                   fmt_double(r.min_ratio), fmt_double(r.max_ratio)});
    return t;
}

Table scaling_table(const std::vector<ScalingRow>& rows) {
    Table t;
    t.columns = {"n", "mean_cube", "se_cube", "mean_torus", "se_torus"};
    for (const auto& r : rows)
        t.add_row({std::to_string(r.n), fmt_double(r.mean_cube), fmt_double(r.se_cube),
                   fmt_double(r.mean_torus), fmt_double(r.se_torus)});
    return t;
}

Table rate_table(const std::vector<RateRow>& rows) {
    Table t;
    t.columns = {"n", "median_hausdorff_scaled", "median_nn_scaled"};
    for (const auto& r : rows)
        t.add_row({std::to_string(r.n), fmt_double(r.median_hausdorff_scaled),
                   fmt_double(r.median_nn_scaled)});
    return t;
}

Table tail_table(const std::vector<TailCheck>& checks) {
    Table t;
    t.columns = {"t",     "lower_tail", "region_volume", "threshold", "exceedances",
                 "trials", "frequency",  "bound",         "sigma",     "pass"};
    for (const auto& c : checks)
        t.add_row({fmt_double(c.t), c.lower_tail ? "true" : "false", fmt_double(c.region_volume),
                   fmt_double(c.threshold), std::to_string(c.exceedances),
                   std::to_string(c.trials), fmt_double(c.frequency), fmt_double(c.bound),
                   fmt_double(c.sigma), c.pass ? "true" : "false"});
    return t;
}

Table concentration_table(const std::vector<ConcentrationRow>& rows) {
    Table t;
    t.columns = {"n", "mean_norm", "sd_norm", "rel_dev"};
    for (const auto& r : rows)
        t.add_row({std::to_string(r.n), fmt_double(r.mean_norm), fmt_double(r.sd_norm),
                   fmt_double(r.rel_dev)});
    return t;
}

std::string beta_json(const BetaEstimate& est) {
    std::vector<std::string> terms;
    for (const auto& t : est.terms) {
        JsonObject o;
        o.num("k_R", t.estimate.k_R)
            .num("k_B", t.estimate.k_B)
            .num("E", t.estimate.E_estimate)
            .num("stderr", t.estimate.std_error)
            .num("acceptance", t.estimate.acceptance_rate)
            .num("samples", t.estimate.samples)
            .boolean("unreliable", t.estimate.unreliable)
            .num("inner_bias", t.estimate.inner_bias)
            .num("weight", t.weight)
            .num("contribution", t.contribution);
        terms.push_back(o.dump());
    }
    JsonObject o;
    o.num("d", est.d)
        .num("p", est.p)
        .num("alpha_R", est.alpha_R)
        .num("value", est.value)
        .num("std_error", est.std_error)
        .num("K_max", est.K_max)
        .num("tail_bound", est.tail_bound)
        .raw("terms", json_array(terms));
    return o.dump();
}

std::string lemma_report_json(const LemmaReport& rep) {
    JsonObject o;
    o.str("lemma_id", rep.lemma_id)
        .str("instance", rep.instance_desc)
        .boolean("pass", rep.pass)
        .str("witness", rep.witness)
        .num("slack", rep.slack)
        .str("note", rep.note);
    return o.dump();
}

std::string lemma_reports_json(const std::vector<LemmaReport>& reports) {
    std::vector<std::string> items;
    for (const auto& r : reports) items.push_back(lemma_report_json(r));
    return json_array(items);
}

} // namespace bmst

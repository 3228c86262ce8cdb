#pragma once
//
// CSV and JSON file formats used by the command-line tool.
//
// Numbers are written in the shortest form that parses back to the same
// double, so a written dataset reads back bit-identical.
//

#include <array>
#include <charconv>
#include <fstream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include <Eigen/Dense>
#include <nlohmann/json.hpp>

#include "spssa/benchmark.hpp"
#include "spssa/error.hpp"
#include "spssa/rank.hpp"
#include "spssa/simulation.hpp"
#include "spssa/spatial_core.hpp"

namespace spssa::io {

inline std::string format_double(double v) {
    std::array<char, 32> buf{};
    const auto [ptr, ec] = std::to_chars(buf.data(), buf.data() + buf.size(), v);
    if (ec != std::errc())
        throw IoError("cannot format number");
    return {buf.data(), ptr};
}

inline double parse_double(std::string_view tok, const std::string& where) {
    // from_chars rejects a leading '+'
    if (!tok.empty() && tok.front() == '+')
        tok.remove_prefix(1);
    double v = 0.0;
    const auto [ptr, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), v);
    if (tok.empty() || ec != std::errc() || ptr != tok.data() + tok.size())
        throw IoError(where + ": '" + std::string(tok) + "' is not a number");
    return v;
}

inline std::vector<std::string> split_csv_line(const std::string& line) {
    std::vector<std::string> out;
    std::string cur;
    bool quoted = false;
    for (std::size_t i = 0; i < line.size(); ++i) {
        const char c = line[i];
        if (quoted) {
            if (c == '"' && i + 1 < line.size() && line[i + 1] == '"') {
                cur += '"';
                ++i;
            } else if (c == '"') {
                quoted = false;
            } else {
                cur += c;
            }
        } else if (c == '"') {
            quoted = true;
        } else if (c == ',') {
            out.push_back(std::move(cur));
            cur.clear();
        } else if (c != '\r') {
            cur += c;
        }
    }
    out.push_back(std::move(cur));
    return out;
}

inline std::ifstream open_in(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in)
        throw IoError("cannot open '" + path + "' for reading");
    return in;
}

inline std::ofstream open_out(const std::string& path) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out)
        throw IoError("cannot open '" + path + "' for writing");
    return out;
}

// ---------------------------------------------------------------------------
// Datasets

struct CsvDataset {
    SpatialDataset data;
    std::vector<std::string> variables;
    std::vector<std::string> labels;  // values of the label column, if requested
};

/// Reads a header `x,y,<variables...>`. Every column other than x, y and
/// `label_column` is a numeric variable.
inline CsvDataset read_dataset_csv(const std::string& path, const std::optional<std::string>& label_column = {}) {
    auto in = open_in(path);
    std::string line;
    if (!std::getline(in, line))
        throw IoError("'" + path + "' is empty");
    const auto header = split_csv_line(line);
    int xc = -1, yc = -1, lc = -1;
    std::vector<int> vars;
    CsvDataset out;
    for (int c = 0; c < static_cast<int>(header.size()); ++c) {
        const auto& h = header[static_cast<std::size_t>(c)];
        if (h == "x")
            xc = c;
        else if (h == "y")
            yc = c;
        else if (label_column && h == *label_column)
            lc = c;
        else {
            vars.push_back(c);
            out.variables.push_back(h);
        }
    }
    if (xc < 0 || yc < 0)
        throw IoError("'" + path + "' needs columns named x and y");
    if (label_column && lc < 0)
        throw ConfigError("partition_column", "column '" + *label_column + "' not found in '" + path + "'");
    if (vars.empty())
        throw IoError("'" + path + "' has no variable columns");

    std::vector<std::array<double, 2>> loc;
    std::vector<double> vals;
    int lineno = 1;
    while (std::getline(in, line)) {
        ++lineno;
        if (line.empty() || line == "\r")
            continue;
        const auto f = split_csv_line(line);
        if (f.size() != header.size())
            throw IoError(path + ":" + std::to_string(lineno) + ": expected " + std::to_string(header.size()) +
                          " fields, got " + std::to_string(f.size()));
        const std::string where = path + ":" + std::to_string(lineno);
        loc.push_back({parse_double(f[static_cast<std::size_t>(xc)], where),
                       parse_double(f[static_cast<std::size_t>(yc)], where)});
        for (int c : vars)
            vals.push_back(parse_double(f[static_cast<std::size_t>(c)], where));
        if (lc >= 0)
            out.labels.push_back(f[static_cast<std::size_t>(lc)]);
    }
    const auto n = static_cast<Index>(loc.size());
    const auto p = static_cast<Index>(vars.size());
    Locations l(n, 2);
    Eigen::MatrixXd v(n, p);
    for (Index i = 0; i < n; ++i) {
        l(i, 0) = loc[static_cast<std::size_t>(i)][0];
        l(i, 1) = loc[static_cast<std::size_t>(i)][1];
        for (Index j = 0; j < p; ++j)
            v(i, j) = vals[static_cast<std::size_t>(i * p + j)];
    }
    out.data = make_dataset(std::move(l), std::move(v));
    return out;
}

inline std::vector<std::string> default_variable_names(Index p, const std::string& prefix = "v") {
    std::vector<std::string> names;
    for (Index j = 0; j < p; ++j)
        names.push_back(prefix + std::to_string(j + 1));
    return names;
}

inline void write_matrix_rows(std::ostream& os, const Locations* loc, const Eigen::MatrixXd& values) {
    for (Index i = 0; i < values.rows(); ++i) {
        bool first = true;
        if (loc) {
            os << format_double((*loc)(i, 0)) << ',' << format_double((*loc)(i, 1));
            first = false;
        }
        for (Index j = 0; j < values.cols(); ++j) {
            if (!first)
                os << ',';
            os << format_double(values(i, j));
            first = false;
        }
        os << '\n';
    }
}

inline void write_dataset_csv(const std::string& path, const SpatialDataset& data,
                              std::vector<std::string> names = {}) {
    if (names.empty())
        names = default_variable_names(data.p());
    auto out = open_out(path);
    out << "x,y";
    for (const auto& n : names)
        out << ',' << n;
    out << '\n';
    write_matrix_rows(out, &data.locations, data.values);
    if (!out)
        throw IoError("write to '" + path + "' failed");
}

/// Plain matrix with a header row.
inline void write_matrix_csv(const std::string& path, const Eigen::MatrixXd& m, const std::vector<std::string>& header,
                             const std::vector<std::string>& row_names = {}) {
    auto out = open_out(path);
    for (std::size_t c = 0; c < header.size(); ++c)
        out << (c ? "," : "") << header[c];
    out << '\n';
    for (Index i = 0; i < m.rows(); ++i) {
        if (!row_names.empty())
            out << row_names[static_cast<std::size_t>(i)] << ',';
        for (Index j = 0; j < m.cols(); ++j)
            out << (j ? "," : "") << format_double(m(i, j));
        out << '\n';
    }
    if (!out)
        throw IoError("write to '" + path + "' failed");
}

// ---------------------------------------------------------------------------
// Ground truth sidecar

inline nlohmann::json matrix_to_json(const Eigen::MatrixXd& m) {
    auto rows = nlohmann::json::array();
    for (Index i = 0; i < m.rows(); ++i) {
        auto row = nlohmann::json::array();
        for (Index j = 0; j < m.cols(); ++j)
            row.push_back(m(i, j));
        rows.push_back(std::move(row));
    }
    return rows;
}

inline Eigen::MatrixXd matrix_from_json(const nlohmann::json& j, const std::string& key) {
    if (!j.is_array() || j.empty() || !j.front().is_array())
        throw IoError("'" + key + "' must be a non-empty array of rows");
    const auto rows = static_cast<Index>(j.size());
    const auto cols = static_cast<Index>(j.front().size());
    Eigen::MatrixXd m(rows, cols);
    for (Index i = 0; i < rows; ++i) {
        const auto& row = j[static_cast<std::size_t>(i)];
        if (!row.is_array() || static_cast<Index>(row.size()) != cols)
            throw IoError("'" + key + "' has ragged rows");
        for (Index c = 0; c < cols; ++c) {
            const auto& v = row[static_cast<std::size_t>(c)];
            if (!v.is_number())
                throw IoError("'" + key + "' holds a non-number");
            m(i, c) = v.get<double>();
        }
    }
    return m;
}

struct TruthSidecar {
    int setting = 0;
    int side_length = 0;
    std::uint64_t seed = 0;
    int q = 0;
    Eigen::MatrixXd mixing;
    Eigen::MatrixXd w_s;
    Eigen::MatrixXd w_n;
};

inline void write_truth_json(const std::string& path, const TruthSidecar& t) {
    nlohmann::ordered_json j;
    j["setting"] = t.setting;
    j["side_length"] = t.side_length;
    j["seed"] = t.seed;
    j["q"] = t.q;
    j["mixing"] = matrix_to_json(t.mixing);
    j["w_s"] = matrix_to_json(t.w_s);
    j["w_n"] = matrix_to_json(t.w_n);
    auto out = open_out(path);
    out << j.dump(2) << '\n';
    if (!out)
        throw IoError("write to '" + path + "' failed");
}

inline TruthSidecar read_truth_json(const std::string& path) {
    auto in = open_in(path);
    nlohmann::json j;
    try {
        in >> j;
    } catch (const nlohmann::json::exception& e) {
        throw IoError("'" + path + "' is not valid JSON: " + e.what());
    }
    TruthSidecar t;
    try {
        t.setting = j.value("setting", 0);
        t.side_length = j.value("side_length", 0);
        t.seed = j.value("seed", std::uint64_t{0});
        t.q = j.at("q").get<int>();
        if (j.contains("mixing"))
            t.mixing = matrix_from_json(j["mixing"], "mixing");
        t.w_s = matrix_from_json(j.at("w_s"), "w_s");
        t.w_n = matrix_from_json(j.at("w_n"), "w_n");
    } catch (const nlohmann::json::exception& e) {
        throw IoError("'" + path + "': " + e.what());
    }
    return t;
}

// ---------------------------------------------------------------------------
// Result tables

inline void write_ladle_csv(const std::string& path, const LadleCurve& c) {
    auto out = open_out(path);
    out << "k,f,phi,g\n";
    for (Index k = 0; k < c.g.size(); ++k)
        out << k << ',' << format_double(c.f(k)) << ',' << format_double(c.phi(k)) << ',' << format_double(c.g(k))
            << '\n';
    if (!out)
        throw IoError("write to '" + path + "' failed");
}

inline void write_performance_summary_csv(const std::string& path, const std::vector<PerformanceSummary>& rows) {
    auto out = open_out(path);
    out << "setting,side_length,n,partition,method,trials,failures,s_perf_mean,s_perf_q25,s_perf_median,s_perf_q75,"
           "n_perf_mean,n_perf_q25,n_perf_median,n_perf_q75\n";
    for (const auto& r : rows) {
        out << r.setting << ',' << r.side_length << ',' << static_cast<long long>(r.side_length) * r.side_length << ','
            << r.partition.label() << ',' << to_string(r.method) << ',' << r.trials << ',' << r.failures;
        for (double v : {r.s_mean, r.s_q25, r.s_median, r.s_q75, r.n_mean, r.n_q25, r.n_median, r.n_q75})
            out << ',' << format_double(v);
        out << '\n';
    }
    if (!out)
        throw IoError("write to '" + path + "' failed");
}

/// One row per (trial, partition, method); failed trials have empty metrics.
inline void write_trials_csv(const std::string& path, const std::vector<TrialRecord>& records) {
    auto out = open_out(path);
    out << "setting,side_length,partition,method,trial,s_perf,n_perf\n";
    for (const auto& r : records) {
        out << r.setting << ',' << r.side_length << ',' << r.partition.label() << ',' << to_string(r.method) << ','
            << r.trial << ',';
        if (r.ok)
            out << format_double(r.s_perf) << ',' << format_double(r.n_perf);
        else
            out << ',';
        out << '\n';
    }
    if (!out)
        throw IoError("write to '" + path + "' failed");
}

inline void write_rank_csv(const std::string& path, const RankResult& res) {
    auto out = open_out(path);
    out << "setting,side_length,partition,method,r,s,trials,failures,q_hat,count,proportion\n";
    const auto& c = res.config;
    for (Method m : c.methods) {
        const int failures = res.failures(m);
        const auto counts = res.counts(m);
        int ok = 0;
        for (const auto& [q, k] : counts)
            ok += k;
        for (const auto& [q, k] : counts)
            out << c.setting << ',' << c.side_length << ',' << c.partition.label() << ',' << to_string(m) << ','
                << c.r << ',' << c.s << ',' << ok << ',' << failures << ',' << q << ',' << k << ','
                << format_double(static_cast<double>(k) / ok) << '\n';
    }
    if (!out)
        throw IoError("write to '" + path + "' failed");
}

inline void write_norm_csv(const std::string& path, const std::vector<NormRow>& rows) {
    auto out = open_out(path);
    out << "partition,trials,m_mean,m_var,m_cor_scaled,m_cor\n";
    for (const auto& r : rows)
        out << r.partition.label() << ',' << r.trials << ',' << format_double(r.m_mean) << ','
            << format_double(r.m_var) << ',' << format_double(r.m_cor_scaled) << ',' << format_double(r.m_cor)
            << '\n';
    if (!out)
        throw IoError("write to '" + path + "' failed");
}

}  // namespace spssa::io

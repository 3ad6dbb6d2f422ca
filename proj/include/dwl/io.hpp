#pragma once

#include <Eigen/Core>
#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <cstdint>
#include <fstream>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "dwl/dataset.hpp"
#include "dwl/numerics.hpp"
#include "dwl/roots.hpp"

namespace dwl {

/// Input-file problem with human-readable coordinates in the message.
class CsvError : public std::runtime_error {
public:
    explicit CsvError(const std::string& what) : std::runtime_error(what) {}
};

/// Loaded dataset plus the 1-based file line numbers of rows that were
/// dropped for missing values in the selected columns.
struct CsvLoad {
    Dataset dataset;
    std::vector<std::size_t> skipped_rows;
};

namespace detail {

inline std::string trim(const std::string& s) {
    std::size_t b = 0, e = s.size();
    while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
    while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
    return s.substr(b, e - b);
}

inline std::vector<std::string> split_csv_line(const std::string& line) {
    std::vector<std::string> cells;
    std::string cell;
    std::istringstream stream(line);
    while (std::getline(stream, cell, ',')) cells.push_back(trim(cell));
    if (!line.empty() && line.back() == ',') cells.push_back("");
    return cells;
}

inline bool is_missing(const std::string& cell) {
    if (cell.empty()) return true;
    std::string lower(cell);
    std::transform(lower.begin(), lower.end(), lower.begin(),
                   [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
    return lower == "na" || lower == "nan";
}

inline std::optional<double> parse_double(const std::string& cell) {
    double value = 0.0;
    const char* begin = cell.data();
    const char* end = begin + cell.size();
    const auto [ptr, ec] = std::from_chars(begin, end, value);
    if (ec != std::errc() || ptr != end) return std::nullopt;
    return value;
}

} // namespace detail

/// Load selected columns of a comma-separated file. Columns are named (a
/// header row is then required) or 0-based indices; an empty selection takes
/// every column. A header row is auto-detected: if any selected cell of the
/// first row is non-numeric, that row is treated as the header. Rows with
/// missing values (empty, NA, NaN) in selected columns are dropped and
/// reported; any other non-numeric cell is an error naming its row and
/// column. log_transform applies the natural log and requires positive
/// values.
inline CsvLoad load_csv(const std::string& path, const std::vector<std::string>& columns = {},
                        bool log_transform = false) {
    std::ifstream file(path);
    if (!file) throw CsvError("cannot open input file: " + path);

    std::vector<std::string> lines;
    std::string line;
    while (std::getline(file, line)) {
        if (!line.empty() && line.back() == '\r') line.pop_back();
        lines.push_back(line);
    }
    while (!lines.empty() && detail::trim(lines.back()).empty()) lines.pop_back();
    if (lines.empty()) throw CsvError("empty input file: " + path);

    const std::vector<std::string> first = detail::split_csv_line(lines.front());
    const std::size_t n_cols = first.size();

    // resolve the selection: names need the header, indices stand alone
    std::vector<std::size_t> selected;
    bool names_used = false;
    for (const auto& token : columns) {
        const std::string t = detail::trim(token);
        if (t.empty()) continue;
        std::size_t idx = 0;
        const auto [ptr, ec] = std::from_chars(t.data(), t.data() + t.size(), idx);
        if (ec == std::errc() && ptr == t.data() + t.size()) {
            selected.push_back(idx);
        } else {
            names_used = true;
            const auto it = std::find(first.begin(), first.end(), t);
            if (it == first.end())
                throw CsvError("column '" + t + "' not found in header of " + path);
            selected.push_back(static_cast<std::size_t>(it - first.begin()));
        }
    }
    if (selected.empty()) {
        selected.resize(n_cols);
        for (std::size_t c = 0; c < n_cols; ++c) selected[c] = c;
    }
    for (std::size_t c : selected)
        if (c >= n_cols)
            throw CsvError("column index " + std::to_string(c) + " out of range: " + path +
                           " has " + std::to_string(n_cols) + " columns");

    // header detection: any selected first-row cell that is neither numeric
    // nor missing makes the first row a header
    bool has_header = names_used;
    if (!has_header) {
        for (std::size_t c : selected) {
            const std::string& cell = first[c];
            if (!detail::is_missing(cell) && !detail::parse_double(cell)) {
                has_header = true;
                break;
            }
        }
    }

    CsvLoad out;
    out.dataset.columns.reserve(selected.size());
    for (std::size_t c : selected)
        out.dataset.columns.push_back(has_header ? first[c] : "c" + std::to_string(c));

    std::vector<std::vector<double>> rows;
    for (std::size_t r = has_header ? 1 : 0; r < lines.size(); ++r) {
        const std::size_t line_no = r + 1;
        if (detail::trim(lines[r]).empty()) continue;
        const std::vector<std::string> cells = detail::split_csv_line(lines[r]);
        std::vector<double> row;
        row.reserve(selected.size());
        bool missing = false;
        for (std::size_t c : selected) {
            const std::string cell = c < cells.size() ? cells[c] : "";
            if (detail::is_missing(cell)) {
                missing = true;
                break;
            }
            const auto value = detail::parse_double(cell);
            if (!value)
                throw CsvError("unparseable numeric cell '" + cell + "' at line " +
                               std::to_string(line_no) + ", column " + std::to_string(c) +
                               " of " + path);
            if (log_transform) {
                if (!(*value > 0.0))
                    throw CsvError("log transform needs positive values; got " + cell +
                                   " at line " + std::to_string(line_no) + ", column " +
                                   std::to_string(c) + " of " + path);
                row.push_back(std::log(*value));
            } else {
                row.push_back(*value);
            }
        }
        if (missing) {
            out.skipped_rows.push_back(line_no);
            continue;
        }
        rows.push_back(std::move(row));
    }

    const auto n = static_cast<Eigen::Index>(rows.size());
    const auto p = static_cast<Eigen::Index>(selected.size());
    if (p < 1) throw std::domain_error("load_csv: no columns selected");
    if (n < p + 1)
        throw std::domain_error("load_csv: need at least dim+1 usable rows, got " +
                                std::to_string(n));
    out.dataset.x.resize(n, p);
    for (Eigen::Index i = 0; i < n; ++i)
        for (Eigen::Index j = 0; j < p; ++j) out.dataset.x(i, j) = rows[i][j];
    return out;
}

inline void write_csv(const std::string& path, const Dataset& data) {
    std::ofstream file(path);
    if (!file) throw CsvError("cannot open output file: " + path);
    for (std::size_t c = 0; c < data.columns.size(); ++c)
        file << (c ? "," : "") << data.columns[c];
    file << "\n";
    file.precision(17);
    for (Eigen::Index i = 0; i < data.n(); ++i) {
        for (Eigen::Index j = 0; j < data.dim(); ++j) file << (j ? "," : "") << data.x(i, j);
        file << "\n";
    }
}

/// Roots JSON document: {"meta": {...}, "roots": [...]} with stable key
/// order. meta carries the run settings; the timestamp field is the only
/// value that differs between identical runs.
inline nlohmann::ordered_json roots_to_json(const RootSet& set, nlohmann::ordered_json meta) {
    nlohmann::ordered_json doc;
    doc["meta"] = std::move(meta);
    doc["roots"] = nlohmann::ordered_json::array();
    for (std::size_t r = 0; r < set.roots.size(); ++r) {
        const FitResult& fit = set.roots[r];
        const auto p = fit.theta.dim();
        nlohmann::ordered_json root;
        root["id"] = r;
        root["mu"] = std::vector<double>(fit.theta.mu.data(), fit.theta.mu.data() + p);
        std::vector<double> sigma;
        sigma.reserve(p * p);
        for (Eigen::Index i = 0; i < p; ++i)
            for (Eigen::Index j = 0; j < p; ++j) sigma.push_back(fit.theta.sigma(i, j));
        root["sigma"] = sigma;
        root["dim"] = p;
        root["basin_count"] = set.basin_counts[r];
        root["weight_sum"] = fit.weight_sum;
        root["weighted_loglik"] = fit.weighted_loglik;
        root["iterations"] = fit.iterations;
        root["converged"] = fit.converged;
        doc["roots"].push_back(std::move(root));
    }
    return doc;
}

/// Parse a roots JSON document back into parameters (testing and reuse).
inline std::vector<ModelParams> roots_from_json(const nlohmann::json& doc) {
    std::vector<ModelParams> roots;
    for (const auto& root : doc.at("roots")) {
        ModelParams theta;
        const auto mu = root.at("mu").get<std::vector<double>>();
        const auto sigma = root.at("sigma").get<std::vector<double>>();
        const auto p = static_cast<Eigen::Index>(mu.size());
        theta.mu = Eigen::Map<const Eigen::VectorXd>(mu.data(), p);
        theta.sigma.resize(p, p);
        for (Eigen::Index i = 0; i < p; ++i)
            for (Eigen::Index j = 0; j < p; ++j) theta.sigma(i, j) = sigma[i * p + j];
        roots.push_back(std::move(theta));
    }
    return roots;
}

/// Ellipse polylines for every root at the given level, one point per row:
/// root_id, point_index, then one column per coordinate. Dimension 3 emits
/// the three principal-plane slices in sequence.
inline void write_ellipses_csv(const std::string& path, const RootSet& set, double level,
                               int points_per_ellipse = 360) {
    std::ofstream file(path);
    if (!file) throw CsvError("cannot open output file: " + path);
    file.precision(17);
    const Eigen::Index p = set.roots.empty() ? 0 : set.roots.front().theta.dim();
    file << "root_id,point_index";
    for (Eigen::Index j = 0; j < p; ++j) file << ",x" << (j + 1);
    file << "\n";
    for (std::size_t r = 0; r < set.roots.size(); ++r) {
        const EllipsoidBoundary boundary =
            ellipsoid_boundary(set.roots[r].theta, level, points_per_ellipse);
        for (std::size_t k = 0; k < boundary.points.size(); ++k) {
            file << r << "," << k;
            for (Eigen::Index j = 0; j < p; ++j) file << "," << boundary.points[k][j];
            file << "\n";
        }
    }
}

/// Terminal weight of every observation at every root: obs_index, then one
/// column per root in RootSet order.
inline void write_weights_csv(const std::string& path, const RootSet& set) {
    std::ofstream file(path);
    if (!file) throw CsvError("cannot open output file: " + path);
    file.precision(17);
    file << "obs_index";
    for (std::size_t r = 0; r < set.roots.size(); ++r) file << ",root_" << r;
    file << "\n";
    const Eigen::Index n = set.roots.empty() ? 0 : set.roots.front().weights.size();
    for (Eigen::Index i = 0; i < n; ++i) {
        file << i;
        for (const auto& root : set.roots) file << "," << root.weights[i];
        file << "\n";
    }
}

} // namespace dwl

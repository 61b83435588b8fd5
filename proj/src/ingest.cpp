#include "ambifair/ingest.hpp"

#include <nlohmann/json.hpp>

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>
#include <numeric>
#include <random>
#include <set>
#include <sstream>

namespace ambifair {

namespace {

std::vector<std::string> split_line(const std::string& line) {
    std::vector<std::string> cells;
    std::string cell;
    std::stringstream ss(line);
    while (std::getline(ss, cell, ',')) cells.push_back(cell);
    if (!line.empty() && line.back() == ',') cells.emplace_back();
    return cells;
}

std::string trim(const std::string& s) {
    const auto begin = s.find_first_not_of(" \t\r\n");
    if (begin == std::string::npos) return "";
    const auto end = s.find_last_not_of(" \t\r\n");
    return s.substr(begin, end - begin + 1);
}

double parse_number(const std::string& cell, std::size_t row, const std::string& column) {
    const std::string t = trim(cell);
    double value = 0.0;
    const auto* first = t.data();
    const auto* last = t.data() + t.size();
    const auto [ptr, ec] = std::from_chars(first, last, value);
    if (ec != std::errc{} || ptr != last) {
        throw DataFormatError("load_csv: non-numeric feature cell '" + cell + "' at row " +
                              std::to_string(row) + ", column '" + column + "'");
    }
    return value;
}

}  // namespace

void IngestConfig::validate() const {
    double sum = 0.0;
    for (double r : split_ratios) {
        if (r <= 0.0) throw ConfigError("IngestConfig: split ratios must be positive");
        sum += r;
    }
    if (std::abs(sum - 1.0) > 1e-9) {
        throw ConfigError("IngestConfig: split ratios must sum to 1");
    }
    if (path.empty()) throw ConfigError("IngestConfig: empty path");
    if (label_column.empty()) throw ConfigError("IngestConfig: empty label_column");
    if (sensitive_column.empty()) throw ConfigError("IngestConfig: empty sensitive_column");
}

Dataset load_csv(const IngestConfig& config) {
    config.validate();
    std::ifstream in(config.path);
    if (!in) throw DataFormatError("load_csv: cannot open '" + config.path + "'");

    std::string header_line;
    if (!std::getline(in, header_line)) {
        throw DataFormatError("load_csv: empty file '" + config.path + "'");
    }
    const std::vector<std::string> header_raw = split_line(header_line);
    std::vector<std::string> header(header_raw.size());
    std::transform(header_raw.begin(), header_raw.end(), header.begin(), trim);

    auto column_of = [&](const std::string& name) -> std::size_t {
        const auto it = std::find(header.begin(), header.end(), name);
        if (it == header.end()) {
            throw DataFormatError("load_csv: missing column '" + name + "' in '" +
                                  config.path + "'");
        }
        return static_cast<std::size_t>(it - header.begin());
    };
    const std::size_t label_col = column_of(config.label_column);
    const std::size_t sens_col = column_of(config.sensitive_column);

    std::set<std::size_t> categorical;
    for (const auto& name : config.categorical_columns) categorical.insert(column_of(name));

    std::vector<std::size_t> feature_cols;
    for (std::size_t c = 0; c < header.size(); ++c) {
        if (c != label_col && c != sens_col) feature_cols.push_back(c);
    }
    if (feature_cols.empty()) {
        throw DataFormatError("load_csv: no feature columns left in '" + config.path + "'");
    }

    // First pass: keep complete rows, collect categorical level sets.
    std::vector<std::vector<std::string>> rows;
    std::map<std::size_t, std::set<std::string>> levels;
    std::string line;
    std::size_t file_row = 1;
    while (std::getline(in, line)) {
        ++file_row;
        if (trim(line).empty()) continue;
        std::vector<std::string> cells = split_line(line);
        if (cells.size() != header.size()) {
            throw DataFormatError("load_csv: row " + std::to_string(file_row) + " has " +
                                  std::to_string(cells.size()) + " cells, expected " +
                                  std::to_string(header.size()));
        }
        const bool incomplete = std::any_of(cells.begin(), cells.end(),
                                            [](const std::string& c) { return trim(c).empty(); });
        if (incomplete) continue;  // rows with missing values are rejected
        for (std::size_t c : categorical) levels[c].insert(trim(cells[c]));
        rows.push_back(std::move(cells));
    }
    if (rows.empty()) {
        throw DataFormatError("load_csv: no usable data rows in '" + config.path + "'");
    }

    std::vector<std::string> feature_names;
    for (std::size_t c : feature_cols) {
        if (categorical.count(c)) {
            for (const auto& level : levels[c]) feature_names.push_back(header[c] + "=" + level);
        } else {
            feature_names.push_back(header[c]);
        }
    }

    const Index n = static_cast<Index>(rows.size());
    const Index d = static_cast<Index>(feature_names.size());
    Matrix features(n, d);
    IntVector labels(n), sensitive(n);
    for (Index i = 0; i < n; ++i) {
        const auto& cells = rows[static_cast<std::size_t>(i)];
        labels[i] = trim(cells[label_col]) == config.positive_label_value ? 1 : -1;
        sensitive[i] = trim(cells[sens_col]) == config.protected_value ? 0 : 1;
        Index j = 0;
        for (std::size_t c : feature_cols) {
            if (categorical.count(c)) {
                const std::string value = trim(cells[c]);
                for (const auto& level : levels[c]) {
                    features(i, j++) = value == level ? 1.0 : 0.0;
                }
            } else {
                features(i, j++) = parse_number(cells[c], static_cast<std::size_t>(i) + 2,
                                                header[c]);
            }
        }
    }
    return Dataset::validated(std::move(features), std::move(labels), std::move(sensitive),
                              std::move(feature_names));
}

SplitAssignment split(const Dataset& data, const std::array<double, 3>& ratios,
                      std::uint64_t seed) {
    double sum = 0.0;
    for (double r : ratios) {
        if (r <= 0.0) throw ConfigError("split: ratios must be positive");
        sum += r;
    }
    if (std::abs(sum - 1.0) > 1e-9) throw ConfigError("split: ratios must sum to 1");
    const Index n = data.n();
    if (n < 4) throw ContractError("split: need at least 4 rows to populate all splits");

    IndexList perm = all_indices(n);
    std::mt19937_64 rng(seed);
    std::shuffle(perm.begin(), perm.end(), rng);

    const auto n_train = static_cast<std::size_t>(std::floor(ratios[0] * static_cast<double>(n)));
    const auto n_val = static_cast<std::size_t>(std::floor(ratios[1] * static_cast<double>(n)));
    SplitAssignment out;
    out.seed = seed;
    out.train_idx.assign(perm.begin(), perm.begin() + static_cast<std::ptrdiff_t>(n_train));
    out.val_idx.assign(perm.begin() + static_cast<std::ptrdiff_t>(n_train),
                       perm.begin() + static_cast<std::ptrdiff_t>(n_train + n_val));
    out.test_idx.assign(perm.begin() + static_cast<std::ptrdiff_t>(n_train + n_val), perm.end());
    out.validate(n);
    return out;
}

std::pair<Dataset, StandardizeStats> standardize(const Dataset& data, IndexSpan stats_from) {
    require(!stats_from.empty(), "standardize: stats_from is empty");
    const Index d = data.dim();
    const auto m = static_cast<double>(stats_from.size());
    StandardizeStats stats;
    stats.mean.resize(static_cast<std::size_t>(d));
    stats.std.resize(static_cast<std::size_t>(d));
    for (Index j = 0; j < d; ++j) {
        double mean = 0.0;
        for (Index i : stats_from) mean += data.features(i, j);
        mean /= m;
        double var = 0.0;
        for (Index i : stats_from) {
            const double dev = data.features(i, j) - mean;
            var += dev * dev;
        }
        var /= m;  // population variance
        const double sd = std::sqrt(var);
        if (sd == 0.0) {
            throw ContractError("standardize: zero-variance column '" +
                                data.feature_names[static_cast<std::size_t>(j)] + "'");
        }
        stats.mean[static_cast<std::size_t>(j)] = mean;
        stats.std[static_cast<std::size_t>(j)] = sd;
    }
    return {apply_standardize(data, stats), std::move(stats)};
}

Dataset apply_standardize(const Dataset& data, const StandardizeStats& stats) {
    require(stats.mean.size() == static_cast<std::size_t>(data.dim()) &&
                stats.std.size() == static_cast<std::size_t>(data.dim()),
            "apply_standardize: stats dimension mismatch");
    Dataset out = data;
    for (Index j = 0; j < data.dim(); ++j) {
        const double mean = stats.mean[static_cast<std::size_t>(j)];
        const double sd = stats.std[static_cast<std::size_t>(j)];
        require(sd > 0.0, "apply_standardize: non-positive std");
        out.features.col(j) = (data.features.col(j).array() - mean) / sd;
    }
    return out;
}

void write_csv(const Dataset& data, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw DataFormatError("write_csv: cannot open '" + path + "' for writing");
    for (Index j = 0; j < data.dim(); ++j) {
        out << data.feature_names[static_cast<std::size_t>(j)] << ',';
    }
    out << "label,z\n";
    char buf[64];
    for (Index i = 0; i < data.n(); ++i) {
        for (Index j = 0; j < data.dim(); ++j) {
            std::snprintf(buf, sizeof(buf), "%.17g", data.features(i, j));
            out << buf << ',';
        }
        out << data.labels[i] << ',' << data.sensitive[i] << '\n';
    }
}

void write_stats_sidecar(const StandardizeStats& stats, const std::string& path) {
    nlohmann::json j{{"mean", stats.mean}, {"std", stats.std}};
    std::ofstream out(path);
    if (!out) throw DataFormatError("write_stats_sidecar: cannot open '" + path + "'");
    out << j.dump(2) << '\n';
}

StandardizeStats read_stats_sidecar(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw DataFormatError("read_stats_sidecar: cannot open '" + path + "'");
    nlohmann::json j;
    in >> j;
    StandardizeStats stats;
    stats.mean = j.at("mean").get<std::vector<double>>();
    stats.std = j.at("std").get<std::vector<double>>();
    return stats;
}

}  // namespace ambifair

#pragma once

#include "ambifair/common.hpp"
#include "ambifair/dataset.hpp"

#include <array>
#include <cstdint>
#include <string>
#include <utility>
#include <vector>

namespace ambifair {

/// How to read a CSV export into a Dataset.
struct IngestConfig {
    std::string path;
    std::string label_column;
    std::string sensitive_column;
    std::string positive_label_value;  // cells equal to this map to +1, others to -1
    std::string protected_value;       // cells equal to this map to z=0, others to z=1
    std::array<double, 3> split_ratios{0.5, 0.25, 0.25};
    std::uint64_t seed = 0;
    // Columns expanded to one-hot indicator features (one per distinct value,
    // values sorted). Everything else must parse as a number.
    std::vector<std::string> categorical_columns;

    void validate() const;
};

/// Per-column standardization statistics (population denominator N).
struct StandardizeStats {
    std::vector<double> mean;
    std::vector<double> std;
};

/// Reads a UTF-8, comma-separated file with a header row. The label and
/// sensitive columns are mapped per the config; every remaining column becomes
/// a numeric feature (or one-hot indicators if listed as categorical). Rows
/// containing empty cells are dropped. Structural problems (missing column,
/// non-numeric cell, empty file) raise DataFormatError with row/column context.
Dataset load_csv(const IngestConfig& config);

/// Uniform random permutation by seed, then contiguous slices of sizes
/// floor(r_train*N), floor(r_val*N) and the remainder.
SplitAssignment split(const Dataset& data, const std::array<double, 3>& ratios,
                      std::uint64_t seed);

/// Transforms every column to (x - mean) / std with statistics computed over
/// stats_from only; returns the transformed dataset and the statistics.
/// A zero-variance column within stats_from raises ContractError naming it.
std::pair<Dataset, StandardizeStats> standardize(const Dataset& data, IndexSpan stats_from);

/// Applies previously computed statistics.
Dataset apply_standardize(const Dataset& data, const StandardizeStats& stats);

/// Writes the dataset in the format load_csv consumes: feature columns (full
/// double precision), then "label" (+1/-1) and the sensitive column "z" (0/1).
void write_csv(const Dataset& data, const std::string& path);

/// {"mean":[...],"std":[...]} sidecar.
void write_stats_sidecar(const StandardizeStats& stats, const std::string& path);
StandardizeStats read_stats_sidecar(const std::string& path);

}  // namespace ambifair

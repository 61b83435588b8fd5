#include "ambifair/dataset.hpp"

#include <algorithm>
#include <cmath>

namespace ambifair {

void Dataset::validate() const {
    const Index N = features.rows();
    const Index d = features.cols();
    require(N >= 1, "Dataset: need at least one row");
    require(d >= 1, "Dataset: need at least one feature column");
    require(labels.size() == N, "Dataset: labels length != N");
    require(sensitive.size() == N, "Dataset: sensitive length != N");
    require(static_cast<Index>(feature_names.size()) == d,
            "Dataset: feature_names length != d");
    if (!cluster_ids.empty()) {
        require(static_cast<Index>(cluster_ids.size()) == N,
                "Dataset: cluster_ids length != N");
    }
    for (Index i = 0; i < N; ++i) {
        require(labels[i] == -1 || labels[i] == 1,
                "Dataset: label not in {-1,+1} at row " + std::to_string(i));
        require(sensitive[i] == 0 || sensitive[i] == 1,
                "Dataset: sensitive value not in {0,1} at row " + std::to_string(i));
    }
    if (!features.allFinite()) {
        throw ContractError("Dataset: feature matrix contains NaN or infinite entries");
    }
}

Dataset Dataset::validated(Matrix features, IntVector labels, IntVector sensitive,
                           std::vector<std::string> feature_names,
                           std::vector<int> cluster_ids) {
    Dataset ds{std::move(features), std::move(labels), std::move(sensitive),
               std::move(feature_names), std::move(cluster_ids)};
    ds.validate();
    return ds;
}

void SplitAssignment::validate(Index n) const {
    std::vector<int> seen(static_cast<std::size_t>(n), 0);
    auto mark = [&](const IndexList& idx, const char* name) {
        for (Index i : idx) {
            require(i >= 0 && i < n, std::string("SplitAssignment: ") + name + " index out of range");
            require(seen[static_cast<std::size_t>(i)] == 0,
                    std::string("SplitAssignment: index appears in more than one set: ") +
                        std::to_string(i));
            seen[static_cast<std::size_t>(i)] = 1;
        }
    };
    mark(train_idx, "train");
    mark(val_idx, "val");
    mark(test_idx, "test");
    require(std::all_of(seen.begin(), seen.end(), [](int s) { return s == 1; }),
            "SplitAssignment: sets do not cover 0..N-1");
}

Matrix gather_rows(const Matrix& features, IndexSpan subset) {
    Matrix out(static_cast<Index>(subset.size()), features.cols());
    for (std::size_t r = 0; r < subset.size(); ++r) {
        out.row(static_cast<Index>(r)) = features.row(subset[r]);
    }
    return out;
}

Vector gather(const IntVector& values, IndexSpan subset) {
    Vector out(static_cast<Index>(subset.size()));
    for (std::size_t r = 0; r < subset.size(); ++r) {
        out[static_cast<Index>(r)] = static_cast<double>(values[subset[r]]);
    }
    return out;
}

}  // namespace ambifair

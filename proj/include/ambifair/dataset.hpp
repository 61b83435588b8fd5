#pragma once

#include "ambifair/common.hpp"

#include <cstdint>
#include <string>
#include <vector>

namespace ambifair {

/// A binary-classification dataset: an N×d feature matrix, labels in {-1,+1},
/// and a binary sensitive attribute in {0,1}. Treated as immutable once built;
/// every downstream artifact references rows by index instead of copying them.
///
/// cluster_ids is optional provenance (which generating component a point came
/// from, for synthetic data); it is carried along untouched and empty otherwise.
struct Dataset {
    Matrix features;                         // N×d
    IntVector labels;                        // entries in {-1,+1}
    IntVector sensitive;                     // entries in {0,1}
    std::vector<std::string> feature_names;  // length d
    std::vector<int> cluster_ids;            // empty, or length N

    Index n() const { return features.rows(); }
    Index dim() const { return features.cols(); }

    /// Throws ContractError if any type invariant is violated.
    void validate() const;

    static Dataset validated(Matrix features, IntVector labels, IntVector sensitive,
                             std::vector<std::string> feature_names,
                             std::vector<int> cluster_ids = {});
};

/// Disjoint train/validation/test index sets covering 0..N-1.
struct SplitAssignment {
    IndexList train_idx;
    IndexList val_idx;
    IndexList test_idx;
    std::uint64_t seed = 0;

    /// Throws ContractError unless the three sets are pairwise disjoint and
    /// their union is exactly {0..n-1}.
    void validate(Index n) const;
};

/// Rows of `data.features` restricted to `subset`, as a dense copy.
Matrix gather_rows(const Matrix& features, IndexSpan subset);
Vector gather(const IntVector& values, IndexSpan subset);

}  // namespace ambifair

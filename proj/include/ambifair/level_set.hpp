#pragma once

#include "ambifair/common.hpp"
#include "ambifair/model.hpp"

#include <nlohmann/json_fwd.hpp>

#include <cstdint>
#include <string>
#include <vector>

namespace ambifair {

/// Where a level set came from: construction method, the grid that was swept,
/// and the run seed. Serialized alongside the models.
struct Provenance {
    std::string method;        // "dsc_approx", "amb_approx", "exact_oracle", ...
    std::vector<double> grid;  // gamma values or target indices, as swept
    std::uint64_t seed = 0;
};

/// The best classifier together with every kept near-optimal classifier.
/// Invariants (checked by validate()):
///   - members[best_index] attains the maximum val_accuracy,
///   - val_accuracy[best] - val_accuracy[m] <= epsilon + 1e-12 for every member.
struct LevelSet {
    std::vector<Model> members;        // best included
    std::size_t best_index = 0;
    double epsilon = 0.0;
    std::vector<double> val_accuracy;  // per member, in [0,1]
    Provenance provenance;

    const Model& best() const { return members.at(best_index); }
    std::size_t size() const { return members.size(); }
    void validate() const;
};

/// Per-datapoint flag: true iff at least two level-set members disagree on the
/// sign of their decision at that point.
struct AmbiguityMask {
    std::vector<bool> flags;  // length N of the dataset the mask was computed on
    std::string source;       // identifier of the producing level set

    std::size_t count() const;
    double fraction_of(IndexSpan subset) const;
};

/// A probability vector over level-set members; prediction samples a member.
struct MetaClassifier {
    LevelSet level_set;
    Vector weights;  // elementwise in [0,1], sums to 1 within 1e-9
    std::uint64_t rng_seed = 0;

    void validate() const;
};

nlohmann::json level_set_to_json(const LevelSet& ls);
LevelSet level_set_from_json(const nlohmann::json& j);

}  // namespace ambifair

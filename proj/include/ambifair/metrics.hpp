#pragma once

#include "ambifair/common.hpp"
#include "ambifair/dataset.hpp"
#include "ambifair/level_set.hpp"
#include "ambifair/model.hpp"

#include <nlohmann/json_fwd.hpp>

#include <array>
#include <optional>
#include <string>

namespace ambifair {

enum class ErrorKind { FPR, FNR };

std::string to_string(ErrorKind kind);
ErrorKind error_kind_from_string(const std::string& s);

/// A rate can be undefined when its denominator cell is empty; undefined
/// propagates rather than turning into 0 or NaN.
using Rate = std::optional<double>;

struct GroupErrorRates {
    Rate fpr0, fpr1;  // false-positive rate per sensitive group
    Rate fnr0, fnr1;  // false-negative rate per sensitive group
};

/// Fraction of correct predictions over the subset. For a MetaClassifier this
/// is the expectation over members.
double accuracy(const Model& m, const Dataset& data, IndexSpan subset);
double accuracy(const MetaClassifier& meta, const Dataset& data, IndexSpan subset);

/// Maximum over member pairs of the fraction of subset points where they
/// disagree. 0 for a singleton set.
double pairwise_discrepancy(const LevelSet& ls, const Dataset& data, IndexSpan subset);

/// Fraction of subset points where at least one member pair disagrees.
double pairwise_ambiguity(const LevelSet& ls, const Dataset& data, IndexSpan subset);

/// Same measures, but disagreement is counted against the best member only.
double best_relative_discrepancy(const LevelSet& ls, const Dataset& data, IndexSpan subset);
double best_relative_ambiguity(const LevelSet& ls, const Dataset& data, IndexSpan subset);

/// Per-group FPR/FNR over the subset rows where region[i] is true (region may
/// be empty to mean "all of subset"). A rate with an empty denominator comes
/// back undefined.
GroupErrorRates group_error_rates(const Model& m, const Dataset& data, IndexSpan subset,
                                  const std::vector<bool>* region = nullptr);
GroupErrorRates group_error_rates(const MetaClassifier& meta, const Dataset& data,
                                  IndexSpan subset, const std::vector<bool>* region = nullptr);

/// Signed difference rate(z=1) - rate(z=0); undefined if either side is.
Rate unfairness(const Model& m, const Dataset& data, IndexSpan subset,
                const std::vector<bool>* region, ErrorKind kind);
Rate unfairness(const MetaClassifier& meta, const Dataset& data, IndexSpan subset,
                const std::vector<bool>* region, ErrorKind kind);

enum class Region { total, unambiguous, ambiguous };

struct RegionReport {
    Region region = Region::total;
    Rate unfairness_fpr;
    Rate unfairness_fnr;
    Rate accuracy;                            // undefined on an empty region
    std::array<std::array<long, 2>, 2> support{};  // support[group][label==+1]
    long size() const;
};

/// Total / unambiguous / ambiguous breakdowns of the subset under the mask.
std::array<RegionReport, 3> region_report(const Model& m, const Dataset& data,
                                          IndexSpan subset, const AmbiguityMask& mask);
std::array<RegionReport, 3> region_report(const MetaClassifier& meta, const Dataset& data,
                                          IndexSpan subset, const AmbiguityMask& mask);

nlohmann::json region_report_to_json(const RegionReport& report);

}  // namespace ambifair

#include "ambifair/metrics.hpp"

#include <nlohmann/json.hpp>

#include <algorithm>
#include <cmath>

namespace ambifair {

namespace {

// Predictions of every member on the subset, one row per member.
Eigen::MatrixXi member_predictions(const LevelSet& ls, const Dataset& data, IndexSpan subset) {
    Eigen::MatrixXi preds(static_cast<Index>(ls.size()), static_cast<Index>(subset.size()));
    for (std::size_t m = 0; m < ls.size(); ++m) {
        preds.row(static_cast<Index>(m)) = predictions(ls.members[m], data, subset).transpose();
    }
    return preds;
}

IndexList region_rows(IndexSpan subset, const std::vector<bool>* region) {
    IndexList rows;
    rows.reserve(subset.size());
    for (Index i : subset) {
        if (!region || (*region)[static_cast<std::size_t>(i)]) rows.push_back(i);
    }
    return rows;
}

GroupErrorRates rates_from_predictions(const Dataset& data, const IndexList& rows,
                                       const IntVector& preds) {
    long neg_total[2] = {0, 0}, neg_wrong[2] = {0, 0};
    long pos_total[2] = {0, 0}, pos_wrong[2] = {0, 0};
    for (std::size_t r = 0; r < rows.size(); ++r) {
        const Index i = rows[r];
        const int g = data.sensitive[i];
        if (data.labels[i] == -1) {
            ++neg_total[g];
            if (preds[static_cast<Index>(r)] == 1) ++neg_wrong[g];
        } else {
            ++pos_total[g];
            if (preds[static_cast<Index>(r)] == -1) ++pos_wrong[g];
        }
    }
    auto rate = [](long wrong, long total) -> Rate {
        if (total == 0) return std::nullopt;
        return static_cast<double>(wrong) / static_cast<double>(total);
    };
    GroupErrorRates out;
    out.fpr0 = rate(neg_wrong[0], neg_total[0]);
    out.fpr1 = rate(neg_wrong[1], neg_total[1]);
    out.fnr0 = rate(pos_wrong[0], pos_total[0]);
    out.fnr1 = rate(pos_wrong[1], pos_total[1]);
    return out;
}

Rate signed_difference(Rate one, Rate zero) {
    if (!one || !zero) return std::nullopt;
    return *one - *zero;
}

Rate pick(const GroupErrorRates& r, ErrorKind kind) {
    return kind == ErrorKind::FPR ? signed_difference(r.fpr1, r.fpr0)
                                  : signed_difference(r.fnr1, r.fnr0);
}

}  // namespace

std::string to_string(ErrorKind kind) { return kind == ErrorKind::FPR ? "fpr" : "fnr"; }

ErrorKind error_kind_from_string(const std::string& s) {
    if (s == "fpr" || s == "FPR") return ErrorKind::FPR;
    if (s == "fnr" || s == "FNR") return ErrorKind::FNR;
    throw ConfigError("unknown error kind '" + s + "' (expected fpr or fnr)");
}

double accuracy(const Model& m, const Dataset& data, IndexSpan subset) {
    require(!subset.empty(), "accuracy: empty subset");
    const IntVector preds = predictions(m, data, subset);
    long correct = 0;
    for (std::size_t r = 0; r < subset.size(); ++r) {
        if (preds[static_cast<Index>(r)] == data.labels[subset[r]]) ++correct;
    }
    return static_cast<double>(correct) / static_cast<double>(subset.size());
}

double accuracy(const MetaClassifier& meta, const Dataset& data, IndexSpan subset) {
    double acc = 0.0;
    for (std::size_t m = 0; m < meta.level_set.size(); ++m) {
        const double w = meta.weights[static_cast<Index>(m)];
        if (w != 0.0) acc += w * accuracy(meta.level_set.members[m], data, subset);
    }
    return acc;
}

double pairwise_discrepancy(const LevelSet& ls, const Dataset& data, IndexSpan subset) {
    require(!subset.empty(), "pairwise_discrepancy: empty subset");
    if (ls.size() < 2) return 0.0;
    const Eigen::MatrixXi preds = member_predictions(ls, data, subset);
    double worst = 0.0;
    for (Index a = 0; a < preds.rows(); ++a) {
        for (Index b = a + 1; b < preds.rows(); ++b) {
            const double frac =
                static_cast<double>((preds.row(a).array() != preds.row(b).array()).count()) /
                static_cast<double>(subset.size());
            worst = std::max(worst, frac);
        }
    }
    return worst;
}

double pairwise_ambiguity(const LevelSet& ls, const Dataset& data, IndexSpan subset) {
    require(!subset.empty(), "pairwise_ambiguity: empty subset");
    if (ls.size() < 2) return 0.0;
    const Eigen::MatrixXi preds = member_predictions(ls, data, subset);
    long hit = 0;
    for (Index j = 0; j < preds.cols(); ++j) {
        const int first = preds(0, j);
        for (Index m = 1; m < preds.rows(); ++m) {
            if (preds(m, j) != first) {
                ++hit;
                break;
            }
        }
    }
    return static_cast<double>(hit) / static_cast<double>(subset.size());
}

double best_relative_discrepancy(const LevelSet& ls, const Dataset& data, IndexSpan subset) {
    require(!subset.empty(), "best_relative_discrepancy: empty subset");
    const Eigen::MatrixXi preds = member_predictions(ls, data, subset);
    const auto best = preds.row(static_cast<Index>(ls.best_index));
    double worst = 0.0;
    for (Index m = 0; m < preds.rows(); ++m) {
        const double frac =
            static_cast<double>((preds.row(m).array() != best.array()).count()) /
            static_cast<double>(subset.size());
        worst = std::max(worst, frac);
    }
    return worst;
}

double best_relative_ambiguity(const LevelSet& ls, const Dataset& data, IndexSpan subset) {
    require(!subset.empty(), "best_relative_ambiguity: empty subset");
    const Eigen::MatrixXi preds = member_predictions(ls, data, subset);
    const auto best = preds.row(static_cast<Index>(ls.best_index));
    long hit = 0;
    for (Index j = 0; j < preds.cols(); ++j) {
        for (Index m = 0; m < preds.rows(); ++m) {
            if (preds(m, j) != best[j]) {
                ++hit;
                break;
            }
        }
    }
    return static_cast<double>(hit) / static_cast<double>(subset.size());
}

GroupErrorRates group_error_rates(const Model& m, const Dataset& data, IndexSpan subset,
                                  const std::vector<bool>* region) {
    require(!subset.empty(), "group_error_rates: empty subset");
    const IndexList rows = region_rows(subset, region);
    const IntVector preds = predictions(m, data, rows);
    return rates_from_predictions(data, rows, preds);
}

GroupErrorRates group_error_rates(const MetaClassifier& meta, const Dataset& data,
                                  IndexSpan subset, const std::vector<bool>* region) {
    require(!subset.empty(), "group_error_rates: empty subset");
    // Rates share denominators across members, so the expectation of the rate
    // is the weighted sum of member rates.
    GroupErrorRates acc;
    auto add = [](Rate& into, Rate member, double w) {
        if (!member) {
            into = std::nullopt;
        } else if (w != 0.0) {
            into = into.value_or(0.0) + w * *member;
        }
    };
    bool first = true;
    for (std::size_t m = 0; m < meta.level_set.size(); ++m) {
        const double w = meta.weights[static_cast<Index>(m)];
        const GroupErrorRates r =
            group_error_rates(meta.level_set.members[m], data, subset, region);
        if (first) {
            acc = GroupErrorRates{};
            if (!r.fpr0) acc.fpr0 = std::nullopt; else acc.fpr0 = 0.0;
            if (!r.fpr1) acc.fpr1 = std::nullopt; else acc.fpr1 = 0.0;
            if (!r.fnr0) acc.fnr0 = std::nullopt; else acc.fnr0 = 0.0;
            if (!r.fnr1) acc.fnr1 = std::nullopt; else acc.fnr1 = 0.0;
            first = false;
        }
        if (acc.fpr0) add(acc.fpr0, r.fpr0, w);
        if (acc.fpr1) add(acc.fpr1, r.fpr1, w);
        if (acc.fnr0) add(acc.fnr0, r.fnr0, w);
        if (acc.fnr1) add(acc.fnr1, r.fnr1, w);
    }
    return acc;
}

Rate unfairness(const Model& m, const Dataset& data, IndexSpan subset,
                const std::vector<bool>* region, ErrorKind kind) {
    return pick(group_error_rates(m, data, subset, region), kind);
}

Rate unfairness(const MetaClassifier& meta, const Dataset& data, IndexSpan subset,
                const std::vector<bool>* region, ErrorKind kind) {
    return pick(group_error_rates(meta, data, subset, region), kind);
}

long RegionReport::size() const {
    long total = 0;
    for (const auto& row : support) total += row[0] + row[1];
    return total;
}

namespace {

template <typename Classifier>
RegionReport one_region(const Classifier& clf, const Dataset& data, IndexSpan subset,
                        const std::vector<bool>* region, Region which) {
    RegionReport rep;
    rep.region = which;
    const IndexList rows = region_rows(subset, region);
    for (Index i : rows) {
        const int g = data.sensitive[i];
        const int l = data.labels[i] == 1 ? 1 : 0;
        ++rep.support[static_cast<std::size_t>(g)][static_cast<std::size_t>(l)];
    }
    if (!rows.empty()) {
        rep.accuracy = accuracy(clf, data, rows);
        rep.unfairness_fpr = unfairness(clf, data, rows, nullptr, ErrorKind::FPR);
        rep.unfairness_fnr = unfairness(clf, data, rows, nullptr, ErrorKind::FNR);
    }
    return rep;
}

template <typename Classifier>
std::array<RegionReport, 3> region_report_impl(const Classifier& clf, const Dataset& data,
                                               IndexSpan subset, const AmbiguityMask& mask) {
    require(mask.flags.size() == static_cast<std::size_t>(data.n()),
            "region_report: mask length != dataset size");
    std::vector<bool> unamb(mask.flags.size());
    for (std::size_t i = 0; i < mask.flags.size(); ++i) unamb[i] = !mask.flags[i];
    return {one_region(clf, data, subset, nullptr, Region::total),
            one_region(clf, data, subset, &unamb, Region::unambiguous),
            one_region(clf, data, subset, &mask.flags, Region::ambiguous)};
}

}  // namespace

std::array<RegionReport, 3> region_report(const Model& m, const Dataset& data, IndexSpan subset,
                                          const AmbiguityMask& mask) {
    return region_report_impl(m, data, subset, mask);
}

std::array<RegionReport, 3> region_report(const MetaClassifier& meta, const Dataset& data,
                                          IndexSpan subset, const AmbiguityMask& mask) {
    return region_report_impl(meta, data, subset, mask);
}

nlohmann::json region_report_to_json(const RegionReport& report) {
    auto rate_json = [](const Rate& r) -> nlohmann::json {
        if (!r) return nullptr;
        return *r;
    };
    const char* name = report.region == Region::total
                           ? "total"
                           : (report.region == Region::unambiguous ? "unambiguous" : "ambiguous");
    return nlohmann::json{
        {"region", name},
        {"unfairness_fpr", rate_json(report.unfairness_fpr)},
        {"unfairness_fnr", rate_json(report.unfairness_fnr)},
        {"accuracy", rate_json(report.accuracy)},
        {"support",
         {{"group0_neg", report.support[0][0]},
          {"group0_pos", report.support[0][1]},
          {"group1_neg", report.support[1][0]},
          {"group1_pos", report.support[1][1]}}},
    };
}

}  // namespace ambifair

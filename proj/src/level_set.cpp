#include "ambifair/level_set.hpp"

#include <nlohmann/json.hpp>

#include <algorithm>
#include <cmath>
#include <limits>

namespace ambifair {

namespace {
constexpr double kAccuracySlack = 1e-12;
}

void LevelSet::validate() const {
    require(!members.empty(), "LevelSet: no members");
    require(best_index < members.size(), "LevelSet: best_index out of range");
    require(val_accuracy.size() == members.size(),
            "LevelSet: val_accuracy length != member count");
    require(epsilon >= 0.0 && epsilon <= 1.0, "LevelSet: epsilon outside [0,1]");
    const double best_acc = val_accuracy[best_index];
    for (std::size_t i = 0; i < members.size(); ++i) {
        const double a = val_accuracy[i];
        require(a >= 0.0 && a <= 1.0, "LevelSet: accuracy outside [0,1]");
        require(a <= best_acc + kAccuracySlack,
                "LevelSet: best does not attain the maximum accuracy");
        require(best_acc - a <= epsilon + kAccuracySlack,
                "LevelSet: member accuracy more than epsilon below best");
    }
}

std::size_t AmbiguityMask::count() const {
    return static_cast<std::size_t>(std::count(flags.begin(), flags.end(), true));
}

double AmbiguityMask::fraction_of(IndexSpan subset) const {
    require(!subset.empty(), "AmbiguityMask::fraction_of: empty subset");
    std::size_t hit = 0;
    for (Index i : subset) {
        if (flags.at(static_cast<std::size_t>(i))) ++hit;
    }
    return static_cast<double>(hit) / static_cast<double>(subset.size());
}

void MetaClassifier::validate() const {
    level_set.validate();
    require(static_cast<std::size_t>(weights.size()) == level_set.size(),
            "MetaClassifier: weight count != member count");
    double sum = 0.0;
    for (Index i = 0; i < weights.size(); ++i) {
        require(weights[i] >= 0.0 && weights[i] <= 1.0,
                "MetaClassifier: weight outside [0,1]");
        sum += weights[i];
    }
    require(std::abs(sum - 1.0) <= 1e-9, "MetaClassifier: weights do not sum to 1");
}

nlohmann::json level_set_to_json(const LevelSet& ls) {
    nlohmann::json j;
    nlohmann::json models = nlohmann::json::array();
    for (const Model& m : ls.members) models.push_back(model_to_json(m));
    j["models"] = std::move(models);
    j["best_index"] = ls.best_index;
    j["epsilon"] = ls.epsilon;
    j["val_accuracy"] = ls.val_accuracy;
    nlohmann::json grid = nlohmann::json::array();
    for (double g : ls.provenance.grid) {
        if (std::isinf(g)) {
            grid.push_back("inf");  // JSON has no infinity literal
        } else {
            grid.push_back(g);
        }
    }
    j["provenance"] = {{"method", ls.provenance.method},
                       {"grid", std::move(grid)},
                       {"seed", ls.provenance.seed}};
    return j;
}

LevelSet level_set_from_json(const nlohmann::json& j) {
    LevelSet ls;
    for (const auto& jm : j.at("models")) ls.members.push_back(model_from_json(jm));
    ls.best_index = j.at("best_index").get<std::size_t>();
    ls.epsilon = j.at("epsilon").get<double>();
    ls.val_accuracy = j.at("val_accuracy").get<std::vector<double>>();
    const auto& jp = j.at("provenance");
    ls.provenance.method = jp.at("method").get<std::string>();
    for (const auto& g : jp.at("grid")) {
        if (g.is_string()) {
            ls.provenance.grid.push_back(std::numeric_limits<double>::infinity());
        } else {
            ls.provenance.grid.push_back(g.get<double>());
        }
    }
    ls.provenance.seed = jp.at("seed").get<std::uint64_t>();
    ls.validate();
    return ls;
}

}  // namespace ambifair

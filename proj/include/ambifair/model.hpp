#pragma once

#include "ambifair/common.hpp"
#include "ambifair/dataset.hpp"

#include <nlohmann/json_fwd.hpp>

#include <string>
#include <variant>
#include <vector>

namespace ambifair {

/// Linear decision boundary with an explicit bias term. Signed distance is
/// weights·x + bias; the bias is excluded from L2 penalties during training.
struct LinearModel {
    Vector weights;
    double bias = 0.0;

    Index dim() const { return weights.size(); }
    void validate() const;
};

struct RbfKernel {
    double bandwidth = 1.0;  // k(a,b) = exp(-|a-b|^2 / (2*bandwidth^2))
};

struct PolyKernel {
    int degree = 2;  // k(a,b) = (a.b + 1)^degree
};

using Kernel = std::variant<RbfKernel, PolyKernel>;

double kernel_eval(const Kernel& k, const Vector& a, const Vector& b);

/// Kernelized decision boundary: d(x) = sum_i alphas[i] * anchor_labels[i] * k(anchors[i], x).
struct KernelModel {
    Vector alphas;          // length M
    Matrix anchors;         // M×d support points
    IntVector anchor_labels;  // entries in {-1,+1}
    Kernel kernel;

    Index dim() const { return anchors.cols(); }
    void validate() const;
};

using Model = std::variant<LinearModel, KernelModel>;

/// Signed distance from x to the model's decision boundary.
double signed_distance(const LinearModel& m, const Eigen::Ref<const Vector>& x);
double signed_distance(const KernelModel& m, const Eigen::Ref<const Vector>& x);
double signed_distance(const Model& m, const Eigen::Ref<const Vector>& x);

/// +1 when the signed distance is >= 0 (ties at exactly 0 are positive), else -1.
int predict(const Model& m, const Eigen::Ref<const Vector>& x);
int predict(const LinearModel& m, const Eigen::Ref<const Vector>& x);

/// Signed distances for every row of `data.features` listed in `subset`.
Vector signed_distances(const Model& m, const Dataset& data, IndexSpan subset);

/// Predictions (+1/-1) for every row listed in `subset`.
IntVector predictions(const Model& m, const Dataset& data, IndexSpan subset);

inline int sign_of(double d) { return d >= 0.0 ? 1 : -1; }

/// Model <-> JSON. Numbers round-trip at full double precision.
nlohmann::json model_to_json(const Model& m);
Model model_from_json(const nlohmann::json& j);

/// Derived dataset whose j-th feature is anchor_labels[j] * k(anchors[j], x).
/// Training a linear model (with fit_bias=false) on this dataset is exactly
/// training the kernelized boundary in its natural parameters.
Dataset kernel_feature_dataset(const Dataset& data, IndexSpan anchor_idx, const Kernel& kernel);

/// Reinterpret a linear model over kernel features as a KernelModel.
/// Requires |linear.bias| <= 1e-12 (train with fit_bias=false).
KernelModel to_kernel_model(const LinearModel& linear, const Dataset& data,
                            IndexSpan anchor_idx, const Kernel& kernel);

}  // namespace ambifair

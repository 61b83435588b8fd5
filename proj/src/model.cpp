#include "ambifair/model.hpp"

#include <nlohmann/json.hpp>

#include <cmath>

namespace ambifair {

void LinearModel::validate() const {
    require(weights.size() >= 1, "LinearModel: empty weight vector");
    require(weights.allFinite() && std::isfinite(bias),
            "LinearModel: parameters must be finite");
}

void KernelModel::validate() const {
    const Index m = alphas.size();
    require(m >= 1, "KernelModel: need at least one anchor");
    require(anchors.rows() == m, "KernelModel: anchors rows != alphas length");
    require(anchor_labels.size() == m, "KernelModel: anchor_labels length != alphas length");
    require(alphas.allFinite(), "KernelModel: alphas must be finite");
    for (Index i = 0; i < m; ++i) {
        require(anchor_labels[i] == -1 || anchor_labels[i] == 1,
                "KernelModel: anchor label not in {-1,+1}");
    }
    if (const auto* rbf = std::get_if<RbfKernel>(&kernel)) {
        require(rbf->bandwidth > 0.0, "KernelModel: RBF bandwidth must be > 0");
    } else {
        require(std::get<PolyKernel>(kernel).degree >= 1,
                "KernelModel: polynomial degree must be >= 1");
    }
}

double kernel_eval(const Kernel& k, const Vector& a, const Vector& b) {
    require(a.size() == b.size(), "kernel_eval: dimension mismatch");
    if (const auto* rbf = std::get_if<RbfKernel>(&k)) {
        const double sq = (a - b).squaredNorm();
        return std::exp(-sq / (2.0 * rbf->bandwidth * rbf->bandwidth));
    }
    const auto& poly = std::get<PolyKernel>(k);
    return std::pow(a.dot(b) + 1.0, poly.degree);
}

double signed_distance(const LinearModel& m, const Eigen::Ref<const Vector>& x) {
    require(x.size() == m.weights.size(), "signed_distance: dimension mismatch");
    return m.weights.dot(x) + m.bias;
}

double signed_distance(const KernelModel& m, const Eigen::Ref<const Vector>& x) {
    require(x.size() == m.anchors.cols(), "signed_distance: dimension mismatch");
    double acc = 0.0;
    const Vector xv = x;
    for (Index i = 0; i < m.alphas.size(); ++i) {
        const Vector anchor = m.anchors.row(i).transpose();
        acc += m.alphas[i] * static_cast<double>(m.anchor_labels[i]) *
               kernel_eval(m.kernel, anchor, xv);
    }
    return acc;
}

double signed_distance(const Model& m, const Eigen::Ref<const Vector>& x) {
    return std::visit([&](const auto& inner) { return signed_distance(inner, x); }, m);
}

int predict(const Model& m, const Eigen::Ref<const Vector>& x) {
    return sign_of(signed_distance(m, x));
}

int predict(const LinearModel& m, const Eigen::Ref<const Vector>& x) {
    return sign_of(signed_distance(m, x));
}

Vector signed_distances(const Model& m, const Dataset& data, IndexSpan subset) {
    Vector out(static_cast<Index>(subset.size()));
    if (const auto* lin = std::get_if<LinearModel>(&m)) {
        require(lin->weights.size() == data.dim(), "signed_distances: dimension mismatch");
        // One matrix-vector product over the gathered rows.
        const Matrix rows = gather_rows(data.features, subset);
        out = rows * lin->weights;
        out.array() += lin->bias;
        return out;
    }
    for (std::size_t r = 0; r < subset.size(); ++r) {
        out[static_cast<Index>(r)] =
            signed_distance(m, data.features.row(subset[r]).transpose());
    }
    return out;
}

IntVector predictions(const Model& m, const Dataset& data, IndexSpan subset) {
    const Vector d = signed_distances(m, data, subset);
    IntVector out(d.size());
    for (Index i = 0; i < d.size(); ++i) out[i] = sign_of(d[i]);
    return out;
}

namespace {

nlohmann::json vector_to_json(const Vector& v) {
    nlohmann::json arr = nlohmann::json::array();
    for (Index i = 0; i < v.size(); ++i) arr.push_back(v[i]);
    return arr;
}

Vector vector_from_json(const nlohmann::json& arr) {
    Vector v(static_cast<Index>(arr.size()));
    for (std::size_t i = 0; i < arr.size(); ++i) v[static_cast<Index>(i)] = arr[i].get<double>();
    return v;
}

}  // namespace

nlohmann::json model_to_json(const Model& m) {
    nlohmann::json j;
    if (const auto* lin = std::get_if<LinearModel>(&m)) {
        j["kind"] = "linear";
        j["weights"] = vector_to_json(lin->weights);
        j["bias"] = lin->bias;
        return j;
    }
    const auto& km = std::get<KernelModel>(m);
    j["kind"] = "kernel";
    j["alphas"] = vector_to_json(km.alphas);
    nlohmann::json anchors = nlohmann::json::array();
    for (Index i = 0; i < km.anchors.rows(); ++i) {
        anchors.push_back(vector_to_json(km.anchors.row(i).transpose()));
    }
    j["anchors"] = anchors;
    nlohmann::json labels = nlohmann::json::array();
    for (Index i = 0; i < km.anchor_labels.size(); ++i) labels.push_back(km.anchor_labels[i]);
    j["anchor_labels"] = labels;
    if (const auto* rbf = std::get_if<RbfKernel>(&km.kernel)) {
        j["kernel"] = {{"type", "rbf"}, {"bandwidth", rbf->bandwidth}};
    } else {
        j["kernel"] = {{"type", "poly"}, {"degree", std::get<PolyKernel>(km.kernel).degree}};
    }
    return j;
}

Model model_from_json(const nlohmann::json& j) {
    const std::string kind = j.at("kind").get<std::string>();
    if (kind == "linear") {
        LinearModel m;
        m.weights = vector_from_json(j.at("weights"));
        m.bias = j.at("bias").get<double>();
        m.validate();
        return m;
    }
    if (kind != "kernel") throw DataFormatError("model_from_json: unknown kind '" + kind + "'");
    KernelModel m;
    m.alphas = vector_from_json(j.at("alphas"));
    const auto& anchors = j.at("anchors");
    const Index rows = static_cast<Index>(anchors.size());
    const Index cols = rows > 0 ? static_cast<Index>(anchors[0].size()) : 0;
    m.anchors.resize(rows, cols);
    for (Index i = 0; i < rows; ++i) {
        m.anchors.row(i) = vector_from_json(anchors[static_cast<std::size_t>(i)]).transpose();
    }
    const auto& labels = j.at("anchor_labels");
    m.anchor_labels.resize(static_cast<Index>(labels.size()));
    for (std::size_t i = 0; i < labels.size(); ++i) {
        m.anchor_labels[static_cast<Index>(i)] = labels[i].get<int>();
    }
    const auto& jk = j.at("kernel");
    const std::string type = jk.at("type").get<std::string>();
    if (type == "rbf") {
        m.kernel = RbfKernel{jk.at("bandwidth").get<double>()};
    } else if (type == "poly") {
        m.kernel = PolyKernel{jk.at("degree").get<int>()};
    } else {
        throw DataFormatError("model_from_json: unknown kernel type '" + type + "'");
    }
    m.validate();
    return m;
}

Dataset kernel_feature_dataset(const Dataset& data, IndexSpan anchor_idx, const Kernel& kernel) {
    require(!anchor_idx.empty(), "kernel_feature_dataset: empty anchor set");
    const Index n = data.n();
    const Index m = static_cast<Index>(anchor_idx.size());
    Matrix feats(n, m);
    std::vector<std::string> names(static_cast<std::size_t>(m));
    for (Index j = 0; j < m; ++j) {
        const Index a = anchor_idx[static_cast<std::size_t>(j)];
        const Vector anchor = data.features.row(a).transpose();
        const double ylab = static_cast<double>(data.labels[a]);
        for (Index i = 0; i < n; ++i) {
            feats(i, j) = ylab * kernel_eval(kernel, anchor, data.features.row(i).transpose());
        }
        names[static_cast<std::size_t>(j)] = "k_" + std::to_string(a);
    }
    return Dataset::validated(std::move(feats), data.labels, data.sensitive, std::move(names),
                              data.cluster_ids);
}

KernelModel to_kernel_model(const LinearModel& linear, const Dataset& data,
                            IndexSpan anchor_idx, const Kernel& kernel) {
    require(linear.weights.size() == static_cast<Index>(anchor_idx.size()),
            "to_kernel_model: weight count != anchor count");
    require(std::abs(linear.bias) <= 1e-12,
            "to_kernel_model: linear model carries a bias; train with fit_bias=false");
    KernelModel km;
    km.alphas = linear.weights;
    km.anchors = gather_rows(data.features, anchor_idx);
    km.anchor_labels.resize(static_cast<Index>(anchor_idx.size()));
    for (std::size_t i = 0; i < anchor_idx.size(); ++i) {
        km.anchor_labels[static_cast<Index>(i)] = data.labels[anchor_idx[i]];
    }
    km.kernel = kernel;
    km.validate();
    return km;
}

}  // namespace ambifair

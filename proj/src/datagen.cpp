#include "ambifair/datagen.hpp"

#include "ambifair/ingest.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>

namespace ambifair {

namespace {

Eigen::Matrix2d cholesky_or_throw(const Eigen::Matrix2d& cov, int cluster) {
    if ((cov - cov.transpose()).cwiseAbs().maxCoeff() > 1e-12) {
        throw ConfigError("SynthConfig: covariance of cluster " + std::to_string(cluster) +
                          " is not symmetric");
    }
    Eigen::LLT<Eigen::Matrix2d> llt(cov);
    if (llt.info() != Eigen::Success) {
        throw ConfigError("SynthConfig: covariance of cluster " + std::to_string(cluster) +
                          " is not positive definite");
    }
    return llt.matrixL();
}

// Exact-count assignment: shuffle the cluster's local indices and give the
// first lround(fraction*n) of them `hit`, the rest `miss`.
void assign_counts(std::vector<int>& out, IndexSpan rows, double fraction, int hit, int miss,
                   std::mt19937_64& rng) {
    std::vector<Index> local(rows.begin(), rows.end());
    std::shuffle(local.begin(), local.end(), rng);
    const auto k = static_cast<std::size_t>(std::lround(fraction * static_cast<double>(local.size())));
    for (std::size_t i = 0; i < local.size(); ++i) {
        out[static_cast<std::size_t>(local[i])] = i < k ? hit : miss;
    }
}

}  // namespace

void SynthConfig::validate() const {
    if (n_core < 1 || n_sparse < 1) {
        throw ConfigError("SynthConfig: cluster sizes must be >= 1");
    }
    if (noise_rate < 0.0 || noise_rate > 0.5) {
        throw ConfigError("SynthConfig: noise_rate outside [0, 0.5]");
    }
    for (double f : {dense_positive_fraction, dense_group0_fraction,
                     sparse_high_group1_fraction, sparse_low_group1_fraction}) {
        if (f < 0.0 || f > 1.0) throw ConfigError("SynthConfig: fraction outside [0,1]");
    }
    for (int c = 0; c < 6; ++c) cholesky_or_throw(clusters[static_cast<std::size_t>(c)].covariance, c + 1);
}

Dataset generate_synthetic(const SynthConfig& config) {
    config.validate();
    const std::array<Index, 6> sizes{config.n_core, config.n_core, config.n_sparse,
                                     config.n_sparse, config.n_sparse, config.n_sparse};
    const Index total = std::accumulate(sizes.begin(), sizes.end(), Index{0});

    std::mt19937_64 rng(config.seed);
    std::normal_distribution<double> gauss(0.0, 1.0);

    Matrix features(total, 2);
    std::vector<int> cluster_ids(static_cast<std::size_t>(total));
    std::array<IndexList, 6> cluster_rows;

    Index row = 0;
    for (int c = 0; c < 6; ++c) {
        const auto& spec = config.clusters[static_cast<std::size_t>(c)];
        const Eigen::Matrix2d chol = cholesky_or_throw(spec.covariance, c + 1);
        for (Index i = 0; i < sizes[static_cast<std::size_t>(c)]; ++i, ++row) {
            Eigen::Vector2d u(gauss(rng), gauss(rng));
            features.row(row) = (spec.mean + chol * u).transpose();
            cluster_ids[static_cast<std::size_t>(row)] = c + 1;
            cluster_rows[static_cast<std::size_t>(c)].push_back(row);
        }
    }

    std::vector<int> labels(static_cast<std::size_t>(total));
    std::vector<int> sensitive(static_cast<std::size_t>(total));

    // Labels: dense clusters are mostly one class with a small admixture of
    // the other; sparse clusters are pure (3 and 5 negative, 4 and 6 positive).
    assign_counts(labels, cluster_rows[0], config.dense_positive_fraction, +1, -1, rng);
    assign_counts(labels, cluster_rows[1], config.dense_positive_fraction, -1, +1, rng);
    for (Index i : cluster_rows[2]) labels[static_cast<std::size_t>(i)] = -1;
    for (Index i : cluster_rows[3]) labels[static_cast<std::size_t>(i)] = +1;
    for (Index i : cluster_rows[4]) labels[static_cast<std::size_t>(i)] = -1;
    for (Index i : cluster_rows[5]) labels[static_cast<std::size_t>(i)] = +1;

    // Sensitive attribute: dense clusters lean z=0; sparse clusters 3-4 lean
    // z=1 while 5-6 lean z=0.
    assign_counts(sensitive, cluster_rows[0], config.dense_group0_fraction, 0, 1, rng);
    assign_counts(sensitive, cluster_rows[1], config.dense_group0_fraction, 0, 1, rng);
    assign_counts(sensitive, cluster_rows[2], config.sparse_high_group1_fraction, 1, 0, rng);
    assign_counts(sensitive, cluster_rows[3], config.sparse_high_group1_fraction, 1, 0, rng);
    assign_counts(sensitive, cluster_rows[4], config.sparse_low_group1_fraction, 1, 0, rng);
    assign_counts(sensitive, cluster_rows[5], config.sparse_low_group1_fraction, 1, 0, rng);

    IntVector label_vec(total), sens_vec(total);
    for (Index i = 0; i < total; ++i) {
        label_vec[i] = labels[static_cast<std::size_t>(i)];
        sens_vec[i] = sensitive[static_cast<std::size_t>(i)];
    }

    Dataset ds = Dataset::validated(std::move(features), std::move(label_vec),
                                    std::move(sens_vec), {"x1", "x2"},
                                    std::move(cluster_ids));
    if (config.noise_rate > 0.0) {
        // Derived stream so the noise draw does not perturb the geometry draw.
        ds = flip_labels(ds, config.noise_rate, config.seed ^ 0x9e3779b97f4a7c15ULL);
    }
    const auto standardized = standardize(ds, all_indices(ds.n()));
    return standardized.first;
}

Dataset flip_labels(const Dataset& data, double rate, std::uint64_t seed) {
    if (rate < 0.0 || rate > 0.5) {
        throw ConfigError("flip_labels: rate outside [0, 0.5]");
    }
    const Index n = data.n();
    const auto k = static_cast<Index>(std::lround(rate * static_cast<double>(n)));
    Dataset out = data;
    if (k == 0) return out;

    // Partial Fisher-Yates: the first k entries are a uniform sample without
    // replacement.
    std::mt19937_64 rng(seed);
    IndexList idx = all_indices(n);
    for (Index i = 0; i < k; ++i) {
        std::uniform_int_distribution<Index> pick(i, n - 1);
        std::swap(idx[static_cast<std::size_t>(i)], idx[static_cast<std::size_t>(pick(rng))]);
    }
    for (Index i = 0; i < k; ++i) {
        const Index j = idx[static_cast<std::size_t>(i)];
        out.labels[j] = -out.labels[j];
    }
    return out;
}

}  // namespace ambifair

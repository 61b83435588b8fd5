#pragma once

#include "ambifair/common.hpp"
#include "ambifair/dataset.hpp"

#include <array>
#include <cstdint>

namespace ambifair {

/// One 2-D Gaussian component of the synthetic benchmark.
struct GaussianSpec {
    Eigen::Vector2d mean;
    Eigen::Matrix2d covariance;  // must be symmetric positive definite
};

/// Six-component Gaussian benchmark: two dense clusters carrying the bulk of
/// the data plus four sparse clusters placed where a linear boundary cannot
/// settle, with a group assignment that skews the sensitive attribute across
/// the sparse clusters. Percentages are realized as exact per-cluster counts
/// so that scaled-down replicas stay deterministic.
struct SynthConfig {
    std::uint64_t seed = 1122334455ULL;
    Index n_core = 4500;    // per dense cluster
    Index n_sparse = 250;   // per sparse cluster
    double noise_rate = 0.0;  // fraction of labels flipped uniformly at random

    // Cluster layout. Defaults reproduce the benchmark geometry.
    std::array<GaussianSpec, 6> clusters{
        GaussianSpec{{-35.0, 65.0}, (Eigen::Matrix2d() << 60, 1, 1, 120).finished()},
        GaussianSpec{{15.0, -25.0}, (Eigen::Matrix2d() << 60, 1, 1, 120).finished()},
        GaussianSpec{{30.0, 65.0}, (Eigen::Matrix2d() << 70, 1, 1, 100).finished()},
        GaussianSpec{{35.0, 40.0}, (Eigen::Matrix2d() << 70, 1, 1, 100).finished()},
        GaussianSpec{{-55.0, 5.0}, (Eigen::Matrix2d() << 70, 1, 1, 100).finished()},
        GaussianSpec{{-55.0, -20.0}, (Eigen::Matrix2d() << 70, 1, 1, 100).finished()},
    };

    // Fractions of points per cluster getting each assignment. Kept
    // configurable for experiments; defaults are the benchmark values.
    double dense_positive_fraction = 0.95;  // cluster 1 (+1), mirrored for cluster 2 (-1)
    double dense_group0_fraction = 0.65;    // clusters 1-2: fraction assigned z=0
    double sparse_high_group1_fraction = 0.80;  // clusters 3-4: fraction assigned z=1
    double sparse_low_group1_fraction = 0.20;   // clusters 5-6: fraction assigned z=1

    void validate() const;
};

/// Draws the six clusters, assigns labels and groups by exact counts, flips
/// noise_rate of the labels, then standardizes each feature column to zero
/// mean and unit variance (population denominator) over the full sample.
/// cluster_ids records the 1-based source cluster of every row.
Dataset generate_synthetic(const SynthConfig& config);

/// Flips the sign of exactly lround(rate*N) distinct labels chosen uniformly
/// without replacement; everything else is copied through untouched.
Dataset flip_labels(const Dataset& data, double rate, std::uint64_t seed);

}  // namespace ambifair

#pragma once

#include <Eigen/Dense>

#include <cstdint>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace ambifair {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;
using IntVector = Eigen::VectorXi;
using Index = Eigen::Index;
using IndexList = std::vector<Index>;
using IndexSpan = std::span<const Index>;

/// Violated precondition or type invariant (dimension mismatch, bad label, ...).
struct ContractError : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

/// Invalid user-supplied configuration (bad ratios, non-PD covariance, unknown key, ...).
struct ConfigError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Malformed input file (CSV structure, missing column, ...). Carries row/column context.
struct DataFormatError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Numerical failure inside an optimizer; carries a short iteration-trace summary.
struct SolverError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

inline void require(bool cond, const std::string& msg) {
    if (!cond) throw ContractError(msg);
}

inline IndexList all_indices(Index n) {
    IndexList out(static_cast<std::size_t>(n));
    for (Index i = 0; i < n; ++i) out[static_cast<std::size_t>(i)] = i;
    return out;
}

}  // namespace ambifair

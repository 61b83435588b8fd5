#pragma once

#include "ambifair/common.hpp"
#include "ambifair/dataset.hpp"
#include "ambifair/model.hpp"

#include <cstdint>
#include <optional>
#include <vector>

namespace ambifair {

struct TrainConfig {
    double lambda = 0.1;  // L2 strength on the weights; bias is never penalized
    int max_iters = 500;
    double grad_tol = 1e-6;
    double init_step = 1.0;
    double backtrack_factor = 0.5;  // Armijo shrink
    double armijo_c = 1e-4;
    double step_growth = 2.0;  // trial-step growth between accepted iterations
    double min_step = 1e-18;
    bool fit_bias = true;  // false trains a boundary through the origin (kernel route)
    std::uint64_t seed = 0;  // recorded for provenance; solves themselves are deterministic

    void validate() const;
};

enum class ConstraintKind { agreement_bound, flip_point, covariance_bound };

/// Quadratic-penalty schedule for the outer loop of train_constrained.
struct PenaltySchedule {
    double initial_multiplier = 10.0;
    double growth = 10.0;
    int max_outer = 8;
    double feasibility_tol = 1e-6;  // absolute, on standardized-feature scale
};

/// One convex constraint on the linear parameters.
///
/// agreement_bound: mean over the subset of max(0, d(x)*d_ref(x)) <= gamma,
///   where d_ref comes from `reference`. gamma=+inf disables the constraint.
/// flip_point: force the decision at `target` to the opposite side of what
///   `reference` predicts, with a strict-inequality margin:
///   hinge(s*d(x_target) + margin) == 0 where s=+1 if the reference predicts
///   positive there, s=-1 otherwise.
/// covariance_bound: |mean over D* of (z - zbar)*d(x)| <= bound, with
///   D* = subset rows whose ground-truth label equals dstar_label.
struct ConstraintSpec {
    ConstraintKind kind = ConstraintKind::agreement_bound;
    double gamma = 0.0;                    // agreement_bound
    Index target = -1;                     // flip_point: dataset row index
    double margin = 1e-3;                  // flip_point
    double bound = 0.0;                    // covariance_bound: c
    int dstar_label = -1;                  // covariance_bound: label selecting D*
    std::optional<Model> reference;        // agreement_bound / flip_point
    PenaltySchedule schedule;

    static ConstraintSpec agreement(Model reference, double gamma);
    static ConstraintSpec flip(Model reference, Index target, double margin = 1e-3);
    static ConstraintSpec covariance(double bound, int dstar_label);

    void validate() const;
};

struct FeasibilityReport {
    ConstraintKind kind = ConstraintKind::agreement_bound;
    double achieved = 0.0;  // constraint function value at the returned model
    double bound = 0.0;
    double residual = 0.0;  // violation; 0 when satisfied
    bool feasible = false;
};

struct TrainResult {
    LinearModel model;
    double grad_norm = 0.0;
    int iterations = 0;
    bool converged = false;  // gradient norm reached grad_tol (vs max_iters hit)
    double final_loss = 0.0;
};

struct ConstrainedResult {
    LinearModel model;
    std::vector<FeasibilityReport> reports;
    bool feasible = false;  // all residuals within tolerance
    int outer_iterations = 0;
    std::vector<double> outer_max_violation;  // max residual after each outer solve
    bool converged = false;
    double final_loss = 0.0;  // unpenalized objective at the returned model
};

/// Mean logistic loss over the subset plus lambda*|w|^2 (bias excluded).
double logistic_loss(const LinearModel& model, const Dataset& data, IndexSpan subset,
                     double lambda);

/// Analytic gradient of logistic_loss, length d+1: d/dw then d/dbias.
Vector gradient(const LinearModel& model, const Dataset& data, IndexSpan subset,
                double lambda);

/// Gradient descent with Armijo backtracking from the zero vector.
TrainResult train_unconstrained(const Dataset& data, IndexSpan subset,
                                const TrainConfig& config);

/// Exterior quadratic-penalty loop around the same inner solver. Warm-starts
/// from `warm_start` when given, else from the first linear constraint
/// reference, else from zero. Never throws on infeasibility: the result
/// carries the best-effort model and per-constraint residuals.
ConstrainedResult train_constrained(const Dataset& data, IndexSpan subset,
                                    const TrainConfig& config,
                                    const std::vector<ConstraintSpec>& constraints,
                                    const std::optional<LinearModel>& warm_start = {});

/// The penalized objective used inside train_constrained, exposed so the
/// analytic gradient can be checked against finite differences with active
/// penalty terms. Parameters are packed as [weights..., bias].
class PenalizedObjective {
  public:
    PenalizedObjective(const Dataset& data, IndexSpan subset, double lambda, bool fit_bias);

    /// Registers a constraint; rho is set later via set_multiplier.
    void add_constraint(const ConstraintSpec& spec, const Dataset& data, IndexSpan subset);
    void set_multiplier(double rho);

    double value(const Vector& theta) const;
    Vector grad(const Vector& theta) const;
    /// Unpenalized part only.
    double base_value(const Vector& theta) const;
    /// Per-constraint (achieved, bound, residual).
    std::vector<FeasibilityReport> reports(const Vector& theta) const;

    Index param_count() const { return features_.cols() + 1; }
    bool fit_bias() const { return fit_bias_; }

  private:
    struct Penalty {
        ConstraintKind kind;
        Vector reference_distances;  // agreement: aligned with subset order
        double gamma = 0.0;
        Vector flip_x;  // flip: target features
        double flip_sign = 1.0;
        double margin = 0.0;
        Vector cov_u;  // covariance: constant gradient direction, length d+1
        double bound = 0.0;
        double tol = 1e-6;
    };

    double constraint_value(const Penalty& p, const Vector& theta) const;

    Matrix features_;  // gathered subset rows
    Vector labels_;
    double lambda_;
    bool fit_bias_;
    double rho_ = 0.0;
    std::vector<Penalty> penalties_;
};

}  // namespace ambifair

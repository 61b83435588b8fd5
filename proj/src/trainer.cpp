#include "ambifair/trainer.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

namespace ambifair {

namespace {

// log(1 + exp(t)) without overflow.
inline double softplus(double t) {
    if (t > 35.0) return t;
    if (t < -35.0) return std::exp(t);
    return std::log1p(std::exp(t));
}

// 1 / (1 + exp(-t)) without overflow.
inline double sigmoid(double t) {
    if (t >= 0.0) {
        const double e = std::exp(-t);
        return 1.0 / (1.0 + e);
    }
    const double e = std::exp(t);
    return e / (1.0 + e);
}

struct InnerResult {
    Vector theta;
    double grad_norm = 0.0;
    int iterations = 0;
    bool converged = false;
    double value = 0.0;
};

// Gradient descent with Armijo backtracking. Throws SolverError if the
// objective ever evaluates non-finite at an accepted point.
InnerResult minimize(const PenalizedObjective& objective, Vector theta,
                     const TrainConfig& config) {
    InnerResult res;
    double fx = objective.value(theta);
    if (!std::isfinite(fx)) {
        throw SolverError("minimize: objective non-finite at the starting point");
    }
    Vector g = objective.grad(theta);
    double step = config.init_step;
    int iter = 0;
    for (; iter < config.max_iters; ++iter) {
        const double gnorm = g.norm();
        if (gnorm <= config.grad_tol) {
            res.converged = true;
            break;
        }
        const double gsq = g.squaredNorm();
        double t = std::min(step * config.step_growth, 1e6);
        double fnew = std::numeric_limits<double>::infinity();
        Vector trial;
        while (true) {
            trial = theta - t * g;
            fnew = objective.value(trial);
            if (std::isfinite(fnew) && fnew <= fx - config.armijo_c * t * gsq) break;
            t *= config.backtrack_factor;
            if (t < config.min_step) break;
        }
        if (t < config.min_step) break;  // stalled: no productive step remains
        theta = trial;
        fx = fnew;
        step = t;
        g = objective.grad(theta);
        if (!std::isfinite(fx)) {
            std::ostringstream trace;
            trace << "minimize: diverged at iteration " << iter << " (value " << fx
                  << ", step " << t << ")";
            throw SolverError(trace.str());
        }
    }
    res.theta = std::move(theta);
    res.grad_norm = g.norm();
    res.iterations = iter;
    res.value = fx;
    if (res.grad_norm <= config.grad_tol) res.converged = true;
    return res;
}

Vector pack(const LinearModel& m) {
    Vector theta(m.weights.size() + 1);
    theta.head(m.weights.size()) = m.weights;
    theta[m.weights.size()] = m.bias;
    return theta;
}

LinearModel unpack(const Vector& theta) {
    LinearModel m;
    m.weights = theta.head(theta.size() - 1);
    m.bias = theta[theta.size() - 1];
    return m;
}

}  // namespace

void TrainConfig::validate() const {
    if (lambda < 0.0) throw ConfigError("TrainConfig: lambda must be >= 0");
    if (max_iters < 1) throw ConfigError("TrainConfig: max_iters must be >= 1");
    if (grad_tol <= 0.0) throw ConfigError("TrainConfig: grad_tol must be > 0");
    if (backtrack_factor <= 0.0 || backtrack_factor >= 1.0) {
        throw ConfigError("TrainConfig: backtrack_factor must lie in (0,1)");
    }
    if (armijo_c <= 0.0 || armijo_c >= 1.0) {
        throw ConfigError("TrainConfig: armijo_c must lie in (0,1)");
    }
    if (init_step <= 0.0) throw ConfigError("TrainConfig: init_step must be > 0");
}

ConstraintSpec ConstraintSpec::agreement(Model reference, double gamma) {
    ConstraintSpec spec;
    spec.kind = ConstraintKind::agreement_bound;
    spec.gamma = gamma;
    spec.reference = std::move(reference);
    spec.validate();
    return spec;
}

ConstraintSpec ConstraintSpec::flip(Model reference, Index target, double margin) {
    ConstraintSpec spec;
    spec.kind = ConstraintKind::flip_point;
    spec.target = target;
    spec.margin = margin;
    spec.reference = std::move(reference);
    spec.validate();
    return spec;
}

ConstraintSpec ConstraintSpec::covariance(double bound, int dstar_label) {
    ConstraintSpec spec;
    spec.kind = ConstraintKind::covariance_bound;
    spec.bound = bound;
    spec.dstar_label = dstar_label;
    spec.validate();
    return spec;
}

void ConstraintSpec::validate() const {
    switch (kind) {
        case ConstraintKind::agreement_bound:
            if (gamma < 0.0) throw ConfigError("ConstraintSpec: gamma must be >= 0");
            if (!reference) throw ConfigError("ConstraintSpec: agreement needs a reference model");
            break;
        case ConstraintKind::flip_point:
            if (margin <= 0.0) throw ConfigError("ConstraintSpec: margin must be > 0");
            if (target < 0) throw ConfigError("ConstraintSpec: flip target missing");
            if (!reference) throw ConfigError("ConstraintSpec: flip needs a reference model");
            break;
        case ConstraintKind::covariance_bound:
            if (bound < 0.0) throw ConfigError("ConstraintSpec: bound must be >= 0");
            if (dstar_label != -1 && dstar_label != 1) {
                throw ConfigError("ConstraintSpec: dstar_label must be -1 or +1");
            }
            break;
    }
    if (schedule.initial_multiplier <= 0.0 || schedule.growth <= 1.0 ||
        schedule.max_outer < 1 || schedule.feasibility_tol <= 0.0) {
        throw ConfigError("ConstraintSpec: invalid penalty schedule");
    }
}

PenalizedObjective::PenalizedObjective(const Dataset& data, IndexSpan subset, double lambda,
                                       bool fit_bias)
    : lambda_(lambda), fit_bias_(fit_bias) {
    require(!subset.empty(), "PenalizedObjective: empty subset");
    features_ = gather_rows(data.features, subset);
    labels_ = gather(data.labels, subset);
}

void PenalizedObjective::add_constraint(const ConstraintSpec& spec, const Dataset& data,
                                        IndexSpan subset) {
    spec.validate();
    Penalty p;
    p.kind = spec.kind;
    p.tol = spec.schedule.feasibility_tol;
    switch (spec.kind) {
        case ConstraintKind::agreement_bound: {
            p.gamma = spec.gamma;
            p.reference_distances = signed_distances(*spec.reference, data, subset);
            break;
        }
        case ConstraintKind::flip_point: {
            require(spec.target >= 0 && spec.target < data.n(),
                    "ConstraintSpec: flip target out of range");
            p.flip_x = data.features.row(spec.target).transpose();
            const double dref =
                signed_distance(*spec.reference, data.features.row(spec.target).transpose());
            p.flip_sign = dref >= 0.0 ? 1.0 : -1.0;
            p.margin = spec.margin;
            break;
        }
        case ConstraintKind::covariance_bound: {
            p.bound = spec.bound;
            IndexList dstar;
            for (Index i : subset) {
                if (data.labels[i] == spec.dstar_label) dstar.push_back(i);
            }
            require(!dstar.empty(), "ConstraintSpec: D* selector matched no rows");
            double zbar = 0.0;
            for (Index i : dstar) zbar += static_cast<double>(data.sensitive[i]);
            zbar /= static_cast<double>(dstar.size());
            Vector u = Vector::Zero(data.dim() + 1);
            for (Index i : dstar) {
                const double w = static_cast<double>(data.sensitive[i]) - zbar;
                u.head(data.dim()) += w * data.features.row(i).transpose();
                u[data.dim()] += w;  // cancels exactly because zbar is the D* mean
            }
            u /= static_cast<double>(dstar.size());
            p.cov_u = std::move(u);
            break;
        }
    }
    penalties_.push_back(std::move(p));
}

void PenalizedObjective::set_multiplier(double rho) { rho_ = rho; }

double PenalizedObjective::constraint_value(const Penalty& p, const Vector& theta) const {
    const Index d = features_.cols();
    const auto w = theta.head(d);
    const double b = fit_bias_ ? theta[d] : 0.0;
    switch (p.kind) {
        case ConstraintKind::agreement_bound: {
            const Vector dist = (features_ * w).array() + b;
            double acc = 0.0;
            for (Index i = 0; i < dist.size(); ++i) {
                acc += std::max(0.0, dist[i] * p.reference_distances[i]);
            }
            return acc / static_cast<double>(dist.size());
        }
        case ConstraintKind::flip_point:
            return p.flip_sign * (w.dot(p.flip_x) + b);
        case ConstraintKind::covariance_bound: {
            double v = p.cov_u.head(d).dot(w);
            if (fit_bias_) v += p.cov_u[d] * b;
            return v;
        }
    }
    return 0.0;
}

double PenalizedObjective::base_value(const Vector& theta) const {
    const Index d = features_.cols();
    const auto w = theta.head(d);
    const double b = fit_bias_ ? theta[d] : 0.0;
    const Vector margins = labels_.array() * ((features_ * w).array() + b);
    double loss = 0.0;
    for (Index i = 0; i < margins.size(); ++i) loss += softplus(-margins[i]);
    loss /= static_cast<double>(margins.size());
    return loss + lambda_ * w.squaredNorm();
}

double PenalizedObjective::value(const Vector& theta) const {
    double total = base_value(theta);
    for (const Penalty& p : penalties_) {
        double viol = 0.0;
        const double v = constraint_value(p, theta);
        switch (p.kind) {
            case ConstraintKind::agreement_bound:
                viol = std::max(0.0, v - p.gamma);
                break;
            case ConstraintKind::flip_point:
                viol = std::max(0.0, v + p.margin);
                break;
            case ConstraintKind::covariance_bound:
                viol = std::max(0.0, std::abs(v) - p.bound);
                break;
        }
        total += rho_ * viol * viol;
    }
    return total;
}

Vector PenalizedObjective::grad(const Vector& theta) const {
    const Index d = features_.cols();
    const auto w = theta.head(d);
    const double b = fit_bias_ ? theta[d] : 0.0;
    const Index n = features_.rows();

    const Vector dist = (features_ * w).array() + b;
    Vector r(n);
    for (Index i = 0; i < n; ++i) {
        r[i] = -labels_[i] * sigmoid(-labels_[i] * dist[i]);
    }
    Vector g = Vector::Zero(d + 1);
    g.head(d) = features_.transpose() * r / static_cast<double>(n) + 2.0 * lambda_ * w;
    g[d] = r.mean();

    for (const Penalty& p : penalties_) {
        const double v = constraint_value(p, theta);
        switch (p.kind) {
            case ConstraintKind::agreement_bound: {
                const double viol = v - p.gamma;
                if (viol > 0.0) {
                    Vector gc = Vector::Zero(d + 1);
                    for (Index i = 0; i < n; ++i) {
                        if (dist[i] * p.reference_distances[i] > 0.0) {
                            gc.head(d) += p.reference_distances[i] *
                                          features_.row(i).transpose();
                            gc[d] += p.reference_distances[i];
                        }
                    }
                    gc /= static_cast<double>(n);
                    g += 2.0 * rho_ * viol * gc;
                }
                break;
            }
            case ConstraintKind::flip_point: {
                const double viol = v + p.margin;
                if (viol > 0.0) {
                    g.head(d) += 2.0 * rho_ * viol * p.flip_sign * p.flip_x;
                    g[d] += 2.0 * rho_ * viol * p.flip_sign;
                }
                break;
            }
            case ConstraintKind::covariance_bound: {
                const double viol = std::abs(v) - p.bound;
                if (viol > 0.0) {
                    const double s = v >= 0.0 ? 1.0 : -1.0;
                    g.head(d) += 2.0 * rho_ * viol * s * p.cov_u.head(d);
                    if (fit_bias_) g[d] += 2.0 * rho_ * viol * s * p.cov_u[d];
                }
                break;
            }
        }
    }
    if (!fit_bias_) g[d] = 0.0;
    return g;
}

std::vector<FeasibilityReport> PenalizedObjective::reports(const Vector& theta) const {
    std::vector<FeasibilityReport> out;
    out.reserve(penalties_.size());
    for (const Penalty& p : penalties_) {
        FeasibilityReport rep;
        rep.kind = p.kind;
        const double v = constraint_value(p, theta);
        switch (p.kind) {
            case ConstraintKind::agreement_bound:
                rep.achieved = v;
                rep.bound = p.gamma;
                rep.residual = std::max(0.0, v - p.gamma);
                break;
            case ConstraintKind::flip_point:
                rep.achieved = v * p.flip_sign;   // signed distance at the target
                rep.bound = -p.margin * p.flip_sign;  // required side of the boundary
                rep.residual = std::max(0.0, v + p.margin);
                break;
            case ConstraintKind::covariance_bound:
                rep.achieved = std::abs(v);
                rep.bound = p.bound;
                rep.residual = std::max(0.0, std::abs(v) - p.bound);
                break;
        }
        rep.feasible = rep.residual <= p.tol;
        out.push_back(rep);
    }
    return out;
}

double logistic_loss(const LinearModel& model, const Dataset& data, IndexSpan subset,
                     double lambda) {
    require(model.weights.size() == data.dim(), "logistic_loss: dimension mismatch");
    PenalizedObjective obj(data, subset, lambda, true);
    return obj.base_value(pack(model));
}

Vector gradient(const LinearModel& model, const Dataset& data, IndexSpan subset,
                double lambda) {
    require(model.weights.size() == data.dim(), "gradient: dimension mismatch");
    PenalizedObjective obj(data, subset, lambda, true);
    return obj.grad(pack(model));
}

TrainResult train_unconstrained(const Dataset& data, IndexSpan subset,
                                const TrainConfig& config) {
    config.validate();
    PenalizedObjective obj(data, subset, config.lambda, config.fit_bias);
    InnerResult inner = minimize(obj, Vector::Zero(data.dim() + 1), config);
    TrainResult res;
    res.model = unpack(inner.theta);
    if (!config.fit_bias) res.model.bias = 0.0;
    res.grad_norm = inner.grad_norm;
    res.iterations = inner.iterations;
    res.converged = inner.converged;
    res.final_loss = inner.value;
    return res;
}

ConstrainedResult train_constrained(const Dataset& data, IndexSpan subset,
                                    const TrainConfig& config,
                                    const std::vector<ConstraintSpec>& constraints,
                                    const std::optional<LinearModel>& warm_start) {
    config.validate();
    require(!constraints.empty(), "train_constrained: no constraints given");
    PenalizedObjective obj(data, subset, config.lambda, config.fit_bias);
    for (const ConstraintSpec& spec : constraints) obj.add_constraint(spec, data, subset);

    Vector theta = Vector::Zero(data.dim() + 1);
    if (warm_start) {
        require(warm_start->weights.size() == data.dim(),
                "train_constrained: warm start dimension mismatch");
        theta = pack(*warm_start);
    } else {
        for (const ConstraintSpec& spec : constraints) {
            if (spec.reference && std::holds_alternative<LinearModel>(*spec.reference)) {
                theta = pack(std::get<LinearModel>(*spec.reference));
                break;
            }
        }
    }

    // All constraints share one outer loop; the schedule comes from the first.
    const PenaltySchedule& schedule = constraints.front().schedule;
    double rho = schedule.initial_multiplier;
    ConstrainedResult res;
    bool converged = false;
    for (int outer = 0; outer < schedule.max_outer; ++outer) {
        obj.set_multiplier(rho);
        InnerResult inner = minimize(obj, theta, config);
        theta = inner.theta;
        converged = inner.converged;
        res.outer_iterations = outer + 1;

        const auto reports = obj.reports(theta);
        double worst = 0.0;
        for (const auto& rep : reports) worst = std::max(worst, rep.residual);
        res.outer_max_violation.push_back(worst);
        res.reports = reports;
        res.feasible = std::all_of(reports.begin(), reports.end(),
                                   [](const FeasibilityReport& r) { return r.feasible; });
        if (res.feasible) break;
        rho *= schedule.growth;
    }
    res.model = unpack(theta);
    if (!config.fit_bias) res.model.bias = 0.0;
    res.converged = converged;
    res.final_loss = obj.base_value(theta);
    return res;
}

}  // namespace ambifair

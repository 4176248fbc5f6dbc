#pragma once

#include "trimlasso/model.hpp"

#include <vector>

namespace trimlasso {

struct AltMinConfig {
    std::size_t max_iter = 1000;
    double objective_tol = 1e-10;
    Vector start;  // empty means zero
    double inner_tol = 1e-10;
    std::size_t inner_max_iter = 10000;
};

struct AdmmConfig {
    double sigma = 1.0;
    double dual_scale = 0.9;  // tau in q += tau sigma (beta - gamma)
    std::size_t max_outer = 10000;
    std::size_t max_inner = 2000;
    double primal_tol = 1e-9;
    double dual_tol = 1e-9;
    Vector start;
    double inner_tol = 1e-10;
    bool record_residuals = false;
};

struct EnvelopeConfig {
    std::size_t max_iter = 200000;
    double step_scale = 0.0;  // c in c / sqrt(t); 0 picks 1 / ||X'X||_2
    Vector start;
};

/// X'(X beta - y).
Vector smooth_gradient(const ProblemInstance& inst, const Vector& beta);

/**
 * Extreme point of {g : ||g||_inf <= lambda, ||g||_1 <= lambda k} maximizing
 * <g, beta>. With ties at the k-th magnitude, the choice steps outside the
 * subdifferential of the convex part whenever beta is not locally optimal.
 */
Vector select_gamma(const Vector& beta, double lambda, Index k, const Vector& grad, double eta);

struct LocalOptimalityReport {
    bool locally_optimal = true;
    std::vector<Index> violations;  // coordinates where the containment fails
    double max_violation = 0.0;     // largest excess over the slack
};

/// Subdifferential containment test for f = f1 - f2 with
/// f1 = 1/2||y - X b||^2 + (eta + lambda)||b||_1 and f2 = lambda * (top-k sum).
LocalOptimalityReport check_local_optimality(const ProblemInstance& inst, const TrimmedParams& params,
                                             const Vector& beta, double slack = 1e-6);

/// Alternating minimization on the difference-of-convex split.
Solution alt_min_solve(const ProblemInstance& inst, const TrimmedParams& params, const AltMinConfig& cfg = {});

/// ADMM on the beta = gamma splitting. Returns the best of the beta and gamma
/// iterates under the trimmed objective.
Solution admm_solve(const ProblemInstance& inst, const TrimmedParams& params, const AdmmConfig& cfg = {});

/// 1/2||y - X b||^2 + eta ||b||_1 + lambda (||b||_1 - k)_+.
double envelope_objective(const ProblemInstance& inst, const TrimmedParams& params, const Vector& beta);

/// Subgradient descent on envelope_objective with best-iterate tracking.
/// Solution::objective is the trimmed objective of the returned point and
/// relaxed_objective its envelope objective.
Solution envelope_solve(const ProblemInstance& inst, const TrimmedParams& params, const EnvelopeConfig& cfg = {});

}  // namespace trimlasso

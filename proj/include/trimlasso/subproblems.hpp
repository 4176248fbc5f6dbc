#pragma once

#include "trimlasso/model.hpp"

#include <optional>

namespace trimlasso {

inline double soft_threshold(double x, double t)
{
    if (x > t) return x - t;
    if (x < -t) return x + t;
    return 0.0;
}

/// Adds sigma/2 ||beta - center||^2 to a weighted Lasso.
struct RidgeCenter {
    Vector center;
    double sigma = 1.0;
};

/**
 * min_b 1/2||y - X b||^2 + sum_i w_i |b_i| - <c, b>  [+ sigma/2 ||b - center||^2]
 *
 * The instance is borrowed and must outlive the problem.
 */
struct WeightedLassoProblem {
    const ProblemInstance& inst;
    Vector weights;
    Vector tilt;
    std::optional<RidgeCenter> ridge;

    void validate() const;
    double objective(const Vector& beta) const;
};

struct LassoOptions {
    double tol = 1e-8;          // KKT residual, max over coordinates
    std::size_t max_iter = 10000;  // sweeps
    bool record_trace = false;  // objective after each sweep
    Vector start;               // empty means zero
};

/// Cyclic coordinate descent on the Gram form. Solution::objective is the
/// weighted Lasso objective and kkt_residual the final max coordinate violation.
Solution solve_weighted_lasso(const WeightedLassoProblem& prob, const LassoOptions& opts = {});

/// Max over coordinates of the subgradient violation of prob at beta.
double weighted_lasso_kkt(const WeightedLassoProblem& prob, const Vector& beta);

/// argmin_g t T_k(g) + 1/2||g - alpha||^2: the k largest |alpha_i| are kept,
/// the rest soft-thresholded at t. Ties go to the lower index.
Vector trimmed_prox(const Vector& alpha, Index k, double t);

/// (I - X (X'X + lambda I)^-1 X')^(1/2), symmetric PSD, n x n.
Matrix ridge_residual_operator(const Matrix& X, double lambda);

}  // namespace trimlasso

#pragma once

#include "trimlasso/model.hpp"

#include <array>
#include <cstdint>
#include <functional>
#include <limits>
#include <optional>
#include <vector>

namespace trimlasso {

struct ExactOptions {
    std::uint64_t budget = 1000000;  // max subsets per enumeration
    double tol = 1e-10;              // inner KKT tolerance
    std::size_t max_iter = 100000;   // inner sweeps
};

/// C(n, k), saturating at UINT64_MAX.
std::uint64_t binomial(Index n, Index k);

/// Calls visit(S) for each k-subset of {0..p-1} in lexicographic order.
void for_each_subset(Index p, Index k, const std::function<void(const std::vector<Index>&)>& visit);

/// Global minimizer of the trimmed objective by enumerating which k
/// coordinates go unpenalized. The first minimal subset in lexicographic order
/// wins ties. Throws BudgetExceeded when C(p, k) > opts.budget.
Solution exact_solve(const ProblemInstance& inst, const TrimmedParams& params, const ExactOptions& opts = {});

struct ZSequence {
    double lambda = 0.0;
    double eta = 0.0;
    std::vector<double> values;   // z_0 .. z_p
    std::vector<Vector> argmins;  // optimal beta for each k
};

ZSequence z_sequence(const ProblemInstance& inst, double lambda, double eta, const ExactOptions& opts = {});

enum class Verdict { Equivalent, NotEquivalent, Indeterminate };

std::string to_string(Verdict v);

struct ClEquivalenceResult {
    Verdict verdict = Verdict::Indeterminate;
    bool equivalent = false;
    Index ell_e = 0;
    double mu_lower = 0.0;                                       // open interval, valid when equivalent
    double mu_upper = std::numeric_limits<double>::infinity();  // +inf when no i < ell_e exists
    std::optional<std::array<Index, 3>> worst_triple;            // (i, ell_e, j) with the smallest margin
    double worst_margin = std::numeric_limits<double>::infinity();
};

/// Strict discrete convexity of z at ell_e = min(ell, nnz) over all
/// i < ell_e < j. Margins within slack of zero give Indeterminate.
ClEquivalenceResult clipped_equivalence_check(const std::vector<double>& z, Index ell, Index nnz,
                                              double slack = 1e-7);
ClEquivalenceResult clipped_equivalence_check(const ZSequence& zseq, Index ell, const Vector& beta_star,
                                              double slack = 1e-7);

/// 1/2||y - X b||^2 + eta ||b||_1 + mu sum_i min(gamma |b_i|, 1).
double clipped_objective(const ProblemInstance& inst, double mu, double gamma, const Vector& beta, double eta = 0.0);

/// Minimizes clipped_objective through the trimmed problems at lambda = mu gamma.
/// Solution::objective is the clipped objective.
Solution clipped_lasso_exact(const ProblemInstance& inst, double mu, double gamma, const ExactOptions& opts = {},
                             double eta = 0.0);

/// objective(beta) == (||y||^2 - ||X beta||^2) / 2 up to rel_tol * ||y||^2 / 2.
bool verify_scaling_identity(const ProblemInstance& inst, const TrimmedParams& params, const Vector& beta,
                             double rel_tol = 1e-8);

struct SplitResult {
    Vector phi;  // at most k nonzeros
    Vector eps;  // disjoint from phi's support
    double objective = 0.0;
    std::uint64_t subsets_enumerated = 0;
};

/// min 1/2||y - X(phi + eps)||^2 + lambda ||eps||_1 over ||phi||_0 <= k.
SplitResult split_decomposition(const ProblemInstance& inst, double lambda, Index k, const ExactOptions& opts = {});

/// min 1/2||y - X b||^2 + lambda sum_{i > k} b_(i)^2 / 2.
Solution trimmed_ridge_exact(const ProblemInstance& inst, double lambda, Index k, const ExactOptions& opts = {});

/// min 1/2||y - X b||^2 + eta ||b||_1 subject to ||b||_0 <= k.
Solution best_subset_exact(const ProblemInstance& inst, Index k, double eta = 0.0, const ExactOptions& opts = {});

}  // namespace trimlasso

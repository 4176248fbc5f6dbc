#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <limits>
#include <optional>
#include <random>
#include <stdexcept>
#include <string>
#include <vector>

namespace trimlasso {

using Vector = Eigen::VectorXd;
using Matrix = Eigen::MatrixXd;
using Index = Eigen::Index;

/// Raised when vector/matrix shapes or scalar parameters are inconsistent.
class InvalidArgument : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// A solve that cannot produce an answer (unbounded subproblem, exhausted budget).
class SolverError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Enumeration would need more subsets than the caller allowed.
class BudgetExceeded : public SolverError {
public:
    BudgetExceeded(std::uint64_t required, std::uint64_t budget)
        : SolverError("enumeration needs " + std::to_string(required) + " subsets, budget is " +
                      std::to_string(budget)),
          required_(required), budget_(budget)
    {
    }
    std::uint64_t required() const { return required_; }
    std::uint64_t budget() const { return budget_; }

private:
    std::uint64_t required_;
    std::uint64_t budget_;
};

/**
 * Regression data (y, X) with n observations and p features.
 *
 * Immutable after construction. The Gram matrix X'X and X'y are cached
 * because every coordinate-descent solver in the library works on them.
 */
class ProblemInstance {
public:
    ProblemInstance(Vector y, Matrix X);

    const Vector& y() const { return y_; }
    const Matrix& X() const { return X_; }
    const Matrix& gram() const { return gram_; }
    const Vector& xty() const { return xty_; }
    double y_squared_norm() const { return yy_; }
    Index n() const { return X_.rows(); }
    Index p() const { return X_.cols(); }

private:
    Vector y_;
    Matrix X_;
    Matrix gram_;
    Vector xty_;
    double yy_;
};

/// (lambda, eta, k) of  1/2||y - X b||^2 + lambda T_k(b) + eta ||b||_1.
struct TrimmedParams {
    double lambda = 0.0;
    double eta = 0.0;
    Index k = 0;

    /// Throws InvalidArgument unless lambda, eta >= 0 and 0 <= k <= p.
    void validate(Index p) const;
};

enum class SolveStatus { Converged, IterationLimit, Exact };

std::string to_string(SolveStatus s);

struct Solution {
    Vector beta;
    double objective = 0.0;
    SolveStatus status = SolveStatus::Converged;
    std::size_t iterations = 0;
    std::vector<double> trace;

    // Solver specific extras.
    double kkt_residual = 0.0;
    std::optional<std::size_t> subsets_enumerated;
    std::optional<double> relaxed_objective;
    std::vector<double> primal_residuals;
    std::vector<double> dual_residuals;
};

/// Magnitudes sorted nonincreasing; permutation[i] is the original index of
/// the i-th largest magnitude. Ties go to the smaller original index.
struct SortedMagnitudes {
    Vector values;
    std::vector<Index> permutation;
};

template <typename Derived>
SortedMagnitudes sorted_abs(const Eigen::MatrixBase<Derived>& beta);

double least_squares_loss(const ProblemInstance& inst, const Vector& beta);

/// 1/2||y - X b||^2 + lambda T_k(b) + eta ||b||_1.
double objective(const ProblemInstance& inst, const TrimmedParams& params, const Vector& beta);

/// ||y||_2 * max_j ||x_j||_2 over the rows x_j of X.
double lambda_bar(const ProblemInstance& inst);

/// Entries with magnitude <= threshold set to zero.
Vector snap_zeros(const Vector& beta, double threshold = 1e-8);
Index count_nonzeros(const Vector& beta, double threshold = 1e-8);

// ---------------------------------------------------------------------------
// Synthetic instances.

/**
 * Portable Gaussian source: std::mt19937_64 (its output sequence is fixed by
 * the standard) feeding the Box-Muller transform on 53-bit uniforms.
 * Identical seeds give bit-identical streams on any IEEE-754 platform with
 * the same libm.
 */
class GaussianSource {
public:
    explicit GaussianSource(std::uint64_t seed) : engine_(seed) {}
    double uniform();  // in (0, 1)
    double normal();
    std::uint64_t bits() { return engine_(); }

private:
    std::mt19937_64 engine_;
    bool has_spare_ = false;
    double spare_ = 0.0;
};

struct InstanceSpec {
    std::uint64_t seed = 1;
    Index n = 100;
    Index p = 20;
    double snr = 10.0;  // +infinity gives a noiseless response
    double corr = 0.8;
    Vector beta_true;   // empty means: ten ones followed by zeros
};

Vector default_beta_true(Index p);

/// Rows of X ~ N(0, Sigma), Sigma_ij = corr^|i-j|; y = X beta_true + eps with
/// Var(eps_i) = beta_true' Sigma beta_true / snr.
ProblemInstance generate_instance(const InstanceSpec& spec);

Matrix toeplitz_covariance(Index p, double corr);

}  // namespace trimlasso

#include "trimlasso/detail/sorted_abs.ipp"

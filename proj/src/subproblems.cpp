#include "trimlasso/subproblems.hpp"

#include <cmath>

namespace trimlasso {

void WeightedLassoProblem::validate() const
{
    const Index p = inst.p();
    if (weights.size() != p) throw InvalidArgument("weighted Lasso: weights must have length p");
    if (tilt.size() != p) throw InvalidArgument("weighted Lasso: tilt must have length p");
    if ((weights.array() < 0.0).any() || !weights.allFinite()) {
        throw InvalidArgument("weighted Lasso: weights must be finite and nonnegative");
    }
    if (!tilt.allFinite()) throw InvalidArgument("weighted Lasso: tilt must be finite");
    if (ridge) {
        if (!(ridge->sigma > 0.0)) throw InvalidArgument("weighted Lasso: sigma must be positive");
        if (ridge->center.size() != p) throw InvalidArgument("weighted Lasso: ridge center must have length p");
    }
}

double WeightedLassoProblem::objective(const Vector& beta) const
{
    double f = 0.5 * (inst.y() - inst.X() * beta).squaredNorm();
    f += weights.dot(beta.cwiseAbs()) - tilt.dot(beta);
    if (ridge) f += 0.5 * ridge->sigma * (beta - ridge->center).squaredNorm();
    return f;
}

namespace {

// g = X'X b - X'y - c + sigma (b - center), the gradient of the smooth part.
double kkt_from_gradient(const Vector& g, const Vector& beta, const Vector& w)
{
    double worst = 0.0;
    for (Index j = 0; j < beta.size(); ++j) {
        const double v = beta(j) != 0.0 ? std::abs(g(j) + w(j) * (beta(j) > 0.0 ? 1.0 : -1.0))
                                         : std::max(0.0, std::abs(g(j)) - w(j));
        worst = std::max(worst, v);
    }
    return worst;
}

Vector smooth_gradient(const WeightedLassoProblem& prob, const Vector& beta, const Vector& gram_beta)
{
    Vector g = gram_beta - prob.inst.xty() - prob.tilt;
    if (prob.ridge) g += prob.ridge->sigma * (beta - prob.ridge->center);
    return g;
}

std::vector<signed char> sign_pattern(const Vector& beta)
{
    std::vector<signed char> out(static_cast<std::size_t>(beta.size()));
    for (Index j = 0; j < beta.size(); ++j) out[static_cast<std::size_t>(j)] = beta(j) > 0.0 ? 1 : (beta(j) < 0.0 ? -1 : 0);
    return out;
}

// Minimizer of the smooth problem with beta_j fixed to zero off the support
// and sgn(beta_j) fixed on it. Empty when the system is singular or a sign
// flips, since the point would then leave the face.
std::optional<Vector> solve_on_face(const WeightedLassoProblem& prob, const std::vector<signed char>& pattern)
{
    std::vector<Index> support;
    for (std::size_t j = 0; j < pattern.size(); ++j) {
        if (pattern[j] != 0) support.push_back(static_cast<Index>(j));
    }
    const Index p = prob.inst.p();
    if (support.empty()) return std::nullopt;
    const auto m = static_cast<Index>(support.size());
    const double sigma = prob.ridge ? prob.ridge->sigma : 0.0;
    Matrix A(m, m);
    Vector rhs(m);
    for (Index a = 0; a < m; ++a) {
        const Index j = support[static_cast<std::size_t>(a)];
        for (Index b = 0; b < m; ++b) A(a, b) = prob.inst.gram()(j, support[static_cast<std::size_t>(b)]);
        A(a, a) += sigma;
        rhs(a) = prob.inst.xty()(j) + prob.tilt(j) - prob.weights(j) * pattern[static_cast<std::size_t>(j)];
        if (prob.ridge) rhs(a) += sigma * prob.ridge->center(j);
    }
    const Eigen::LLT<Matrix> llt(A);
    if (llt.info() != Eigen::Success) return std::nullopt;
    const Vector x = llt.solve(rhs);
    if (!x.allFinite() || (A * x - rhs).norm() > 1e-9 * (1.0 + rhs.norm())) return std::nullopt;
    Vector out = Vector::Zero(p);
    for (Index a = 0; a < m; ++a) {
        const Index j = support[static_cast<std::size_t>(a)];
        if (x(a) * pattern[static_cast<std::size_t>(j)] <= 0.0) return std::nullopt;
        out(j) = x(a);
    }
    return out;
}

}  // namespace

double weighted_lasso_kkt(const WeightedLassoProblem& prob, const Vector& beta)
{
    prob.validate();
    return kkt_from_gradient(smooth_gradient(prob, beta, prob.inst.gram() * beta), beta, prob.weights);
}

Solution solve_weighted_lasso(const WeightedLassoProblem& prob, const LassoOptions& opts)
{
    prob.validate();
    if (!(opts.tol > 0.0)) throw InvalidArgument("weighted Lasso: tol must be positive");
    const Index p = prob.inst.p();
    const Matrix& G = prob.inst.gram();
    const Vector& xty = prob.inst.xty();
    const double sigma = prob.ridge ? prob.ridge->sigma : 0.0;

    Vector beta = opts.start.size() == 0 ? Vector::Zero(p) : opts.start;
    if (beta.size() != p) throw InvalidArgument("weighted Lasso: start must have length p");
    Vector gram_beta = G * beta;

    Solution sol;
    sol.status = SolveStatus::IterationLimit;
    double kkt = kkt_from_gradient(smooth_gradient(prob, beta, gram_beta), beta, prob.weights);
    std::size_t sweep = 0;
    std::vector<signed char> pattern = sign_pattern(beta);
    while (kkt > opts.tol && sweep < opts.max_iter) {
        for (Index j = 0; j < p; ++j) {
            const double a = G(j, j) + sigma;
            double b = xty(j) - gram_beta(j) + G(j, j) * beta(j) + prob.tilt(j);
            if (prob.ridge) b += sigma * prob.ridge->center(j);
            double next;
            if (a > 0.0) {
                next = soft_threshold(b, prob.weights(j)) / a;
            } else if (std::abs(b) <= prob.weights(j)) {
                next = 0.0;
            } else {
                throw SolverError("weighted Lasso is unbounded along zero column " + std::to_string(j));
            }
            const double delta = next - beta(j);
            if (delta != 0.0) {
                gram_beta += G.col(j) * delta;
                beta(j) = next;
            }
        }
        ++sweep;
        if (opts.record_trace) sol.trace.push_back(prob.objective(beta));
        gram_beta.noalias() = G * beta;
        kkt = kkt_from_gradient(smooth_gradient(prob, beta, gram_beta), beta, prob.weights);

        // Once the sign pattern settles, jump to the minimizer on its face.
        std::vector<signed char> next_pattern = sign_pattern(beta);
        if (kkt > opts.tol && next_pattern == pattern) {
            if (auto polished = solve_on_face(prob, next_pattern)) {
                beta = std::move(*polished);
                gram_beta.noalias() = G * beta;
                kkt = kkt_from_gradient(smooth_gradient(prob, beta, gram_beta), beta, prob.weights);
                if (opts.record_trace) sol.trace.back() = prob.objective(beta);
            }
        }
        pattern = std::move(next_pattern);
    }
    if (kkt <= opts.tol) sol.status = SolveStatus::Converged;
    sol.iterations = sweep;
    sol.kkt_residual = kkt;
    sol.objective = prob.objective(beta);
    sol.beta = std::move(beta);
    return sol;
}

Vector trimmed_prox(const Vector& alpha, Index k, double t)
{
    const Index p = alpha.size();
    if (k < 0 || k > p) throw InvalidArgument("trimmed_prox: k out of range");
    if (!(t >= 0.0)) throw InvalidArgument("trimmed_prox: t must be nonnegative");
    const SortedMagnitudes s = sorted_abs(alpha);
    Vector out(p);
    for (Index pos = 0; pos < p; ++pos) {
        const Index i = s.permutation[static_cast<std::size_t>(pos)];
        out(i) = pos < k ? alpha(i) : soft_threshold(alpha(i), t);
    }
    return out;
}

Matrix ridge_residual_operator(const Matrix& X, double lambda)
{
    if (!(lambda > 0.0)) throw InvalidArgument("ridge_residual_operator: lambda must be positive");
    const Index n = X.rows();
    const Index p = X.cols();
    const Matrix inner = X.transpose() * X + lambda * Matrix::Identity(p, p);
    Matrix M = Matrix::Identity(n, n) - X * inner.ldlt().solve(X.transpose());
    M = 0.5 * (M + M.transpose());
    const Eigen::SelfAdjointEigenSolver<Matrix> eig(M);
    const Vector root = eig.eigenvalues().cwiseMax(0.0).cwiseSqrt();
    return eig.eigenvectors() * root.asDiagonal() * eig.eigenvectors().transpose();
}

}  // namespace trimlasso

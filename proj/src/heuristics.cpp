#include "trimlasso/heuristics.hpp"

#include "trimlasso/penalties.hpp"
#include "trimlasso/subproblems.hpp"

#include <algorithm>
#include <cmath>

namespace trimlasso {

namespace {

double sgn(double v)
{
    return v > 0.0 ? 1.0 : (v < 0.0 ? -1.0 : 0.0);
}

struct Interval {
    double lo;
    double hi;
};

}  // namespace

Vector smooth_gradient(const ProblemInstance& inst, const Vector& beta)
{
    return inst.gram() * beta - inst.xty();
}

Vector select_gamma(const Vector& beta, double lambda, Index k, const Vector& grad, double eta)
{
    const Index p = beta.size();
    if (grad.size() != p) throw InvalidArgument("select_gamma: grad must have length p");
    if (k < 0 || k > p) throw InvalidArgument("select_gamma: k out of range");
    Vector gamma = Vector::Zero(p);
    if (k == 0 || lambda == 0.0) return gamma;

    const SortedMagnitudes s = sorted_abs(beta);
    const double m = s.values(k - 1);

    if (m > 0.0) {
        std::vector<Index> ties;
        Index above = 0;
        for (Index i = 0; i < p; ++i) {
            const double a = std::abs(beta(i));
            if (a > m) {
                gamma(i) = lambda * sgn(beta(i));
                ++above;
            } else if (a == m) {
                ties.push_back(i);
            }
        }
        const auto slots = static_cast<std::size_t>(k - above);
        if (slots == ties.size()) {
            for (Index i : ties) gamma(i) = lambda * sgn(beta(i));
            return gamma;
        }
        // Pick the endpoint of sgn * [0, lambda] farthest from the singleton
        // subgradient of the convex part at the first tied coordinate.
        const Index j = ties.front();
        const double sj = (grad(j) + (eta + lambda) * sgn(beta(j))) * sgn(beta(j));
        const bool include_j = std::abs(lambda - sj) > std::abs(sj);
        std::size_t used = 0;
        if (include_j) {
            gamma(j) = lambda * sgn(beta(j));
            ++used;
        }
        for (std::size_t t = 1; t < ties.size() && used < slots; ++t) {
            gamma(ties[t]) = lambda * sgn(beta(ties[t]));
            ++used;
        }
        return gamma;
    }

    // Fewer than k nonzeros: every nonzero is in the top-k set and the
    // remaining slots go to zero coordinates, violators first.
    std::vector<Index> zeros;
    Index nonzero = 0;
    for (Index i = 0; i < p; ++i) {
        if (beta(i) != 0.0) {
            gamma(i) = lambda * sgn(beta(i));
            ++nonzero;
        } else {
            zeros.push_back(i);
        }
    }
    std::stable_sort(zeros.begin(), zeros.end(), [&](Index a, Index b) {
        const bool va = std::abs(grad(a)) > eta;
        const bool vb = std::abs(grad(b)) > eta;
        if (va != vb) return va;
        if (va) return std::abs(grad(a)) > std::abs(grad(b));
        return false;
    });
    const Index slots = k - nonzero;
    for (Index t = 0; t < slots; ++t) {
        const Index i = zeros[static_cast<std::size_t>(t)];
        gamma(i) = grad(i) > 0.0 ? -lambda : lambda;
    }
    return gamma;
}

LocalOptimalityReport check_local_optimality(const ProblemInstance& inst, const TrimmedParams& params,
                                             const Vector& beta, double slack)
{
    params.validate(inst.p());
    if (beta.size() != inst.p()) throw InvalidArgument("check_local_optimality: beta must have length p");
    const Index p = inst.p();
    const double lam = params.lambda;
    const double w = params.eta + lam;
    const Vector grad = smooth_gradient(inst, beta);

    std::vector<Interval> p2(static_cast<std::size_t>(p), Interval{0.0, 0.0});
    if (params.k > 0 && lam > 0.0) {
        const SortedMagnitudes s = sorted_abs(beta);
        const double m = s.values(params.k - 1);
        if (m > 0.0) {
            Index above = 0;
            Index tied = 0;
            for (Index i = 0; i < p; ++i) {
                const double a = std::abs(beta(i));
                if (a > m) ++above;
                else if (a == m) ++tied;
            }
            const bool all_tied_in = params.k - above == tied;
            for (Index i = 0; i < p; ++i) {
                const double a = std::abs(beta(i));
                const double v = lam * sgn(beta(i));
                if (a > m || (a == m && all_tied_in)) p2[static_cast<std::size_t>(i)] = {v, v};
                else if (a == m) p2[static_cast<std::size_t>(i)] = {std::min(0.0, v), std::max(0.0, v)};
            }
        } else {
            for (Index i = 0; i < p; ++i) {
                const double v = lam * sgn(beta(i));
                p2[static_cast<std::size_t>(i)] = beta(i) != 0.0 ? Interval{v, v} : Interval{-lam, lam};
            }
        }
    }

    LocalOptimalityReport report;
    for (Index i = 0; i < p; ++i) {
        const Interval p1 = beta(i) != 0.0 ? Interval{grad(i) + w * sgn(beta(i)), grad(i) + w * sgn(beta(i))}
                                           : Interval{grad(i) - w, grad(i) + w};
        const Interval& q = p2[static_cast<std::size_t>(i)];
        const double excess = std::max(p1.lo - q.lo, q.hi - p1.hi) - slack;
        if (excess > 0.0) {
            report.locally_optimal = false;
            report.violations.push_back(i);
            report.max_violation = std::max(report.max_violation, excess);
        }
    }
    return report;
}

Solution alt_min_solve(const ProblemInstance& inst, const TrimmedParams& params, const AltMinConfig& cfg)
{
    params.validate(inst.p());
    if (cfg.max_iter < 1) throw InvalidArgument("alt_min: max_iter must be at least 1");
    const Index p = inst.p();
    Vector beta = cfg.start.size() == 0 ? Vector::Zero(p) : cfg.start;
    if (beta.size() != p) throw InvalidArgument("alt_min: start must have length p");

    Solution sol;
    double f = objective(inst, params, beta);
    sol.trace.push_back(f);
    sol.status = SolveStatus::IterationLimit;

    LassoOptions inner;
    inner.tol = cfg.inner_tol;
    inner.max_iter = cfg.inner_max_iter;
    const Vector weights = Vector::Constant(p, params.eta + params.lambda);

    Vector prev_gamma;
    double last_delta = std::numeric_limits<double>::infinity();
    int small_steps = 0;
    std::size_t it = 0;
    while (true) {
        const Vector gamma = select_gamma(beta, params.lambda, params.k, smooth_gradient(inst, beta), params.eta);
        if (last_delta <= cfg.objective_tol) {
            ++small_steps;
            if (gamma == prev_gamma || small_steps >= 3) {
                sol.status = SolveStatus::Converged;
                break;
            }
        } else {
            small_steps = 0;
        }
        if (it == cfg.max_iter) break;

        inner.start = beta;
        const Solution step = solve_weighted_lasso(WeightedLassoProblem{inst, weights, gamma, std::nullopt}, inner);
        const double next = objective(inst, params, step.beta);
        last_delta = std::abs(f - next);
        beta = step.beta;
        f = next;
        sol.trace.push_back(f);
        prev_gamma = gamma;
        ++it;
    }
    sol.iterations = it;
    sol.objective = f;
    sol.kkt_residual = check_local_optimality(inst, params, beta, 0.0).max_violation;
    sol.beta = std::move(beta);
    return sol;
}

Solution admm_solve(const ProblemInstance& inst, const TrimmedParams& params, const AdmmConfig& cfg)
{
    params.validate(inst.p());
    if (!(cfg.sigma > 0.0)) throw InvalidArgument("admm: sigma must be positive");
    if (!(cfg.dual_scale > 0.0 && cfg.dual_scale <= 1.0)) throw InvalidArgument("admm: dual_scale must lie in (0, 1]");
    const Index p = inst.p();
    Vector beta = cfg.start.size() == 0 ? Vector::Zero(p) : cfg.start;
    if (beta.size() != p) throw InvalidArgument("admm: start must have length p");
    Vector gamma = beta;
    Vector q = Vector::Zero(p);

    Solution sol;
    sol.status = SolveStatus::IterationLimit;
    Vector best = beta;
    double best_f = objective(inst, params, beta);
    sol.trace.push_back(best_f);

    LassoOptions inner;
    inner.tol = cfg.inner_tol;
    inner.max_iter = cfg.max_inner;
    const Vector weights = Vector::Constant(p, params.eta);

    std::size_t it = 0;
    while (it < cfg.max_outer) {
        inner.start = beta;
        WeightedLassoProblem sub{inst, weights, -q, RidgeCenter{gamma, cfg.sigma}};
        beta = solve_weighted_lasso(sub, inner).beta;

        const Vector gamma_prev = gamma;
        gamma = trimmed_prox(beta + q / cfg.sigma, params.k, params.lambda / cfg.sigma);
        q += cfg.dual_scale * cfg.sigma * (beta - gamma);
        ++it;

        const double fb = objective(inst, params, beta);
        const double fg = objective(inst, params, gamma);
        if (fb < best_f) {
            best_f = fb;
            best = beta;
        }
        if (fg < best_f) {
            best_f = fg;
            best = gamma;
        }
        sol.trace.push_back(std::min(fb, fg));

        const double primal = (beta - gamma).norm();
        const double dual = cfg.sigma * (gamma - gamma_prev).norm();
        if (cfg.record_residuals) {
            sol.primal_residuals.push_back(primal);
            sol.dual_residuals.push_back(dual);
        }
        if (primal <= cfg.primal_tol && dual <= cfg.dual_tol) {
            sol.status = SolveStatus::Converged;
            break;
        }
    }
    sol.iterations = it;
    sol.objective = best_f;
    sol.beta = std::move(best);
    return sol;
}

double envelope_objective(const ProblemInstance& inst, const TrimmedParams& params, const Vector& beta)
{
    params.validate(inst.p());
    const double l1 = beta.lpNorm<1>();
    return least_squares_loss(inst, beta) + params.eta * l1 +
           params.lambda * std::max(0.0, l1 - static_cast<double>(params.k));
}

Solution envelope_solve(const ProblemInstance& inst, const TrimmedParams& params, const EnvelopeConfig& cfg)
{
    params.validate(inst.p());
    const Index p = inst.p();
    const Matrix& G = inst.gram();
    const Vector& xty = inst.xty();
    const double half_yy = 0.5 * inst.y_squared_norm();
    const double kd = static_cast<double>(params.k);

    double c = cfg.step_scale;
    if (c < 0.0) throw InvalidArgument("envelope: step_scale must be nonnegative");
    if (c == 0.0) {
        const double top = Eigen::SelfAdjointEigenSolver<Matrix>(G, Eigen::EigenvaluesOnly).eigenvalues().maxCoeff();
        c = top > 0.0 ? 1.0 / top : 1.0;
    }

    Vector beta = cfg.start.size() == 0 ? Vector::Zero(p) : cfg.start;
    if (beta.size() != p) throw InvalidArgument("envelope: start must have length p");

    Solution sol;
    sol.status = SolveStatus::IterationLimit;
    Vector gram_beta = G * beta;
    const auto relaxed = [&](const Vector& b, const Vector& gb) {
        const double l1 = b.lpNorm<1>();
        return half_yy - b.dot(xty) + 0.5 * b.dot(gb) + params.eta * l1 + params.lambda * std::max(0.0, l1 - kd);
    };
    Vector best = beta;
    double best_f = relaxed(beta, gram_beta);

    std::size_t t = 0;
    while (t < cfg.max_iter) {
        const double l1 = beta.lpNorm<1>();
        const double shrink = params.eta + (l1 > kd ? params.lambda : 0.0);
        Vector g = gram_beta - xty;
        for (Index i = 0; i < p; ++i) g(i) += shrink * sgn(beta(i));
        ++t;
        if (g.isZero(0.0)) {
            sol.status = SolveStatus::Converged;
            break;
        }
        beta -= (c / std::sqrt(static_cast<double>(t))) * g;
        gram_beta.noalias() = G * beta;
        const double f = relaxed(beta, gram_beta);
        if (f < best_f) {
            best_f = f;
            best = beta;
        }
    }
    sol.iterations = t;
    sol.relaxed_objective = envelope_objective(inst, params, best);
    sol.objective = objective(inst, params, best);
    sol.beta = std::move(best);
    return sol;
}

}  // namespace trimlasso

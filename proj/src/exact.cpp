#include "trimlasso/exact.hpp"

#include "trimlasso/penalties.hpp"
#include "trimlasso/subproblems.hpp"

#include <cmath>
#include <numeric>

namespace trimlasso {

std::uint64_t binomial(Index n, Index k)
{
    if (k < 0 || k > n) return 0;
    k = std::min(k, n - k);
    std::uint64_t c = 1;
    for (Index i = 0; i < k; ++i) {
        // c * (n - i) is divisible by (i + 1) after the multiplication.
        const auto num = static_cast<std::uint64_t>(n - i);
        std::uint64_t prod;
        if (__builtin_mul_overflow(c, num, &prod)) return std::numeric_limits<std::uint64_t>::max();
        c = prod / static_cast<std::uint64_t>(i + 1);
    }
    return c;
}

void for_each_subset(Index p, Index k, const std::function<void(const std::vector<Index>&)>& visit)
{
    if (k < 0 || k > p) throw InvalidArgument("for_each_subset: k out of range");
    std::vector<Index> idx(static_cast<std::size_t>(k));
    std::iota(idx.begin(), idx.end(), Index{0});
    while (true) {
        visit(idx);
        Index i = k - 1;
        while (i >= 0 && idx[static_cast<std::size_t>(i)] == p - k + i) --i;
        if (i < 0) return;
        ++idx[static_cast<std::size_t>(i)];
        for (Index j = i + 1; j < k; ++j) idx[static_cast<std::size_t>(j)] = idx[static_cast<std::size_t>(j - 1)] + 1;
    }
}

namespace {

void check_budget(std::uint64_t required, std::uint64_t budget)
{
    if (required > budget) throw BudgetExceeded(required, budget);
}

bool improves(double candidate, double incumbent)
{
    if (std::isinf(incumbent)) return candidate < incumbent;
    return candidate < incumbent - 1e-13 * (1.0 + std::abs(incumbent));
}

LassoOptions inner_options(const ExactOptions& opts)
{
    LassoOptions inner;
    inner.tol = opts.tol;
    inner.max_iter = opts.max_iter;
    return inner;
}

Matrix select_columns(const Matrix& X, const std::vector<Index>& cols)
{
    Matrix out(X.rows(), static_cast<Index>(cols.size()));
    for (std::size_t c = 0; c < cols.size(); ++c) out.col(static_cast<Index>(c)) = X.col(cols[c]);
    return out;
}

}  // namespace

Solution exact_solve(const ProblemInstance& inst, const TrimmedParams& params, const ExactOptions& opts)
{
    params.validate(inst.p());
    const Index p = inst.p();
    const std::uint64_t count = binomial(p, params.k);
    check_budget(count, opts.budget);

    LassoOptions inner = inner_options(opts);
    Solution best;
    best.objective = std::numeric_limits<double>::infinity();
    Vector warm = Vector::Zero(p);
    double worst_kkt = 0.0;
    for_each_subset(p, params.k, [&](const std::vector<Index>& free) {
        Vector w = Vector::Constant(p, params.eta + params.lambda);
        for (Index i : free) w(i) = params.eta;
        inner.start = warm;
        const Solution s = solve_weighted_lasso(WeightedLassoProblem{inst, w, Vector::Zero(p), std::nullopt}, inner);
        worst_kkt = std::max(worst_kkt, s.kkt_residual);
        warm = s.beta;
        const double f = objective(inst, params, s.beta);
        if (improves(f, best.objective)) {
            best.objective = f;
            best.beta = s.beta;
        }
    });
    best.status = SolveStatus::Exact;
    best.iterations = static_cast<std::size_t>(count);
    best.subsets_enumerated = static_cast<std::size_t>(count);
    best.kkt_residual = worst_kkt;
    return best;
}

ZSequence z_sequence(const ProblemInstance& inst, double lambda, double eta, const ExactOptions& opts)
{
    ZSequence z;
    z.lambda = lambda;
    z.eta = eta;
    for (Index k = 0; k <= inst.p(); ++k) {
        const Solution s = exact_solve(inst, TrimmedParams{lambda, eta, k}, opts);
        z.values.push_back(s.objective);
        z.argmins.push_back(s.beta);
    }
    return z;
}

std::string to_string(Verdict v)
{
    switch (v) {
    case Verdict::Equivalent: return "equivalent";
    case Verdict::NotEquivalent: return "not_equivalent";
    case Verdict::Indeterminate: return "indeterminate";
    }
    return "unknown";
}

ClEquivalenceResult clipped_equivalence_check(const std::vector<double>& z, Index ell, Index nnz, double slack)
{
    if (z.empty()) throw InvalidArgument("clipped_equivalence_check: empty z sequence");
    const Index p = static_cast<Index>(z.size()) - 1;
    if (ell < 0 || ell > p) throw InvalidArgument("clipped_equivalence_check: ell out of range");
    const auto zk = [&](Index i) { return z[static_cast<std::size_t>(i)]; };

    ClEquivalenceResult res;
    const Index e = std::min(ell, nnz);
    res.ell_e = e;
    for (Index i = 0; i < e; ++i) {
        for (Index j = e + 1; j <= p; ++j) {
            const double span = static_cast<double>(j - i);
            const double rhs = static_cast<double>(j - e) / span * zk(i) + static_cast<double>(e - i) / span * zk(j);
            const double margin = rhs - zk(e);
            if (margin < res.worst_margin) {
                res.worst_margin = margin;
                res.worst_triple = std::array<Index, 3>{i, e, j};
            }
        }
    }

    for (Index j = e + 1; j <= p; ++j) {
        res.mu_lower = std::max(res.mu_lower, (zk(e) - zk(j)) / static_cast<double>(j - e));
    }
    for (Index i = 0; i < e; ++i) {
        res.mu_upper = std::min(res.mu_upper, (zk(i) - zk(e)) / static_cast<double>(e - i));
    }

    if (!res.worst_triple || res.worst_margin > slack) res.verdict = Verdict::Equivalent;
    else if (res.worst_margin < -slack) res.verdict = Verdict::NotEquivalent;
    else res.verdict = Verdict::Indeterminate;
    res.equivalent = res.verdict == Verdict::Equivalent;
    return res;
}

ClEquivalenceResult clipped_equivalence_check(const ZSequence& zseq, Index ell, const Vector& beta_star, double slack)
{
    return clipped_equivalence_check(zseq.values, ell, count_nonzeros(beta_star), slack);
}

double clipped_objective(const ProblemInstance& inst, double mu, double gamma, const Vector& beta, double eta)
{
    return least_squares_loss(inst, beta) + eta * beta.lpNorm<1>() + separable_penalty(beta, ClippedLasso{mu, gamma});
}

Solution clipped_lasso_exact(const ProblemInstance& inst, double mu, double gamma, const ExactOptions& opts, double eta)
{
    check(ClippedLasso{mu, gamma});
    if (!(eta >= 0.0)) throw InvalidArgument("clipped_lasso_exact: eta must be nonnegative");
    const Index p = inst.p();
    std::uint64_t total = 0;
    for (Index l = 0; l <= p; ++l) total += binomial(p, l);
    check_budget(total, opts.budget);

    Solution best;
    double best_value = std::numeric_limits<double>::infinity();
    for (Index l = 0; l <= p; ++l) {
        const Solution s = exact_solve(inst, TrimmedParams{mu * gamma, eta, l}, opts);
        const double value = s.objective + mu * static_cast<double>(l);
        if (improves(value, best_value)) {
            best_value = value;
            best.beta = s.beta;
        }
    }
    best.objective = clipped_objective(inst, mu, gamma, best.beta, eta);
    best.status = SolveStatus::Exact;
    best.subsets_enumerated = static_cast<std::size_t>(total);
    best.iterations = static_cast<std::size_t>(total);
    return best;
}

bool verify_scaling_identity(const ProblemInstance& inst, const TrimmedParams& params, const Vector& beta,
                             double rel_tol)
{
    const double f = objective(inst, params, beta);
    const double identity = 0.5 * (inst.y_squared_norm() - (inst.X() * beta).squaredNorm());
    const double scale = std::max(0.5 * inst.y_squared_norm(), std::numeric_limits<double>::min());
    return std::abs(f - identity) <= rel_tol * scale;
}

SplitResult split_decomposition(const ProblemInstance& inst, double lambda, Index k, const ExactOptions& opts)
{
    const Index p = inst.p();
    const Index n = inst.n();
    if (!(lambda >= 0.0)) throw InvalidArgument("split_decomposition: lambda must be nonnegative");
    if (k < 0 || k > p) throw InvalidArgument("split_decomposition: k out of range");

    SplitResult out;
    if (lambda == 0.0) {
        out.phi = Vector::Zero(p);
        out.eps = inst.X().completeOrthogonalDecomposition().solve(inst.y());
        out.objective = least_squares_loss(inst, out.eps);
        return out;
    }

    const std::uint64_t count = binomial(p, k);
    check_budget(count, opts.budget);
    const LassoOptions inner = inner_options(opts);
    out.objective = std::numeric_limits<double>::infinity();

    for_each_subset(p, k, [&](const std::vector<Index>& support) {
        // Eliminate phi: project y and X onto the complement of span(X_S).
        Matrix proj = Matrix::Identity(n, n);
        if (!support.empty()) {
            const Matrix XS = select_columns(inst.X(), support);
            proj -= XS * XS.completeOrthogonalDecomposition().pseudoInverse();
        }
        const ProblemInstance reduced(proj * inst.y(), proj * inst.X());
        Vector w = Vector::Constant(p, lambda);
        const Solution s = solve_weighted_lasso(WeightedLassoProblem{reduced, w, Vector::Zero(p), std::nullopt}, inner);
        const double f = s.objective;
        if (!improves(f, out.objective)) return;

        Vector eps = s.beta;
        for (Index i : support) eps(i) = 0.0;
        Vector phi = Vector::Zero(p);
        if (!support.empty()) {
            const Matrix XS = select_columns(inst.X(), support);
            const Vector coef = XS.completeOrthogonalDecomposition().solve(inst.y() - inst.X() * eps);
            for (std::size_t c = 0; c < support.size(); ++c) phi(support[c]) = coef(static_cast<Index>(c));
        }
        out.objective = f;
        out.phi = std::move(phi);
        out.eps = std::move(eps);
    });
    out.subsets_enumerated = count;
    out.objective = least_squares_loss(inst, out.phi + out.eps) + lambda * out.eps.lpNorm<1>();
    return out;
}

Solution trimmed_ridge_exact(const ProblemInstance& inst, double lambda, Index k, const ExactOptions& opts)
{
    const Index p = inst.p();
    if (!(lambda > 0.0)) throw InvalidArgument("trimmed_ridge_exact: lambda must be positive");
    if (k < 0 || k > p) throw InvalidArgument("trimmed_ridge_exact: k out of range");
    const std::uint64_t count = binomial(p, k);
    check_budget(count, opts.budget);

    Solution best;
    best.objective = std::numeric_limits<double>::infinity();
    for_each_subset(p, k, [&](const std::vector<Index>& free) {
        Vector shrink = Vector::Constant(p, lambda);
        for (Index i : free) shrink(i) = 0.0;
        Matrix A = inst.gram();
        A.diagonal() += shrink;
        const Vector b = A.completeOrthogonalDecomposition().solve(inst.xty());
        const double f = least_squares_loss(inst, b) + lambda * projected_penalty(b, k, GFunction::HalfSquare);
        if (improves(f, best.objective)) {
            best.objective = f;
            best.beta = b;
        }
    });
    best.status = SolveStatus::Exact;
    best.subsets_enumerated = static_cast<std::size_t>(count);
    best.iterations = static_cast<std::size_t>(count);
    return best;
}

Solution best_subset_exact(const ProblemInstance& inst, Index k, double eta, const ExactOptions& opts)
{
    const Index p = inst.p();
    if (k < 0 || k > p) throw InvalidArgument("best_subset_exact: k out of range");
    if (!(eta >= 0.0)) throw InvalidArgument("best_subset_exact: eta must be nonnegative");
    const std::uint64_t count = binomial(p, k);
    check_budget(count, opts.budget);
    const LassoOptions inner = inner_options(opts);

    Solution best;
    best.objective = std::numeric_limits<double>::infinity();
    for_each_subset(p, k, [&](const std::vector<Index>& support) {
        Vector b = Vector::Zero(p);
        if (!support.empty()) {
            const Matrix XS = select_columns(inst.X(), support);
            Vector coef;
            if (eta == 0.0) {
                coef = XS.completeOrthogonalDecomposition().solve(inst.y());
            } else {
                const ProblemInstance sub(inst.y(), XS);
                const auto m = static_cast<Index>(support.size());
                coef = solve_weighted_lasso(
                           WeightedLassoProblem{sub, Vector::Constant(m, eta), Vector::Zero(m), std::nullopt}, inner)
                           .beta;
            }
            for (std::size_t c = 0; c < support.size(); ++c) b(support[c]) = coef(static_cast<Index>(c));
        }
        const double f = least_squares_loss(inst, b) + eta * b.lpNorm<1>();
        if (improves(f, best.objective)) {
            best.objective = f;
            best.beta = b;
        }
    });
    best.status = SolveStatus::Exact;
    best.subsets_enumerated = static_cast<std::size_t>(count);
    best.iterations = static_cast<std::size_t>(count);
    return best;
}

}  // namespace trimlasso

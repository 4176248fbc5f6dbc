#include "support.hpp"

#include "trimlasso/exact.hpp"
#include "trimlasso/heuristics.hpp"
#include "trimlasso/penalties.hpp"

#include <doctest.h>

using namespace trimlasso;
using tltest::example1;

namespace {

Vector vec(std::initializer_list<double> v)
{
    Vector out(static_cast<Index>(v.size()));
    Index i = 0;
    for (double x : v) out(i++) = x;
    return out;
}

const TrimmedParams kExample{0.5, 0.0, 1};

// Subdifferential of f1 = loss + w||b||_1 at b, coordinatewise.
bool in_convex_subdifferential(const Vector& g, const Vector& grad, const Vector& b, double w, double tol)
{
    for (Index i = 0; i < b.size(); ++i) {
        if (b(i) != 0.0) {
            if (std::abs(g(i) - grad(i) - w * (b(i) > 0 ? 1.0 : -1.0)) > tol) return false;
        } else if (std::abs(g(i) - grad(i)) > w + tol) {
            return false;
        }
    }
    return true;
}

ProblemInstance correlated(std::uint64_t seed, Index n, Index p)
{
    InstanceSpec spec;
    spec.seed = seed;
    spec.n = n;
    spec.p = p;
    spec.beta_true = Vector::Zero(p);
    for (Index i = 0; i < std::min<Index>(3, p); ++i) spec.beta_true(i) = 1.0;
    return generate_instance(spec);
}

}  // namespace

TEST_CASE("select_gamma examples")
{
    const Vector g = select_gamma(vec({3.0, -1.0, 0.0}), 2.0, 1, Vector::Zero(3), 0.0);
    CHECK(g == vec({2.0, 0.0, 0.0}));
    CHECK(select_gamma(Vector::Zero(2), 1.0, 0, vec({1.0, 1.0}), 0.0) == Vector::Zero(2));

    const Vector g2 = select_gamma(vec({3.0, -1.0, 0.5}), 2.0, 2, Vector::Zero(3), 0.0);
    CHECK(g2 == vec({2.0, -2.0, 0.0}));
}

TEST_CASE("select_gamma is an extreme point maximising the inner product")
{
    GaussianSource rng(31);
    for (int t = 0; t < 200; ++t) {
        const Index p = tltest::random_index(rng, 1, 6);
        const Index k = tltest::random_index(rng, 0, p);
        const double lam = 0.1 + rng.uniform();
        Vector b = tltest::random_vector(rng, p);
        for (Index i = 0; i < p; ++i) {
            if (rng.uniform() < 0.3) b(i) = 0.0;
            if (rng.uniform() < 0.3) b(i) = b(0) * (rng.uniform() < 0.5 ? -1.0 : 1.0);
        }
        const Vector g = select_gamma(b, lam, k, tltest::random_vector(rng, p), 0.1);
        CHECK(g.cwiseAbs().maxCoeff() <= lam);
        CHECK(g.lpNorm<1>() <= lam * static_cast<double>(k) + 1e-12);
        CHECK(std::abs(g.dot(b) - lam * top_k_sum(b, k)) <= 1e-12);
    }
}

TEST_CASE("select_gamma escapes the convex subdifferential on ties")
{
    // beta = (1, 1) with k = 1 on a 2x2 design that is not locally optimal.
    Matrix X(2, 2);
    X << 1.0, 0.3, 0.2, 1.0;
    Vector y(2);
    y << 2.0, 0.5;
    const ProblemInstance inst(y, X);
    const TrimmedParams params{1.0, 0.1, 1};
    const Vector b = vec({1.0, 1.0});
    const Vector grad = smooth_gradient(inst, b);
    const double w = params.eta + params.lambda;
    REQUIRE(std::abs(grad(0) + w - params.lambda) > 1e-9);
    REQUIRE_FALSE(check_local_optimality(inst, params, b).locally_optimal);

    const Vector g = select_gamma(b, params.lambda, params.k, grad, params.eta);
    CHECK(g.lpNorm<1>() == doctest::Approx(params.lambda));
    CHECK_FALSE(in_convex_subdifferential(g, grad, b, w, 1e-12));

    // One alternating step from the tie strictly decreases the objective.
    AltMinConfig cfg;
    cfg.start = b;
    cfg.max_iter = 1;
    const Solution s = alt_min_solve(inst, params, cfg);
    CHECK(s.objective < objective(inst, params, b) - 1e-9);
}

TEST_CASE("local optimality on the two-variable example")
{
    const auto inst = example1();
    CHECK(check_local_optimality(inst, kExample, vec({1.5, 1.0})).locally_optimal);
    const auto at_zero = check_local_optimality(inst, kExample, Vector::Zero(2));
    CHECK_FALSE(at_zero.locally_optimal);
    CHECK(at_zero.violations == std::vector<Index>{1});
    CHECK(smooth_gradient(inst, Vector::Zero(2)) == vec({0.0, -1.0}));
}

TEST_CASE("differentiable stationary points are locally optimal")
{
    GaussianSource rng(32);
    for (int t = 0; t < 20; ++t) {
        const auto inst = tltest::random_instance(rng, 10, 4);
        const TrimmedParams params{0.3, 0.05, 2};
        // Build y so that a given beta with distinct magnitudes is stationary.
        const Vector b = vec({2.0, -1.5, 0.7, -0.2});
        Vector sub(4);
        sub << (params.eta) * 1.0, (params.eta) * -1.0, (params.eta + params.lambda) * 1.0,
            (params.eta + params.lambda) * -1.0;
        // X'(Xb - y) = -sub has a solution y when X has full column rank.
        const Vector y = inst.X() * b + inst.X() * inst.gram().ldlt().solve(sub);
        const ProblemInstance shifted(y, inst.X());
        CHECK(check_local_optimality(shifted, params, b, 1e-9).locally_optimal);
    }
}

TEST_CASE("alternating minimisation on the example")
{
    const auto inst = example1();
    AltMinConfig at_opt;
    at_opt.start = vec({1.5, 1.0});
    const Solution fixed = alt_min_solve(inst, kExample, at_opt);
    CHECK(fixed.beta(0) == doctest::Approx(1.5).epsilon(1e-9));
    CHECK(fixed.beta(1) == doctest::Approx(1.0).epsilon(1e-9));
    CHECK(fixed.objective == doctest::Approx(0.75).epsilon(1e-12));
    CHECK(fixed.iterations <= 2);

    const Solution cold = alt_min_solve(inst, kExample);
    for (std::size_t i = 1; i < cold.trace.size(); ++i) CHECK(cold.trace[i] <= cold.trace[i - 1] + 1e-12);
    CHECK(cold.objective >= 0.75 - 1e-12);
    CHECK(cold.status == SolveStatus::Converged);
}

TEST_CASE("alternating minimisation with lambda zero is a Lasso solve")
{
    GaussianSource rng(33);
    const auto inst = tltest::random_instance(rng, 12, 5);
    const Solution s = alt_min_solve(inst, {0.0, 0.7, 2});
    const Vector ref = tltest::lasso_by_signs(inst.X(), inst.y(), Vector::Constant(5, 0.7));
    CHECK((s.beta - ref).cwiseAbs().maxCoeff() <= 1e-8);
}

TEST_CASE("alternating minimisation contract on random instances")
{
    for (std::uint64_t seed = 1; seed <= 15; ++seed) {
        const auto inst = correlated(seed, 30, 8);
        const double lam = 0.05 * lambda_bar(inst) * static_cast<double>(seed % 5 + 1);
        const TrimmedParams params{lam, 0.01, 2};
        const Solution s = alt_min_solve(inst, params);
        CHECK(s.status == SolveStatus::Converged);
        CHECK(s.iterations <= 1000);
        for (std::size_t i = 1; i < s.trace.size(); ++i) CHECK(s.trace[i] <= s.trace[i - 1] + 1e-12);
        CHECK(check_local_optimality(inst, params, s.beta, 1e-6).locally_optimal);
    }
}

TEST_CASE("alternating minimisation from an exact optimum stays put")
{
    for (std::uint64_t seed = 1; seed <= 10; ++seed) {
        const auto inst = correlated(seed, 20, 6);
        const TrimmedParams params{0.3 * lambda_bar(inst), 0.01, 2};
        const Solution ex = exact_solve(inst, params);
        AltMinConfig cfg;
        cfg.start = ex.beta;
        const Solution s = alt_min_solve(inst, params, cfg);
        CHECK(s.objective <= ex.objective + 1e-12);
        CHECK(s.iterations <= 2);
    }
}

TEST_CASE("heuristics are sparse above lambda_bar")
{
    for (std::uint64_t seed = 1; seed <= 5; ++seed) {
        const auto inst = correlated(seed, 30, 8);
        const TrimmedParams params{1.01 * lambda_bar(inst), 0.01, 2};
        CHECK(count_nonzeros(alt_min_solve(inst, params).beta) <= 2);
        AdmmConfig cfg;
        cfg.max_outer = 500;
        CHECK(count_nonzeros(admm_solve(inst, params, cfg).beta) <= 2);
    }
}

TEST_CASE("ADMM on the example")
{
    const auto inst = example1();
    const Solution a = admm_solve(inst, kExample);
    const Solution m = alt_min_solve(inst, kExample);
    CHECK(a.objective >= 0.75 - 1e-12);
    CHECK(a.objective <= m.objective + 1e-12);
    CHECK(objective(inst, kExample, a.beta) == doctest::Approx(a.objective).epsilon(1e-15));
}

TEST_CASE("ADMM reduces to the Lasso without trimming")
{
    GaussianSource rng(34);
    const auto inst = tltest::random_instance(rng, 12, 4);
    const Vector ref = tltest::lasso_by_signs(inst.X(), inst.y(), Vector::Constant(4, 0.4));
    const auto f = [&](const Vector& b) { return 0.5 * (inst.y() - inst.X() * b).squaredNorm() + 0.4 * b.lpNorm<1>(); };

    const Solution zero_lambda = admm_solve(inst, {0.0, 0.4, 1});
    CHECK(zero_lambda.objective == doctest::Approx(f(ref)).epsilon(1e-8));
    const Solution full_k = admm_solve(inst, {5.0, 0.4, 4});
    CHECK(full_k.objective == doctest::Approx(f(ref)).epsilon(1e-8));
    CHECK(full_k.status == SolveStatus::Converged);
}

TEST_CASE("ADMM records residuals and reports its iteration limit")
{
    const auto inst = correlated(3, 30, 8);
    AdmmConfig cfg;
    cfg.max_outer = 5;
    cfg.record_residuals = true;
    cfg.primal_tol = 0.0;
    const Solution s = admm_solve(inst, {0.5 * lambda_bar(inst), 0.01, 2}, cfg);
    CHECK(s.status == SolveStatus::IterationLimit);
    CHECK(s.primal_residuals.size() == 5);
    CHECK(s.dual_residuals.size() == 5);
    cfg.sigma = 0.0;
    CHECK_THROWS_AS(admm_solve(inst, {0.5, 0.01, 2}, cfg), InvalidArgument);
}

TEST_CASE("envelope solver")
{
    GaussianSource rng(35);
    const auto inst = tltest::random_instance(rng, 12, 4);
    const Vector lasso = tltest::lasso_by_signs(inst.X(), inst.y(), Vector::Constant(4, 0.4));
    const auto f = [&](const Vector& b) { return 0.5 * (inst.y() - inst.X() * b).squaredNorm() + 0.4 * b.lpNorm<1>(); };

    const Solution zero_lambda = envelope_solve(inst, {0.0, 0.4, 1});
    CHECK(*zero_lambda.relaxed_objective <= f(lasso) + 1e-4);

    const Index big_k = static_cast<Index>(std::ceil(lasso.lpNorm<1>())) + 1;
    if (big_k <= 4) {
        const Solution inactive = envelope_solve(inst, {3.0, 0.4, big_k});
        CHECK(*inactive.relaxed_objective <= f(lasso) + 1e-4);
    }

    const auto ex = example1();
    const TrimmedParams params{0.5, 0.01, 1};
    const Solution e = envelope_solve(ex, params);
    CHECK(e.objective >= exact_solve(ex, params).objective - 1e-12);
    CHECK(*e.relaxed_objective == doctest::Approx(envelope_objective(ex, params, e.beta)));
}

TEST_CASE("envelope minimises a lower bound of the other heuristics")
{
    for (std::uint64_t seed = 1; seed <= 5; ++seed) {
        const auto inst = correlated(seed, 30, 8);
        const TrimmedParams params{0.2 * lambda_bar(inst), 0.01, 2};
        const Solution e = envelope_solve(inst, params);
        const double fe = *e.relaxed_objective;
        const double tol = 1e-3 * (1.0 + std::abs(fe));
        CHECK(fe <= envelope_objective(inst, params, alt_min_solve(inst, params).beta) + tol);
        CHECK(fe <= envelope_objective(inst, params, admm_solve(inst, params).beta) + tol);
    }
}

TEST_CASE("envelope converges toward a long-run reference")
{
    GaussianSource rng(36);
    const auto inst = tltest::random_instance(rng, 15, 5);
    const TrimmedParams params{1.0, 0.1, 2};
    EnvelopeConfig short_run;
    short_run.max_iter = 2000;
    const double fs = *envelope_solve(inst, params, short_run).relaxed_objective;
    EnvelopeConfig long_run;
    long_run.max_iter = 2000000;
    const double fl = *envelope_solve(inst, params, long_run).relaxed_objective;
    CHECK(fl <= fs);
    const double fd = *envelope_solve(inst, params).relaxed_objective;
    CHECK(std::abs(fd - fl) <= 1e-5 * (1.0 + std::abs(fl)));
}

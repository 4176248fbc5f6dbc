#include "support.hpp"

#include "trimlasso/penalties.hpp"
#include "trimlasso/subproblems.hpp"

#include <doctest.h>

using namespace trimlasso;
using tltest::example1;

namespace {

// argmin_g t T_k(g) + 1/2||g - alpha||^2 over every keep-set of size k
Vector prox_by_enumeration(const Vector& alpha, Index k, double t)
{
    const Index p = alpha.size();
    Vector best;
    double best_f = std::numeric_limits<double>::infinity();
    tltest::for_each_mask(p, [&](unsigned m) {
        if (tltest::popcount(m) != k) return;
        Vector g(p);
        for (Index i = 0; i < p; ++i) g(i) = (m & (1u << i)) ? alpha(i) : soft_threshold(alpha(i), t);
        const double f = t * trimmed_lasso(g, k) + 0.5 * (g - alpha).squaredNorm();
        if (f < best_f - 1e-15) {
            best_f = f;
            best = g;
        }
    });
    return best;
}

double prox_value(const Vector& g, const Vector& alpha, Index k, double t)
{
    return t * trimmed_lasso(g, k) + 0.5 * (g - alpha).squaredNorm();
}

}  // namespace

TEST_CASE("soft_threshold examples")
{
    CHECK(soft_threshold(3.0, 1.0) == 2.0);
    CHECK(soft_threshold(-0.5, 1.0) == 0.0);
    CHECK(soft_threshold(-2.5, 1.0) == -1.5);
    CHECK(soft_threshold(0.7, 0.0) == 0.7);
}

TEST_CASE("weighted Lasso on orthogonal designs is soft-thresholding")
{
    Vector y(2);
    y << 2.0, 0.5;
    const ProblemInstance inst(y, Matrix::Identity(2, 2));
    const WeightedLassoProblem prob{inst, Vector::Ones(2), Vector::Zero(2), std::nullopt};
    const Solution s = solve_weighted_lasso(prob);
    CHECK(s.beta(0) == doctest::Approx(1.0));
    CHECK(s.beta(1) == 0.0);

    Vector y1(1);
    y1 << 2.0;
    const ProblemInstance one(y1, Matrix::Identity(1, 1));
    const WeightedLassoProblem tilted{one, Vector::Ones(1), Vector::Ones(1), std::nullopt};
    CHECK(solve_weighted_lasso(tilted).beta(0) == doctest::Approx(2.0));
}

TEST_CASE("weighted Lasso matches closed form on scaled orthogonal columns")
{
    GaussianSource rng(21);
    for (int t = 0; t < 50; ++t) {
        const Index n = 6, p = 4;
        const Matrix Q = tltest::random_instance(rng, n, n).X().householderQr().householderQ();
        Vector scale(p);
        for (Index j = 0; j < p; ++j) scale(j) = 0.5 + 2.0 * rng.uniform();
        const Matrix X = Q.leftCols(p) * scale.asDiagonal();
        const Vector y = tltest::random_vector(rng, n, 2.0);
        const ProblemInstance inst(y, X);
        Vector w(p), c(p);
        for (Index j = 0; j < p; ++j) {
            w(j) = 2.0 * rng.uniform();
            c(j) = rng.normal();
        }
        const Solution s = solve_weighted_lasso({inst, w, c, std::nullopt}, {1e-12});
        for (Index j = 0; j < p; ++j) {
            const double d = scale(j) * scale(j);
            const double expect = soft_threshold(inst.xty()(j) + c(j), w(j)) / d;
            CHECK(std::abs(s.beta(j) - expect) <= 1e-10);
        }
    }
}

TEST_CASE("weighted Lasso matches a proximal-gradient reference")
{
    GaussianSource rng(22);
    for (int t = 0; t < 10; ++t) {
        const auto inst = tltest::random_instance(rng, 15, 6);
        const double eta = 0.5 + 3.0 * rng.uniform();
        const Solution s = solve_weighted_lasso({inst, Vector::Constant(6, eta), Vector::Zero(6), std::nullopt});
        const Vector ref = tltest::lasso_fista(inst.X(), inst.y(), eta);
        const auto f = [&](const Vector& b) {
            return 0.5 * (inst.y() - inst.X() * b).squaredNorm() + eta * b.lpNorm<1>();
        };
        CHECK(std::abs(f(s.beta) - f(ref)) <= 1e-6);
        CHECK(s.kkt_residual <= 1e-8);
        CHECK(s.status == SolveStatus::Converged);
    }
}

TEST_CASE("weighted Lasso matches sign enumeration")
{
    GaussianSource rng(23);
    for (int t = 0; t < 30; ++t) {
        const auto inst = tltest::random_instance(rng, 8, 5);
        Vector w(5);
        for (Index j = 0; j < 5; ++j) w(j) = 3.0 * rng.uniform();
        const Solution s = solve_weighted_lasso({inst, w, Vector::Zero(5), std::nullopt}, {1e-12});
        const Vector ref = tltest::lasso_by_signs(inst.X(), inst.y(), w);
        CHECK((s.beta - ref).cwiseAbs().maxCoeff() <= 1e-8);
    }
}

TEST_CASE("weighted Lasso objective decreases across sweeps")
{
    GaussianSource rng(24);
    for (int t = 0; t < 20; ++t) {
        InstanceSpec spec;
        spec.seed = static_cast<std::uint64_t>(t + 1);
        spec.n = 30;
        spec.p = 10;
        spec.corr = 0.9;
        const auto inst = generate_instance(spec);
        Vector w(10), c(10);
        for (Index j = 0; j < 10; ++j) {
            w(j) = rng.uniform();
            c(j) = rng.normal();
        }
        LassoOptions opts;
        opts.record_trace = true;
        opts.tol = 1e-12;
        const Solution s = solve_weighted_lasso({inst, w, c, RidgeCenter{tltest::random_vector(rng, 10), 0.5}}, opts);
        for (std::size_t i = 1; i < s.trace.size(); ++i) {
            CHECK(s.trace[i] <= s.trace[i - 1] + 1e-12 * (1.0 + std::abs(s.trace[i - 1])));
        }
    }
}

TEST_CASE("fixed point of the example at its optimum")
{
    const auto inst = example1();
    Vector c(2);
    c << 0.5, 0.0;
    const WeightedLassoProblem prob{inst, Vector::Constant(2, 0.5), c, std::nullopt};
    Vector b(2);
    b << 1.5, 1.0;
    CHECK(weighted_lasso_kkt(prob, b) <= 1e-14);
    const Solution s = solve_weighted_lasso(prob, {1e-12});
    CHECK(s.beta(0) == doctest::Approx(1.5).epsilon(1e-12));
    CHECK(s.beta(1) == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("ridge center is honoured")
{
    GaussianSource rng(25);
    const auto inst = tltest::random_instance(rng, 10, 4);
    const Vector center = tltest::random_vector(rng, 4);
    const double sigma = 2.0;
    const Vector c = tltest::random_vector(rng, 4);
    const WeightedLassoProblem prob{inst, Vector::Zero(4), c, RidgeCenter{center, sigma}};
    const Solution s = solve_weighted_lasso(prob, {1e-12});
    const Matrix H = inst.gram() + sigma * Matrix::Identity(4, 4);
    const Vector expect = H.llt().solve(inst.xty() + c + sigma * center);
    CHECK((s.beta - expect).norm() <= 1e-9);
}

TEST_CASE("degenerate columns")
{
    Matrix X = Matrix::Zero(3, 2);
    X.col(0) << 1.0, 0.0, 1.0;
    Vector y(3);
    y << 1.0, 2.0, 3.0;
    const ProblemInstance inst(y, X);
    const Solution s = solve_weighted_lasso({inst, Vector::Constant(2, 0.1), Vector::Zero(2), std::nullopt});
    CHECK(s.beta(1) == 0.0);

    Vector c(2);
    c << 0.0, 1.0;
    CHECK_THROWS_AS(solve_weighted_lasso({inst, Vector::Constant(2, 0.1), c, std::nullopt}), SolverError);
}

TEST_CASE("weighted Lasso validates its inputs")
{
    const auto inst = example1();
    CHECK_THROWS_AS(solve_weighted_lasso({inst, Vector::Constant(2, -1.0), Vector::Zero(2), std::nullopt}),
                    InvalidArgument);
    CHECK_THROWS_AS(solve_weighted_lasso({inst, Vector::Ones(3), Vector::Zero(2), std::nullopt}), InvalidArgument);
    CHECK_THROWS_AS(solve_weighted_lasso({inst, Vector::Ones(2), Vector::Zero(2), RidgeCenter{Vector::Zero(2), 0.0}}),
                    InvalidArgument);
}

TEST_CASE("iteration limit is reported")
{
    InstanceSpec spec;
    spec.n = 30;
    spec.p = 10;
    spec.corr = 0.95;
    const auto inst = generate_instance(spec);
    LassoOptions opts;
    opts.max_iter = 1;
    opts.tol = 1e-14;
    const Solution s = solve_weighted_lasso({inst, Vector::Constant(10, 0.01), Vector::Zero(10), std::nullopt}, opts);
    CHECK(s.status == SolveStatus::IterationLimit);
    CHECK(s.kkt_residual > 1e-14);
}

TEST_CASE("trimmed_prox examples")
{
    Vector a(3);
    a << 3.0, 2.0, 0.5;
    const Vector g = trimmed_prox(a, 1, 1.0);
    CHECK(g(0) == 3.0);
    CHECK(g(1) == 1.0);
    CHECK(g(2) == 0.0);
    CHECK(trimmed_prox(a, 2, 0.0) == a);
    CHECK(trimmed_prox(a, 3, 5.0) == a);

    Vector tie(3);
    tie << -1.0, 1.0, 0.2;
    const Vector gt = trimmed_prox(tie, 1, 0.5);
    CHECK(gt(0) == -1.0);
    CHECK(gt(1) == 0.5);
}

TEST_CASE("trimmed_prox matches keep-set enumeration")
{
    GaussianSource rng(26);
    for (int t = 0; t < 300; ++t) {
        const Index p = tltest::random_index(rng, 1, 6);
        const Index k = tltest::random_index(rng, 0, p);
        const double th = 2.0 * rng.uniform();
        const Vector a = tltest::random_vector(rng, p, 2.0);
        const Vector g = trimmed_prox(a, k, th);
        const Vector ref = prox_by_enumeration(a, k, th);
        CHECK(std::abs(prox_value(g, a, k, th) - prox_value(ref, a, k, th)) <= 1e-12);
    }
}

TEST_CASE("ridge residual operator")
{
    const Matrix A = ridge_residual_operator(Matrix::Identity(3, 3), 1.0);
    CHECK((A - Matrix::Identity(3, 3) / std::sqrt(2.0)).cwiseAbs().maxCoeff() <= 1e-14);

    GaussianSource rng(27);
    const Matrix X = tltest::random_instance(rng, 4, 3).X();
    const Matrix Abig = ridge_residual_operator(X, 1e12);
    CHECK((Abig - Matrix::Identity(4, 4)).cwiseAbs().maxCoeff() <= 1e-5);
    CHECK_THROWS_AS(ridge_residual_operator(X, 0.0), InvalidArgument);

    const Matrix As = ridge_residual_operator(X, 2.0);
    CHECK((As - As.transpose()).cwiseAbs().maxCoeff() <= 1e-14);
    CHECK(Eigen::SelfAdjointEigenSolver<Matrix>(As).eigenvalues().minCoeff() >= -1e-14);
}

TEST_CASE("ridge elimination identity")
{
    GaussianSource rng(28);
    for (int t = 0; t < 20; ++t) {
        const auto inst = tltest::random_instance(rng, 4, 3);
        const double lam = 2.0;
        const Vector phi = tltest::random_vector(rng, 3);
        const Matrix A = ridge_residual_operator(inst.X(), lam);
        const Vector r = inst.y() - inst.X() * phi;
        const double lhs = 0.5 * (A * r).squaredNorm();
        const Matrix H = inst.gram() + lam * Matrix::Identity(3, 3);
        const Vector eps = H.ldlt().solve(inst.X().transpose() * r);
        const double rhs = 0.5 * (r - inst.X() * eps).squaredNorm() + 0.5 * lam * eps.squaredNorm();
        CHECK(std::abs(lhs - rhs) <= 1e-8);
    }
}

TEST_CASE("A'A is a multiple of I only for orthogonal designs")
{
    const auto is_scaled_identity = [](const Matrix& M) {
        const double s = M(0, 0);
        return s > 0.0 && (M - s * Matrix::Identity(M.rows(), M.cols())).cwiseAbs().maxCoeff() <= 1e-10;
    };
    GaussianSource rng(29);
    const Matrix Q = tltest::random_instance(rng, 4, 4).X().householderQr().householderQ();
    const Matrix Xo = 3.0 * Q;
    const Matrix Ao = ridge_residual_operator(Xo, 1.5);
    CHECK(is_scaled_identity(Ao.transpose() * Ao));

    InstanceSpec spec;
    spec.n = 4;
    spec.p = 4;
    spec.corr = 0.8;
    const Matrix Xc = generate_instance(spec).X();
    const Matrix Ac = ridge_residual_operator(Xc, 1.5);
    CHECK_FALSE(is_scaled_identity(Ac.transpose() * Ac));
    CHECK_FALSE(is_scaled_identity(Xc.transpose() * Xc));
}

#pragma once

// Shared fixtures and brute-force oracles for the test suites. The oracles
// deliberately avoid the library's solvers.

#include "trimlasso/model.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <vector>

namespace tltest {

using trimlasso::Index;
using trimlasso::Matrix;
using trimlasso::ProblemInstance;
using trimlasso::Vector;

inline ProblemInstance example1()
{
    Vector y(2);
    y << 1.0, 1.0;
    Matrix X(2, 2);
    X << 1.0, -1.0, -1.0, 2.0;
    return ProblemInstance(y, X);
}

/// Gaussian design with independent entries.
inline ProblemInstance random_instance(trimlasso::GaussianSource& rng, Index n, Index p)
{
    Matrix X(n, p);
    for (Index i = 0; i < n; ++i) {
        for (Index j = 0; j < p; ++j) X(i, j) = rng.normal();
    }
    Vector y(n);
    for (Index i = 0; i < n; ++i) y(i) = rng.normal() * 2.0;
    return ProblemInstance(y, X);
}

inline Vector random_vector(trimlasso::GaussianSource& rng, Index p, double scale = 1.0)
{
    Vector v(p);
    for (Index i = 0; i < p; ++i) v(i) = scale * rng.normal();
    return v;
}

inline Index random_index(trimlasso::GaussianSource& rng, Index lo, Index hi)
{
    return lo + static_cast<Index>(rng.bits() % static_cast<std::uint64_t>(hi - lo + 1));
}

/// All subsets of {0..p-1} as bitmasks.
inline void for_each_mask(Index p, const std::function<void(unsigned)>& f)
{
    for (unsigned m = 0; m < (1u << p); ++m) f(m);
}

inline int popcount(unsigned m)
{
    return __builtin_popcount(m);
}

/**
 * min 1/2||y - A b||^2 + sum_i w_i |b_i| by enumerating sign patterns in
 * {-1, 0, 1}^m: each pattern fixes a linear system; a solution whose signs
 * match and whose zero coordinates satisfy the subgradient bound is optimal.
 * Exact up to linear-solve roundoff. Intended for m <= 6.
 */
inline Vector lasso_by_signs(const Matrix& A, const Vector& y, const Vector& w)
{
    const Index m = A.cols();
    const Matrix G = A.transpose() * A;
    const Vector c = A.transpose() * y;
    Vector best = Vector::Zero(m);
    double best_f = std::numeric_limits<double>::infinity();
    std::vector<int> sign(static_cast<std::size_t>(m), -1);
    Index total = 1;
    for (Index i = 0; i < m; ++i) total *= 3;
    for (Index code = 0; code < total; ++code) {
        Index t = code;
        std::vector<Index> act;
        for (Index i = 0; i < m; ++i) {
            sign[static_cast<std::size_t>(i)] = static_cast<int>(t % 3) - 1;
            t /= 3;
            if (sign[static_cast<std::size_t>(i)] != 0) act.push_back(i);
        }
        Vector b = Vector::Zero(m);
        if (!act.empty()) {
            const auto a = static_cast<Index>(act.size());
            Matrix GA(a, a);
            Vector rhs(a);
            for (Index r = 0; r < a; ++r) {
                for (Index s = 0; s < a; ++s) GA(r, s) = G(act[r], act[s]);
                rhs(r) = c(act[r]) - w(act[r]) * sign[static_cast<std::size_t>(act[r])];
            }
            const Vector x = GA.fullPivLu().solve(rhs);
            if ((GA * x - rhs).norm() > 1e-9 * (1.0 + rhs.norm())) continue;
            bool ok = true;
            for (Index r = 0; r < a; ++r) {
                if (x(r) * sign[static_cast<std::size_t>(act[r])] <= 0.0) ok = false;
                b(act[r]) = x(r);
            }
            if (!ok) continue;
        }
        const Vector g = G * b - c;
        bool kkt = true;
        for (Index i = 0; i < m; ++i) {
            if (sign[static_cast<std::size_t>(i)] == 0 && std::abs(g(i)) > w(i) + 1e-9) kkt = false;
        }
        if (!kkt) continue;
        const double f = 0.5 * (y - A * b).squaredNorm() + w.dot(b.cwiseAbs());
        if (f < best_f) {
            best_f = f;
            best = b;
        }
    }
    return best;
}

inline Matrix columns(const Matrix& X, const std::vector<Index>& cols)
{
    Matrix out(X.rows(), static_cast<Index>(cols.size()));
    for (std::size_t c = 0; c < cols.size(); ++c) out.col(static_cast<Index>(c)) = X.col(cols[c]);
    return out;
}

/// Brute-force trimmed Lasso optimum: min over unpenalized sets S of size k
/// of the weighted Lasso, each solved by lasso_by_signs. p <= 6.
inline std::pair<Vector, double> trimmed_oracle(const ProblemInstance& inst, double lambda, double eta, Index k)
{
    const Index p = inst.p();
    Vector best;
    double best_f = std::numeric_limits<double>::infinity();
    for_each_mask(p, [&](unsigned mask) {
        if (popcount(mask) != k) return;
        Vector w = Vector::Constant(p, eta + lambda);
        for (Index i = 0; i < p; ++i) {
            if (mask & (1u << i)) w(i) = eta;
        }
        const Vector b = lasso_by_signs(inst.X(), inst.y(), w);
        // Evaluate the trimmed objective directly from sorted magnitudes.
        std::vector<double> mags;
        for (Index i = 0; i < p; ++i) mags.push_back(std::abs(b(i)));
        std::sort(mags.begin(), mags.end());
        double tk = 0.0;
        for (Index i = 0; i < p - k; ++i) tk += mags[static_cast<std::size_t>(i)];
        const double f = 0.5 * (inst.y() - inst.X() * b).squaredNorm() + lambda * tk + eta * b.lpNorm<1>();
        if (f < best_f) {
            best_f = f;
            best = b;
        }
    });
    return {best, best_f};
}

/// min 1/2||y - X b||^2 + eta ||b||_1 subject to ||b||_0 <= k, by subset and
/// sign enumeration. Subsets of size exactly k suffice.
inline std::pair<Vector, double> best_subset_l1_oracle(const ProblemInstance& inst, double eta, Index k)
{
    const Index p = inst.p();
    Vector best = Vector::Zero(p);
    double best_f = std::numeric_limits<double>::infinity();
    std::vector<Index> idx(static_cast<std::size_t>(k));
    std::function<void(Index, Index)> rec = [&](Index start, Index depth) {
        if (depth == k) {
            const Matrix XS = columns(inst.X(), idx);
            const Vector coef = lasso_by_signs(XS, inst.y(), Vector::Constant(k, eta));
            Vector b = Vector::Zero(p);
            for (Index c = 0; c < k; ++c) b(idx[static_cast<std::size_t>(c)]) = coef(c);
            const double f = 0.5 * (inst.y() - inst.X() * b).squaredNorm() + eta * b.lpNorm<1>();
            if (f < best_f) {
                best_f = f;
                best = b;
            }
            return;
        }
        for (Index j = start; j < p; ++j) {
            idx[static_cast<std::size_t>(depth)] = j;
            rec(j + 1, depth + 1);
        }
    };
    rec(0, 0);
    return {best, best_f};
}

/// FISTA on 1/2||y - X b||^2 + eta ||b||_1.
inline Vector lasso_fista(const Matrix& X, const Vector& y, double eta, int iters = 20000)
{
    const Index p = X.cols();
    const double L = Eigen::SelfAdjointEigenSolver<Matrix>(X.transpose() * X).eigenvalues().maxCoeff();
    Vector b = Vector::Zero(p), z = b;
    double t = 1.0;
    for (int it = 0; it < iters; ++it) {
        const Vector g = X.transpose() * (X * z - y);
        Vector next = z - g / L;
        for (Index i = 0; i < p; ++i) {
            const double v = next(i);
            next(i) = v > eta / L ? v - eta / L : (v < -eta / L ? v + eta / L : 0.0);
        }
        const double tn = 0.5 * (1.0 + std::sqrt(1.0 + 4.0 * t * t));
        z = next + ((t - 1.0) / tn) * (next - b);
        b = next;
        t = tn;
    }
    return b;
}

inline bool close(double a, double b, double tol)
{
    return std::abs(a - b) <= tol;
}

}  // namespace tltest

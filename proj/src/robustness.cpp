#include "trimlasso/robustness.hpp"

#include "trimlasso/penalties.hpp"

#include <cmath>

namespace trimlasso {

namespace {

template <class... Ts>
struct overloaded : Ts... {
    using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

// Column radius c_i so that sum_i c_i |beta_i| equals the support value.
Vector column_radii(const UncertaintySet& set, const Vector& beta)
{
    const Index p = beta.size();
    Vector c = Vector::Zero(p);
    std::visit(overloaded{
                   [&](const ColumnBounded& s) { c.setConstant(s.mu); },
                   [&](const KColumnBounded& s) {
                       const SortedMagnitudes m = sorted_abs(beta);
                       for (Index pos = 0; pos < s.k; ++pos) c(m.permutation[static_cast<std::size_t>(pos)]) = s.lambda;
                   },
                   [&](const SlopeBall& s) {
                       const SortedMagnitudes m = sorted_abs(beta);
                       for (Index pos = 0; pos < p; ++pos) {
                           c(m.permutation[static_cast<std::size_t>(pos)]) = s.lambda * s.w(pos);
                       }
                   },
               },
               set);
    return c;
}

Matrix aligned(const Vector& direction, const Vector& beta, const Vector& radii, double scale)
{
    Matrix delta = Matrix::Zero(direction.size(), beta.size());
    for (Index i = 0; i < beta.size(); ++i) {
        if (beta(i) == 0.0) continue;
        delta.col(i) = (scale * radii(i) * (beta(i) > 0.0 ? 1.0 : -1.0)) * direction;
    }
    return delta;
}

void check_beta(const ProblemInstance& inst, const Vector& beta)
{
    if (beta.size() != inst.p()) throw InvalidArgument("beta must have length p");
}

}  // namespace

void validate(const UncertaintySet& set, Index p)
{
    std::visit(overloaded{
                   [](const ColumnBounded& s) {
                       if (!(s.mu >= 0.0)) throw InvalidArgument("ColumnBounded mu must be nonnegative");
                   },
                   [p](const KColumnBounded& s) {
                       if (!(s.lambda >= 0.0)) throw InvalidArgument("KColumnBounded lambda must be nonnegative");
                       if (s.k < 0 || s.k > p) throw InvalidArgument("KColumnBounded k out of range");
                   },
                   [p](const SlopeBall& s) {
                       if (!(s.lambda >= 0.0)) throw InvalidArgument("SlopeBall lambda must be nonnegative");
                       if (s.w.size() != p) throw InvalidArgument("SlopeBall w must have length p");
                       for (Index i = 0; i < p; ++i) {
                           if (!(s.w(i) >= 0.0)) throw InvalidArgument("SlopeBall w must be nonnegative");
                           if (i > 0 && s.w(i) > s.w(i - 1)) throw InvalidArgument("SlopeBall w must be nonincreasing");
                       }
                   },
               },
               set);
}

double support_value(const UncertaintySet& set, const Vector& beta)
{
    validate(set, beta.size());
    return std::visit(overloaded{
                          [&](const ColumnBounded& s) { return s.mu * beta.lpNorm<1>(); },
                          [&](const KColumnBounded& s) { return s.lambda * top_k_sum(beta, s.k); },
                          [&](const SlopeBall& s) {
                              return s.lambda * sorted_abs(beta).values.dot(s.w);
                          },
                      },
                      set);
}

double perturbed_residual_norm(const ProblemInstance& inst, const Vector& beta, const Matrix& delta)
{
    check_beta(inst, beta);
    if (delta.rows() != inst.n() || delta.cols() != inst.p()) throw InvalidArgument("perturbation must be n x p");
    return (inst.y() - (inst.X() + delta) * beta).norm();
}

double min_adversary_value(const ProblemInstance& inst, const Vector& beta, const UncertaintySet& set)
{
    check_beta(inst, beta);
    return std::max(0.0, (inst.y() - inst.X() * beta).norm() - support_value(set, beta));
}

double max_adversary_value(const ProblemInstance& inst, const Vector& beta, const UncertaintySet& set)
{
    check_beta(inst, beta);
    return (inst.y() - inst.X() * beta).norm() + support_value(set, beta);
}

Matrix min_adversary_witness(const ProblemInstance& inst, const Vector& beta, const UncertaintySet& set)
{
    check_beta(inst, beta);
    const Vector r = inst.y() - inst.X() * beta;
    const double rn = r.norm();
    const double rho = support_value(set, beta);
    if (rn == 0.0 || rho == 0.0) return Matrix::Zero(inst.n(), inst.p());
    return aligned(r / rn, beta, column_radii(set, beta), std::min(1.0, rn / rho));
}

Matrix max_adversary_witness(const ProblemInstance& inst, const Vector& beta, const UncertaintySet& set)
{
    check_beta(inst, beta);
    const Vector r = inst.y() - inst.X() * beta;
    const double rn = r.norm();
    validate(set, beta.size());
    Vector u = Vector::Zero(inst.n());
    if (rn == 0.0) u(0) = 1.0;
    else u = r / rn;
    return aligned(u, beta, column_radii(set, beta), -1.0);
}

bool membership(const UncertaintySet& set, const Matrix& delta, double tol)
{
    validate(set, delta.cols());
    const Vector norms = delta.colwise().norm().transpose();
    return std::visit(overloaded{
                          [&](const ColumnBounded& s) { return (norms.array() <= s.mu + tol).all(); },
                          [&](const KColumnBounded& s) {
                              const Index active = (norms.array() > tol).count();
                              return active <= s.k && (norms.array() <= s.lambda + tol).all();
                          },
                          [&](const SlopeBall& s) {
                              const Vector nu = sorted_abs(norms).values;
                              return (nu.array() <= s.lambda * s.w.array() + tol).all();
                          },
                      },
                      set);
}

Matrix sample_member(const UncertaintySet& set, Index n, Index p, GaussianSource& rng)
{
    validate(set, p);
    Matrix delta = Matrix::Zero(n, p);
    const auto fill = [&](Index col, double radius) {
        Vector d(n);
        for (Index i = 0; i < n; ++i) d(i) = rng.normal();
        const double dn = d.norm();
        if (dn > 0.0) delta.col(col) = (radius * rng.uniform() / dn) * d;
    };
    // Fisher-Yates on column indices.
    const auto permutation = [&]() {
        std::vector<Index> perm(static_cast<std::size_t>(p));
        for (Index i = 0; i < p; ++i) perm[static_cast<std::size_t>(i)] = i;
        for (Index i = p - 1; i > 0; --i) {
            const auto j = static_cast<Index>(rng.bits() % static_cast<std::uint64_t>(i + 1));
            std::swap(perm[static_cast<std::size_t>(i)], perm[static_cast<std::size_t>(j)]);
        }
        return perm;
    };
    std::visit(overloaded{
                   [&](const ColumnBounded& s) {
                       for (Index j = 0; j < p; ++j) fill(j, s.mu);
                   },
                   [&](const KColumnBounded& s) {
                       const auto perm = permutation();
                       for (Index j = 0; j < s.k; ++j) fill(perm[static_cast<std::size_t>(j)], s.lambda);
                   },
                   [&](const SlopeBall& s) {
                       const auto perm = permutation();
                       for (Index j = 0; j < p; ++j) fill(perm[static_cast<std::size_t>(j)], s.lambda * s.w(j));
                   },
               },
               set);
    return delta;
}

bool minmin_constraint_check(const ProblemInstance& inst, const Vector& beta, double lambda, Index k)
{
    check_beta(inst, beta);
    return lambda * top_k_sum(beta, k) <= (inst.y() - inst.X() * beta).norm();
}

}  // namespace trimlasso

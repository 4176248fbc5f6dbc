#pragma once

#include "trimlasso/model.hpp"

#include <cmath>
#include <string>
#include <variant>

namespace trimlasso {

// ---------------------------------------------------------------------------
// Sorted-magnitude penalties. All are invariant to sign flips and
// permutations of beta.

/// Sum of the p - k smallest magnitudes of beta.
template <typename Derived>
double trimmed_lasso(const Eigen::MatrixBase<Derived>& beta, Index k)
{
    const Index p = beta.size();
    if (k < 0 || k > p) {
        throw InvalidArgument("trimmed_lasso: k = " + std::to_string(k) + " outside [0, " +
                              std::to_string(p) + "]");
    }
    if (k == 0) return beta.template lpNorm<1>();
    if (k == p) return 0.0;
    const SortedMagnitudes s = sorted_abs(beta);
    return s.values.tail(p - k).sum();
}

/// sum_i x_i |beta_(i)|, with x nondecreasing and nonnegative.
template <typename Derived, typename DerivedX>
double weighted_trimmed(const Eigen::MatrixBase<Derived>& beta, const Eigen::MatrixBase<DerivedX>& x)
{
    if (x.size() != beta.size()) throw InvalidArgument("weighted_trimmed: weight length differs from p");
    for (Index i = 0; i < x.size(); ++i) {
        if (!(x(i) >= 0.0)) throw InvalidArgument("weighted_trimmed: weights must be nonnegative");
        if (i > 0 && x(i) < x(i - 1)) throw InvalidArgument("weighted_trimmed: weights must be nondecreasing");
    }
    return sorted_abs(beta).values.dot(x.template cast<double>());
}

/// SLOPE norm sum_i w_i |beta_(i)|, with w nonincreasing, nonnegative, w_1 > 0.
template <typename Derived, typename DerivedW>
double slope(const Eigen::MatrixBase<Derived>& beta, const Eigen::MatrixBase<DerivedW>& w)
{
    if (w.size() != beta.size()) throw InvalidArgument("slope: weight length differs from p");
    if (w.size() > 0 && !(w(0) > 0.0)) throw InvalidArgument("slope: w_1 must be positive");
    for (Index i = 0; i < w.size(); ++i) {
        if (!(w(i) >= 0.0)) throw InvalidArgument("slope: weights must be nonnegative");
        if (i > 0 && w(i) > w(i - 1)) throw InvalidArgument("slope: weights must be nonincreasing");
    }
    return sorted_abs(beta).values.dot(w.template cast<double>());
}

/// Sum of the k largest magnitudes; equals ||beta||_1 - T_k(beta).
template <typename Derived>
double top_k_sum(const Eigen::MatrixBase<Derived>& beta, Index k)
{
    if (k < 0 || k > beta.size()) throw InvalidArgument("top_k_sum: k out of range");
    return sorted_abs(beta).values.head(k).sum();
}

/// max{0, ||beta||_1 - k}.
template <typename Derived>
double convex_envelope(const Eigen::MatrixBase<Derived>& beta, Index k)
{
    return std::max(0.0, beta.template lpNorm<1>() - static_cast<double>(k));
}

enum class GFunction { AbsoluteValue, HalfSquare };

inline double apply_g(GFunction g, double a)
{
    return g == GFunction::AbsoluteValue ? std::abs(a) : 0.5 * a * a;
}

/// sum_{i > k} g(|beta_(i)|).
template <typename Derived>
double projected_penalty(const Eigen::MatrixBase<Derived>& beta, Index k, GFunction g)
{
    const Index p = beta.size();
    if (k < 0 || k > p) throw InvalidArgument("projected_penalty: k out of range");
    const SortedMagnitudes s = sorted_abs(beta);
    double total = 0.0;
    for (Index i = k; i < p; ++i) total += apply_g(g, s.values(i));
    return total;
}

/// min{mu |b|^(1/gamma), lambda |b|}.
inline double composite_rho(double b, double mu, double gamma, double lambda)
{
    if (!(gamma > 1.0)) throw InvalidArgument("composite_rho: gamma must exceed 1");
    if (!(mu > 0.0) || !(lambda > 0.0)) throw InvalidArgument("composite_rho: mu and lambda must be positive");
    const double a = std::abs(b);
    return std::min(mu * std::pow(a, 1.0 / gamma), lambda * a);
}

// ---------------------------------------------------------------------------
// Separable penalties sum_i rho(|beta_i|; mu, gamma).

struct ClippedLasso { double mu; double gamma; };
struct MCP { double mu; double gamma; };
struct SCAD { double mu; double gamma; };
struct Lq { double mu; double gamma; };
struct LogPenalty { double mu; double gamma; };

double rho(const ClippedLasso& s, double a);
double rho(const MCP& s, double a);
double rho(const SCAD& s, double a);
double rho(const Lq& s, double a);
double rho(const LogPenalty& s, double a);

void check(const ClippedLasso& s);
void check(const MCP& s);
void check(const SCAD& s);
void check(const Lq& s);
void check(const LogPenalty& s);

template <typename Spec, typename Derived>
double separable_penalty(const Eigen::MatrixBase<Derived>& beta, const Spec& spec)
{
    check(spec);
    double total = 0.0;
    for (Index i = 0; i < beta.size(); ++i) total += rho(spec, std::abs(static_cast<double>(beta(i))));
    return total;
}

// ---------------------------------------------------------------------------
// Tagged union over every penalty, with JSON tags.

struct TrimmedLasso { Index k; };
struct WeightedTrimmed { Vector x; };
struct Slope { Vector w; };
struct ProjectedPenalty { Index k; GFunction g; };
struct ConvexEnvelope { Index k; };
struct CompositeRho { double mu; double gamma; double lambda; };

using PenaltySpec = std::variant<TrimmedLasso, WeightedTrimmed, Slope, ClippedLasso, MCP, SCAD, Lq, LogPenalty,
                                 ProjectedPenalty, ConvexEnvelope, CompositeRho>;

/// Throws InvalidArgument on parameter violations (p is the coefficient count).
void validate(const PenaltySpec& spec, Index p);

double evaluate(const PenaltySpec& spec, const Vector& beta);

std::string penalty_tag(const PenaltySpec& spec);
std::string penalty_to_json(const PenaltySpec& spec);
PenaltySpec penalty_from_json(const std::string& text);

}  // namespace trimlasso

#pragma once

#include "trimlasso/model.hpp"

#include <variant>

namespace trimlasso {

/// {D : ||D_i||_2 <= mu for every column i}
struct ColumnBounded {
    double mu;
};

/// {D : at most k nonzero columns, each with ||D_i||_2 <= lambda}
struct KColumnBounded {
    Index k;
    double lambda;
};

/// {D : sorted column norms nu(D) <= lambda w}, w nonincreasing
struct SlopeBall {
    Vector w;
    double lambda;
};

using UncertaintySet = std::variant<ColumnBounded, KColumnBounded, SlopeBall>;

void validate(const UncertaintySet& set, Index p);

/// max over D in the set of ||D beta||_2.
double support_value(const UncertaintySet& set, const Vector& beta);

/// ||y - (X + D) beta||_2.
double perturbed_residual_norm(const ProblemInstance& inst, const Vector& beta, const Matrix& delta);

/// min over the set of ||y - (X + D) beta||_2 = (||y - X beta|| - support_value)_+.
double min_adversary_value(const ProblemInstance& inst, const Vector& beta, const UncertaintySet& set);

/// max over the set of ||y - (X + D) beta||_2 = ||y - X beta|| + support_value.
double max_adversary_value(const ProblemInstance& inst, const Vector& beta, const UncertaintySet& set);

/// Members of the set attaining the two values above. Every column is a
/// multiple of the residual direction.
Matrix min_adversary_witness(const ProblemInstance& inst, const Vector& beta, const UncertaintySet& set);
Matrix max_adversary_witness(const ProblemInstance& inst, const Vector& beta, const UncertaintySet& set);

bool membership(const UncertaintySet& set, const Matrix& delta, double tol = 1e-12);

/// Random member: uniform column directions, radii uniform up to the
/// column's allowance (k random columns for KColumnBounded, a random
/// assignment of the weights to columns for SlopeBall).
Matrix sample_member(const UncertaintySet& set, Index n, Index p, GaussianSource& rng);

/// lambda * (sum of the k largest |beta_i|) <= ||y - X beta||_2.
bool minmin_constraint_check(const ProblemInstance& inst, const Vector& beta, double lambda, Index k);

}  // namespace trimlasso

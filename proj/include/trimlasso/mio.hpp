#pragma once

#include "trimlasso/model.hpp"

#include <string>
#include <vector>

namespace trimlasso {

/**
 * Big-M mixed-integer model of the trimmed objective.
 *
 * Variables, in this order: b1..bp (free), z1..zp (binary, 1 = trimmed),
 * a1..ap (>= 0, trimmed magnitudes), t1..tp (>= 0, split of |b|).
 *
 *   min 1/2||y - X b||^2 + eta sum t + lambda sum a
 *   s.t. sum z = p - k
 *        a_i - b_i - M z_i >= -M
 *        a_i + b_i - M z_i >= -M
 *        t_i - b_i >= 0
 *        t_i + b_i >= 0
 *
 * Text format (one item per line, '#' starts a comment line):
 *
 *   VARIABLES <count>
 *   <name> ...                      one name per line
 *   OBJECTIVE
 *   constant <value>
 *   linear <var> <coef>
 *   quadratic <var> <var> <coef>    coef * var1 * var2
 *   BOUNDS
 *   <var> <lower> <upper>           -inf / inf allowed
 *   CONSTRAINTS
 *   <name>: <coef> <var> ... <sense> <rhs>   sense is =, >= or <=
 *   BINARIES
 *   <var> ...
 *   END
 */
struct MioTerm {
    Index var;
    double coef;
};

struct MioQuadTerm {
    Index var1;
    Index var2;
    double coef;
};

enum class Sense { Equal, Greater, Less };

struct MioConstraint {
    std::string name;
    std::vector<MioTerm> terms;
    Sense sense = Sense::Equal;
    double rhs = 0.0;
};

struct MioModel {
    std::vector<std::string> variables;
    double constant = 0.0;
    std::vector<MioTerm> linear;
    std::vector<MioQuadTerm> quadratic;
    std::vector<double> lower;
    std::vector<double> upper;
    std::vector<MioConstraint> constraints;
    std::vector<Index> binaries;

    Index index_of(const std::string& name) const;
};

MioModel build_mio(const ProblemInstance& inst, const TrimmedParams& params, double big_m);
std::string write_mio(const MioModel& model);
MioModel parse_mio(const std::string& text);

/// build_mio followed by write_mio.
std::string export_mio(const ProblemInstance& inst, const TrimmedParams& params, double big_m);

double mio_objective(const MioModel& model, const Vector& x);

/// Largest violation over bounds, constraints and integrality (0 when feasible).
double mio_max_violation(const MioModel& model, const Vector& x);

/// (beta, z, a, t) with z marking the p - k smallest magnitudes of beta,
/// a = |beta| on those coordinates and t = |beta|.
Vector mio_embed(const TrimmedParams& params, const Vector& beta);

}  // namespace trimlasso

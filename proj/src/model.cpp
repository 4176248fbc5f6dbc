#include "trimlasso/model.hpp"

#include "trimlasso/penalties.hpp"

#include <cmath>
#include <numbers>

namespace trimlasso {

ProblemInstance::ProblemInstance(Vector y, Matrix X) : y_(std::move(y)), X_(std::move(X))
{
    if (X_.rows() < 1 || X_.cols() < 1) {
        throw InvalidArgument("instance needs n >= 1 and p >= 1");
    }
    if (y_.size() != X_.rows()) {
        throw InvalidArgument("y has " + std::to_string(y_.size()) + " entries but X has " +
                              std::to_string(X_.rows()) + " rows");
    }
    if (!y_.allFinite() || !X_.allFinite()) {
        throw InvalidArgument("instance contains non-finite entries");
    }
    gram_ = X_.transpose() * X_;
    xty_ = X_.transpose() * y_;
    yy_ = y_.squaredNorm();
}

void TrimmedParams::validate(Index p) const
{
    if (!(lambda >= 0.0) || !std::isfinite(lambda)) throw InvalidArgument("lambda must be finite and >= 0");
    if (!(eta >= 0.0) || !std::isfinite(eta)) throw InvalidArgument("eta must be finite and >= 0");
    if (k < 0 || k > p) {
        throw InvalidArgument("k = " + std::to_string(k) + " outside [0, " + std::to_string(p) + "]");
    }
}

std::string to_string(SolveStatus s)
{
    switch (s) {
    case SolveStatus::Converged: return "converged";
    case SolveStatus::IterationLimit: return "iteration_limit";
    case SolveStatus::Exact: return "exact";
    }
    return "unknown";
}

double least_squares_loss(const ProblemInstance& inst, const Vector& beta)
{
    if (beta.size() != inst.p()) {
        throw InvalidArgument("beta has " + std::to_string(beta.size()) + " entries, expected " +
                              std::to_string(inst.p()));
    }
    return 0.5 * (inst.y() - inst.X() * beta).squaredNorm();
}

double objective(const ProblemInstance& inst, const TrimmedParams& params, const Vector& beta)
{
    params.validate(inst.p());
    double f = least_squares_loss(inst, beta);
    if (params.lambda != 0.0) f += params.lambda * trimmed_lasso(beta, params.k);
    if (params.eta != 0.0) f += params.eta * beta.lpNorm<1>();
    return f;
}

double lambda_bar(const ProblemInstance& inst)
{
    return inst.y().norm() * inst.X().rowwise().norm().maxCoeff();
}

Vector snap_zeros(const Vector& beta, double threshold)
{
    return beta.unaryExpr([threshold](double v) { return std::abs(v) <= threshold ? 0.0 : v; });
}

Index count_nonzeros(const Vector& beta, double threshold)
{
    return (beta.array().abs() > threshold).count();
}

double GaussianSource::uniform()
{
    // 53 random bits, shifted off zero.
    return (static_cast<double>(engine_() >> 11) + 0.5) * 0x1.0p-53;
}

double GaussianSource::normal()
{
    if (has_spare_) {
        has_spare_ = false;
        return spare_;
    }
    const double u1 = uniform();
    const double u2 = uniform();
    const double radius = std::sqrt(-2.0 * std::log(u1));
    const double angle = 2.0 * std::numbers::pi * u2;
    spare_ = radius * std::sin(angle);
    has_spare_ = true;
    return radius * std::cos(angle);
}

Vector default_beta_true(Index p)
{
    Vector b = Vector::Zero(p);
    b.head(std::min<Index>(10, p)).setOnes();
    return b;
}

Matrix toeplitz_covariance(Index p, double corr)
{
    Matrix sigma(p, p);
    for (Index i = 0; i < p; ++i) {
        for (Index j = 0; j < p; ++j) {
            sigma(i, j) = std::pow(corr, static_cast<double>(std::abs(i - j)));
        }
    }
    return sigma;
}

ProblemInstance generate_instance(const InstanceSpec& spec)
{
    if (spec.n < 1 || spec.p < 1) throw InvalidArgument("generate_instance needs n >= 1 and p >= 1");
    if (!(spec.corr >= 0.0 && spec.corr < 1.0)) throw InvalidArgument("corr must lie in [0, 1)");
    if (!(spec.snr > 0.0)) throw InvalidArgument("snr must be positive");
    const Vector beta_true = spec.beta_true.size() == 0 ? default_beta_true(spec.p) : spec.beta_true;
    if (beta_true.size() != spec.p) throw InvalidArgument("beta_true length differs from p");

    const Matrix sigma = toeplitz_covariance(spec.p, spec.corr);
    const Eigen::LLT<Matrix> llt(sigma);
    const Matrix L = llt.matrixL();

    GaussianSource rng(spec.seed);
    Matrix Z(spec.n, spec.p);
    for (Index i = 0; i < spec.n; ++i) {
        for (Index j = 0; j < spec.p; ++j) Z(i, j) = rng.normal();
    }
    Matrix X = Z * L.transpose();

    Vector y = X * beta_true;
    if (std::isfinite(spec.snr)) {
        const double noise_sd = std::sqrt(beta_true.dot(sigma * beta_true) / spec.snr);
        for (Index i = 0; i < spec.n; ++i) y(i) += noise_sd * rng.normal();
    }
    return ProblemInstance(std::move(y), std::move(X));
}

}  // namespace trimlasso

#pragma once

#include <iosfwd>
#include <vector>

#include "bqr/model.hpp"

namespace bqr {

/// Probabilities are kept this far from 0 and 1 before taking logs.
inline constexpr double kProbabilityFloor = 1e-15;

struct FitReport {
    ModelTag model;
    double log_likelihood = 0.0;
    double aic = 0.0;  // -2 logL + 2k
    double bic = 0.0;  // -2 logL + k ln(n)
    Eigen::Index k = 0;
    Eigen::Index n = 0;

    static FitReport from_log_likelihood(double log_likelihood, Eigen::Index k, Eigen::Index n,
                                         ModelTag model = ModelTag::probit());
};

/// P(y = 1) for linear index x'beta: Phi(index) for probit,
/// 1 - F_AL(-index; 0, 1, p) for quantile p. Clamped to
/// [kProbabilityFloor, 1 - kProbabilityFloor].
double probability_from_index(double index, const ModelTag& model);

double predicted_probability(const Vector& x, const Vector& beta, const ModelTag& model);

/// Conditional log-likelihood of the observed responses at `beta`
/// (normally the posterior mean), with AIC and BIC; k counts every
/// coefficient including the intercept.
FitReport fit_report(const Dataset& data, const Vector& beta, const ModelTag& model);

/// model,log_likelihood,aic,bic,k,n
void write_fit_csv(std::ostream& out, const std::vector<FitReport>& reports);

}  // namespace bqr

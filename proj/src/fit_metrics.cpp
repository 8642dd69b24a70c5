#include "bqr/fit_metrics.hpp"

#include <algorithm>
#include <cmath>
#include <ostream>
#include <string>

#include "bqr/distributions.hpp"
#include "bqr/error.hpp"
#include "bqr/io.hpp"

namespace bqr {

FitReport FitReport::from_log_likelihood(double log_likelihood, Eigen::Index k, Eigen::Index n, ModelTag model) {
    if (k < 1 || n < 1) throw ValidationError("fit report needs k >= 1 and n >= 1");
    FitReport r;
    r.model = model;
    r.log_likelihood = log_likelihood;
    r.k = k;
    r.n = n;
    r.aic = -2.0 * log_likelihood + 2.0 * static_cast<double>(k);
    r.bic = -2.0 * log_likelihood + static_cast<double>(k) * std::log(static_cast<double>(n));
    return r;
}

double probability_from_index(double index, const ModelTag& model) {
    if (std::isnan(index)) throw ValidationError("predicted probability: NaN linear index");
    const double p = model.is_probit() ? normal_cdf(index) : 1.0 - al_cdf(-index, {0.0, 1.0, model.p});
    return std::clamp(p, kProbabilityFloor, 1.0 - kProbabilityFloor);
}

double predicted_probability(const Vector& x, const Vector& beta, const ModelTag& model) {
    if (x.size() != beta.size()) throw ValidationError("covariate and coefficient vectors differ in length");
    return probability_from_index(x.dot(beta), model);
}

FitReport fit_report(const Dataset& data, const Vector& beta, const ModelTag& model) {
    require_valid(data);
    if (beta.size() != data.k()) throw ValidationError("coefficient vector does not match the design");
    const Vector index = data.X * beta;
    double loglik = 0.0;
    for (Eigen::Index i = 0; i < data.n(); ++i) {
        const double prob = probability_from_index(index[i], model);
        loglik += data.y[static_cast<std::size_t>(i)] == 1 ? std::log(prob) : std::log1p(-prob);
    }
    return FitReport::from_log_likelihood(loglik, data.k(), data.n(), model);
}

void write_fit_csv(std::ostream& out, const std::vector<FitReport>& reports) {
    write_csv_row(out, {"model", "log_likelihood", "aic", "bic", "k", "n"});
    for (const auto& r : reports) {
        write_csv_row(out, {r.model.label(), format_fixed(r.log_likelihood, 4), format_fixed(r.aic, 4),
                            format_fixed(r.bic, 4), std::to_string(r.k), std::to_string(r.n)});
    }
}

}  // namespace bqr

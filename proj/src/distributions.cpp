#include "bqr/distributions.hpp"

#include <cmath>
#include <numbers>
#include <string>

#include "bqr/error.hpp"

namespace bqr {

namespace {

void require_finite(double x, const char* what) {
    if (!std::isfinite(x)) {
        throw ValidationError(std::string(what) + ": non-finite argument");
    }
}

}  // namespace

void AlParams::validate() const {
    if (!(scale > 0.0) || !std::isfinite(scale)) {
        throw ValidationError("asymmetric Laplace scale must be positive, got " + std::to_string(scale));
    }
    if (!(p > 0.0 && p < 1.0)) {
        throw ValidationError("quantile must lie in (0, 1), got " + std::to_string(p));
    }
    if (!std::isfinite(location)) {
        throw ValidationError("asymmetric Laplace location must be finite");
    }
}

double check_loss(double u, double p) { return u * (p - (u < 0.0 ? 1.0 : 0.0)); }

double al_pdf(double x, const AlParams& params) {
    params.validate();
    require_finite(x, "al_pdf");
    const double u = (x - params.location) / params.scale;
    return params.p * (1.0 - params.p) / params.scale * std::exp(-check_loss(u, params.p));
}

double al_cdf(double x, const AlParams& params) {
    params.validate();
    if (std::isnan(x)) throw ValidationError("al_cdf: NaN argument");
    if (x == -INFINITY) return 0.0;
    if (x == INFINITY) return 1.0;
    const double p = params.p;
    const double u = (x - params.location) / params.scale;
    if (u <= 0.0) return p * std::exp((1.0 - p) * u);
    return 1.0 - (1.0 - p) * std::exp(-p * u);
}

double normal_pdf(double x) { return std::exp(-0.5 * x * x) / std::sqrt(2.0 * std::numbers::pi); }

double normal_cdf(double x) { return 0.5 * std::erfc(-x / std::numbers::sqrt2); }

namespace detail {

void bad_truncated_normal(double mean, double variance) {
    if (!std::isfinite(mean)) throw ValidationError("sample_truncated_normal: non-finite mean");
    throw ValidationError("truncated normal variance must be positive, got " + std::to_string(variance));
}

void bad_gig(double a, double b) {
    if (!(b > 0.0) || !std::isfinite(b)) {
        throw ValidationError("GIG(0.5, a, b) requires b > 0, got b = " + std::to_string(b));
    }
    throw ValidationError("GIG(0.5, a, b) requires a >= 0, got a = " + std::to_string(a));
}

}  // namespace detail

}  // namespace bqr

#pragma once

#include <cmath>

#include "bqr/rng.hpp"

namespace bqr {

/// Asymmetric Laplace AL(location, scale, p).
struct AlParams {
    double location = 0.0;
    double scale = 1.0;
    double p = 0.5;

    /// Throws ValidationError unless scale > 0 and 0 < p < 1.
    void validate() const;
};

/// Quantile check loss: u * (p - 1{u < 0}).
double check_loss(double u, double p);

double al_pdf(double x, const AlParams& params);
double al_cdf(double x, const AlParams& params);

double normal_pdf(double x);
double normal_cdf(double x);

/// GIG density f(x) ∝ x^(index-1) exp(-(chi/x + psi*x)/2) on x > 0.
struct GigParams {
    double index = 0.5;
    double chi = 0.0;
    double psi = 1.0;
};

enum class TruncationSide { LeftOfZero, RightOfZero };

/// Truncation points further than this many standard deviations into the
/// tail switch to exponential-proposal rejection.
inline constexpr double kTailThreshold = 0.4;

namespace detail {

[[noreturn]] void bad_truncated_normal(double mean, double variance);
[[noreturn]] void bad_gig(double a, double b);

/// Standard normal conditioned on x > lower, returned as x - lower so that
/// callers deep in the tail do not lose precision to cancellation.
inline double standard_normal_excess_above(double lower, Rng& rng) {
    if (lower > kTailThreshold) {
        // Robert (1995): translated exponential proposal with optimal rate.
        const double rate = 0.5 * (lower + std::sqrt(lower * lower + 4.0));
        const double inv_rate = 1.0 / rate;
        for (;;) {
            const double excess = rng.exponential() * inv_rate;
            const double d = lower + excess - rate;
            if (rng.uniform() <= std::exp(-0.5 * d * d)) return excess;
        }
    }
    if (lower > 0.0) {
        // Half-normal rejection, acceptance >= 2 (1 - Phi(0.4)) ~ 0.69.
        for (;;) {
            const double x = std::fabs(rng.normal());
            if (x > lower) return x - lower;
        }
    }
    for (;;) {
        const double x = rng.normal();
        if (x > lower) return x - lower;
    }
}

}  // namespace detail

/// Standard normal truncated to (lower, inf).
inline double sample_standard_normal_above(double lower, Rng& rng) {
    return lower + detail::standard_normal_excess_above(lower, rng);
}

/// Draw from N(mean, sd^2) restricted to (-inf, 0] or (0, inf); sd > 0 is
/// the caller's responsibility.
inline double sample_truncated_normal_sd(double mean, double sd, TruncationSide side, Rng& rng) {
    // Reflect the left-of-zero case: z <= 0  <=>  -z >= 0.
    const double m = side == TruncationSide::RightOfZero ? mean : -mean;
    const double lower = -m / sd;
    for (;;) {
        const double excess = detail::standard_normal_excess_above(lower, rng);
        // m + sd * (lower + excess) equals sd * excess up to rounding.
        const double z = lower > 0.0 ? sd * excess : m + sd * (lower + excess);
        if (side == TruncationSide::RightOfZero) {
            if (z > 0.0) return z;
        } else if (z >= 0.0) {
            return -z;
        }
    }
}

/// Draw from N(mean, variance) restricted to (-inf, 0] or (0, inf).
///
/// Uses exponential-proposal rejection with the optimal rate when the
/// truncation point sits more than kTailThreshold standard deviations into
/// the upper tail, half-normal or plain normal rejection otherwise.
inline double sample_truncated_normal(double mean, double variance, TruncationSide side, Rng& rng) {
    if (!(variance > 0.0) || !std::isfinite(variance) || !std::isfinite(mean)) {
        detail::bad_truncated_normal(mean, variance);
    }
    return sample_truncated_normal_sd(mean, std::sqrt(variance), side, rng);
}

/// GIG(0.5, a, b) draws for a fixed b.
///
/// X ~ GIG(0.5, a, b) <=> 1/X ~ inverse Gaussian(mean sqrt(b/a), shape b).
/// The inverse Gaussian is sampled with the Michael-Schucany-Haas transform,
/// written directly in terms of 1/X and s = sqrt(a/b) so that it stays finite
/// as a -> 0. At a == 0 the target is Gamma(1/2, rate b/2), drawn as
/// chi-square(1) / b.
class GigHalfSampler {
public:
    explicit GigHalfSampler(double b) : b_(b), inv_b_(1.0 / b), inv_sqrt_b_(1.0 / std::sqrt(b)) {
        if (!(b > 0.0) || !std::isfinite(b)) detail::bad_gig(0.0, b);
    }

    double b() const { return b_; }

    double operator()(double a, Rng& rng) const {
        if (!(a >= 0.0) || !std::isfinite(a)) detail::bad_gig(a, b_);
        return from_ratio(std::sqrt(a) * inv_sqrt_b_, rng);
    }

    /// Draw given s = sqrt(a / b) >= 0.
    double from_ratio(double s, Rng& rng) const {
        if (s == 0.0) {
            const double n = rng.normal();
            return n * n * inv_b_;
        }
        for (;;) {
            const double n = rng.normal();
            const double v = n * n;
            // Reciprocal of the smaller MSH root.
            const double x1 = s + 0.5 * inv_b_ * (v + std::sqrt(4.0 * b_ * v * s + v * v));
            const double other = s * s / x1;
            const double x = rng.uniform() * (x1 + s) <= x1 ? x1 : other;
            // s * s / x1 underflows only for absurdly small a; redraw.
            if (x > 0.0) return x;
        }
    }

private:
    double b_;
    double inv_b_;
    double inv_sqrt_b_;
};

/// Draw from GIG(0.5, a, b); requires a >= 0 and b > 0.
inline double sample_gig_half(double a, double b, Rng& rng) { return GigHalfSampler(b)(a, rng); }

}  // namespace bqr

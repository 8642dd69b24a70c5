#pragma once

// Independent reference computations for the test suites. Nothing here calls
// into the library's numerical code.

#include <boost/math/quadrature/exp_sinh.hpp>
#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <boost/math/quadrature/tanh_sinh.hpp>

#include <algorithm>
#include <cmath>
#include <functional>
#include <numbers>
#include <stdexcept>
#include <vector>

namespace oracle {

inline double integrate(const std::function<double(double)>& f, double a, double b) {
    return boost::math::quadrature::gauss_kronrod<double, 61>::integrate(f, a, b, 20, 1e-13);
}

// Integral over (0, inf) of a function that may be singular at 0.
inline double integrate_positive(const std::function<double(double)>& f) {
    boost::math::quadrature::tanh_sinh<double> head;
    boost::math::quadrature::exp_sinh<double> tail;
    return head.integrate(f, 0.0, 1.0, 1e-13) + tail.integrate(f, 1.0, std::numeric_limits<double>::infinity(), 1e-13);
}

// Asymmetric Laplace density with location 0 and scale 1, written from the check loss.
inline double al_density(double u, double p) {
    const double loss = u < 0.0 ? u * (p - 1.0) : u * p;
    return p * (1.0 - p) * std::exp(-loss);
}

// P(U <= x) by quadrature; the density is integrated piecewise on either side of 0.
inline double al_cdf_quadrature(double x, double p) {
    auto f = [p](double u) { return al_density(u, p); };
    const double lo = -60.0 / (1.0 - p);
    if (x <= 0.0) return integrate(f, lo, x);
    return integrate(f, lo, 0.0) + integrate(f, 0.0, x);
}

// Unnormalized GIG(0.5, a, b) density x^{-1/2} exp(-(a/x + b x)/2).
struct GigMoments {
    double mean;
    double second;
    double variance() const { return second - mean * mean; }
};

inline GigMoments gig_half_moments(double a, double b) {
    auto kernel = [a, b](double x, int r) {
        if (x <= 0.0) return 0.0;
        return std::pow(x, r - 0.5) * std::exp(-0.5 * (a / x + b * x));
    };
    const double z = integrate_positive([&](double x) { return kernel(x, 0); });
    const double m1 = integrate_positive([&](double x) { return kernel(x, 1); });
    const double m2 = integrate_positive([&](double x) { return kernel(x, 2); });
    return {m1 / z, m2 / z};
}

// CDF of GIG(0.5, a, b) on a grid of points (increasing).
inline std::vector<double> gig_half_cdf(double a, double b, const std::vector<double>& points) {
    auto kernel = [a, b](double x) { return x <= 0.0 ? 0.0 : std::pow(x, -0.5) * std::exp(-0.5 * (a / x + b * x)); };
    const double z = integrate_positive(kernel);
    boost::math::quadrature::tanh_sinh<double> ts;
    std::vector<double> out;
    for (double x : points) out.push_back(ts.integrate(kernel, 0.0, x, 1e-13) / z);
    return out;
}

inline double phi(double x) { return std::exp(-0.5 * x * x) / std::sqrt(2.0 * std::numbers::pi); }
inline double upper_tail(double x) { return 0.5 * std::erfc(x / std::numbers::sqrt2); }

struct Moments {
    double mean;
    double variance;
};

// N(mu, sd^2) restricted to (0, inf).
inline Moments truncated_normal_right(double mu, double sd) {
    const double alpha = -mu / sd;
    const double lambda = phi(alpha) / upper_tail(alpha);
    return {mu + sd * lambda, sd * sd * (1.0 + alpha * lambda - lambda * lambda)};
}

// N(mu, sd^2) restricted to (-inf, 0]: the negation of the right-truncated reflection.
inline Moments truncated_normal_left(double mu, double sd) {
    const auto m = truncated_normal_right(-mu, sd);
    return {-m.mean, m.variance};
}

// Solves A x = b by Gauss-Jordan elimination with partial pivoting in long double.
using LMatrix = std::vector<std::vector<long double>>;

inline LMatrix invert(LMatrix a) {
    const std::size_t n = a.size();
    LMatrix inv(n, std::vector<long double>(n, 0.0L));
    for (std::size_t i = 0; i < n; ++i) inv[i][i] = 1.0L;
    for (std::size_t c = 0; c < n; ++c) {
        std::size_t pivot = c;
        for (std::size_t r = c + 1; r < n; ++r) {
            if (std::fabs(a[r][c]) > std::fabs(a[pivot][c])) pivot = r;
        }
        if (a[pivot][c] == 0.0L) throw std::runtime_error("singular matrix");
        std::swap(a[c], a[pivot]);
        std::swap(inv[c], inv[pivot]);
        const long double d = a[c][c];
        for (std::size_t j = 0; j < n; ++j) {
            a[c][j] /= d;
            inv[c][j] /= d;
        }
        for (std::size_t r = 0; r < n; ++r) {
            if (r == c || a[r][c] == 0.0L) continue;
            const long double f = a[r][c];
            for (std::size_t j = 0; j < n; ++j) {
                a[r][j] -= f * a[c][j];
                inv[r][j] -= f * inv[c][j];
            }
        }
    }
    return inv;
}

inline std::vector<long double> multiply(const LMatrix& a, const std::vector<long double>& x) {
    std::vector<long double> out(a.size(), 0.0L);
    for (std::size_t i = 0; i < a.size(); ++i) {
        for (std::size_t j = 0; j < x.size(); ++j) out[i] += a[i][j] * x[j];
    }
    return out;
}

// Kolmogorov distance between the empirical CDF of `draws` and `cdf`.
template <class Cdf>
double sup_distance(std::vector<double> draws, Cdf&& cdf) {
    std::sort(draws.begin(), draws.end());
    const double n = static_cast<double>(draws.size());
    double d = 0.0;
    for (std::size_t i = 0; i < draws.size(); ++i) {
        const double f = cdf(draws[i]);
        d = std::max({d, (static_cast<double>(i) + 1.0) / n - f, f - static_cast<double>(i) / n});
    }
    return d;
}

}  // namespace oracle

#include "bqr/gibbs_bqr.hpp"

#include <cmath>
#include <string>

#include "bqr/distributions.hpp"
#include "bqr/error.hpp"

namespace bqr {

QuantileConstants QuantileConstants::for_quantile(double p) {
    if (!(p > 0.0 && p < 1.0)) {
        throw ValidationError("quantile must lie in (0, 1), got " + std::to_string(p));
    }
    const double v = p * (1.0 - p);
    const double tau_sq = 2.0 / v;
    return {p, (1.0 - 2.0 * p) / v, std::sqrt(tau_sq), tau_sq};
}

double draw_al_mixture(const QuantileConstants& consts, Rng& rng) {
    const double w = rng.exponential();
    return consts.theta * w + consts.tau * std::sqrt(w) * rng.normal();
}

PriorPrecision PriorPrecision::from(const PriorSpec& prior) {
    PriorPrecision out;
    out.precision = spd_inverse(prior.B0, "prior covariance");
    out.precision_mean = out.precision * prior.beta0;
    return out;
}

namespace {

void check_state(const ChainState& state, const Dataset& data) {
    if (state.beta.size() != data.k() || state.z.size() != data.n() || state.w.size() != data.n()) {
        throw ValidationError("chain state dimensions do not match the dataset");
    }
}

// Precision sum x x' / (tau^2 w) + B0^-1 and shift sum x (z - theta w) / (tau^2 w) + B0^-1 beta0.
void conditional_canonical(const ChainState& state, const Dataset& data, const PriorPrecision& prior,
                           const QuantileConstants& consts, Matrix& precision, Vector& shift) {
    check_state(state, data);
    if ((state.w.array() <= 0.0).any()) throw NumericalError("mixture weights must be positive");
    const Vector weight = (consts.tau_sq * state.w.array()).inverse().matrix();
    const Matrix weighted_x = data.X.array().colwise() * weight.array();
    precision = prior.precision + data.X.transpose() * weighted_x;
    precision = 0.5 * (precision + precision.transpose()).eval();
    shift = weighted_x.transpose() * (state.z - consts.theta * state.w) + prior.precision_mean;
}

TruncationSide side_for(int y) { return y == 1 ? TruncationSide::RightOfZero : TruncationSide::LeftOfZero; }

}  // namespace

NormalConditional beta_conditional(const ChainState& state, const Dataset& data, const PriorSpec& prior,
                                   const QuantileConstants& consts) {
    Matrix precision;
    Vector shift;
    conditional_canonical(state, data, PriorPrecision::from(prior), consts, precision, shift);
    NormalConditional out;
    out.covariance = spd_inverse(precision, "beta precision");
    out.mean = spd_solve(precision, shift, "beta precision");
    return out;
}

Vector draw_beta(const ChainState& state, const Dataset& data, const PriorPrecision& prior,
                 const QuantileConstants& consts, Rng& rng) {
    Matrix precision;
    Vector shift;
    conditional_canonical(state, data, prior, consts, precision, shift);
    return sample_mvn_canonical(precision, shift, rng, "beta precision");
}

Vector draw_beta(const ChainState& state, const Dataset& data, const PriorSpec& prior,
                 const QuantileConstants& consts, Rng& rng) {
    return draw_beta(state, data, PriorPrecision::from(prior), consts, rng);
}

namespace {

// GIG(0.5, r^2 / tau^2, b) given r = z_i - x_i'beta, redrawn while tau^2 w < 1e-300.
double draw_weight(double residual, const GigHalfSampler& gig, double ratio_scale, double tau_sq, Rng& rng) {
    const double s = std::fabs(residual) * ratio_scale;
    double w;
    do {
        w = gig.from_ratio(s, rng);
    } while (tau_sq * w < 1e-300);
    return w;
}

GigHalfSampler weight_sampler(const QuantileConstants& consts) {
    return GigHalfSampler(consts.theta * consts.theta / consts.tau_sq + 2.0);
}

}  // namespace

Vector draw_w(const ChainState& state, const Dataset& data, const QuantileConstants& consts, Rng& rng) {
    check_state(state, data);
    const Vector index = data.X * state.beta;
    const auto gig = weight_sampler(consts);
    // sqrt(a / b) = |r| / (tau sqrt(b))
    const double ratio_scale = 1.0 / (consts.tau * std::sqrt(gig.b()));
    Vector w(data.n());
    for (Eigen::Index i = 0; i < data.n(); ++i) {
        w[i] = draw_weight(state.z[i] - index[i], gig, ratio_scale, consts.tau_sq, rng);
    }
    return w;
}

Vector draw_z(const ChainState& state, const Dataset& data, const QuantileConstants& consts, Rng& rng) {
    check_state(state, data);
    if ((state.w.array() <= 0.0).any()) throw NumericalError("mixture weights must be positive");
    const Vector index = data.X * state.beta;
    Vector z(data.n());
    for (Eigen::Index i = 0; i < data.n(); ++i) {
        const double wi = state.w[i];
        z[i] = sample_truncated_normal_sd(index[i] + consts.theta * wi, consts.tau * std::sqrt(wi),
                                          side_for(data.y[static_cast<std::size_t>(i)]), rng);
    }
    return z;
}

ChainState initial_state(const Dataset& data, const QuantileConstants& consts, Rng& rng) {
    ChainState state{Vector::Zero(data.k()), Vector::Zero(data.n()), Vector::Ones(data.n())};
    state.z = draw_z(state, data, consts, rng);
    return state;
}

DrawsStore run_chain(const Dataset& data, const PriorSpec& prior, const SamplerConfig& config) {
    require_valid(data);
    config.validate();
    prior.validate(data.k());

    const auto consts = QuantileConstants::for_quantile(config.quantile);
    const auto prior_precision = PriorPrecision::from(prior);
    Rng rng(config.seed);

    DrawsStore store;
    store.model = ModelTag::quantile(config.quantile);
    store.config = config;
    store.column_names = data.column_names;
    store.beta.resize(config.retained(), data.k());
    if (config.store_latent_traces) {
        store.z_trace = Matrix(config.retained(), data.n());
        store.w_trace = Matrix(config.retained(), data.n());
    }

    ChainState state = initial_state(data, consts, rng);
    const auto gig = weight_sampler(consts);
    const double ratio_scale = 1.0 / (consts.tau * std::sqrt(gig.b()));
    Vector index(data.n());
    for (int iter = 0; iter < config.total_iterations; ++iter) {
        try {
            // Blocks 3 and 2 fused per observation.
            index.noalias() = data.X * state.beta;
            for (Eigen::Index i = 0; i < data.n(); ++i) {
                const double wi = state.w[i];
                const double zi = sample_truncated_normal_sd(index[i] + consts.theta * wi, consts.tau * std::sqrt(wi),
                                                             side_for(data.y[static_cast<std::size_t>(i)]), rng);
                state.z[i] = zi;
                state.w[i] = draw_weight(zi - index[i], gig, ratio_scale, consts.tau_sq, rng);
            }
            state.beta = draw_beta(state, data, prior_precision, consts, rng);
        } catch (const std::exception& e) {
            throw NumericalError("quantile " + std::to_string(config.quantile) + " chain, iteration " +
                                 std::to_string(iter) + ": " + e.what());
        }
        if (!state.beta.allFinite()) {
            throw NumericalError("quantile chain produced a non-finite draw at iteration " + std::to_string(iter));
        }
        if (iter >= config.burn_in) {
            const Eigen::Index row = iter - config.burn_in;
            store.beta.row(row) = state.beta.transpose();
            if (config.store_latent_traces) {
                store.z_trace->row(row) = state.z.transpose();
                store.w_trace->row(row) = state.w.transpose();
            }
        }
    }
    return store;
}

}  // namespace bqr

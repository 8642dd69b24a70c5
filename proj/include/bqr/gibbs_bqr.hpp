#pragma once

#include "bqr/model.hpp"
#include "bqr/rng.hpp"

namespace bqr {

/// Constants of the normal-exponential mixture for AL(0, 1, p):
/// eps = theta * w + tau * sqrt(w) * u with w ~ Exp(1), u ~ N(0, 1).
struct QuantileConstants {
    double p;
    double theta;   // (1 - 2p) / (p (1 - p))
    double tau;     // sqrt(2 / (p (1 - p)))
    double tau_sq;  // 2 / (p (1 - p))

    static QuantileConstants for_quantile(double p);
};

/// One AL(0, 1, p) draw through the mixture.
double draw_al_mixture(const QuantileConstants& consts, Rng& rng);

/// Current values of every block of the quantile sampler.
struct ChainState {
    Vector beta;
    Vector z;  // latent utilities; z_i > 0 iff y_i == 1
    Vector w;  // mixture weights, all positive
};

/// Prior in precision form, computed once per chain.
struct PriorPrecision {
    Matrix precision;         // B0^-1
    Vector precision_mean;    // B0^-1 beta0

    static PriorPrecision from(const PriorSpec& prior);
};

/// Gaussian full conditional of beta in moment form.
struct NormalConditional {
    Vector mean;
    Matrix covariance;
};

/// Analytic target of draw_beta: N(beta~, B~) with
/// B~^-1 = sum x x' / (tau^2 w) + B0^-1 and
/// beta~ = B~ (sum x (z - theta w) / (tau^2 w) + B0^-1 beta0).
/// Forms B~ explicitly; meant for checking, not for sampling.
NormalConditional beta_conditional(const ChainState& state, const Dataset& data, const PriorSpec& prior,
                                   const QuantileConstants& consts);

/// Block 1: beta | z, w, via the Cholesky factor of B~^-1.
Vector draw_beta(const ChainState& state, const Dataset& data, const PriorPrecision& prior,
                 const QuantileConstants& consts, Rng& rng);
Vector draw_beta(const ChainState& state, const Dataset& data, const PriorSpec& prior,
                 const QuantileConstants& consts, Rng& rng);

/// Block 2: w_i | beta, z_i ~ GIG(0.5, ((z_i - x_i'beta)/tau)^2, theta^2/tau^2 + 2).
/// A draw with tau^2 w_i below 1e-300 is discarded and redrawn.
Vector draw_w(const ChainState& state, const Dataset& data, const QuantileConstants& consts, Rng& rng);

/// Block 3: z_i | y_i, beta, w_i ~ N(x_i'beta + theta w_i, tau^2 w_i) truncated by y_i.
Vector draw_z(const ChainState& state, const Dataset& data, const QuantileConstants& consts, Rng& rng);

/// beta = 0, w = 1, z drawn from block 3 given those.
ChainState initial_state(const Dataset& data, const QuantileConstants& consts, Rng& rng);

/// Runs burn_in + retained sweeps of (z, w, beta) and keeps the retained beta
/// draws. Identical inputs give identical output.
DrawsStore run_chain(const Dataset& data, const PriorSpec& prior, const SamplerConfig& config);

}  // namespace bqr

#pragma once

#include "bqr/gibbs_bqr.hpp"
#include "bqr/model.hpp"
#include "bqr/rng.hpp"

namespace bqr {

// Data augmentation: z_i | beta ~ N(x_i'beta, 1) truncated by y_i,
// beta | z ~ N(B~ (X'z + B0^-1 beta0), B~) with B~^-1 = X'X + B0^-1.

/// Moment form of beta | z for the probit sampler.
NormalConditional probit_beta_conditional(const Vector& z, const Dataset& data, const PriorSpec& prior);

Vector draw_probit_z(const Vector& beta, const Dataset& data, Rng& rng);

DrawsStore run_probit_chain(const Dataset& data, const PriorSpec& prior, const SamplerConfig& config);

}  // namespace bqr

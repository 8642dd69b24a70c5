#include "bqr/gibbs_probit.hpp"

#include <string>

#include "bqr/distributions.hpp"
#include "bqr/error.hpp"

namespace bqr {

NormalConditional probit_beta_conditional(const Vector& z, const Dataset& data, const PriorSpec& prior) {
    if (z.size() != data.n()) throw ValidationError("latent vector length does not match the dataset");
    const auto pp = PriorPrecision::from(prior);
    const Matrix precision = data.X.transpose() * data.X + pp.precision;
    const Vector shift = data.X.transpose() * z + pp.precision_mean;
    return {spd_solve(precision, shift, "probit beta precision"), spd_inverse(precision, "probit beta precision")};
}

Vector draw_probit_z(const Vector& beta, const Dataset& data, Rng& rng) {
    const Vector index = data.X * beta;
    Vector z(data.n());
    for (Eigen::Index i = 0; i < data.n(); ++i) {
        const auto side = data.y[static_cast<std::size_t>(i)] == 1 ? TruncationSide::RightOfZero
                                                                    : TruncationSide::LeftOfZero;
        z[i] = sample_truncated_normal(index[i], 1.0, side, rng);
    }
    return z;
}

DrawsStore run_probit_chain(const Dataset& data, const PriorSpec& prior, const SamplerConfig& config) {
    require_valid(data);
    config.validate(false);
    prior.validate(data.k());

    const auto pp = PriorPrecision::from(prior);
    Matrix precision = data.X.transpose() * data.X + pp.precision;
    precision = 0.5 * (precision + precision.transpose()).eval();
    Rng rng(config.seed);

    DrawsStore store;
    store.model = ModelTag::probit();
    store.config = config;
    store.column_names = data.column_names;
    store.beta.resize(config.retained(), data.k());
    if (config.store_latent_traces) store.z_trace = Matrix(config.retained(), data.n());

    Vector beta = Vector::Zero(data.k());
    Vector z = draw_probit_z(beta, data, rng);
    for (int iter = 0; iter < config.total_iterations; ++iter) {
        try {
            z = draw_probit_z(beta, data, rng);
            const Vector shift = data.X.transpose() * z + pp.precision_mean;
            beta = sample_mvn_canonical(precision, shift, rng, "probit beta precision");
        } catch (const std::exception& e) {
            throw NumericalError("probit chain, iteration " + std::to_string(iter) + ": " + e.what());
        }
        if (iter >= config.burn_in) {
            const Eigen::Index row = iter - config.burn_in;
            store.beta.row(row) = beta.transpose();
            if (config.store_latent_traces) store.z_trace->row(row) = z.transpose();
        }
    }
    return store;
}

}  // namespace bqr

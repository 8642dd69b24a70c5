#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "bqr/linalg.hpp"

namespace bqr {

/// Binary responses with their design matrix. Rows are observations.
struct Dataset {
    std::vector<int> y;
    Matrix X;
    std::vector<std::string> column_names;

    Eigen::Index n() const { return X.rows(); }
    Eigen::Index k() const { return X.cols(); }

    /// Index of the named column; throws ValidationError when absent.
    Eigen::Index column(const std::string& name) const;
};

struct ValidationReport {
    std::vector<std::string> errors;
    std::vector<std::string> warnings;

    bool ok() const { return errors.empty(); }
};

/// Collects every violation without touching the data. A numerically
/// singular X'X is reported as a warning only: the proper prior keeps the
/// posterior proper.
ValidationReport validate_dataset(const Dataset& data);

/// Throws ValidationError carrying all errors of validate_dataset.
void require_valid(const Dataset& data);

/// Normal prior beta ~ N(beta0, B0).
struct PriorSpec {
    Vector beta0;
    Matrix B0;

    /// beta0 = 0, B0 = variance * I.
    static PriorSpec diffuse(Eigen::Index k, double variance = 1000.0);

    void validate(Eigen::Index k) const;
};

struct SamplerConfig {
    double quantile = 0.5;
    int total_iterations = 25000;
    int burn_in = 5000;
    std::uint64_t seed = 0;
    bool store_latent_traces = false;

    int retained() const { return total_iterations - burn_in; }

    /// Checks iteration counts; `check_quantile` is false for the probit sampler.
    void validate(bool check_quantile = true) const;
};

/// Which link generated a chain: probit or quantile p.
struct ModelTag {
    enum class Family { Probit, Quantile };

    Family family = Family::Probit;
    double p = 0.5;

    static ModelTag probit() { return {Family::Probit, 0.5}; }
    static ModelTag quantile(double p) { return {Family::Quantile, p}; }

    bool is_probit() const { return family == Family::Probit; }

    /// "probit" or "q0.25" style label, used for directory names and table headers.
    std::string label() const;

    /// Inverse of label().
    static ModelTag parse(const std::string& label);

    friend bool operator==(const ModelTag&, const ModelTag&) = default;
};

/// Retained (post burn-in) draws of one chain.
struct DrawsStore {
    ModelTag model;
    SamplerConfig config;
    std::vector<std::string> column_names;
    Matrix beta;  // retained x k

    // Present only with config.store_latent_traces; retained x n.
    std::optional<Matrix> z_trace;
    std::optional<Matrix> w_trace;

    Eigen::Index retained() const { return beta.rows(); }

    Vector posterior_mean() const;
};

}  // namespace bqr

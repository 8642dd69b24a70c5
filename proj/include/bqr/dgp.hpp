#pragma once

#include <cstdint>
#include <optional>

#include "bqr/io.hpp"
#include "bqr/model.hpp"

namespace bqr {

/// Forward simulation of the binary latent model z = x'beta + e, y = 1{z > 0}.
struct DgpSpec {
    Eigen::Index n = 1000;
    Vector beta;                     // beta[0] multiplies the intercept
    std::optional<double> quantile;  // AL(0, 1, p) errors; empty means probit (standard normal)
    std::optional<Matrix> covariance;  // of the k - 1 non-constant columns; identity when empty
    std::uint64_t seed = 0;

    void validate() const;
};

struct Simulation {
    Dataset data;   // columns Intercept, x1, ..., x{k-1}
    Vector latent;  // z
    Vector errors;  // z - x'beta
};

Simulation generate(const DgpSpec& spec);

/// Coefficients used by simulate_survey when none are given, one per design
/// column of survey_manifest().
Vector default_survey_beta();

/// Raw survey extract whose opinion column follows the latent model on the
/// encoded design. A share of rows get a refused response or a missing
/// income so the ingestion path exercises its exclusions.
struct SurveySimulation {
    Eigen::Index n = 2000;
    Vector beta = default_survey_beta();
    std::optional<double> quantile;
    double refused_share = 0.0;
    double missing_share = 0.0;
    std::uint64_t seed = 0;
};

CsvTable simulate_survey(const SurveySimulation& spec);

}  // namespace bqr

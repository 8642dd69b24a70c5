#pragma once

#include <filesystem>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "bqr/model.hpp"

namespace bqr {

inline constexpr int kDefaultBatchCount = 50;

struct CoefficientSummary {
    std::string name;
    double mean = 0.0;
    double std = 0.0;
    // Empty when the chain is too short for the batch count or has no spread.
    std::optional<double> inefficiency;
    double lower95 = 0.0;
    double upper95 = 0.0;
};

struct PosteriorSummary {
    ModelTag model;
    Eigen::Index retained = 0;
    std::vector<CoefficientSummary> coefficients;
};

/// Column-wise mean, sample standard deviation (M - 1), batch-means
/// inefficiency factor and equal-tailed 95% interval of the retained draws.
PosteriorSummary summarize(const DrawsStore& draws, int batch_count = kDefaultBatchCount);

/// Batch-means inefficiency factor m * Var(batch means) / Var(draws) with
/// batch size m = floor(M / batch_count); trailing draws that do not fill a
/// batch are dropped. Throws ValidationError for batch_count < 2 or
/// M < 2 * batch_count, NumericalError for a chain with zero variance.
double inefficiency_factor(std::span<const double> column, int batch_count = kDefaultBatchCount);

/// Sample quantile with linear interpolation between order statistics.
double sample_quantile(std::span<const double> values, double prob);

/// Equal-tailed interval holding `level` of the draws.
std::pair<double, double> credible_interval(std::span<const double> values, double level = 0.95);

// Chain directory layout: draws.csv (header of coefficient names, one row
// per retained iteration) and chain.txt (model tag and sampler settings).

void write_draws(const std::filesystem::path& dir, const DrawsStore& draws);
DrawsStore read_draws(const std::filesystem::path& dir);

/// name,mean,std,inefficiency,lower95,upper95
void write_summary_csv(std::ostream& out, const PosteriorSummary& summary);

/// Rows are coefficients; for each model a mean and std column, models in
/// the given order.
void write_posterior_table(std::ostream& out, const std::vector<PosteriorSummary>& summaries);

}  // namespace bqr

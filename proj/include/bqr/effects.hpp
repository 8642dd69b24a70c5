#pragma once

#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

#include "bqr/model.hpp"

namespace bqr {

/// Column set to a fixed value in a counterfactual profile.
struct Assignment {
    std::string column;
    double value = 0.0;
};

/// Column recomputed from another after every counterfactual change.
struct DerivedColumn {
    enum class Rule { Square };

    std::string column;
    std::string source;
    Rule rule = Rule::Square;
};

/// How one covariate is changed and over which observations the change is averaged.
struct EffectSpec {
    enum class Kind { Switch, Delta };
    enum class Averaging { OverDraws, PosteriorMean };

    std::string name;
    Kind kind = Kind::Switch;

    // Switch: every listed column is set to its value in the respective profile.
    std::vector<Assignment> base;
    std::vector<Assignment> target;

    // Delta: base keeps the observed row, target adds `delta` to `column`.
    std::string column;
    double delta = 0.1;

    // Observations whose columns equal all of these values; empty means the full sample.
    std::vector<Assignment> sample;

    std::vector<DerivedColumn> derived;

    // Dummy groups whose members must have at most one active entry in
    // every counterfactual row (the omitted base accounts for "none").
    std::vector<std::vector<std::string>> exclusive_groups;

    Averaging averaging = Averaging::OverDraws;
};

/// Average discrete change in P(y = 1) from the base to the target profile,
/// over the evaluation sample and over every retained draw (or at the
/// posterior mean under Averaging::PosteriorMean). Throws ValidationError for
/// unknown columns, an empty evaluation sample, or a counterfactual that
/// activates two members of an exclusive group.
double covariate_effect(const DrawsStore& draws, const Dataset& data, const EffectSpec& spec);

/// Row indices of the evaluation sample.
std::vector<Eigen::Index> evaluation_sample(const Dataset& data, const EffectSpec& spec);

/// Base and target design rows for the evaluation sample (derived columns recomputed).
std::pair<Matrix, Matrix> counterfactual_designs(const Dataset& data, const EffectSpec& spec);

/// Swaps base and target; the effect changes sign.
EffectSpec reversed(EffectSpec spec);

/// Parses the JSON effect-spec file format (see README).
std::vector<EffectSpec> parse_effect_specs(std::string_view json_text);
std::vector<EffectSpec> load_effect_specs(const std::filesystem::path& path);

/// Effect per covariate (rows) and model (columns).
struct EffectReport {
    std::vector<std::string> covariates;
    std::vector<ModelTag> models;
    Matrix effects;  // covariates x models
};

EffectReport effect_report(const std::vector<DrawsStore>& chains, const Dataset& data,
                           const std::vector<EffectSpec>& specs);

/// covariate,<model labels...> with four decimals.
void write_effect_table(std::ostream& out, const EffectReport& report);

}  // namespace bqr

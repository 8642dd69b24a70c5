#include "bqr/dgp.hpp"

#include <array>
#include <cmath>
#include <string>

#include "bqr/error.hpp"
#include "bqr/gibbs_bqr.hpp"
#include "bqr/linalg.hpp"
#include "bqr/rng.hpp"
#include "bqr/survey.hpp"

namespace bqr {

void DgpSpec::validate() const {
    if (n < 1) throw ValidationError("n must be at least 1");
    if (beta.size() < 1) throw ValidationError("beta must have at least one entry");
    if (!beta.allFinite()) throw ValidationError("beta must be finite");
    if (quantile && !(*quantile > 0.0 && *quantile < 1.0)) {
        throw ValidationError("quantile must lie strictly between 0 and 1");
    }
    if (covariance && (covariance->rows() != beta.size() - 1 || covariance->cols() != beta.size() - 1)) {
        throw ValidationError("covariance must be (k - 1) x (k - 1)");
    }
}

Simulation generate(const DgpSpec& spec) {
    spec.validate();
    const Eigen::Index n = spec.n;
    const Eigen::Index k = spec.beta.size();
    Rng rng(spec.seed);

    Matrix factor;
    if (spec.covariance) factor = cholesky(*spec.covariance, "covariate covariance");

    Simulation sim;
    Dataset& data = sim.data;
    data.column_names.push_back("Intercept");
    for (Eigen::Index j = 1; j < k; ++j) data.column_names.push_back("x" + std::to_string(j));
    data.X.resize(n, k);
    data.y.resize(static_cast<std::size_t>(n));
    sim.latent.resize(n);
    sim.errors.resize(n);

    std::optional<QuantileConstants> consts;
    if (spec.quantile) consts = QuantileConstants::for_quantile(*spec.quantile);

    Vector u(k - 1);
    for (Eigen::Index i = 0; i < n; ++i) {
        for (Eigen::Index j = 0; j < k - 1; ++j) u[j] = rng.normal();
        data.X(i, 0) = 1.0;
        if (k > 1) data.X.row(i).tail(k - 1) = spec.covariance ? Vector(factor * u) : u;
        const double e = consts ? draw_al_mixture(*consts, rng) : rng.normal();
        sim.errors[i] = e;
        sim.latent[i] = data.X.row(i).dot(spec.beta) + e;
        data.y[static_cast<std::size_t>(i)] = sim.latent[i] > 0.0 ? 1 : 0;
    }
    return sim;
}

Vector default_survey_beta() {
    Vector beta(19);
    beta << -1.2, -0.8, 1.1, -0.4, 0.45, 0.3, -0.1, 0.35, 0.25, 0.15, 0.1, 0.05, -0.2, 0.1, 0.2, 0.1, 0.05, 0.1,
        -0.05;
    return beta;
}

namespace {

template <std::size_t N>
const std::string& pick(const std::array<const char*, N>& options, Rng& rng, std::string& slot) {
    const auto index = static_cast<std::size_t>(rng.uniform() * static_cast<double>(N));
    slot = options[std::min(index, N - 1)];
    return slot;
}

}  // namespace

CsvTable simulate_survey(const SurveySimulation& spec) {
    if (spec.n < 1) throw ValidationError("n must be at least 1");
    if (spec.quantile && !(*spec.quantile > 0.0 && *spec.quantile < 1.0)) {
        throw ValidationError("quantile must lie strictly between 0 and 1");
    }
    if (!(spec.refused_share >= 0.0 && spec.refused_share < 1.0) ||
        !(spec.missing_share >= 0.0 && spec.missing_share < 1.0)) {
        throw ValidationError("refused and missing shares must lie in [0, 1)");
    }
    const EncodingSpec encoding = EncodingSpec::parse(survey_manifest());
    if (spec.beta.size() != static_cast<Eigen::Index>(encoding.columns.size())) {
        throw ValidationError("survey beta needs " + std::to_string(encoding.columns.size()) + " entries");
    }

    static constexpr std::array<const char*, 2> yes_no{"yes", "no"};
    static constexpr std::array<const char*, 2> gender{"male", "female"};
    static constexpr std::array<const char*, 4> education{"hs_or_below", "below_bachelors", "bachelors",
                                                          "post_bachelors"};
    static constexpr std::array<const char*, 3> employment{"full_time", "part_time", "unemployed"};
    static constexpr std::array<const char*, 3> race{"white", "african_american", "other"};
    static constexpr std::array<const char*, 3> urbanicity{"urban", "suburban", "rural"};
    static constexpr std::array<const char*, 4> region{"northeast", "west", "south", "midwest"};

    Rng rng(spec.seed);
    CsvTable raw;
    raw.header = {"opinion", "age",        "income", "online_course", "enrolled",  "gender",
                  "education", "employment", "race", "urbanicity",    "region"};
    const auto& bands = income_bands();
    for (Eigen::Index i = 0; i < spec.n; ++i) {
        std::vector<std::string> row(raw.header.size());
        row[0] = "yes";
        row[1] = std::to_string(18 + static_cast<int>(rng.uniform() * 73.0));
        const auto band = std::min(static_cast<std::size_t>(rng.uniform() * 9.0), bands.size() - 1);
        row[2] = bands[band];
        pick(yes_no, rng, row[3]);
        pick(yes_no, rng, row[4]);
        pick(gender, rng, row[5]);
        pick(education, rng, row[6]);
        pick(employment, rng, row[7]);
        pick(race, rng, row[8]);
        pick(urbanicity, rng, row[9]);
        pick(region, rng, row[10]);
        if (rng.uniform() < spec.missing_share) row[2] = "NA";
        raw.rows.push_back(std::move(row));
    }

    const DesignBuild build = build_design(raw, encoding);
    std::optional<QuantileConstants> consts;
    if (spec.quantile) consts = QuantileConstants::for_quantile(*spec.quantile);
    for (std::size_t r = 0; r < build.source_rows.size(); ++r) {
        const double index = build.data.X.row(static_cast<Eigen::Index>(r)).dot(spec.beta);
        const double e = consts ? draw_al_mixture(*consts, rng) : rng.normal();
        raw.rows[build.source_rows[r]][0] = index + e > 0.0 ? "yes" : "no";
    }
    // Missing-income rows still need a response token.
    for (auto& row : raw.rows) {
        if (row[2] == "NA") row[0] = rng.uniform() < 0.5 ? "yes" : "no";
        if (rng.uniform() < spec.refused_share) row[0] = "refused";
    }
    return raw;
}

}  // namespace bqr

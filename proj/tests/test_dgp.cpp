#include <doctest.h>

#include <cmath>
#include <vector>

#include "bqr/dgp.hpp"
#include "bqr/error.hpp"
#include "bqr/survey.hpp"
#include "oracles.hpp"

using namespace bqr;

namespace {

double y_share(const Dataset& d) {
    double s = 0.0;
    for (int y : d.y) s += y;
    return s / static_cast<double>(d.n());
}

DgpSpec spec_of(Vector beta, std::optional<double> p, Eigen::Index n, std::uint64_t seed) {
    DgpSpec s;
    s.beta = std::move(beta);
    s.quantile = p;
    s.n = n;
    s.seed = seed;
    return s;
}

}  // namespace

TEST_CASE("zero coefficients at the median give balanced responses") {
    const auto sim = generate(spec_of(Vector::Zero(3), 0.5, 100000, 1));
    CHECK(std::fabs(y_share(sim.data) - 0.5) < 0.01);
}

TEST_CASE("intercept-only share matches the error distribution") {
    for (double c : {-1.0, 0.4, 2.0}) {
        for (double p : {0.1, 0.5, 0.9}) {
            const auto sim = generate(spec_of(Vector::Constant(1, c), p, 100000, 2));
            CHECK(std::fabs(y_share(sim.data) - (1.0 - oracle::al_cdf_quadrature(-c, p))) < 0.01);
        }
        const auto probit = generate(spec_of(Vector::Constant(1, c), std::nullopt, 100000, 3));
        CHECK(std::fabs(y_share(probit.data) - oracle::upper_tail(-c)) < 0.01);
    }
}

TEST_CASE("responses are the sign of the latent index") {
    Vector beta(3);
    beta << 0.5, -1.0, 0.25;
    const auto sim = generate(spec_of(beta, 0.25, 2000, 4));
    CHECK(sim.data.column_names == std::vector<std::string>{"Intercept", "x1", "x2"});
    for (Eigen::Index i = 0; i < sim.data.n(); ++i) {
        REQUIRE(sim.data.X(i, 0) == 1.0);
        REQUIRE(sim.latent[i] == doctest::Approx(sim.data.X.row(i).dot(beta) + sim.errors[i]).epsilon(1e-14));
        REQUIRE(sim.data.y[static_cast<std::size_t>(i)] == (sim.latent[i] > 0.0 ? 1 : 0));
    }
}

TEST_CASE("a fixed seed gives bit-identical output") {
    Vector beta(4);
    beta << 0.1, 0.2, 0.3, 0.4;
    const auto a = generate(spec_of(beta, 0.7, 3000, 5));
    const auto b = generate(spec_of(beta, 0.7, 3000, 5));
    CHECK((a.data.X.array() == b.data.X.array()).all());
    CHECK(a.data.y == b.data.y);
    CHECK((a.latent.array() == b.latent.array()).all());
    const auto c = generate(spec_of(beta, 0.7, 3000, 6));
    CHECK_FALSE((a.data.X.array() == c.data.X.array()).all());
}

TEST_CASE("errors follow their distribution") {
    for (double p : {0.1, 0.5, 0.9}) {
        const auto sim = generate(spec_of(Vector::Zero(1), p, 1000000, 7));
        const std::vector<double> e(sim.errors.data(), sim.errors.data() + sim.errors.size());
        const double d = oracle::sup_distance(e, [p](double u) {
            return u <= 0.0 ? p * std::exp((1.0 - p) * u) : 1.0 - (1.0 - p) * std::exp(-p * u);
        });
        CHECK(d < 0.004);
    }
    const auto probit = generate(spec_of(Vector::Zero(1), std::nullopt, 1000000, 8));
    const std::vector<double> e(probit.errors.data(), probit.errors.data() + probit.errors.size());
    CHECK(oracle::sup_distance(e, [](double u) { return 1.0 - oracle::upper_tail(u); }) < 0.004);
}

TEST_CASE("covariate covariance is honoured") {
    Matrix sigma(2, 2);
    sigma << 1.0, 0.6, 0.6, 2.0;
    auto spec = spec_of(Vector::Zero(3), 0.5, 400000, 9);
    spec.covariance = sigma;
    const auto sim = generate(spec);
    const Matrix x = sim.data.X.rightCols(2);
    const Matrix centred = x.rowwise() - x.colwise().mean();
    const Matrix cov = centred.transpose() * centred / static_cast<double>(x.rows() - 1);
    CHECK((cov - sigma).cwiseAbs().maxCoeff() < 0.02);

    const auto plain = generate(spec_of(Vector::Zero(3), 0.5, 400000, 9));
    const Matrix px = plain.data.X.rightCols(2);
    const Matrix pc = px.rowwise() - px.colwise().mean();
    CHECK(((pc.transpose() * pc / static_cast<double>(px.rows() - 1)) - Matrix::Identity(2, 2)).cwiseAbs().maxCoeff() <
          0.02);
}

TEST_CASE("invalid specifications are rejected") {
    CHECK_THROWS_AS(generate(spec_of(Vector::Zero(2), 0.0, 10, 1)), ValidationError);
    CHECK_THROWS_AS(generate(spec_of(Vector::Zero(2), 1.0, 10, 1)), ValidationError);
    CHECK_THROWS_AS(generate(spec_of(Vector::Zero(2), 0.5, 0, 1)), ValidationError);
    CHECK_THROWS_AS(generate(spec_of(Vector(0), 0.5, 10, 1)), ValidationError);
    Vector inf = Vector::Zero(2);
    inf[1] = std::numeric_limits<double>::infinity();
    CHECK_THROWS_AS(generate(spec_of(inf, 0.5, 10, 1)), ValidationError);
    auto wrong = spec_of(Vector::Zero(3), 0.5, 10, 1);
    wrong.covariance = Matrix::Identity(3, 3);
    CHECK_THROWS_AS(generate(wrong), ValidationError);
    auto indefinite = spec_of(Vector::Zero(3), 0.5, 10, 1);
    indefinite.covariance = Matrix(2, 2);
    *indefinite.covariance << 1.0, 2.0, 2.0, 1.0;
    CHECK_THROWS_AS(generate(indefinite), NumericalError);
}

TEST_CASE("simulated survey extract") {
    SurveySimulation sim;
    sim.n = 4000;
    sim.seed = 10;
    sim.quantile = 0.5;
    sim.refused_share = 0.05;
    sim.missing_share = 0.02;
    const auto raw = simulate_survey(sim);
    CHECK(raw.rows.size() == 4000);
    CHECK(raw.header.size() == 11);
    std::size_t refused = 0, missing = 0;
    for (const auto& r : raw.rows) {
        refused += r[raw.column("opinion")] == "refused" || r[raw.column("opinion")] == "dont_know";
        missing += r[raw.column("income")] == "NA";
        const double age = std::stod(r[raw.column("age")]);
        REQUIRE(age >= 18.0);
        REQUIRE(age <= 90.0);
    }
    CHECK(std::fabs(static_cast<double>(refused) / 4000.0 - 0.05) < 0.015);
    CHECK(std::fabs(static_cast<double>(missing) / 4000.0 - 0.02) < 0.01);
    const auto build = build_design(raw, EncodingSpec::parse(survey_manifest()));
    CHECK(build.excluded_response == refused);
    CHECK(build.data.n() + build.excluded_response + build.dropped_missing == 4000);

    SurveySimulation bad;
    bad.beta = Vector::Zero(3);
    CHECK_THROWS_AS(simulate_survey(bad), ValidationError);
    bad = SurveySimulation{};
    bad.refused_share = 1.0;
    CHECK_THROWS_AS(simulate_survey(bad), ValidationError);
}

#include <doctest.h>

#include <algorithm>
#include <string>

#include "bqr/error.hpp"
#include "bqr/model.hpp"

using namespace bqr;

namespace {

Dataset make(std::vector<int> y, Matrix X) {
    Dataset d;
    d.y = std::move(y);
    d.X = std::move(X);
    for (Eigen::Index j = 0; j < d.X.cols(); ++j) d.column_names.push_back("c" + std::to_string(j));
    return d;
}

bool mentions(const std::vector<std::string>& messages, const std::string& text) {
    return std::any_of(messages.begin(), messages.end(),
                       [&](const std::string& m) { return m.find(text) != std::string::npos; });
}

}  // namespace

TEST_CASE("a clean dataset validates") {
    const auto report = validate_dataset(make({0, 1, 1}, Matrix::Ones(3, 1)));
    CHECK(report.ok());
    CHECK(report.warnings.empty());
}

TEST_CASE("non-binary responses are errors") {
    const auto report = validate_dataset(make({0, 2, 1}, Matrix::Ones(3, 1)));
    CHECK_FALSE(report.ok());
    CHECK(mentions(report.errors, "non-binary response"));
    CHECK_THROWS_AS(require_valid(make({0, 2, 1}, Matrix::Ones(3, 1))), ValidationError);
}

TEST_CASE("shape and finiteness errors are all reported") {
    Matrix X = Matrix::Ones(3, 2);
    X(1, 1) = std::numeric_limits<double>::infinity();
    Dataset d = make({0, 1}, X);
    d.column_names.pop_back();
    const auto report = validate_dataset(d);
    CHECK(report.errors.size() == 3);
    CHECK(mentions(report.errors, "non-finite"));
    CHECK(mentions(report.errors, "response length"));
    CHECK(mentions(report.errors, "column names"));
    CHECK_FALSE(validate_dataset(make({}, Matrix(0, 0))).ok());
}

TEST_CASE("duplicate columns warn about rank deficiency") {
    Matrix X(4, 3);
    X << 1, 0.5, 0.5, 1, 1.5, 1.5, 1, -2, -2, 1, 3, 3;
    const auto report = validate_dataset(make({0, 1, 0, 1}, X));
    CHECK(report.ok());
    CHECK(mentions(report.warnings, "rank deficiency"));
    CHECK(validate_dataset(make({0, 1}, Matrix::Ones(2, 3))).warnings.size() == 1);
}

TEST_CASE("column lookup") {
    const Dataset d = make({0, 1}, Matrix::Ones(2, 3));
    CHECK(d.column("c2") == 2);
    CHECK_THROWS_AS(d.column("missing"), ValidationError);
}

TEST_CASE("default prior is N(0, 1000 I)") {
    const auto prior = PriorSpec::diffuse(19);
    CHECK(prior.beta0 == Vector::Zero(19));
    CHECK(prior.B0 == 1000.0 * Matrix::Identity(19, 19));
    CHECK_NOTHROW(prior.validate(19));
    CHECK_THROWS_AS(prior.validate(18), ValidationError);
    CHECK_THROWS_AS(PriorSpec::diffuse(3, 0.0), ValidationError);
    PriorSpec bad = PriorSpec::diffuse(2);
    bad.B0(0, 1) = 5000.0;
    bad.B0(1, 0) = 5000.0;
    CHECK_THROWS_AS(bad.validate(2), ValidationError);
}

TEST_CASE("sampler defaults and validation") {
    SamplerConfig config;
    CHECK(config.total_iterations == 25000);
    CHECK(config.burn_in == 5000);
    CHECK(config.retained() == 20000);
    CHECK_NOTHROW(config.validate());
    config.quantile = 1.2;
    CHECK_THROWS_AS(config.validate(), ValidationError);
    CHECK_NOTHROW(config.validate(false));
    config.quantile = 0.5;
    config.burn_in = config.total_iterations;
    CHECK_THROWS_AS(config.validate(), ValidationError);
    config.burn_in = -1;
    CHECK_THROWS_AS(config.validate(), ValidationError);
}

TEST_CASE("model tags round-trip through labels") {
    CHECK(ModelTag::probit().label() == "probit");
    CHECK(ModelTag::quantile(0.1).label() == "q0.10");
    CHECK(ModelTag::quantile(0.9).label() == "q0.90");
    CHECK(ModelTag::quantile(0.125).label() == "q0.125");
    for (double p : {0.1, 0.25, 0.5, 0.75, 0.9, 0.125, 0.333}) {
        CHECK(ModelTag::parse(ModelTag::quantile(p).label()) == ModelTag::quantile(p));
    }
    CHECK(ModelTag::parse("probit") == ModelTag::probit());
    CHECK_THROWS_AS(ModelTag::parse("q1.5"), ValidationError);
    CHECK_THROWS_AS(ModelTag::parse("logit"), ValidationError);
}

TEST_CASE("posterior mean of a draw store") {
    DrawsStore store;
    store.beta.resize(3, 2);
    store.beta << 1, 2, 3, 4, 5, 6;
    CHECK(store.posterior_mean() == Vector::LinSpaced(2, 3, 4));
    CHECK_THROWS_AS(DrawsStore{}.posterior_mean(), ValidationError);
}

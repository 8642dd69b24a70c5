#include <doctest.h>

#include <cmath>
#include <sstream>

#include "bqr/dgp.hpp"
#include "bqr/error.hpp"
#include "bqr/survey.hpp"

using namespace bqr;

namespace {

const std::vector<std::string> kHeader{"opinion", "age",       "income", "online_course", "enrolled",  "gender",
                                       "education", "employment", "race", "urbanicity",    "region"};

struct Raw {
    std::string opinion = "yes";
    std::string age = "44";
    std::string income = "50k-75k";
    std::string online_course = "no";
    std::string enrolled = "no";
    std::string gender = "male";
    std::string education = "hs_or_below";
    std::string employment = "unemployed";
    std::string race = "other";
    std::string urbanicity = "rural";
    std::string region = "midwest";

    std::vector<std::string> fields() const {
        return {opinion, age, income, online_course, enrolled, gender, education, employment, race, urbanicity, region};
    }
};

CsvTable table_of(const std::vector<Raw>& rows) {
    CsvTable t;
    t.header = kHeader;
    for (const auto& r : rows) t.rows.push_back(r.fields());
    return t;
}

DesignBuild survey_build(const std::vector<Raw>& rows) {
    return build_design(table_of(rows), EncodingSpec::parse(survey_manifest()));
}

}  // namespace

TEST_CASE("income band midpoints") {
    CHECK(income_midpoint("<10k") == 5000.0);
    CHECK(income_midpoint("10k-20k") == 15000.0);
    CHECK(income_midpoint("20k-30k") == 25000.0);
    CHECK(income_midpoint("30k-40k") == 35000.0);
    CHECK(income_midpoint("40k-50k") == 45000.0);
    CHECK(income_midpoint("50k-75k") == 62500.0);
    CHECK(income_midpoint("75k-100k") == 87500.0);
    CHECK(income_midpoint("100k-150k") == 125000.0);
    CHECK(income_midpoint(">150k") == 175000.0);
    CHECK(income_midpoint("50k–75k") == 62500.0);
    CHECK(income_midpoint(" 50k - 75k ") == 62500.0);
    CHECK(income_bands().size() == 9);
    CHECK_THROWS_AS(income_midpoint("75k-50k"), ValidationError);
    CHECK_THROWS_AS(income_midpoint(""), ValidationError);
}

TEST_CASE("survey manifest defines nineteen columns in order") {
    const auto spec = EncodingSpec::parse(survey_manifest());
    CHECK(spec.design_names() ==
          std::vector<std::string>{"Intercept", "Age/100", "Income/100,000", "Sq-Income", "Online Course",
                                   "(Age<65)*Enroll", "Female", "Post-Bachelors", "Bachelors", "Below Bachelors",
                                   "Full-time", "Part-time", "White", "African-American", "Urban", "Suburban",
                                   "Northeast", "West", "South"});
    CHECK(spec.groups.size() == 5);
}

TEST_CASE("a worked respondent encodes exactly") {
    Raw r;
    r.enrolled = "yes";
    r.gender = "female";
    r.education = "bachelors";
    r.region = "south";
    const auto b = survey_build({r});
    const auto& x = b.data.X;
    CHECK(x(0, 0) == 1.0);
    CHECK(x(0, 1) == doctest::Approx(0.44).epsilon(1e-15));
    CHECK(x(0, 2) == 0.625);
    CHECK(x(0, 3) == 0.390625);
    CHECK(x(0, 4) == 0.0);
    CHECK(x(0, 5) == 1.0);
    CHECK(x(0, 6) == 1.0);
    CHECK(x(0, b.data.column("Bachelors")) == 1.0);
    CHECK(x(0, b.data.column("South")) == 1.0);
    CHECK(x.row(0).sum() == doctest::Approx(1.0 + 0.44 + 0.625 + 0.390625 + 1 + 1 + 1 + 1));
    CHECK(b.data.y == std::vector<int>{1});
}

TEST_CASE("enrollment interaction is gated on age") {
    Raw r;
    r.enrolled = "yes";
    r.age = "70";
    Raw s = r;
    s.age = "64.9";
    Raw t = r;
    t.age = "65";
    const auto b = survey_build({r, s, t});
    const auto col = b.data.column("(Age<65)*Enroll");
    CHECK(b.data.X(0, col) == 0.0);
    CHECK(b.data.X(1, col) == 1.0);
    CHECK(b.data.X(2, col) == 0.0);
}

TEST_CASE("simulated extract: identities and exclusivity") {
    SurveySimulation sim;
    sim.n = 3000;
    sim.seed = 11;
    const auto b = build_design(simulate_survey(sim), EncodingSpec::parse(survey_manifest()));
    const auto spec = EncodingSpec::parse(survey_manifest());
    const auto& X = b.data.X;
    CHECK(X.cols() == 19);
    CHECK(b.data.n() == 3000);
    const auto inc = b.data.column("Income/100,000");
    const auto sq = b.data.column("Sq-Income");
    for (Eigen::Index i = 0; i < X.rows(); ++i) {
        REQUIRE(X(i, sq) == X(i, inc) * X(i, inc));
        for (const auto& g : spec.groups) {
            double active = 0.0;
            for (const auto& m : g.members) active += X(i, b.data.column(m));
            REQUIRE(active <= 1.0);
        }
    }
}

TEST_CASE("refused responses are excluded and missing values dropped") {
    Raw refused;
    refused.opinion = "refused";
    Raw unsure;
    unsure.opinion = "dont_know";
    Raw no_income;
    no_income.income = "NA";
    Raw empty_answer;
    empty_answer.opinion = "";
    Raw no;
    no.opinion = "no";
    const auto b = survey_build({Raw{}, refused, unsure, no_income, empty_answer, no});
    CHECK(b.excluded_response == 2);
    CHECK(b.dropped_missing == 2);
    CHECK(b.data.n() == 2);
    CHECK(b.source_rows == std::vector<std::size_t>{0, 5});
    CHECK(b.data.y == std::vector<int>{1, 0});
}

TEST_CASE("ingestion errors") {
    Raw bad_vocab;
    bad_vocab.region = "atlantis";
    try {
        survey_build({Raw{}, bad_vocab});
        FAIL("expected an exception");
    } catch (const ValidationError& e) {
        CHECK(std::string(e.what()).find("atlantis") != std::string::npos);
    }
    Raw bad_age;
    bad_age.age = "forty";
    CHECK_THROWS_AS(survey_build({bad_age}), ValidationError);
    Raw bad_answer;
    bad_answer.opinion = "maybe";
    CHECK_THROWS_AS(survey_build({bad_answer}), ValidationError);
    Raw refused;
    refused.opinion = "refused";
    CHECK_THROWS_AS(survey_build({refused}), ValidationError);
    CsvTable missing_column = table_of({Raw{}});
    missing_column.header[10] = "area";
    CHECK_THROWS_AS(build_design(missing_column, EncodingSpec::parse(survey_manifest())), ValidationError);
}

TEST_CASE("simulated extracts are deterministic") {
    SurveySimulation sim;
    sim.n = 500;
    sim.seed = 12;
    sim.refused_share = 0.05;
    sim.missing_share = 0.03;
    const auto a = simulate_survey(sim);
    const auto b = simulate_survey(sim);
    CHECK(a.rows == b.rows);
    sim.seed = 13;
    CHECK(simulate_survey(sim).rows != a.rows);
}

TEST_CASE("descriptive summary counts") {
    std::vector<Raw> rows(4);
    rows[0].gender = "female";
    rows[1].gender = "female";
    rows[2].education = "bachelors";
    rows[3].opinion = "no";
    rows[0].age = "20";
    rows[1].age = "40";
    rows[2].age = "60";
    rows[3].age = "80";
    const auto spec = EncodingSpec::parse(survey_manifest());
    const auto summary = descriptive_summary(build_design(table_of(rows), spec), spec);
    auto find = [&](const std::string& label) {
        for (const auto& r : summary) {
            if (r.label == label) return r;
        }
        FAIL("missing summary row " << label);
        return SummaryRow{};
    };
    CHECK(find("Age/100").first == doctest::Approx(0.5));
    CHECK(find("Age/100").second == doctest::Approx(std::sqrt(0.2 / 3.0)));
    CHECK(find("Income/100,000").second == 0.0);
    CHECK(find("Female").first == 2.0);
    CHECK(find("Female").second == 50.0);
    CHECK(find("Bachelors").first == 1.0);
    CHECK(find("HS and below").first == 3.0);
    CHECK(find("HS and below").second == 75.0);
    CHECK(find("Other Races").first == 4.0);
    CHECK(find("opinion: yes").first == 3.0);
    CHECK(find("opinion: no").first == 1.0);
    std::ostringstream out;
    write_summary_rows(out, summary);
    CHECK(out.str().find("Female,count/percent,2,50.00\n") != std::string::npos);
}

TEST_CASE("crosstab shares") {
    std::vector<Raw> rows(4);
    rows[0].age = "30";
    rows[1].age = "30";
    rows[1].opinion = "no";
    rows[2].age = "70";
    rows[3].age = "70";
    rows[3].opinion = "no";
    const auto raw = table_of(rows);
    const auto b = build_design(raw, EncodingSpec::parse(survey_manifest()));
    const auto split = crosstab(raw, b, "age", 65.0);
    REQUIRE(split.size() == 2);
    CHECK(split[0].category == "<= 65");
    for (const auto& r : split) {
        CHECK(r.count == 2);
        CHECK(r.yes_percent == 50.0);
        CHECK(r.no_percent == 50.0);
    }
    const auto by_gender = crosstab(raw, b, "gender");
    REQUIRE(by_gender.size() == 1);
    CHECK(by_gender[0].count == 4);
}

TEST_CASE("manifest parse errors") {
    CHECK_THROWS_AS(EncodingSpec::parse("intercept | Intercept\n"), ValidationError);
    CHECK_THROWS_AS(EncodingSpec::parse("response | y | yes=1\nintercept | I\n"), ValidationError);
    CHECK_THROWS_AS(EncodingSpec::parse("response | y | yes=1 | no=0\n"), ValidationError);
    CHECK_THROWS_AS(EncodingSpec::parse("response | y | yes=1 | no=0\nfrobnicate | x\n"), ValidationError);
    CHECK_THROWS_AS(EncodingSpec::parse("response | y | yes=1 | no=0\nsquare | S | X\n"), ValidationError);
    CHECK_THROWS_AS(EncodingSpec::parse("response | y | yes=1 | no=0\nscaled | A | a | 0\n"), ValidationError);
    CHECK_THROWS_AS(EncodingSpec::parse("response | y | yes=1 | no=0\nintercept | I\nintercept | I\n"),
                    ValidationError);
    CHECK_THROWS_AS(EncodingSpec::parse("response | y | yes=1 | no=0\nindicator | A | a | 1 | when a < 3\n"),
                    ValidationError);
    CHECK_THROWS_AS(EncodingSpec::parse("response | y | yes=1 | no=0\ndummies | a | x=1\n"), ValidationError);
    try {
        EncodingSpec::parse("response | y | yes=1 | no=0\n\n# note\nbogus | x\n");
        FAIL("expected an exception");
    } catch (const ValidationError& e) {
        CHECK(std::string(e.what()).find("line 4") != std::string::npos);
    }
}

TEST_CASE("numeric manifest copies columns") {
    const auto spec = EncodingSpec::parse(numeric_manifest({"Intercept", "x1", "x2"}));
    CsvTable t;
    t.header = {"y", "Intercept", "x1", "x2"};
    t.rows = {{"1", "1", "0.5", "-2"}, {"0", "1", "1e-3", "3.25"}};
    const auto b = build_design(t, spec);
    CHECK(b.data.column_names == std::vector<std::string>{"Intercept", "x1", "x2"});
    CHECK(b.data.X(0, 1) == 0.5);
    CHECK(b.data.X(1, 1) == 0.001);
    CHECK(b.data.X(1, 2) == 3.25);
    CHECK(b.data.y == std::vector<int>{1, 0});
    t.rows[1][0] = "2";
    CHECK_THROWS_AS(build_design(t, spec), ValidationError);
    CHECK_THROWS_AS(numeric_manifest({"a|b"}), ValidationError);
}

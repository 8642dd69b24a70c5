#include "bqr/effects.hpp"

#include <algorithm>
#include <cmath>
#include <ostream>
#include <string>

#include <json.hpp>

#include "bqr/error.hpp"
#include "bqr/fit_metrics.hpp"
#include "bqr/io.hpp"

namespace bqr {

namespace {

constexpr Eigen::Index kDrawBlock = 256;

void apply(Matrix& rows, const Dataset& data, const std::vector<Assignment>& assignments) {
    for (const auto& a : assignments) rows.col(data.column(a.column)).setConstant(a.value);
}

void recompute_derived(Matrix& rows, const Dataset& data, const std::vector<DerivedColumn>& derived) {
    for (const auto& d : derived) {
        const auto target = data.column(d.column);
        const auto source = data.column(d.source);
        switch (d.rule) {
            case DerivedColumn::Rule::Square:
                rows.col(target) = rows.col(source).array().square().matrix();
                break;
        }
    }
}

void check_groups(const Matrix& rows, const Dataset& data, const EffectSpec& spec, const char* which) {
    for (const auto& group : spec.exclusive_groups) {
        std::vector<Eigen::Index> cols;
        for (const auto& name : group) cols.push_back(data.column(name));
        for (Eigen::Index i = 0; i < rows.rows(); ++i) {
            double active = 0.0;
            for (auto c : cols) active += rows(i, c) != 0.0 ? 1.0 : 0.0;
            if (active > 1.0) {
                throw ValidationError("effect '" + spec.name + "': " + which + " profile activates more than one of " +
                                      group.front() + "...");
            }
        }
    }
}

}  // namespace

std::vector<Eigen::Index> evaluation_sample(const Dataset& data, const EffectSpec& spec) {
    std::vector<std::pair<Eigen::Index, double>> conditions;
    for (const auto& s : spec.sample) conditions.emplace_back(data.column(s.column), s.value);
    std::vector<Eigen::Index> rows;
    for (Eigen::Index i = 0; i < data.n(); ++i) {
        const bool keep = std::all_of(conditions.begin(), conditions.end(),
                                      [&](const auto& c) { return data.X(i, c.first) == c.second; });
        if (keep) rows.push_back(i);
    }
    return rows;
}

std::pair<Matrix, Matrix> counterfactual_designs(const Dataset& data, const EffectSpec& spec) {
    const auto rows = evaluation_sample(data, spec);
    if (rows.empty()) throw ValidationError("effect '" + spec.name + "': evaluation sample is empty");
    Matrix observed(static_cast<Eigen::Index>(rows.size()), data.k());
    for (std::size_t r = 0; r < rows.size(); ++r) observed.row(static_cast<Eigen::Index>(r)) = data.X.row(rows[r]);

    Matrix base = observed;
    Matrix target = observed;
    if (spec.kind == EffectSpec::Kind::Switch) {
        if (spec.base.empty() && spec.target.empty()) {
            throw ValidationError("effect '" + spec.name + "': switch with no assignments");
        }
        apply(base, data, spec.base);
        apply(target, data, spec.target);
    } else {
        target.col(data.column(spec.column)).array() += spec.delta;
    }
    recompute_derived(base, data, spec.derived);
    recompute_derived(target, data, spec.derived);
    check_groups(base, data, spec, "base");
    check_groups(target, data, spec, "target");
    return {std::move(base), std::move(target)};
}

double covariate_effect(const DrawsStore& draws, const Dataset& data, const EffectSpec& spec) {
    if (draws.beta.cols() != data.k()) throw ValidationError("draws and dataset differ in covariate count");
    if (draws.retained() == 0) throw ValidationError("draw store is empty");
    const auto [base, target] = counterfactual_designs(data, spec);

    if (spec.averaging == EffectSpec::Averaging::PosteriorMean) {
        const Vector beta = draws.posterior_mean();
        const Vector ib = base * beta;
        const Vector it = target * beta;
        double total = 0.0;
        for (Eigen::Index i = 0; i < ib.size(); ++i) {
            total += probability_from_index(it[i], draws.model) - probability_from_index(ib[i], draws.model);
        }
        return total / static_cast<double>(ib.size());
    }

    // Sum over draws in fixed blocks, observations in row order, so the
    // result does not depend on how the work is split.
    const Eigen::Index m = draws.retained();
    double total = 0.0;
    for (Eigen::Index start = 0; start < m; start += kDrawBlock) {
        const Eigen::Index len = std::min(kDrawBlock, m - start);
        const Matrix betas = draws.beta.middleRows(start, len).transpose();  // k x len
        const Matrix ib = base * betas;
        const Matrix it = target * betas;
        double block = 0.0;
        for (Eigen::Index d = 0; d < len; ++d) {
            for (Eigen::Index i = 0; i < ib.rows(); ++i) {
                block += probability_from_index(it(i, d), draws.model) - probability_from_index(ib(i, d), draws.model);
            }
        }
        total += block;
    }
    return total / (static_cast<double>(m) * static_cast<double>(base.rows()));
}

EffectSpec reversed(EffectSpec spec) {
    if (spec.kind == EffectSpec::Kind::Switch) {
        std::swap(spec.base, spec.target);
        return spec;
    }
    // A delta effect's base is the observed row itself, which has no swapped counterpart.
    throw ValidationError("effect '" + spec.name + "': only switch effects can be reversed");
}

namespace {

std::vector<Assignment> parse_assignments(const nlohmann::json& j, const std::string& where) {
    std::vector<Assignment> out;
    if (j.is_null()) return out;
    if (!j.is_object()) throw ValidationError(where + " must be an object of column: value pairs");
    for (const auto& [key, value] : j.items()) {
        if (!value.is_number()) throw ValidationError(where + "." + key + " must be a number");
        out.push_back({key, value.get<double>()});
    }
    return out;
}

}  // namespace

std::vector<EffectSpec> parse_effect_specs(std::string_view json_text) {
    nlohmann::json doc;
    try {
        doc = nlohmann::json::parse(json_text);
    } catch (const nlohmann::json::exception& e) {
        throw ValidationError(std::string("effect spec is not valid JSON: ") + e.what());
    }
    std::vector<DerivedColumn> derived;
    std::vector<std::vector<std::string>> groups;
    try {
        for (const auto& d : doc.value("derived", nlohmann::json::array())) {
            const auto rule = d.at("rule").get<std::string>();
            if (rule != "square") throw ValidationError("unknown derived-column rule '" + rule + "'");
            derived.push_back({d.at("column").get<std::string>(), d.at("source").get<std::string>(),
                               DerivedColumn::Rule::Square});
        }
        for (const auto& g : doc.value("exclusive_groups", nlohmann::json::array())) {
            groups.push_back(g.get<std::vector<std::string>>());
        }
        std::vector<EffectSpec> specs;
        for (const auto& e : doc.at("effects")) {
            EffectSpec s;
            s.name = e.at("name").get<std::string>();
            const auto kind = e.value("kind", std::string("switch"));
            if (kind == "switch") {
                s.kind = EffectSpec::Kind::Switch;
                s.base = parse_assignments(e.value("base", nlohmann::json()), s.name + ".base");
                s.target = parse_assignments(e.value("target", nlohmann::json()), s.name + ".target");
            } else if (kind == "delta") {
                s.kind = EffectSpec::Kind::Delta;
                s.column = e.at("column").get<std::string>();
                s.delta = e.value("delta", 0.1);
            } else {
                throw ValidationError("effect '" + s.name + "': unknown kind '" + kind + "'");
            }
            s.sample = parse_assignments(e.value("sample", nlohmann::json()), s.name + ".sample");
            const auto averaging = e.value("averaging", doc.value("averaging", std::string("draws")));
            if (averaging == "draws") {
                s.averaging = EffectSpec::Averaging::OverDraws;
            } else if (averaging == "posterior_mean") {
                s.averaging = EffectSpec::Averaging::PosteriorMean;
            } else {
                throw ValidationError("effect '" + s.name + "': unknown averaging '" + averaging + "'");
            }
            s.derived = derived;
            s.exclusive_groups = groups;
            specs.push_back(std::move(s));
        }
        return specs;
    } catch (const nlohmann::json::exception& e) {
        throw ValidationError(std::string("malformed effect spec: ") + e.what());
    }
}

std::vector<EffectSpec> load_effect_specs(const std::filesystem::path& path) {
    return parse_effect_specs(read_text_file(path));
}

EffectReport effect_report(const std::vector<DrawsStore>& chains, const Dataset& data,
                           const std::vector<EffectSpec>& specs) {
    EffectReport report;
    for (const auto& s : specs) report.covariates.push_back(s.name);
    for (const auto& c : chains) report.models.push_back(c.model);
    report.effects.resize(static_cast<Eigen::Index>(specs.size()), static_cast<Eigen::Index>(chains.size()));
    for (std::size_t r = 0; r < specs.size(); ++r) {
        for (std::size_t c = 0; c < chains.size(); ++c) {
            report.effects(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) =
                covariate_effect(chains[c], data, specs[r]);
        }
    }
    return report;
}

void write_effect_table(std::ostream& out, const EffectReport& report) {
    std::vector<std::string> header{"covariate"};
    for (const auto& m : report.models) header.push_back(m.label());
    write_csv_row(out, header);
    for (std::size_t r = 0; r < report.covariates.size(); ++r) {
        std::vector<std::string> fields{report.covariates[r]};
        for (std::size_t c = 0; c < report.models.size(); ++c) {
            fields.push_back(format_fixed(report.effects(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)), 4));
        }
        write_csv_row(out, fields);
    }
}

}  // namespace bqr

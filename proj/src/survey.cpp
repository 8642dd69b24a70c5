#include "bqr/survey.hpp"

#include <algorithm>
#include <cmath>
#include <ostream>
#include <sstream>

#include "bqr/error.hpp"

namespace bqr {

namespace {

const std::vector<std::pair<std::string, double>>& band_table() {
    static const std::vector<std::pair<std::string, double>> table{
        {"<10k", 5000.0},      {"10k-20k", 15000.0},  {"20k-30k", 25000.0},
        {"30k-40k", 35000.0},  {"40k-50k", 45000.0},  {"50k-75k", 62500.0},
        {"75k-100k", 87500.0}, {"100k-150k", 125000.0}, {">150k", 175000.0},
    };
    return table;
}

// Accept typographic dashes in band labels.
std::string normalize_band(std::string_view text) {
    std::string s = trim(text);
    for (const std::string dash : {"\xE2\x88\x92", "\xE2\x80\x93", "\xE2\x80\x94"}) {
        for (auto pos = s.find(dash); pos != std::string::npos; pos = s.find(dash)) s.replace(pos, dash.size(), "-");
    }
    std::erase(s, ' ');
    return s;
}

std::vector<std::string> split(std::string_view text, char sep) {
    std::vector<std::string> out;
    std::size_t start = 0;
    for (;;) {
        const auto pos = text.find(sep, start);
        out.push_back(trim(text.substr(start, pos == std::string_view::npos ? std::string_view::npos : pos - start)));
        if (pos == std::string_view::npos) break;
        start = pos + 1;
    }
    return out;
}

bool contains(const std::vector<std::string>& v, const std::string& s) {
    return std::find(v.begin(), v.end(), s) != v.end();
}

std::pair<std::string, std::string> key_value(const std::string& field, std::size_t line) {
    const auto eq = field.find('=');
    if (eq == std::string::npos) {
        throw ValidationError("manifest line " + std::to_string(line) + ": expected key=value, got '" + field + "'");
    }
    return {trim(field.substr(0, eq)), trim(field.substr(eq + 1))};
}

ColumnRule make_rule(ColumnRule::Kind kind, std::string name, std::string column = {}) {
    ColumnRule rule;
    rule.kind = kind;
    rule.name = std::move(name);
    rule.column = std::move(column);
    return rule;
}

}  // namespace

double income_midpoint(std::string_view category) {
    const std::string key = normalize_band(category);
    for (const auto& [band, value] : band_table()) {
        if (band == key) return value;
    }
    throw ValidationError("unknown income category '" + std::string(category) + "'");
}

const std::vector<std::string>& income_bands() {
    static const std::vector<std::string> bands = [] {
        std::vector<std::string> out;
        for (const auto& entry : band_table()) out.push_back(entry.first);
        return out;
    }();
    return bands;
}

EncodingSpec EncodingSpec::parse(std::string_view manifest) {
    EncodingSpec spec;
    std::istringstream in{std::string(manifest)};
    std::string raw_line;
    std::size_t line_no = 0;
    std::vector<std::string> names;
    auto fail = [&](const std::string& message) -> ValidationError {
        return ValidationError("manifest line " + std::to_string(line_no) + ": " + message);
    };
    auto add_column = [&](ColumnRule rule) {
        if (contains(names, rule.name)) throw fail("duplicate design column '" + rule.name + "'");
        names.push_back(rule.name);
        spec.columns.push_back(std::move(rule));
    };
    auto need = [&](const std::vector<std::string>& f, std::size_t n) {
        if (f.size() < n) throw fail("'" + f[0] + "' needs at least " + std::to_string(n - 1) + " fields");
    };

    while (std::getline(in, raw_line)) {
        ++line_no;
        const auto hash = raw_line.find('#');
        const std::string line = trim(hash == std::string::npos ? raw_line : raw_line.substr(0, hash));
        if (line.empty()) continue;
        const auto f = split(line, '|');
        const std::string& directive = f[0];

        if (directive == "missing") {
            spec.missing_tokens.insert(spec.missing_tokens.end(), f.begin() + 1, f.end());
        } else if (directive == "response") {
            need(f, 4);
            spec.response.column = f[1];
            for (std::size_t i = 2; i < f.size(); ++i) {
                auto [key, value] = key_value(f[i], line_no);
                auto tokens = split(value, ',');
                if (key == "yes") {
                    spec.response.yes = tokens;
                } else if (key == "no") {
                    spec.response.no = tokens;
                } else if (key == "drop") {
                    spec.response.drop = tokens;
                } else {
                    throw fail("unknown response key '" + key + "'");
                }
            }
            if (spec.response.yes.empty() || spec.response.no.empty()) throw fail("response needs yes= and no=");
        } else if (directive == "vocab") {
            need(f, 3);
            spec.vocabularies[f[1]].assign(f.begin() + 2, f.end());
        } else if (directive == "intercept") {
            need(f, 2);
            add_column(make_rule(ColumnRule::Kind::Intercept, f[1]));
        } else if (directive == "scaled") {
            need(f, 4);
            ColumnRule r = make_rule(ColumnRule::Kind::Scaled, f[1], f[2]);
            r.divisor = parse_double(f[3]);
            if (r.divisor == 0.0) throw fail("divisor must be nonzero");
            add_column(std::move(r));
        } else if (directive == "banded") {
            need(f, 5);
            ColumnRule r = make_rule(ColumnRule::Kind::Banded, f[1], f[2]);
            r.divisor = parse_double(f[3]);
            if (r.divisor == 0.0) throw fail("divisor must be nonzero");
            if (f.size() == 5 && f[4] == "income-midpoints") {
                for (const auto& band : income_bands()) r.bands[band] = income_midpoint(band);
            } else {
                for (std::size_t i = 4; i < f.size(); ++i) {
                    auto [key, value] = key_value(f[i], line_no);
                    r.bands[key] = parse_double(value);
                }
            }
            std::vector<std::string> vocab;
            for (const auto& [band, value] : r.bands) vocab.push_back(band);
            spec.vocabularies[r.column] = vocab;
            add_column(std::move(r));
        } else if (directive == "square") {
            need(f, 3);
            if (!contains(names, f[2])) throw fail("square source '" + f[2] + "' must be defined earlier");
            ColumnRule r = make_rule(ColumnRule::Kind::Square, f[1]);
            r.source = f[2];
            add_column(std::move(r));
        } else if (directive == "indicator") {
            need(f, 4);
            ColumnRule r = make_rule(ColumnRule::Kind::Indicator, f[1], f[2]);
            r.tokens = split(f[3], ',');
            if (f.size() >= 5) {
                std::istringstream gate(f[4]);
                std::string word, column, op, limit;
                gate >> word >> column >> op >> limit;
                if (word != "if" || op != "<" || column.empty() || limit.empty()) {
                    throw fail("gate must read 'if <column> < <limit>'");
                }
                r.gate = Gate{column, parse_double(limit)};
            }
            add_column(std::move(r));
        } else if (directive == "dummies") {
            need(f, 4);
            DummyGroup group;
            group.column = f[1];
            auto [base_key, base_value] = key_value(f[2], line_no);
            if (base_key != "base") throw fail("dummies needs base=token as its second field");
            const auto colon = base_value.find(':');
            group.base_token = trim(base_value.substr(0, colon));
            group.base_label = colon == std::string::npos ? group.base_token : trim(base_value.substr(colon + 1));
            std::vector<std::string> vocab{group.base_token};
            for (std::size_t i = 3; i < f.size(); ++i) {
                auto [name, token] = key_value(f[i], line_no);
                ColumnRule r = make_rule(ColumnRule::Kind::Dummy, name, group.column);
                r.tokens = {token};
                group.members.push_back(name);
                vocab.push_back(token);
                add_column(std::move(r));
            }
            spec.vocabularies[group.column] = vocab;
            spec.groups.push_back(std::move(group));
        } else {
            throw fail("unknown directive '" + directive + "'");
        }
    }
    if (spec.response.column.empty()) throw ValidationError("manifest has no response directive");
    if (spec.columns.empty()) throw ValidationError("manifest defines no design columns");
    return spec;
}

std::vector<std::string> EncodingSpec::design_names() const {
    std::vector<std::string> out;
    for (const auto& c : columns) out.push_back(c.name);
    return out;
}

std::string_view survey_manifest() {
    return R"(# Online-education opinion survey extract.
response  | opinion | yes=yes | no=no | drop=dont_know,refused
missing   | NA
vocab     | online_course | yes | no
vocab     | enrolled | yes | no
vocab     | gender | male | female
intercept | Intercept
scaled    | Age/100 | age | 100
banded    | Income/100,000 | income | 100000 | income-midpoints
square    | Sq-Income | Income/100,000
indicator | Online Course | online_course | yes
indicator | (Age<65)*Enroll | enrolled | yes | if age < 65
indicator | Female | gender | female
dummies   | education | base=hs_or_below:HS and below | Post-Bachelors=post_bachelors | Bachelors=bachelors | Below Bachelors=below_bachelors
dummies   | employment | base=unemployed:Unemployed | Full-time=full_time | Part-time=part_time
dummies   | race | base=other:Other Races | White=white | African-American=african_american
dummies   | urbanicity | base=rural:Rural | Urban=urban | Suburban=suburban
dummies   | region | base=midwest:Midwest | Northeast=northeast | West=west | South=south
)";
}

std::string numeric_manifest(const std::vector<std::string>& column_names) {
    std::string out = "response | y | yes=1 | no=0\n";
    for (const auto& name : column_names) {
        if (name.find('|') != std::string::npos) throw ValidationError("column name '" + name + "' contains '|'");
        if (name == "Intercept") {
            out += "intercept | Intercept\n";
        } else {
            out += "scaled | " + name + " | " + name + " | 1\n";
        }
    }
    return out;
}

DesignBuild build_design(const CsvTable& raw, const EncodingSpec& spec) {
    DesignBuild build;
    const std::size_t response_col = raw.column(spec.response.column);

    std::map<std::string, std::size_t> raw_index;
    auto index_of = [&](const std::string& column) {
        auto it = raw_index.find(column);
        if (it == raw_index.end()) it = raw_index.emplace(column, raw.column(column)).first;
        return it->second;
    };
    for (const auto& rule : spec.columns) {
        if (!rule.column.empty()) index_of(rule.column);
        if (rule.gate) index_of(rule.gate->column);
    }

    const auto k = static_cast<Eigen::Index>(spec.columns.size());
    const auto names = spec.design_names();
    std::vector<Eigen::Index> square_source(spec.columns.size(), 0);
    for (std::size_t j = 0; j < spec.columns.size(); ++j) {
        if (spec.columns[j].kind == ColumnRule::Kind::Square) {
            square_source[j] = std::find(names.begin(), names.end(), spec.columns[j].source) - names.begin();
        }
    }
    std::vector<double> values;
    std::vector<int> ys;
    Eigen::Matrix<double, 1, Eigen::Dynamic> row(k);

    for (std::size_t r = 0; r < raw.rows.size(); ++r) {
        const auto& fields = raw.rows[r];
        const std::string where = "data row " + std::to_string(r + 1);
        auto is_missing = [&](const std::string& t) { return t.empty() || contains(spec.missing_tokens, t); };

        const std::string answer = trim(fields[response_col]);
        if (contains(spec.response.drop, answer)) {
            ++build.excluded_response;
            continue;
        }
        if (is_missing(answer)) {
            ++build.dropped_missing;
            continue;
        }
        int y;
        if (contains(spec.response.yes, answer)) {
            y = 1;
        } else if (contains(spec.response.no, answer)) {
            y = 0;
        } else {
            throw ValidationError(where + ": response '" + answer + "' is neither yes nor no");
        }

        // Returns nullopt for missing tokens; rejects tokens outside the vocabulary.
        auto token = [&](const std::string& column) -> std::optional<std::string> {
            std::string t = trim(fields[index_of(column)]);
            if (is_missing(t)) return std::nullopt;
            const auto vocab = spec.vocabularies.find(column);
            if (vocab != spec.vocabularies.end() && !contains(vocab->second, t)) {
                throw ValidationError(where + ": '" + t + "' is not in the vocabulary of column '" + column + "'");
            }
            return t;
        };
        auto number = [&](const std::string& column) -> std::optional<double> {
            const auto t = token(column);
            if (!t) return std::nullopt;
            try {
                const double v = parse_double(*t);
                if (!std::isfinite(v)) throw ValidationError("non-finite");
                return v;
            } catch (const ValidationError&) {
                throw ValidationError(where + ": column '" + column + "' is not numeric ('" + *t + "')");
            }
        };

        bool complete = true;
        for (Eigen::Index j = 0; j < k && complete; ++j) {
            const auto& rule = spec.columns[static_cast<std::size_t>(j)];
            switch (rule.kind) {
                case ColumnRule::Kind::Intercept:
                    row[j] = 1.0;
                    break;
                case ColumnRule::Kind::Scaled: {
                    const auto v = number(rule.column);
                    if (!v) complete = false;
                    else row[j] = *v / rule.divisor;
                    break;
                }
                case ColumnRule::Kind::Banded: {
                    const auto t = token(rule.column);
                    if (!t) complete = false;
                    else row[j] = rule.bands.at(*t) / rule.divisor;
                    break;
                }
                case ColumnRule::Kind::Square:
                    row[j] = row[square_source[static_cast<std::size_t>(j)]] * row[square_source[static_cast<std::size_t>(j)]];
                    break;
                case ColumnRule::Kind::Indicator:
                case ColumnRule::Kind::Dummy: {
                    const auto t = token(rule.column);
                    if (!t) {
                        complete = false;
                        break;
                    }
                    bool on = contains(rule.tokens, *t);
                    if (rule.gate) {
                        const auto g = number(rule.gate->column);
                        if (!g) {
                            complete = false;
                            break;
                        }
                        on = on && *g < rule.gate->limit;
                    }
                    row[j] = on ? 1.0 : 0.0;
                    break;
                }
            }
        }
        if (!complete) {
            ++build.dropped_missing;
            continue;
        }
        values.insert(values.end(), row.data(), row.data() + k);
        ys.push_back(y);
        build.source_rows.push_back(r);
    }

    if (ys.empty()) throw ValidationError("no rows remain after removing excluded and incomplete records");
    build.data.y = std::move(ys);
    build.data.X = Eigen::Map<const Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>>(
        values.data(), static_cast<Eigen::Index>(build.data.y.size()), k);
    build.data.column_names = spec.design_names();
    return build;
}

std::vector<SummaryRow> descriptive_summary(const DesignBuild& build, const EncodingSpec& spec) {
    const Dataset& data = build.data;
    const double n = static_cast<double>(data.n());
    std::vector<SummaryRow> rows;
    auto count_row = [&](const std::string& label, double count) {
        rows.push_back({label, SummaryRow::Kind::CountPercent, count, 100.0 * count / n});
    };
    for (std::size_t j = 0; j < spec.columns.size(); ++j) {
        const auto& rule = spec.columns[j];
        const auto col = data.X.col(static_cast<Eigen::Index>(j));
        switch (rule.kind) {
            case ColumnRule::Kind::Intercept:
            case ColumnRule::Kind::Square:
                break;
            case ColumnRule::Kind::Scaled:
            case ColumnRule::Kind::Banded: {
                const double mean = col.mean();
                const double var = n > 1 ? (col.array() - mean).square().sum() / (n - 1.0) : 0.0;
                rows.push_back({rule.name, SummaryRow::Kind::MeanStd, mean, std::sqrt(var)});
                break;
            }
            case ColumnRule::Kind::Indicator:
                count_row(rule.name, col.sum());
                break;
            case ColumnRule::Kind::Dummy: {
                count_row(rule.name, col.sum());
                // The base category follows the last member of its group.
                for (const auto& group : spec.groups) {
                    if (group.members.back() != rule.name) continue;
                    double members = 0.0;
                    for (const auto& m : group.members) members += data.X.col(data.column(m)).sum();
                    count_row(group.base_label, n - members);
                }
                break;
            }
        }
    }
    double yes = 0.0;
    for (int y : data.y) yes += y;
    count_row(spec.response.column + ": yes", yes);
    count_row(spec.response.column + ": no", n - yes);
    return rows;
}

void write_summary_rows(std::ostream& out, const std::vector<SummaryRow>& rows) {
    write_csv_row(out, {"variable", "statistic", "value1", "value2"});
    for (const auto& r : rows) {
        if (r.kind == SummaryRow::Kind::MeanStd) {
            write_csv_row(out, {r.label, "mean/std", format_fixed(r.first, 4), format_fixed(r.second, 4)});
        } else {
            write_csv_row(out, {r.label, "count/percent", format_fixed(r.first, 0), format_fixed(r.second, 2)});
        }
    }
}

std::vector<CrosstabRow> crosstab(const CsvTable& raw, const DesignBuild& build, const std::string& column,
                                  std::optional<double> threshold) {
    const std::size_t c = raw.column(column);
    std::vector<CrosstabRow> rows;
    auto slot = [&](const std::string& category) -> CrosstabRow& {
        for (auto& r : rows) {
            if (r.category == category) return r;
        }
        rows.push_back(CrosstabRow{category, 0, 0, 0.0, 0.0});
        return rows.back();
    };
    if (threshold) {
        slot("<= " + format_double(*threshold));
        slot("> " + format_double(*threshold));
    }
    for (std::size_t i = 0; i < build.source_rows.size(); ++i) {
        const std::string token = trim(raw.rows[build.source_rows[i]][c]);
        std::string category = token;
        if (threshold) {
            category = parse_double(token) <= *threshold ? "<= " + format_double(*threshold)
                                                         : "> " + format_double(*threshold);
        }
        auto& r = slot(category);
        ++r.count;
        r.yes += static_cast<std::size_t>(build.data.y[i]);
    }
    std::erase_if(rows, [](const CrosstabRow& r) { return r.count == 0; });
    for (auto& r : rows) {
        r.yes_percent = 100.0 * static_cast<double>(r.yes) / static_cast<double>(r.count);
        r.no_percent = 100.0 - r.yes_percent;
    }
    return rows;
}

void write_crosstab(std::ostream& out, const std::vector<CrosstabRow>& rows) {
    write_csv_row(out, {"category", "count", "yes_percent", "no_percent"});
    for (const auto& r : rows) {
        write_csv_row(out, {r.category, std::to_string(r.count), format_fixed(r.yes_percent, 1),
                            format_fixed(r.no_percent, 1)});
    }
}

}  // namespace bqr

#pragma once

#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "bqr/io.hpp"
#include "bqr/model.hpp"

namespace bqr {

/// Dollar midpoint of one of the nine survey income bands
/// ("<10k", "10k-20k", ..., "100k-150k", ">150k"); the open-ended bands map
/// to 5,000 and 175,000.
double income_midpoint(std::string_view category);

/// Band labels in increasing order.
const std::vector<std::string>& income_bands();

/// Binary response coding: tokens meaning yes / no, plus tokens whose rows
/// are excluded (e.g. "refused").
struct ResponseRule {
    std::string column;
    std::vector<std::string> yes;
    std::vector<std::string> no;
    std::vector<std::string> drop;
};

/// Indicator active only while a numeric raw column is below a limit.
struct Gate {
    std::string column;
    double limit = 0.0;
};

/// One design-matrix column and how it is computed from a raw row.
struct ColumnRule {
    enum class Kind { Intercept, Scaled, Banded, Square, Indicator, Dummy };

    Kind kind = Kind::Intercept;
    std::string name;
    std::string column;                  // raw column (not for Intercept/Square)
    double divisor = 1.0;                // Scaled, Banded
    std::map<std::string, double> bands; // Banded: token -> value before division
    std::string source;                  // Square: design column that is squared
    std::vector<std::string> tokens;     // Indicator / Dummy: tokens that set the column to 1
    std::optional<Gate> gate;            // Indicator
};

/// Mutually exclusive dummies of one raw column; the base token gets no column.
struct DummyGroup {
    std::string column;
    std::string base_token;
    std::string base_label;
    std::vector<std::string> members;  // design column names
};

/// Parsed schema manifest.
///
/// One directive per line, fields separated by '|', '#' starts a comment:
///
///     missing   | tok | tok ...
///     response  | column | yes=tok[,tok] | no=tok[,tok] [| drop=tok[,tok]]
///     vocab     | column | tok | tok ...
///     intercept | Name
///     scaled    | Name | column | divisor
///     banded    | Name | column | divisor | income-midpoints
///     banded    | Name | column | divisor | tok=value | tok=value ...
///     square    | Name | SourceName
///     indicator | Name | column | tok[,tok] [| if column < limit]
///     dummies   | column | base=tok[:Label] | Name=tok | Name=tok ...
///
/// Design columns appear in directive order.
struct EncodingSpec {
    ResponseRule response;
    std::vector<std::string> missing_tokens;
    std::vector<ColumnRule> columns;
    std::vector<DummyGroup> groups;
    std::map<std::string, std::vector<std::string>> vocabularies;

    static EncodingSpec parse(std::string_view manifest);

    std::vector<std::string> design_names() const;
};

/// Manifest for the online-education survey extract: 19 design columns.
std::string_view survey_manifest();

/// Manifest for numeric data "y,<columns...>" such as synthetic output; each
/// column is copied as is, a column named "Intercept" becomes the constant.
std::string numeric_manifest(const std::vector<std::string>& column_names);

struct DesignBuild {
    Dataset data;
    std::vector<std::size_t> source_rows;  // raw row behind each design row
    std::size_t excluded_response = 0;     // rows with a drop token as response
    std::size_t dropped_missing = 0;       // rows with any missing analysis variable
};

/// Encodes raw rows into a Dataset with listwise deletion of rows missing an
/// analysis variable. Throws ValidationError for tokens outside a declared
/// vocabulary, unparsable numbers, or when no rows remain.
DesignBuild build_design(const CsvTable& raw, const EncodingSpec& spec);

/// One descriptive line: mean/std for continuous columns, count/percent for indicators.
struct SummaryRow {
    enum class Kind { MeanStd, CountPercent };

    std::string label;
    Kind kind = Kind::MeanStd;
    double first = 0.0;   // mean or count
    double second = 0.0;  // std or percent
};

std::vector<SummaryRow> descriptive_summary(const DesignBuild& build, const EncodingSpec& spec);

void write_summary_rows(std::ostream& out, const std::vector<SummaryRow>& rows);

/// Yes/no shares per category of one raw column over the analysis sample.
/// With a threshold, the numeric column is split into "<= t" and "> t".
struct CrosstabRow {
    std::string category;
    std::size_t count = 0;
    std::size_t yes = 0;
    double yes_percent = 0.0;
    double no_percent = 0.0;
};

std::vector<CrosstabRow> crosstab(const CsvTable& raw, const DesignBuild& build, const std::string& column,
                                  std::optional<double> threshold = std::nullopt);

void write_crosstab(std::ostream& out, const std::vector<CrosstabRow>& rows);

}  // namespace bqr

#pragma once

#include <filesystem>
#include <iosfwd>
#include <map>
#include <string>
#include <string_view>
#include <vector>

#include "bqr/model.hpp"

namespace bqr {

/// Shortest decimal text that parses back to exactly `x`.
std::string format_double(double x);

/// Fixed-point text with `precision` digits after the point.
std::string format_fixed(double x, int precision);

/// Strict parse of a whole string as a double; throws ValidationError.
double parse_double(std::string_view text);

std::string trim(std::string_view text);

/// Comma-separated text with RFC 4180 quoting.
struct CsvTable {
    std::vector<std::string> header;
    std::vector<std::vector<std::string>> rows;

    /// Index of a header field; throws ValidationError when absent.
    std::size_t column(std::string_view name) const;
    bool has_column(std::string_view name) const;
};

CsvTable read_csv(std::istream& in, std::string_view source = "<stream>");
CsvTable read_csv_file(const std::filesystem::path& path);
void write_csv_row(std::ostream& out, const std::vector<std::string>& fields);
void write_csv(std::ostream& out, const CsvTable& table);
void write_csv_file(const std::filesystem::path& path, const CsvTable& table);

/// Dataset as CSV: header "y,<column names>", values in shortest round-trip form.
void write_dataset_csv(std::ostream& out, const Dataset& data);
Dataset read_dataset_csv(std::istream& in);

/// "key = value" lines; '#' starts a comment.
std::map<std::string, std::string> read_key_values(std::istream& in);
void write_key_values(std::ostream& out, const std::map<std::string, std::string>& values);

std::string read_text_file(const std::filesystem::path& path);
void write_text_file(const std::filesystem::path& path, std::string_view text);

}  // namespace bqr

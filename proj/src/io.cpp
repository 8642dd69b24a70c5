#include "bqr/io.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>
#include <system_error>

#include "bqr/error.hpp"

namespace bqr {

std::string format_double(double x) {
    if (std::isnan(x)) return "nan";
    char buf[64];
    const auto res = std::to_chars(buf, buf + sizeof buf, x);
    return std::string(buf, res.ptr);
}

std::string format_fixed(double x, int precision) {
    if (std::isnan(x)) return "nan";
    char buf[512];
    const auto res = std::to_chars(buf, buf + sizeof buf, x, std::chars_format::fixed, precision);
    if (res.ec != std::errc{}) return format_double(x);
    std::string s(buf, res.ptr);
    // Print negative zero as zero.
    if (s[0] == '-' && s.find_first_not_of("-0.") == std::string::npos) s.erase(0, 1);
    return s;
}

std::string trim(std::string_view text) {
    const auto first = text.find_first_not_of(" \t\r\n");
    if (first == std::string_view::npos) return {};
    const auto last = text.find_last_not_of(" \t\r\n");
    return std::string(text.substr(first, last - first + 1));
}

double parse_double(std::string_view text) {
    const std::string s = trim(text);
    if (s == "nan") return NAN;
    double value = 0.0;
    const char* begin = s.data();
    const char* end = s.data() + s.size();
    if (begin != end && *begin == '+') ++begin;
    const auto res = std::from_chars(begin, end, value);
    if (s.empty() || res.ec != std::errc{} || res.ptr != end) {
        throw ValidationError("not a number: '" + s + "'");
    }
    return value;
}

std::size_t CsvTable::column(std::string_view name) const {
    for (std::size_t j = 0; j < header.size(); ++j) {
        if (header[j] == name) return j;
    }
    throw ValidationError("missing column '" + std::string(name) + "'");
}

bool CsvTable::has_column(std::string_view name) const {
    for (const auto& h : header) {
        if (h == name) return true;
    }
    return false;
}

namespace {

// Splits one logical record; quoted fields may span physical lines.
bool read_record(std::istream& in, std::vector<std::string>& fields, std::size_t& line_no, std::string_view source) {
    fields.clear();
    std::string line;
    if (!std::getline(in, line)) return false;
    ++line_no;
    std::string field;
    bool quoted = false;
    std::size_t i = 0;
    for (;;) {
        if (i >= line.size()) {
            if (quoted) {
                if (!std::getline(in, line)) {
                    throw ValidationError(std::string(source) + ": unterminated quote at line " +
                                          std::to_string(line_no));
                }
                ++line_no;
                field += '\n';
                i = 0;
                continue;
            }
            break;
        }
        const char c = line[i];
        if (quoted) {
            if (c == '"') {
                if (i + 1 < line.size() && line[i + 1] == '"') {
                    field += '"';
                    ++i;
                } else {
                    quoted = false;
                }
            } else {
                field += c;
            }
        } else if (c == '"') {
            quoted = true;
        } else if (c == ',') {
            fields.push_back(std::move(field));
            field.clear();
        } else if (c != '\r') {
            field += c;
        }
        ++i;
    }
    fields.push_back(std::move(field));
    return true;
}

}  // namespace

CsvTable read_csv(std::istream& in, std::string_view source) {
    CsvTable table;
    std::size_t line_no = 0;
    std::vector<std::string> fields;
    if (!read_record(in, table.header, line_no, source)) {
        throw ValidationError(std::string(source) + ": empty file, expected a header row");
    }
    // Strip a UTF-8 byte order mark.
    if (!table.header.empty() && table.header[0].rfind("\xEF\xBB\xBF", 0) == 0) {
        table.header[0].erase(0, 3);
    }
    while (read_record(in, fields, line_no, source)) {
        if (fields.size() == 1 && trim(fields[0]).empty()) continue;
        if (fields.size() != table.header.size()) {
            throw ValidationError(std::string(source) + ": line " + std::to_string(line_no) + " has " +
                                  std::to_string(fields.size()) + " fields, header has " +
                                  std::to_string(table.header.size()));
        }
        table.rows.push_back(fields);
    }
    return table;
}

CsvTable read_csv_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ValidationError("cannot open '" + path.string() + "'");
    return read_csv(in, path.string());
}

void write_csv_row(std::ostream& out, const std::vector<std::string>& fields) {
    for (std::size_t j = 0; j < fields.size(); ++j) {
        if (j) out << ',';
        const auto& f = fields[j];
        if (f.find_first_of(",\"\n\r") != std::string::npos) {
            out << '"';
            for (char c : f) {
                if (c == '"') out << '"';
                out << c;
            }
            out << '"';
        } else {
            out << f;
        }
    }
    out << '\n';
}

void write_csv(std::ostream& out, const CsvTable& table) {
    write_csv_row(out, table.header);
    for (const auto& row : table.rows) write_csv_row(out, row);
}

void write_csv_file(const std::filesystem::path& path, const CsvTable& table) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw ValidationError("cannot write '" + path.string() + "'");
    write_csv(out, table);
    if (!out) throw ValidationError("write failed for '" + path.string() + "'");
}

void write_dataset_csv(std::ostream& out, const Dataset& data) {
    std::vector<std::string> fields{"y"};
    fields.insert(fields.end(), data.column_names.begin(), data.column_names.end());
    write_csv_row(out, fields);
    for (Eigen::Index i = 0; i < data.n(); ++i) {
        fields.assign(1, std::to_string(data.y[static_cast<std::size_t>(i)]));
        for (Eigen::Index j = 0; j < data.k(); ++j) fields.push_back(format_double(data.X(i, j)));
        write_csv_row(out, fields);
    }
}

Dataset read_dataset_csv(std::istream& in) {
    const auto table = read_csv(in, "dataset");
    if (table.header.empty() || table.header[0] != "y") {
        throw ValidationError("dataset header must start with 'y'");
    }
    Dataset data;
    data.column_names.assign(table.header.begin() + 1, table.header.end());
    const auto n = static_cast<Eigen::Index>(table.rows.size());
    const auto k = static_cast<Eigen::Index>(data.column_names.size());
    data.X.resize(n, k);
    data.y.resize(table.rows.size());
    for (Eigen::Index i = 0; i < n; ++i) {
        const auto& row = table.rows[static_cast<std::size_t>(i)];
        const double y = parse_double(row[0]);
        if (y != 0.0 && y != 1.0) throw ValidationError("non-binary response '" + row[0] + "'");
        data.y[static_cast<std::size_t>(i)] = static_cast<int>(y);
        for (Eigen::Index j = 0; j < k; ++j) data.X(i, j) = parse_double(row[static_cast<std::size_t>(j + 1)]);
    }
    return data;
}

std::map<std::string, std::string> read_key_values(std::istream& in) {
    std::map<std::string, std::string> values;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        const std::string t = trim(line.substr(0, line.find('#')));
        if (t.empty()) continue;
        const auto eq = t.find('=');
        if (eq == std::string::npos) {
            throw ValidationError("line " + std::to_string(line_no) + ": expected 'key = value'");
        }
        values[trim(t.substr(0, eq))] = trim(t.substr(eq + 1));
    }
    return values;
}

void write_key_values(std::ostream& out, const std::map<std::string, std::string>& values) {
    for (const auto& [key, value] : values) out << key << " = " << value << '\n';
}

std::string read_text_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ValidationError("cannot open '" + path.string() + "'");
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

void write_text_file(const std::filesystem::path& path, std::string_view text) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw ValidationError("cannot write '" + path.string() + "'");
    out << text;
    if (!out) throw ValidationError("write failed for '" + path.string() + "'");
}

}  // namespace bqr

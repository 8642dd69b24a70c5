#include "bqr/diagnostics.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <ostream>
#include <string>

#include "bqr/error.hpp"
#include "bqr/io.hpp"

namespace bqr {

namespace {

double sample_variance(std::span<const double> xs) {
    double mean = 0.0;
    for (double x : xs) mean += x;
    mean /= static_cast<double>(xs.size());
    double ss = 0.0;
    for (double x : xs) ss += (x - mean) * (x - mean);
    return ss / static_cast<double>(xs.size() - 1);
}

}  // namespace

double inefficiency_factor(std::span<const double> column, int batch_count) {
    if (batch_count < 2) throw ValidationError("batch count must be at least 2");
    const auto batches = static_cast<std::size_t>(batch_count);
    if (column.size() < 2 * batches) {
        throw ValidationError("inefficiency factor needs at least " + std::to_string(2 * batches) + " draws, got " +
                              std::to_string(column.size()));
    }
    const std::size_t m = column.size() / batches;
    const auto used = column.first(m * batches);
    const double var = sample_variance(used);
    if (!(var > 0.0)) throw NumericalError("degenerate chain: draws have zero variance");

    std::vector<double> means(batches);
    for (std::size_t b = 0; b < batches; ++b) {
        double s = 0.0;
        for (std::size_t t = 0; t < m; ++t) s += used[b * m + t];
        means[b] = s / static_cast<double>(m);
    }
    return static_cast<double>(m) * sample_variance(means) / var;
}

double sample_quantile(std::span<const double> values, double prob) {
    if (values.empty()) throw ValidationError("quantile of an empty sample");
    if (!(prob >= 0.0 && prob <= 1.0)) throw ValidationError("quantile probability outside [0, 1]");
    std::vector<double> sorted(values.begin(), values.end());
    std::sort(sorted.begin(), sorted.end());
    const double h = prob * static_cast<double>(sorted.size() - 1);
    const auto lo = static_cast<std::size_t>(std::floor(h));
    const std::size_t hi = std::min(lo + 1, sorted.size() - 1);
    return sorted[lo] + (h - static_cast<double>(lo)) * (sorted[hi] - sorted[lo]);
}

std::pair<double, double> credible_interval(std::span<const double> values, double level) {
    const double tail = 0.5 * (1.0 - level);
    return {sample_quantile(values, tail), sample_quantile(values, 1.0 - tail)};
}

PosteriorSummary summarize(const DrawsStore& draws, int batch_count) {
    const Eigen::Index m = draws.retained();
    if (m < 2) throw ValidationError("summary needs at least 2 retained draws, got " + std::to_string(m));
    PosteriorSummary out;
    out.model = draws.model;
    out.retained = m;
    for (Eigen::Index j = 0; j < draws.beta.cols(); ++j) {
        const Vector col = draws.beta.col(j);
        std::span<const double> xs(col.data(), static_cast<std::size_t>(col.size()));
        CoefficientSummary c;
        c.name = j < static_cast<Eigen::Index>(draws.column_names.size()) ? draws.column_names[static_cast<std::size_t>(j)]
                                                                          : "beta" + std::to_string(j);
        c.mean = col.mean();
        c.std = std::sqrt(sample_variance(xs));
        if (m >= 2 * static_cast<Eigen::Index>(batch_count) && c.std > 0.0) {
            c.inefficiency = inefficiency_factor(xs, batch_count);
        }
        std::tie(c.lower95, c.upper95) = credible_interval(xs, 0.95);
        out.coefficients.push_back(std::move(c));
    }
    return out;
}

void write_draws(const std::filesystem::path& dir, const DrawsStore& draws) {
    std::filesystem::create_directories(dir);
    {
        std::ofstream out(dir / "draws.csv", std::ios::binary);
        if (!out) throw ValidationError("cannot write draws to '" + dir.string() + "'");
        write_csv_row(out, draws.column_names);
        std::vector<std::string> fields(static_cast<std::size_t>(draws.beta.cols()));
        for (Eigen::Index r = 0; r < draws.beta.rows(); ++r) {
            for (Eigen::Index j = 0; j < draws.beta.cols(); ++j) {
                fields[static_cast<std::size_t>(j)] = format_double(draws.beta(r, j));
            }
            write_csv_row(out, fields);
        }
    }
    std::ofstream meta(dir / "chain.txt", std::ios::binary);
    write_key_values(meta, {{"model", draws.model.label()},
                            {"total_iterations", std::to_string(draws.config.total_iterations)},
                            {"burn_in", std::to_string(draws.config.burn_in)},
                            {"seed", std::to_string(draws.config.seed)},
                            {"retained", std::to_string(draws.retained())}});
}

DrawsStore read_draws(const std::filesystem::path& dir) {
    std::ifstream meta_in(dir / "chain.txt", std::ios::binary);
    if (!meta_in) throw ValidationError("no chain.txt in '" + dir.string() + "'");
    const auto meta = read_key_values(meta_in);
    auto get = [&](const std::string& key) {
        const auto it = meta.find(key);
        if (it == meta.end()) throw ValidationError("chain.txt lacks '" + key + "'");
        return it->second;
    };
    DrawsStore draws;
    draws.model = ModelTag::parse(get("model"));
    draws.config.total_iterations = std::stoi(get("total_iterations"));
    draws.config.burn_in = std::stoi(get("burn_in"));
    draws.config.seed = std::stoull(get("seed"));
    if (!draws.model.is_probit()) draws.config.quantile = draws.model.p;

    const auto table = read_csv_file(dir / "draws.csv");
    draws.column_names = table.header;
    draws.beta.resize(static_cast<Eigen::Index>(table.rows.size()), static_cast<Eigen::Index>(table.header.size()));
    for (std::size_t r = 0; r < table.rows.size(); ++r) {
        for (std::size_t j = 0; j < table.header.size(); ++j) {
            draws.beta(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(j)) = parse_double(table.rows[r][j]);
        }
    }
    if (!draws.beta.allFinite()) throw ValidationError("draws in '" + dir.string() + "' contain non-finite values");
    return draws;
}

namespace {

std::string optional_fixed(const std::optional<double>& x, int precision) {
    return x ? format_fixed(*x, precision) : "NA";
}

}  // namespace

void write_summary_csv(std::ostream& out, const PosteriorSummary& summary) {
    write_csv_row(out, {"name", "mean", "std", "inefficiency", "lower95", "upper95"});
    for (const auto& c : summary.coefficients) {
        write_csv_row(out, {c.name, format_fixed(c.mean, 6), format_fixed(c.std, 6), optional_fixed(c.inefficiency, 4),
                            format_fixed(c.lower95, 6), format_fixed(c.upper95, 6)});
    }
}

void write_posterior_table(std::ostream& out, const std::vector<PosteriorSummary>& summaries) {
    if (summaries.empty()) return;
    std::vector<std::string> header{"coefficient"};
    for (const auto& s : summaries) {
        header.push_back(s.model.label() + "_mean");
        header.push_back(s.model.label() + "_std");
    }
    write_csv_row(out, header);
    const auto& rows = summaries.front().coefficients;
    for (std::size_t j = 0; j < rows.size(); ++j) {
        std::vector<std::string> fields{rows[j].name};
        for (const auto& s : summaries) {
            if (s.coefficients.size() != rows.size() || s.coefficients[j].name != rows[j].name) {
                throw ValidationError("posterior table: models have different coefficients");
            }
            fields.push_back(format_fixed(s.coefficients[j].mean, 4));
            fields.push_back(format_fixed(s.coefficients[j].std, 4));
        }
        write_csv_row(out, fields);
    }
}

}  // namespace bqr

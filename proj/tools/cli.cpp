#include "cli.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <exception>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "bqr/dgp.hpp"
#include "bqr/diagnostics.hpp"
#include "bqr/effects.hpp"
#include "bqr/error.hpp"
#include "bqr/fit_metrics.hpp"
#include "bqr/gibbs_bqr.hpp"
#include "bqr/gibbs_probit.hpp"
#include "bqr/io.hpp"
#include "bqr/rng.hpp"
#include "bqr/survey.hpp"

namespace bqr::cli {

namespace fs = std::filesystem;

namespace {

struct FitOptions {
    std::string data;
    std::string schema;
    std::vector<double> quantiles{0.10, 0.25, 0.50, 0.75, 0.90};
    int iterations = 25000;
    int burn_in = 5000;
    std::uint64_t seed = 0;
    double prior_variance = 1000.0;
    int batch_count = kDefaultBatchCount;
    std::string effects_spec;
    std::string out;
    std::string config;
    bool overwrite = false;
};

struct SimulateOptions {
    Eigen::Index n = 1000;
    std::optional<Eigen::Index> k;  // defaults to the length of --beta, else 3
    std::vector<double> beta;
    double quantile = 0.5;
    bool probit = false;
    double rho = 0.0;
    std::uint64_t seed = 0;
    std::string out;
    std::string latent_out;
    bool survey = false;
    std::string schema_out;
    double refused_share = 0.0;
    double missing_share = 0.0;
};

struct SummarizeOptions {
    std::string draws;
    int batch_count = kDefaultBatchCount;
    std::string out;
};

struct EffectsOptions {
    std::string draws;
    std::string data;
    std::string schema;
    std::string effects_spec;
    std::string out;
};

struct Design {
    EncodingSpec encoding;
    DesignBuild build;
};

Design load_design(const std::string& data_path, const std::string& schema_path, std::ostream& err) {
    const CsvTable raw = read_csv_file(data_path);
    std::string manifest;
    if (schema_path.empty()) {
        if (raw.header.empty() || raw.header.front() != "y") {
            throw ValidationError("without --schema the data file must be numeric with 'y' as its first column");
        }
        manifest = numeric_manifest({raw.header.begin() + 1, raw.header.end()});
    } else {
        manifest = read_text_file(schema_path);
    }
    Design design{EncodingSpec::parse(manifest), {}};
    design.build = build_design(raw, design.encoding);
    const auto report = validate_dataset(design.build.data);
    if (!report.ok()) require_valid(design.build.data);
    for (const auto& w : report.warnings) err << "warning: " << w << '\n';
    return design;
}

std::vector<ModelTag> model_grid(const std::vector<double>& quantiles) {
    std::vector<ModelTag> models{ModelTag::probit()};
    for (double p : quantiles) {
        if (!(p > 0.0 && p < 1.0)) {
            throw ValidationError("quantile " + format_double(p) + " is outside (0, 1)");
        }
        const ModelTag tag = ModelTag::quantile(p);
        if (std::find(models.begin(), models.end(), tag) != models.end()) {
            throw ValidationError("quantile " + format_double(p) + " is listed twice");
        }
        models.push_back(tag);
    }
    return models;
}

std::string join(const std::vector<double>& values) {
    std::string out;
    for (double v : values) out += (out.empty() ? "" : ",") + format_double(v);
    return out;
}

template <class Write>
void write_file(const fs::path& path, Write&& write) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw ValidationError("cannot write " + path.string());
    write(out);
    if (!out) throw ValidationError("failed writing " + path.string());
}

// Flat "key = value" config: keys are long flag names without dashes.
// Only flags absent from the command line take the config value.
void merge_config(CLI::App& cmd, const std::string& config_path) {
    std::ifstream in(config_path);
    if (!in) throw ValidationError("cannot read config file " + config_path);
    for (const auto& [key, value] : read_key_values(in)) {
        std::string flag = key;
        std::replace(flag.begin(), flag.end(), '_', '-');
        CLI::Option* opt = cmd.get_option_no_throw("--" + flag);
        if (opt == nullptr || flag == "config") throw ValidationError("unknown config key '" + key + "'");
        if (opt->count() > 0) continue;
        try {
            opt->add_result(value);
            opt->run_callback();
        } catch (const CLI::Error& e) {
            throw ValidationError("config key '" + key + "': " + e.what());
        }
    }
}

// Removes a staging directory unless released.
class StagingDir {
public:
    explicit StagingDir(fs::path path) : path_(std::move(path)) {
        fs::remove_all(path_);
        fs::create_directories(path_);
    }
    StagingDir(const StagingDir&) = delete;
    StagingDir& operator=(const StagingDir&) = delete;
    ~StagingDir() {
        std::error_code ec;
        if (!released_) fs::remove_all(path_, ec);
    }

    const fs::path& path() const { return path_; }

    void commit(const fs::path& target) {
        fs::rename(path_, target);
        released_ = true;
    }

private:
    fs::path path_;
    bool released_ = false;
};

int fit(const FitOptions& opt, std::ostream& err) {
    if (opt.data.empty()) throw ValidationError("--data is required");
    if (opt.out.empty()) throw ValidationError("--out is required");
    if (!(opt.prior_variance > 0.0)) throw ValidationError("--prior-variance must be positive");
    if (opt.batch_count < 2) throw ValidationError("--batch-count must be at least 2");
    const auto models = model_grid(opt.quantiles);

    SamplerConfig base;
    base.total_iterations = opt.iterations;
    base.burn_in = opt.burn_in;
    base.validate(false);
    if (base.retained() < 2 * opt.batch_count) {
        throw ValidationError("retained draws (" + std::to_string(base.retained()) + ") must be at least twice --batch-count");
    }

    const fs::path out_dir(opt.out);
    if (fs::exists(out_dir) && !opt.overwrite) {
        throw ValidationError("output directory " + out_dir.string() + " exists; pass --overwrite to replace it");
    }

    const Design design = load_design(opt.data, opt.schema, err);
    const Dataset& data = design.build.data;
    const PriorSpec prior = PriorSpec::diffuse(data.k(), opt.prior_variance);
    std::vector<EffectSpec> effect_specs;
    if (!opt.effects_spec.empty()) effect_specs = load_effect_specs(opt.effects_spec);

    StagingDir staging(fs::path(out_dir.string() + ".partial"));

    // One thread per model; each writes only its own directory.
    std::vector<DrawsStore> chains(models.size());
    std::vector<PosteriorSummary> summaries(models.size());
    std::vector<FitReport> fits(models.size());
    std::vector<std::exception_ptr> failures(models.size());
    std::vector<std::uint64_t> seeds(models.size());
    {
        std::vector<std::jthread> workers;
        for (std::size_t c = 0; c < models.size(); ++c) {
            seeds[c] = split_seed(opt.seed, c);
            workers.emplace_back([&, c] {
                try {
                    SamplerConfig config = base;
                    config.seed = seeds[c];
                    config.quantile = models[c].p;
                    chains[c] = models[c].is_probit() ? run_probit_chain(data, prior, config)
                                                      : run_chain(data, prior, config);
                    summaries[c] = summarize(chains[c], opt.batch_count);
                    fits[c] = fit_report(data, chains[c].posterior_mean(), models[c]);
                    const fs::path dir = staging.path() / models[c].label();
                    write_draws(dir, chains[c]);
                    write_file(dir / "summary.csv", [&](std::ostream& o) { write_summary_csv(o, summaries[c]); });
                    write_file(dir / "fit.csv", [&](std::ostream& o) { write_fit_csv(o, {fits[c]}); });
                } catch (...) {
                    failures[c] = std::current_exception();
                }
            });
        }
    }
    for (const auto& failure : failures) {
        if (failure) std::rethrow_exception(failure);
    }

    const fs::path root = staging.path();
    write_file(root / "posterior_table.csv", [&](std::ostream& o) { write_posterior_table(o, summaries); });
    write_file(root / "fit_metrics.csv", [&](std::ostream& o) { write_fit_csv(o, fits); });
    write_file(root / "data_summary.csv", [&](std::ostream& o) {
        write_summary_rows(o, descriptive_summary(design.build, design.encoding));
    });
    if (!effect_specs.empty()) {
        const EffectReport report = effect_report(chains, data, effect_specs);
        write_file(root / "effects.csv", [&](std::ostream& o) { write_effect_table(o, report); });
    }

    std::map<std::string, std::string> run{
        {"data", opt.data},
        {"schema", opt.schema.empty() ? "numeric" : opt.schema},
        {"quantiles", join(opt.quantiles)},
        {"iterations", std::to_string(opt.iterations)},
        {"burn_in", std::to_string(opt.burn_in)},
        {"seed", std::to_string(opt.seed)},
        {"prior_variance", format_double(opt.prior_variance)},
        {"batch_count", std::to_string(opt.batch_count)},
        {"n", std::to_string(data.n())},
        {"k", std::to_string(data.k())},
        {"excluded_response", std::to_string(design.build.excluded_response)},
        {"dropped_missing", std::to_string(design.build.dropped_missing)},
    };
    if (!opt.effects_spec.empty()) run["effects_spec"] = opt.effects_spec;
    for (std::size_t c = 0; c < models.size(); ++c) run["seed." + models[c].label()] = std::to_string(seeds[c]);
    write_file(root / "run.txt", [&](std::ostream& o) { write_key_values(o, run); });

    if (fs::exists(out_dir)) fs::remove_all(out_dir);
    staging.commit(out_dir);
    return 0;
}

int simulate(const SimulateOptions& opt) {
    if (opt.out.empty()) throw ValidationError("--out is required");
    std::optional<double> quantile;
    if (!opt.probit) quantile = opt.quantile;

    if (opt.survey) {
        SurveySimulation spec;
        spec.n = opt.n;
        if (!opt.beta.empty()) spec.beta = Eigen::Map<const Vector>(opt.beta.data(), static_cast<Eigen::Index>(opt.beta.size()));
        spec.quantile = quantile;
        spec.refused_share = opt.refused_share;
        spec.missing_share = opt.missing_share;
        spec.seed = opt.seed;
        const CsvTable raw = simulate_survey(spec);
        write_csv_file(opt.out, raw);
        if (!opt.schema_out.empty()) write_text_file(opt.schema_out, survey_manifest());
        return 0;
    }

    const Eigen::Index k = opt.k.value_or(opt.beta.empty() ? 3 : static_cast<Eigen::Index>(opt.beta.size()));
    if (k < 1) throw ValidationError("--k must be at least 1");
    DgpSpec spec;
    spec.n = opt.n;
    spec.quantile = quantile;
    spec.seed = opt.seed;
    if (opt.beta.empty()) {
        // 0.5, -1, 0.25 repeated.
        static constexpr double pattern[] = {0.5, -1.0, 0.25};
        spec.beta.resize(k);
        for (Eigen::Index j = 0; j < k; ++j) spec.beta[j] = pattern[j % 3];
    } else {
        if (static_cast<Eigen::Index>(opt.beta.size()) != k) {
            throw ValidationError("--beta has " + std::to_string(opt.beta.size()) + " entries but --k is " + std::to_string(k));
        }
        spec.beta = Eigen::Map<const Vector>(opt.beta.data(), k);
    }
    if (opt.rho != 0.0 && k > 1) {
        if (!(opt.rho > -1.0 / static_cast<double>(std::max<Eigen::Index>(k - 2, 1)) && opt.rho < 1.0)) {
            throw ValidationError("--rho does not give a positive definite covariance");
        }
        Matrix cov = Matrix::Constant(k - 1, k - 1, opt.rho);
        cov.diagonal().setOnes();
        spec.covariance = cov;
    }
    const Simulation sim = generate(spec);
    write_file(opt.out, [&](std::ostream& o) { write_dataset_csv(o, sim.data); });
    if (!opt.latent_out.empty()) {
        write_file(opt.latent_out, [&](std::ostream& o) {
            write_csv_row(o, {"z", "error"});
            for (Eigen::Index i = 0; i < sim.latent.size(); ++i) {
                write_csv_row(o, {format_double(sim.latent[i]), format_double(sim.errors[i])});
            }
        });
    }
    return 0;
}

// A single chain directory, or the model directories of a fit output tree
// (probit first, then quantiles in increasing order).
std::vector<DrawsStore> load_chains(const fs::path& dir) {
    if (fs::exists(dir / "chain.txt")) return {read_draws(dir)};
    if (!fs::is_directory(dir)) throw ValidationError("draws directory " + dir.string() + " does not exist");
    std::vector<fs::path> dirs;
    for (const auto& entry : fs::directory_iterator(dir)) {
        if (entry.is_directory() && fs::exists(entry.path() / "chain.txt")) dirs.push_back(entry.path());
    }
    if (dirs.empty()) throw ValidationError("no chain directories under " + dir.string());
    std::vector<DrawsStore> chains;
    for (const auto& d : dirs) chains.push_back(read_draws(d));
    std::sort(chains.begin(), chains.end(), [](const DrawsStore& a, const DrawsStore& b) {
        if (a.model.is_probit() != b.model.is_probit()) return a.model.is_probit();
        return a.model.p < b.model.p;
    });
    return chains;
}

void emit(const std::string& path, std::ostream& out, const std::function<void(std::ostream&)>& write) {
    if (path.empty()) {
        write(out);
    } else {
        write_file(path, write);
    }
}

int summarize_cmd(const SummarizeOptions& opt, std::ostream& out) {
    const fs::path dir(opt.draws);
    const auto chains = load_chains(dir);
    std::vector<PosteriorSummary> summaries;
    for (const auto& chain : chains) summaries.push_back(summarize(chain, opt.batch_count));
    emit(opt.out, out, [&](std::ostream& o) {
        if (fs::exists(dir / "chain.txt")) {
            write_summary_csv(o, summaries.front());
        } else {
            write_posterior_table(o, summaries);
        }
    });
    return 0;
}

int effects_cmd(const EffectsOptions& opt, std::ostream& out, std::ostream& err) {
    const auto chains = load_chains(opt.draws);
    const Design design = load_design(opt.data, opt.schema, err);
    for (const auto& chain : chains) {
        if (chain.column_names != design.build.data.column_names) {
            throw ValidationError("chain " + chain.model.label() + " columns do not match the design built from --data");
        }
    }
    const EffectReport report = effect_report(chains, design.build.data, load_effect_specs(opt.effects_spec));
    emit(opt.out, out, [&](std::ostream& o) { write_effect_table(o, report); });
    return 0;
}

std::string one_line(std::string text) {
    std::replace(text.begin(), text.end(), '\n', ' ');
    std::replace(text.begin(), text.end(), '\r', ' ');
    return text;
}

int fail(std::ostream& err, const char* kind, const std::string& message, int code) {
    err << "error: kind=" << kind << " message=" << one_line(message) << '\n';
    return code;
}

}  // namespace

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
    CLI::App app{"Bayesian binary quantile regression and probit via Gibbs sampling", "bqr"};
    app.require_subcommand(1);

    FitOptions fit_opt;
    auto* fit_cmd = app.add_subcommand("fit", "Fit probit and quantile models to a data file");
    fit_cmd->add_option("--data", fit_opt.data, "CSV data file");
    fit_cmd->add_option("--schema", fit_opt.schema, "Schema manifest; omit for numeric y,<columns> data");
    fit_cmd->add_option("--quantiles", fit_opt.quantiles, "Comma-separated quantile grid")->delimiter(',');
    fit_cmd->add_option("--iterations", fit_opt.iterations, "Total Gibbs iterations including burn-in");
    fit_cmd->add_option("--burn-in", fit_opt.burn_in, "Discarded initial iterations");
    fit_cmd->add_option("--seed", fit_opt.seed, "Base seed, split per chain");
    fit_cmd->add_option("--prior-variance", fit_opt.prior_variance, "Prior variance of each coefficient");
    fit_cmd->add_option("--batch-count", fit_opt.batch_count, "Batches for inefficiency factors");
    fit_cmd->add_option("--effects-spec", fit_opt.effects_spec, "JSON covariate-effect definitions");
    fit_cmd->add_option("--out", fit_opt.out, "Output directory");
    fit_cmd->add_option("--config", fit_opt.config, "key = value file with the same keys as the flags");
    fit_cmd->add_flag("--overwrite", fit_opt.overwrite, "Replace an existing output directory");

    SimulateOptions sim_opt;
    auto* sim_cmd = app.add_subcommand("simulate", "Generate data from the latent model");
    sim_cmd->add_option("--n", sim_opt.n, "Rows");
    sim_cmd->add_option("--k", sim_opt.k, "Coefficients including the intercept");
    sim_cmd->add_option("--beta", sim_opt.beta, "Comma-separated true coefficients")->delimiter(',');
    sim_cmd->add_option("--quantile", sim_opt.quantile, "Quantile of the asymmetric Laplace errors");
    sim_cmd->add_flag("--probit", sim_opt.probit, "Standard normal errors instead");
    sim_cmd->add_option("--rho", sim_opt.rho, "Equicorrelation of the non-constant covariates");
    sim_cmd->add_option("--seed", sim_opt.seed, "Seed");
    sim_cmd->add_option("--out", sim_opt.out, "Output CSV");
    sim_cmd->add_option("--latent-out", sim_opt.latent_out, "Optional CSV of latent z and errors");
    sim_cmd->add_flag("--survey", sim_opt.survey, "Raw survey-shaped records instead of numeric columns");
    sim_cmd->add_option("--schema-out", sim_opt.schema_out, "With --survey, write the matching schema manifest");
    sim_cmd->add_option("--refused-share", sim_opt.refused_share, "With --survey, share of refused responses");
    sim_cmd->add_option("--missing-share", sim_opt.missing_share, "With --survey, share of rows missing income");

    SummarizeOptions sum_opt;
    auto* sum_cmd = app.add_subcommand("summarize", "Posterior summaries of stored draws");
    sum_cmd->add_option("--draws", sum_opt.draws, "Chain directory or fit output directory")->required();
    sum_cmd->add_option("--batch-count", sum_opt.batch_count, "Batches for inefficiency factors");
    sum_cmd->add_option("--out", sum_opt.out, "Output CSV; stdout when omitted");

    EffectsOptions eff_opt;
    auto* eff_cmd = app.add_subcommand("effects", "Covariate effects from stored draws");
    eff_cmd->add_option("--draws", eff_opt.draws, "Chain directory or fit output directory")->required();
    eff_cmd->add_option("--data", eff_opt.data, "CSV data file used for the fit")->required();
    eff_cmd->add_option("--schema", eff_opt.schema, "Schema manifest used for the fit");
    eff_cmd->add_option("--effects-spec", eff_opt.effects_spec, "JSON covariate-effect definitions")->required();
    eff_cmd->add_option("--out", eff_opt.out, "Output CSV; stdout when omitted");

    try {
        try {
            app.parse(argc, argv);
        } catch (const CLI::CallForHelp&) {
            out << app.help();
            return 0;
        } catch (const CLI::CallForAllHelp&) {
            out << app.help("", CLI::AppFormatMode::All);
            return 0;
        } catch (const CLI::ParseError& e) {
            return fail(err, "validation", e.what(), 2);
        }
        if (fit_cmd->parsed()) {
            if (!fit_opt.config.empty()) merge_config(*fit_cmd, fit_opt.config);
            return fit(fit_opt, err);
        }
        if (sim_cmd->parsed()) return simulate(sim_opt);
        if (sum_cmd->parsed()) return summarize_cmd(sum_opt, out);
        return effects_cmd(eff_opt, out, err);
    } catch (const ValidationError& e) {
        return fail(err, "validation", e.what(), 2);
    } catch (const NumericalError& e) {
        return fail(err, "numerical", e.what(), 3);
    } catch (const fs::filesystem_error& e) {
        return fail(err, "validation", e.what(), 2);
    } catch (const std::exception& e) {
        return fail(err, "internal", e.what(), 1);
    }
}

}  // namespace bqr::cli

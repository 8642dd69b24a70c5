#include "bqr/model.hpp"

#include <cmath>
#include <string>

#include <Eigen/QR>

#include "bqr/error.hpp"
#include "bqr/io.hpp"

namespace bqr {

Eigen::Index Dataset::column(const std::string& name) const {
    for (std::size_t j = 0; j < column_names.size(); ++j) {
        if (column_names[j] == name) return static_cast<Eigen::Index>(j);
    }
    throw ValidationError("unknown column '" + name + "'");
}

ValidationReport validate_dataset(const Dataset& data) {
    ValidationReport report;
    if (data.k() < 1) report.errors.push_back("design matrix has no columns");
    if (static_cast<Eigen::Index>(data.y.size()) != data.n()) {
        report.errors.push_back("response length " + std::to_string(data.y.size()) + " does not match " +
                                std::to_string(data.n()) + " design rows");
    }
    if (static_cast<Eigen::Index>(data.column_names.size()) != data.k()) {
        report.errors.push_back("expected " + std::to_string(data.k()) + " column names, got " +
                                std::to_string(data.column_names.size()));
    }
    for (std::size_t i = 0; i < data.y.size(); ++i) {
        if (data.y[i] != 0 && data.y[i] != 1) {
            report.errors.push_back("non-binary response at row " + std::to_string(i) + ": " +
                                    std::to_string(data.y[i]));
            break;
        }
    }
    if (!data.X.allFinite()) report.errors.push_back("design matrix has non-finite entries");

    if (report.ok() && data.k() >= 1) {
        if (data.n() < data.k()) {
            report.warnings.push_back("rank deficiency: fewer rows than columns");
        } else {
            Eigen::ColPivHouseholderQR<Matrix> qr(data.X);
            qr.setThreshold(1e-10);
            if (qr.rank() < data.k()) {
                report.warnings.push_back("rank deficiency: X'X is numerically singular (rank " +
                                          std::to_string(qr.rank()) + " of " + std::to_string(data.k()) + ")");
            }
        }
    }
    return report;
}

void require_valid(const Dataset& data) {
    const auto report = validate_dataset(data);
    if (report.ok()) return;
    std::string message = "invalid dataset:";
    for (const auto& e : report.errors) message += " " + e + ";";
    message.pop_back();
    throw ValidationError(message);
}

PriorSpec PriorSpec::diffuse(Eigen::Index k, double variance) {
    if (!(variance > 0.0) || !std::isfinite(variance)) {
        throw ValidationError("prior variance must be positive, got " + std::to_string(variance));
    }
    return {Vector::Zero(k), variance * Matrix::Identity(k, k)};
}

void PriorSpec::validate(Eigen::Index k) const {
    if (beta0.size() != k || B0.rows() != k || B0.cols() != k) {
        throw ValidationError("prior dimensions do not match " + std::to_string(k) + " covariates");
    }
    if (!beta0.allFinite()) throw ValidationError("prior mean has non-finite entries");
    try {
        cholesky(B0, "prior covariance");
    } catch (const NumericalError& e) {
        throw ValidationError(e.what());
    }
}

void SamplerConfig::validate(bool check_quantile) const {
    if (check_quantile && !(quantile > 0.0 && quantile < 1.0)) {
        throw ValidationError("quantile must lie in (0, 1), got " + format_double(quantile));
    }
    if (total_iterations < 1) throw ValidationError("total iterations must be positive");
    if (burn_in < 0 || burn_in >= total_iterations) {
        throw ValidationError("burn-in must satisfy 0 <= burn-in < total iterations");
    }
}

std::string ModelTag::label() const {
    if (is_probit()) return "probit";
    const double percent = p * 100.0;
    if (std::fabs(percent - std::round(percent)) < 1e-9) return "q" + format_fixed(p, 2);
    return "q" + format_double(p);
}

ModelTag ModelTag::parse(const std::string& label) {
    if (label == "probit") return probit();
    if (label.size() > 1 && label[0] == 'q') {
        const double p = parse_double(label.substr(1));
        if (p > 0.0 && p < 1.0) return quantile(p);
    }
    throw ValidationError("unrecognized model tag '" + label + "'");
}

Vector DrawsStore::posterior_mean() const {
    if (beta.rows() == 0) throw ValidationError("draw store is empty");
    return beta.colwise().mean().transpose();
}

}  // namespace bqr

#include "remeta/model.hpp"

#include <cmath>
#include <numeric>
#include <string>

#include "remeta/errors.hpp"

namespace remeta {

Dataset::Dataset(std::vector<Study> studies) {
    labels_.reserve(studies.size());
    estimates_.reserve(studies.size());
    std_errors_.reserve(studies.size());
    for (auto& s : studies) {
        labels_.push_back(std::move(s.label));
        estimates_.push_back(s.estimate);
        std_errors_.push_back(s.std_error);
    }
    validate();
    variances_.reserve(std_errors_.size());
    for (double se : std_errors_) variances_.push_back(se * se);
}

Dataset Dataset::from_arrays(std::span<const double> estimates, std::span<const double> std_errors) {
    if (estimates.size() != std_errors.size()) {
        throw ContractError("Dataset: estimates and standard errors differ in length");
    }
    Dataset d;
    d.estimates_.assign(estimates.begin(), estimates.end());
    d.std_errors_.assign(std_errors.begin(), std_errors.end());
    d.labels_.reserve(estimates.size());
    for (std::size_t i = 0; i < estimates.size(); ++i) d.labels_.push_back(std::to_string(i + 1));
    d.validate();
    d.variances_.reserve(d.std_errors_.size());
    for (double se : d.std_errors_) d.variances_.push_back(se * se);
    return d;
}

void Dataset::validate() const {
    if (estimates_.empty()) throw ContractError("Dataset: at least one study is required");
    for (std::size_t i = 0; i < estimates_.size(); ++i) {
        if (!std::isfinite(estimates_[i])) {
            throw DomainError("Dataset: estimate of study " + std::to_string(i + 1) + " is not finite");
        }
        if (!(std_errors_[i] > 0.0) || !std::isfinite(std_errors_[i])) {
            throw DomainError("Dataset: standard error of study " + std::to_string(i + 1) +
                              " must be positive and finite");
        }
    }
}

Study Dataset::study(std::size_t i) const {
    return Study{labels_.at(i), estimates_.at(i), std_errors_.at(i)};
}

std::vector<Study> Dataset::studies() const {
    std::vector<Study> out;
    out.reserve(size());
    for (std::size_t i = 0; i < size(); ++i) out.push_back(study(i));
    return out;
}

std::vector<double> weights(const Dataset& d, double tau2) {
    if (!(tau2 >= 0.0)) throw DomainError("weights: tau2 must be non-negative");
    std::vector<double> w;
    w.reserve(d.size());
    for (double v : d.variances()) w.push_back(1.0 / (v + tau2));
    return w;
}

double pooled_estimate(const Dataset& d, std::span<const double> w) {
    if (w.size() != d.size()) throw ContractError("pooled_estimate: weights and studies differ in length");
    const auto y = d.estimates();
    double sw = 0.0;
    double swy = 0.0;
    for (std::size_t i = 0; i < w.size(); ++i) {
        sw += w[i];
        swy += w[i] * y[i];
    }
    return swy / sw;
}

double pooled_se(std::span<const double> w) {
    if (w.empty()) throw ContractError("pooled_se: no weights");
    double sw = 0.0;
    for (double wi : w) {
        if (!(wi > 0.0)) throw ContractError("pooled_se: weights must be positive");
        sw += wi;
    }
    return 1.0 / std::sqrt(sw);
}

PooledSummary pool(const Dataset& d, double tau2) {
    PooledSummary s;
    s.tau2 = tau2;
    s.weights = weights(d, tau2);
    s.mu_hat = pooled_estimate(d, s.weights);
    s.sigma_mu_hat = pooled_se(s.weights);
    return s;
}

double mean_squared_stderr(const Dataset& d) {
    const auto v = d.variances();
    return std::accumulate(v.begin(), v.end(), 0.0) / static_cast<double>(v.size());
}

double i_squared(double tau2, const Dataset& d) {
    if (!(tau2 >= 0.0)) throw DomainError("i_squared: tau2 must be non-negative");
    return tau2 / (tau2 + mean_squared_stderr(d));
}

double tau2_from_i2(double i2, std::span<const double> variances) {
    if (!(i2 >= 0.0 && i2 < 1.0)) throw DomainError("tau2_from_i2: I^2 must lie in [0,1)");
    if (variances.empty()) throw ContractError("tau2_from_i2: no variances");
    const double s2 = std::accumulate(variances.begin(), variances.end(), 0.0) / static_cast<double>(variances.size());
    return s2 * i2 / (1.0 - i2);
}

double tau2_from_i2(double i2, const Dataset& d) {
    return tau2_from_i2(i2, d.variances());
}

}  // namespace remeta

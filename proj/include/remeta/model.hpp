#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <vector>

namespace remeta {

/// One study: an effect estimate y_i with its (known) standard error s_i.
struct Study {
    std::string label;
    double estimate = 0.0;
    double std_error = 1.0;
};

/// Ordered collection of studies, k >= 1. Estimates and variances are kept in
/// contiguous arrays since every computation downstream works on them directly.
class Dataset {
public:
    /// Throws ContractError if empty, DomainError if any stderr is not positive
    /// and finite or any estimate is not finite.
    explicit Dataset(std::vector<Study> studies);

    /// Unlabelled dataset, used by the simulation. Labels default to "1".."k".
    static Dataset from_arrays(std::span<const double> estimates, std::span<const double> std_errors);

    std::size_t size() const noexcept { return estimates_.size(); }

    std::span<const double> estimates() const noexcept { return estimates_; }
    /// Squared standard errors s_i^2.
    std::span<const double> variances() const noexcept { return variances_; }

    Study study(std::size_t i) const;
    std::vector<Study> studies() const;

private:
    Dataset() = default;
    void validate() const;

    std::vector<std::string> labels_;
    std::vector<double> estimates_;
    std::vector<double> std_errors_;
    std::vector<double> variances_;
};

/// Pooled random-effects quantities conditional on a heterogeneity value.
struct PooledSummary {
    double mu_hat = 0.0;
    double sigma_mu_hat = 0.0;
    std::vector<double> weights;
    double tau2 = 0.0;
};

/// Inverse-variance weights 1 / (s_i^2 + tau2). Throws DomainError for tau2 < 0.
std::vector<double> weights(const Dataset& d, double tau2);

/// Weighted mean of the estimates. Throws ContractError on length mismatch.
double pooled_estimate(const Dataset& d, std::span<const double> w);

/// (sum w)^(-1/2). Throws ContractError for empty or non-positive weights.
double pooled_se(std::span<const double> w);

PooledSummary pool(const Dataset& d, double tau2);

/// Arithmetic mean of the squared standard errors, the "typical" within-study
/// variance in the I^2 definition.
double mean_squared_stderr(const Dataset& d);

/// I^2 = tau2 / (tau2 + mean s_i^2).
double i_squared(double tau2, const Dataset& d);

/// Inverse of i_squared. Throws DomainError unless 0 <= i2 < 1.
double tau2_from_i2(double i2, const Dataset& d);

/// Same as above for a bare list of within-study variances.
double tau2_from_i2(double i2, std::span<const double> variances);

}  // namespace remeta

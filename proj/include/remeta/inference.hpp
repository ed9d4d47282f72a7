#pragma once

#include <cstddef>
#include <string_view>
#include <vector>

#include "remeta/heterogeneity.hpp"
#include "remeta/model.hpp"

namespace remeta {

enum class IntervalMethod { Normal, Hksj, Mkh };

std::string_view to_string(IntervalMethod m) noexcept;

struct ConfidenceInterval {
    double lower = 0.0;
    double upper = 0.0;
    IntervalMethod method = IntervalMethod::Normal;
    double alpha = 0.05;

    double center() const noexcept { return 0.5 * (lower + upper); }
    double length() const noexcept { return upper - lower; }
    bool contains(double x) const noexcept { return lower <= x && x <= upper; }
};

/// Quantiles z_{1-alpha/2} and t_{k-1;1-alpha/2}. Computing them once per
/// (k, alpha) keeps them out of simulation inner loops.
struct CriticalValues {
    std::size_t k = 0;
    double alpha = 0.05;
    double z = 0.0;
    double t = 0.0;

    static CriticalValues compute(std::size_t k, double alpha);
};

/// q = Q(tau2_hat) / (k - 1).
double q_factor(const Dataset& d, double tau2_hat);

/// max(1, q). Throws DomainError for q < 0.
double q_star(double q);

ConfidenceInterval ci_normal(double mu_hat, double sigma_mu_hat, double alpha);
ConfidenceInterval ci_hksj(double mu_hat, double sigma_mu_hat, double q, std::size_t k, double alpha);
ConfidenceInterval ci_mkh(double mu_hat, double sigma_mu_hat, double q, std::size_t k, double alpha);

struct AnalysisResult {
    std::size_t k = 0;
    Estimator estimator = Estimator::DL;
    double alpha = 0.05;
    TauEstimate tau2;
    double i2_hat = 0.0;
    std::vector<double> weights;
    double mu_hat = 0.0;
    double sigma_mu_hat = 0.0;
    double q = 0.0;
    double q_star = 1.0;
    ConfidenceInterval normal;
    ConfidenceInterval hksj;
    ConfidenceInterval mkh;

    const ConfidenceInterval& interval(IntervalMethod m) const noexcept;
};

/// Estimate tau2, then pool conditional on it and build all three intervals.
AnalysisResult analyze(const Dataset& d, Estimator estimator, double alpha);

/// Same, with precomputed critical values (crit.k must equal d.size()).
AnalysisResult analyze(const Dataset& d, Estimator estimator, const CriticalValues& crit);

}  // namespace remeta

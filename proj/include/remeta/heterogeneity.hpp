#pragma once

#include <string_view>

#include "remeta/model.hpp"

namespace remeta {

enum class Estimator { DL, REML, PM };

std::string_view to_string(Estimator e) noexcept;

/// Case-insensitive "dl", "reml", "pm". Throws DomainError otherwise.
Estimator parse_estimator(std::string_view name);

struct TauEstimate {
    double value = 0.0;
    Estimator estimator = Estimator::DL;
    bool converged = true;
    int iterations = 0;
};

/// Confidence interval for tau^2.
struct TauInterval {
    double lower = 0.0;
    double upper = 0.0;
    double alpha = 0.05;
};

struct RemlOptions {
    double tol = 1e-10;
    int max_iter = 200;
};

/// Generalized Q statistic sum w_i (y_i - mu_hat)^2 with weights at tau2.
/// Non-increasing in tau2. Throws InsufficientDataError for k < 2.
double generalized_q(const Dataset& d, double tau2);

/// Restricted log-likelihood up to an additive constant:
/// -1/2 [ sum log(s_i^2 + tau2) + log(sum w_i) + Q(tau2) ].
double reml_log_likelihood(const Dataset& d, double tau2);

/// Derivative of reml_log_likelihood with respect to tau2.
double reml_score(const Dataset& d, double tau2);

/// DerSimonian-Laird moment estimator, truncated at zero.
TauEstimate dl_estimate(const Dataset& d);

/// Maximizer of the restricted log-likelihood over tau2 >= 0.
/// Throws ConvergenceError (carrying the last iterate) if max_iter is exhausted.
TauEstimate reml_estimate(const Dataset& d, const RemlOptions& options = {});

/// Paule-Mandel: the root of Q(tau2) = k - 1, or 0 when Q(0) <= k - 1.
TauEstimate pm_estimate(const Dataset& d);

TauEstimate estimate_tau2(const Dataset& d, Estimator e);

/// Q-profile interval: bounds solve Q(tau2) = chi2_{k-1} quantiles at 1 - alpha/2
/// (lower) and alpha/2 (upper), each clamped to 0 when no non-negative solution exists.
TauInterval q_profile_ci(const Dataset& d, double alpha);

}  // namespace remeta

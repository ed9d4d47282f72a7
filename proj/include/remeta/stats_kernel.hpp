#pragma once

// Probability kernels used by the interval constructions and the Q-profile.
// All functions are pure and thread-safe. Degrees of freedom are integers >= 1.

namespace remeta::stats {

double std_normal_cdf(double x);

/// Inverse of the standard normal CDF, absolute error below 1e-10 on (0,1).
/// Throws DomainError unless 0 < p < 1.
double std_normal_quantile(double p);

double student_t_cdf(double t, int df);

/// Inverse Student-t CDF, absolute error below 1e-8.
/// Closed forms for df = 1 and df = 2, safeguarded Newton iteration otherwise.
double student_t_quantile(double p, int df);

/// Regularized lower incomplete gamma P(df/2, x/2).
double chi_square_cdf(double x, int df);

/// Upper tail 1 - chi_square_cdf(x, df), computed without cancellation.
double chi_square_sf(double x, int df);

double chi_square_quantile(double p, int df);

// Special functions behind the distributions.
double regularized_gamma_p(double a, double x);
double regularized_gamma_q(double a, double x);
double regularized_beta(double x, double a, double b);

}  // namespace remeta::stats

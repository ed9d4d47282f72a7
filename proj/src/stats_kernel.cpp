#include "remeta/stats_kernel.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <string>

#include "remeta/errors.hpp"

namespace remeta::stats {
namespace {

constexpr double kEps = std::numeric_limits<double>::epsilon();
constexpr double kTiny = 1e-300;
constexpr int kMaxSeriesTerms = 100000;

void require_probability(double p, const char* fn) {
    if (!(p > 0.0 && p < 1.0)) {
        throw DomainError(std::string(fn) + ": probability must lie in (0,1), got " + std::to_string(p));
    }
}

void require_df(int df, const char* fn) {
    if (df < 1) {
        throw DomainError(std::string(fn) + ": degrees of freedom must be >= 1, got " + std::to_string(df));
    }
}

// Acklam's rational approximation, relative error ~1e-9; refined below.
double acklam_quantile(double p) {
    static constexpr double a[] = {-3.969683028665376e+01, 2.209460984245205e+02, -2.759285104469687e+02,
                                   1.383577518672690e+02,  -3.066479806614716e+01, 2.506628277459239e+00};
    static constexpr double b[] = {-5.447609879822406e+01, 1.615858368580409e+02, -1.556989798598866e+02,
                                   6.680131188771972e+01,  -1.328068155288572e+01};
    static constexpr double c[] = {-7.784894002430293e-03, -3.223964580411365e-01, -2.400758277161838e+00,
                                   -2.549732539343734e+00, 4.374664141464968e+00,  2.938163982698783e+00};
    static constexpr double d[] = {7.784695709041462e-03, 3.224671290700398e-01, 2.445134137142996e+00,
                                   3.754408661907416e+00};
    constexpr double p_low = 0.02425;

    if (p < p_low) {
        const double q = std::sqrt(-2.0 * std::log(p));
        return (((((c[0] * q + c[1]) * q + c[2]) * q + c[3]) * q + c[4]) * q + c[5]) /
               ((((d[0] * q + d[1]) * q + d[2]) * q + d[3]) * q + 1.0);
    }
    if (p > 1.0 - p_low) {
        const double q = std::sqrt(-2.0 * std::log1p(-p));
        return -(((((c[0] * q + c[1]) * q + c[2]) * q + c[3]) * q + c[4]) * q + c[5]) /
               ((((d[0] * q + d[1]) * q + d[2]) * q + d[3]) * q + 1.0);
    }
    const double q = p - 0.5;
    const double r = q * q;
    return (((((a[0] * r + a[1]) * r + a[2]) * r + a[3]) * r + a[4]) * r + a[5]) * q /
           (((((b[0] * r + b[1]) * r + b[2]) * r + b[3]) * r + b[4]) * r + 1.0);
}

// Continued fraction for the incomplete beta function (modified Lentz).
double beta_continued_fraction(double x, double a, double b) {
    const double qab = a + b;
    const double qap = a + 1.0;
    const double qam = a - 1.0;
    double c = 1.0;
    double d = 1.0 - qab * x / qap;
    if (std::fabs(d) < kTiny) d = kTiny;
    d = 1.0 / d;
    double h = d;
    for (int m = 1; m <= kMaxSeriesTerms; ++m) {
        const int m2 = 2 * m;
        double aa = m * (b - m) * x / ((qam + m2) * (a + m2));
        d = 1.0 + aa * d;
        if (std::fabs(d) < kTiny) d = kTiny;
        c = 1.0 + aa / c;
        if (std::fabs(c) < kTiny) c = kTiny;
        d = 1.0 / d;
        h *= d * c;
        aa = -(a + m) * (qab + m) * x / ((a + m2) * (qap + m2));
        d = 1.0 + aa * d;
        if (std::fabs(d) < kTiny) d = kTiny;
        c = 1.0 + aa / c;
        if (std::fabs(c) < kTiny) c = kTiny;
        d = 1.0 / d;
        const double del = d * c;
        h *= del;
        if (std::fabs(del - 1.0) < kEps) return h;
    }
    throw ConvergenceError("regularized_beta: continued fraction did not converge", h, kMaxSeriesTerms);
}

double gamma_series(double a, double x) {
    double ap = a;
    double del = 1.0 / a;
    double sum = del;
    for (int n = 0; n < kMaxSeriesTerms; ++n) {
        ap += 1.0;
        del *= x / ap;
        sum += del;
        if (std::fabs(del) < std::fabs(sum) * kEps) {
            return sum * std::exp(-x + a * std::log(x) - std::lgamma(a));
        }
    }
    throw ConvergenceError("regularized_gamma_p: series did not converge", sum, kMaxSeriesTerms);
}

double gamma_continued_fraction(double a, double x) {
    double b = x + 1.0 - a;
    double c = 1.0 / kTiny;
    double d = 1.0 / b;
    double h = d;
    for (int i = 1; i <= kMaxSeriesTerms; ++i) {
        const double an = -i * (i - a);
        b += 2.0;
        d = an * d + b;
        if (std::fabs(d) < kTiny) d = kTiny;
        c = b + an / c;
        if (std::fabs(c) < kTiny) c = kTiny;
        d = 1.0 / d;
        const double del = d * c;
        h *= del;
        if (std::fabs(del - 1.0) < kEps) {
            return std::exp(-x + a * std::log(x) - std::lgamma(a)) * h;
        }
    }
    throw ConvergenceError("regularized_gamma_q: continued fraction did not converge", h, kMaxSeriesTerms);
}

// P(T > t) for t >= 0.
double student_t_upper_tail(double t, int df) {
    const double nu = df;
    const double t2 = t * t;
    if (t2 < nu) {
        return 0.5 * (1.0 - regularized_beta(t2 / (nu + t2), 0.5, 0.5 * nu));
    }
    return 0.5 * regularized_beta(nu / (nu + t2), 0.5 * nu, 0.5);
}

double student_t_pdf(double t, int df) {
    const double nu = df;
    const double log_norm = std::lgamma(0.5 * (nu + 1.0)) - std::lgamma(0.5 * nu) - 0.5 * std::log(nu * std::numbers::pi);
    return std::exp(log_norm - 0.5 * (nu + 1.0) * std::log1p(t * t / nu));
}

double chi_square_pdf(double x, int df) {
    if (x <= 0.0) {
        if (df == 2) return 0.5;
        return df == 1 ? std::numeric_limits<double>::infinity() : 0.0;
    }
    const double a = 0.5 * df;
    return std::exp((a - 1.0) * std::log(x) - 0.5 * x - a * std::numbers::ln2 - std::lgamma(a));
}

// Root of a decreasing function on [lo, hi] by Newton steps, falling back to
// bisection whenever a step leaves the bracket. residual(x) returns f(x) and
// slope(x) its derivative (negative).
template <class Residual, class Slope>
double safeguarded_newton(Residual residual, Slope slope, double x, double lo, double hi, const char* fn) {
    constexpr int kMaxIter = 400;
    for (int it = 0; it < kMaxIter; ++it) {
        const double f = residual(x);
        if (f == 0.0) return x;
        if (f > 0.0) lo = x; else hi = x;  // decreasing: f > 0 means root is to the right
        const double s = slope(x);
        double next = (s != 0.0 && std::isfinite(s)) ? x - f / s : 0.5 * (lo + hi);
        if (!(next > lo && next < hi)) next = 0.5 * (lo + hi);
        if (std::fabs(next - x) <= 4.0 * kEps * std::fabs(next) || hi - lo <= 4.0 * kEps * std::fabs(hi)) {
            return next;
        }
        x = next;
    }
    throw ConvergenceError(std::string(fn) + ": iteration did not converge", x, kMaxIter);
}

}  // namespace

double std_normal_cdf(double x) {
    return 0.5 * std::erfc(-x / std::numbers::sqrt2);
}

double std_normal_quantile(double p) {
    require_probability(p, "std_normal_quantile");
    if (p == 0.5) return 0.0;
    // Work in the lower tail where p is exact, reflect for the upper half.
    const bool upper = p > 0.5;
    const double tail = upper ? 1.0 - p : p;
    double x = acklam_quantile(tail);
    // One Halley step on Phi(x) - tail takes the ~1e-9 start to full precision.
    const double e = 0.5 * std::erfc(-x / std::numbers::sqrt2) - tail;
    const double u = e * std::sqrt(2.0 * std::numbers::pi) * std::exp(0.5 * x * x);
    x -= u / (1.0 + 0.5 * x * u);
    return upper ? -x : x;
}

double regularized_beta(double x, double a, double b) {
    if (!(a > 0.0 && b > 0.0)) throw DomainError("regularized_beta: shape parameters must be positive");
    if (!(x >= 0.0 && x <= 1.0)) throw DomainError("regularized_beta: x must lie in [0,1]");
    if (x == 0.0) return 0.0;
    if (x == 1.0) return 1.0;
    const double log_front =
        std::lgamma(a + b) - std::lgamma(a) - std::lgamma(b) + a * std::log(x) + b * std::log1p(-x);
    const double front = std::exp(log_front);
    if (x < (a + 1.0) / (a + b + 2.0)) {
        return front * beta_continued_fraction(x, a, b) / a;
    }
    return 1.0 - front * beta_continued_fraction(1.0 - x, b, a) / b;
}

double regularized_gamma_p(double a, double x) {
    if (!(a > 0.0)) throw DomainError("regularized_gamma_p: shape must be positive");
    if (!(x >= 0.0)) throw DomainError("regularized_gamma_p: x must be non-negative");
    if (x == 0.0) return 0.0;
    if (x < a + 1.0) return gamma_series(a, x);
    return 1.0 - gamma_continued_fraction(a, x);
}

double regularized_gamma_q(double a, double x) {
    if (!(a > 0.0)) throw DomainError("regularized_gamma_q: shape must be positive");
    if (!(x >= 0.0)) throw DomainError("regularized_gamma_q: x must be non-negative");
    if (x == 0.0) return 1.0;
    if (x < a + 1.0) return 1.0 - gamma_series(a, x);
    return gamma_continued_fraction(a, x);
}

double student_t_cdf(double t, int df) {
    require_df(df, "student_t_cdf");
    if (std::isnan(t)) throw DomainError("student_t_cdf: t is NaN");
    if (t == 0.0) return 0.5;
    const double tail = student_t_upper_tail(std::fabs(t), df);
    return t > 0.0 ? 1.0 - tail : tail;
}

double student_t_quantile(double p, int df) {
    require_probability(p, "student_t_quantile");
    require_df(df, "student_t_quantile");
    if (p == 0.5) return 0.0;
    if (df == 1) {
        // Cauchy: -cot(pi p), evaluated on the smaller tail to stay clear of the pole.
        return p < 0.5 ? -1.0 / std::tan(std::numbers::pi * p) : 1.0 / std::tan(std::numbers::pi * (1.0 - p));
    }
    if (df == 2) return (2.0 * p - 1.0) / std::sqrt(2.0 * p * (1.0 - p));

    const bool upper = p > 0.5;
    const double tail = upper ? 1.0 - p : p;  // target P(T > t), t > 0

    // Cornish-Fisher start from the normal quantile.
    const double z = -std_normal_quantile(tail);
    const double nu = df;
    const double z3 = z * z * z;
    const double z5 = z3 * z * z;
    double x = z + (z3 + z) / (4.0 * nu) + (5.0 * z5 + 16.0 * z3 + 3.0 * z) / (96.0 * nu * nu);
    if (!(x > 0.0)) x = z > 0.0 ? z : 1.0;

    double hi = x;
    while (student_t_upper_tail(hi, df) > tail) hi *= 2.0;
    const double t = safeguarded_newton([&](double v) { return student_t_upper_tail(v, df) - tail; },
                                        [&](double v) { return -student_t_pdf(v, df); }, x, 0.0, hi,
                                        "student_t_quantile");
    return upper ? t : -t;
}

double chi_square_cdf(double x, int df) {
    require_df(df, "chi_square_cdf");
    if (!(x >= 0.0)) throw DomainError("chi_square_cdf: x must be non-negative");
    return regularized_gamma_p(0.5 * df, 0.5 * x);
}

double chi_square_sf(double x, int df) {
    require_df(df, "chi_square_sf");
    if (!(x >= 0.0)) throw DomainError("chi_square_sf: x must be non-negative");
    return regularized_gamma_q(0.5 * df, 0.5 * x);
}

double chi_square_quantile(double p, int df) {
    require_probability(p, "chi_square_quantile");
    require_df(df, "chi_square_quantile");
    if (df == 2) return -2.0 * std::log1p(-p);

    // Wilson-Hilferty start.
    const double nu = df;
    const double z = std_normal_quantile(p);
    const double h = 2.0 / (9.0 * nu);
    double x = nu * std::pow(std::max(1.0 - h + z * std::sqrt(h), 1e-3), 3.0);
    if (!(x > 0.0)) x = nu;

    // Solve in whichever tail keeps the residual exact. The residual is written
    // as a decreasing function of x for safeguarded_newton.
    const bool lower_tail = p <= 0.5;
    const double target = lower_tail ? p : 1.0 - p;
    auto residual = [&](double v) {
        return lower_tail ? target - chi_square_cdf(v, df) : chi_square_sf(v, df) - target;
    };
    auto slope = [&](double v) { return -chi_square_pdf(v, df); };

    double hi = std::max(x, 1.0);
    while (residual(hi) > 0.0) hi *= 2.0;
    return safeguarded_newton(residual, slope, x, 0.0, hi, "chi_square_quantile");
}

}  // namespace remeta::stats

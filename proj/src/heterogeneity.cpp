#include "remeta/heterogeneity.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <limits>
#include <string>
#include <vector>

#include "remeta/errors.hpp"
#include "remeta/stats_kernel.hpp"

namespace remeta {
namespace {

constexpr double kEps = std::numeric_limits<double>::epsilon();
constexpr int kMaxBracketDoublings = 2000;
constexpr int kMaxBisection = 2000;
constexpr int kRemlGridPoints = 32;

void require_k(const Dataset& d) {
    if (d.size() < 2) throw InsufficientDataError(d.size());
}

void require_tau2(double tau2) {
    if (!(tau2 >= 0.0)) throw DomainError("tau2 must be non-negative, got " + std::to_string(tau2));
}

// Weighted sums at a given tau2, shared by Q, the likelihood and its derivative.
struct WeightedSums {
    double sum_w = 0.0;
    double sum_w2 = 0.0;
    double mu = 0.0;
    double q = 0.0;         // sum w r^2
    double sum_w2_r2 = 0.0; // sum w^2 r^2
    double sum_log_v = 0.0;
};

WeightedSums weighted_sums(const Dataset& d, double tau2, bool with_logs) {
    const auto y = d.estimates();
    const auto v = d.variances();
    WeightedSums s;
    double swy = 0.0;
    for (std::size_t i = 0; i < y.size(); ++i) {
        const double w = 1.0 / (v[i] + tau2);
        s.sum_w += w;
        s.sum_w2 += w * w;
        swy += w * y[i];
        if (with_logs) s.sum_log_v += std::log(v[i] + tau2);
    }
    s.mu = swy / s.sum_w;
    for (std::size_t i = 0; i < y.size(); ++i) {
        const double w = 1.0 / (v[i] + tau2);
        const double r = y[i] - s.mu;
        s.q += w * r * r;
        s.sum_w2_r2 += w * w * r * r;
    }
    return s;
}

bool splittable(double lo, double hi) {
    const double mid = lo + 0.5 * (hi - lo);
    return mid > lo && mid < hi && hi - lo > 2.0 * kEps * hi;
}

// Smallest tau2 >= 0 with Q(tau2) <= target; 0 when Q(0) <= target already.
// Q is non-increasing and tends to 0, so a doubling bracket from 1 always exists.
double solve_q_equals(const Dataset& d, double target, int* iterations = nullptr) {
    int iters = 0;
    if (generalized_q(d, 0.0) <= target) {
        if (iterations) *iterations = 0;
        return 0.0;
    }
    double lo = 0.0;
    double hi = 1.0;
    while (generalized_q(d, hi) > target) {
        lo = hi;
        hi *= 2.0;
        if (++iters > kMaxBracketDoublings) {
            throw ConvergenceError("could not bracket the root of Q(tau2) = target", hi, iters);
        }
    }
    while (splittable(lo, hi) && iters < kMaxBisection) {
        const double mid = lo + 0.5 * (hi - lo);
        if (generalized_q(d, mid) > target) lo = mid; else hi = mid;
        ++iters;
    }
    if (iterations) *iterations = iters;
    return hi;  // Q(hi) <= target holds throughout
}

double golden_section_max(const Dataset& d, double a, double b, double tol, int max_iter, int& iters) {
    const double inv_phi = 0.5 * (std::sqrt(5.0) - 1.0);
    double c = b - inv_phi * (b - a);
    double e = a + inv_phi * (b - a);
    double fc = reml_log_likelihood(d, c);
    double fe = reml_log_likelihood(d, e);
    while (b - a > tol * std::max(b, 1e-300)) {
        if (++iters > max_iter) {
            throw ConvergenceError("reml_estimate: golden-section search did not converge", 0.5 * (a + b), iters);
        }
        if (fc >= fe) {
            b = e;
            e = c;
            fe = fc;
            c = b - inv_phi * (b - a);
            fc = reml_log_likelihood(d, c);
        } else {
            a = c;
            c = e;
            fc = fe;
            e = a + inv_phi * (b - a);
            fe = reml_log_likelihood(d, e);
        }
    }
    return 0.5 * (a + b);
}

}  // namespace

std::string_view to_string(Estimator e) noexcept {
    switch (e) {
        case Estimator::DL: return "DL";
        case Estimator::REML: return "REML";
        case Estimator::PM: return "PM";
    }
    return "?";
}

Estimator parse_estimator(std::string_view name) {
    std::string lower(name);
    std::transform(lower.begin(), lower.end(), lower.begin(), [](unsigned char ch) { return std::tolower(ch); });
    if (lower == "dl") return Estimator::DL;
    if (lower == "reml") return Estimator::REML;
    if (lower == "pm") return Estimator::PM;
    throw DomainError("unknown estimator '" + std::string(name) + "' (expected dl, reml or pm)");
}

double generalized_q(const Dataset& d, double tau2) {
    require_k(d);
    require_tau2(tau2);
    return weighted_sums(d, tau2, false).q;
}

double reml_log_likelihood(const Dataset& d, double tau2) {
    require_k(d);
    require_tau2(tau2);
    const auto s = weighted_sums(d, tau2, true);
    return -0.5 * (s.sum_log_v + std::log(s.sum_w) + s.q);
}

double reml_score(const Dataset& d, double tau2) {
    require_k(d);
    require_tau2(tau2);
    // d/dtau2 of sum log v_i is sum w_i, of log sum w_i is -sum w_i^2 / sum w_i,
    // and of Q is -sum w_i^2 r_i^2 (mu_hat minimizes Q, so its own variation drops out).
    const auto s = weighted_sums(d, tau2, false);
    return 0.5 * (s.sum_w2_r2 - s.sum_w + s.sum_w2 / s.sum_w);
}

TauEstimate dl_estimate(const Dataset& d) {
    require_k(d);
    const auto s = weighted_sums(d, 0.0, false);
    const double k = static_cast<double>(d.size());
    const double denom = s.sum_w - s.sum_w2 / s.sum_w;
    const double value = std::max(0.0, (s.q - (k - 1.0)) / denom);
    return TauEstimate{value, Estimator::DL, true, 0};
}

TauEstimate reml_estimate(const Dataset& d, const RemlOptions& options) {
    require_k(d);
    const auto v = d.variances();
    const double v_max = *std::max_element(v.begin(), v.end());
    const double v_min = *std::min_element(v.begin(), v.end());
    int iters = 0;

    // Grow the search range until the likelihood turns down.
    double b = v_max;
    double l_b = reml_log_likelihood(d, b);
    double l_2b = reml_log_likelihood(d, 2.0 * b);
    while (l_2b > l_b) {
        b *= 2.0;
        l_b = l_2b;
        l_2b = reml_log_likelihood(d, 2.0 * b);
        if (++iters > kMaxBracketDoublings) {
            throw ConvergenceError("reml_estimate: restricted likelihood increases without bound", b, iters);
        }
    }

    // Coarse scan of [0, 2b] picks the sub-bracket holding the global maximum.
    const double upper = 2.0 * b;
    std::vector<double> grid(kRemlGridPoints + 1);
    std::vector<double> ll(kRemlGridPoints + 1);
    std::size_t best = 0;
    for (std::size_t j = 0; j < grid.size(); ++j) {
        grid[j] = upper * static_cast<double>(j) / kRemlGridPoints;
        ll[j] = reml_log_likelihood(d, grid[j]);
        if (ll[j] > ll[best]) best = j;
    }

    double lo = 0.0;
    double hi = 0.0;
    if (best == 0) {
        if (reml_score(d, 0.0) <= 0.0) return TauEstimate{0.0, Estimator::REML, true, iters};
        lo = 0.0;
        hi = grid[1];
    } else {
        const double s_mid = reml_score(d, grid[best]);
        if (s_mid == 0.0) return TauEstimate{grid[best], Estimator::REML, true, iters};
        lo = s_mid > 0.0 ? grid[best] : grid[best - 1];
        hi = s_mid > 0.0 ? grid[best + 1] : grid[best];
    }

    if (!(reml_score(d, lo) > 0.0 && reml_score(d, hi) < 0.0)) {
        const double a = best == 0 ? 0.0 : grid[best - 1];
        const double c = grid[std::min<std::size_t>(best + 1, grid.size() - 1)];
        const double x = golden_section_max(d, a, c, options.tol, options.max_iter + iters, iters);
        const double value = reml_log_likelihood(d, 0.0) >= reml_log_likelihood(d, x) ? 0.0 : x;
        return TauEstimate{value, Estimator::REML, true, iters};
    }

    // Bisection on the sign of the score.
    int steps = 0;
    while (splittable(lo, hi) && steps < options.max_iter) {
        const double mid = lo + 0.5 * (hi - lo);
        if (reml_score(d, mid) > 0.0) lo = mid; else hi = mid;
        ++steps;
    }
    iters += steps;
    const double value = lo + 0.5 * (hi - lo);
    if (hi - lo > options.tol * std::max(hi, v_min)) {
        throw ConvergenceError("reml_estimate: no convergence within max_iter", value, iters);
    }
    return TauEstimate{value, Estimator::REML, true, iters};
}

TauEstimate pm_estimate(const Dataset& d) {
    require_k(d);
    int iters = 0;
    const double target = static_cast<double>(d.size()) - 1.0;
    const double value = solve_q_equals(d, target, &iters);
    return TauEstimate{value, Estimator::PM, true, iters};
}

TauEstimate estimate_tau2(const Dataset& d, Estimator e) {
    switch (e) {
        case Estimator::DL: return dl_estimate(d);
        case Estimator::REML: return reml_estimate(d);
        case Estimator::PM: return pm_estimate(d);
    }
    throw DomainError("estimate_tau2: unknown estimator");
}

TauInterval q_profile_ci(const Dataset& d, double alpha) {
    require_k(d);
    if (!(alpha > 0.0 && alpha < 1.0)) throw DomainError("q_profile_ci: alpha must lie in (0,1)");
    const int df = static_cast<int>(d.size()) - 1;
    const double q_hi = stats::chi_square_quantile(1.0 - 0.5 * alpha, df);
    const double q_lo = stats::chi_square_quantile(0.5 * alpha, df);
    TauInterval ci;
    ci.alpha = alpha;
    ci.lower = solve_q_equals(d, q_hi);
    ci.upper = solve_q_equals(d, q_lo);
    return ci;
}

}  // namespace remeta

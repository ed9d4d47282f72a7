#include "remeta/inference.hpp"

#include <cmath>
#include <string>

#include "remeta/errors.hpp"
#include "remeta/stats_kernel.hpp"

namespace remeta {
namespace {

void require_alpha(double alpha) {
    if (!(alpha > 0.0 && alpha < 1.0)) {
        throw DomainError("alpha must lie in (0,1), got " + std::to_string(alpha));
    }
}

ConfidenceInterval symmetric(double center, double half_width, IntervalMethod m, double alpha) {
    return ConfidenceInterval{center - half_width, center + half_width, m, alpha};
}

ConfidenceInterval t_interval(double mu_hat, double sigma_mu_hat, double q, double t, IntervalMethod m,
                              double alpha) {
    if (!(q >= 0.0)) throw DomainError("q must be non-negative");
    return symmetric(mu_hat, std::sqrt(q) * sigma_mu_hat * t, m, alpha);
}

}  // namespace

std::string_view to_string(IntervalMethod m) noexcept {
    switch (m) {
        case IntervalMethod::Normal: return "NORMAL";
        case IntervalMethod::Hksj: return "HKSJ";
        case IntervalMethod::Mkh: return "MKH";
    }
    return "?";
}

CriticalValues CriticalValues::compute(std::size_t k, double alpha) {
    if (k < 2) throw InsufficientDataError(k);
    require_alpha(alpha);
    CriticalValues c;
    c.k = k;
    c.alpha = alpha;
    c.z = stats::std_normal_quantile(1.0 - 0.5 * alpha);
    c.t = stats::student_t_quantile(1.0 - 0.5 * alpha, static_cast<int>(k) - 1);
    return c;
}

double q_factor(const Dataset& d, double tau2_hat) {
    return generalized_q(d, tau2_hat) / (static_cast<double>(d.size()) - 1.0);
}

double q_star(double q) {
    if (!(q >= 0.0)) throw DomainError("q_star: q must be non-negative");
    return q < 1.0 ? 1.0 : q;
}

ConfidenceInterval ci_normal(double mu_hat, double sigma_mu_hat, double alpha) {
    require_alpha(alpha);
    return symmetric(mu_hat, sigma_mu_hat * stats::std_normal_quantile(1.0 - 0.5 * alpha),
                     IntervalMethod::Normal, alpha);
}

ConfidenceInterval ci_hksj(double mu_hat, double sigma_mu_hat, double q, std::size_t k, double alpha) {
    const auto crit = CriticalValues::compute(k, alpha);
    return t_interval(mu_hat, sigma_mu_hat, q, crit.t, IntervalMethod::Hksj, alpha);
}

ConfidenceInterval ci_mkh(double mu_hat, double sigma_mu_hat, double q, std::size_t k, double alpha) {
    const auto crit = CriticalValues::compute(k, alpha);
    return t_interval(mu_hat, sigma_mu_hat, q_star(q), crit.t, IntervalMethod::Mkh, alpha);
}

const ConfidenceInterval& AnalysisResult::interval(IntervalMethod m) const noexcept {
    switch (m) {
        case IntervalMethod::Hksj: return hksj;
        case IntervalMethod::Mkh: return mkh;
        case IntervalMethod::Normal: break;
    }
    return normal;
}

AnalysisResult analyze(const Dataset& d, Estimator estimator, double alpha) {
    if (d.size() < 2) throw InsufficientDataError(d.size());
    return analyze(d, estimator, CriticalValues::compute(d.size(), alpha));
}

AnalysisResult analyze(const Dataset& d, Estimator estimator, const CriticalValues& crit) {
    if (d.size() < 2) throw InsufficientDataError(d.size());
    if (crit.k != d.size()) throw ContractError("analyze: critical values computed for a different k");

    AnalysisResult r;
    r.k = d.size();
    r.estimator = estimator;
    r.alpha = crit.alpha;
    r.tau2 = estimate_tau2(d, estimator);
    r.i2_hat = i_squared(r.tau2.value, d);

    // q shares the weights and mu_hat of the point estimate.
    r.weights = weights(d, r.tau2.value);
    r.mu_hat = pooled_estimate(d, r.weights);
    r.sigma_mu_hat = pooled_se(r.weights);
    const auto y = d.estimates();
    double big_q = 0.0;
    for (std::size_t i = 0; i < y.size(); ++i) {
        const double res = y[i] - r.mu_hat;
        big_q += r.weights[i] * res * res;
    }
    r.q = big_q / (static_cast<double>(r.k) - 1.0);
    r.q_star = q_star(r.q);

    r.normal = symmetric(r.mu_hat, r.sigma_mu_hat * crit.z, IntervalMethod::Normal, crit.alpha);
    r.hksj = t_interval(r.mu_hat, r.sigma_mu_hat, r.q, crit.t, IntervalMethod::Hksj, crit.alpha);
    r.mkh = t_interval(r.mu_hat, r.sigma_mu_hat, r.q_star, crit.t, IntervalMethod::Mkh, crit.alpha);
    return r;
}

}  // namespace remeta

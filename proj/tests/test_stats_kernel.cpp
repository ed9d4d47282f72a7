#include <doctest.h>

#include <boost/math/distributions/chi_squared.hpp>
#include <boost/math/distributions/normal.hpp>
#include <boost/math/distributions/students_t.hpp>
#include <cmath>
#include <numbers>

#include "remeta/errors.hpp"
#include "remeta/stats_kernel.hpp"

using namespace remeta::stats;

TEST_CASE("normal quantile: symmetry and reference values") {
    CHECK(std_normal_quantile(0.5) == 0.0);
    CHECK(std::fabs(std_normal_quantile(0.975) - 1.9599640) < 1e-6);
    for (int i = 1; i <= 99; ++i) {
        const double p = i / 100.0;
        CHECK(std::fabs(std_normal_quantile(p) + std_normal_quantile(1.0 - p)) < 1e-12);
    }
}

TEST_CASE("normal quantile matches boost to 1e-10") {
    boost::math::normal_distribution<double> n;
    for (double p : {1e-15, 1e-10, 1e-6, 0.001, 0.01, 0.02425, 0.1, 0.3, 0.5, 0.7, 0.9, 0.975, 0.999, 1 - 1e-9}) {
        CAPTURE(p);
        CHECK(std::fabs(std_normal_quantile(p) - boost::math::quantile(n, p)) < 1e-10);
    }
}

TEST_CASE("normal quantile rejects p outside (0,1)") {
    CHECK_THROWS_AS(std_normal_quantile(0.0), remeta::DomainError);
    CHECK_THROWS_AS(std_normal_quantile(1.0), remeta::DomainError);
    CHECK_THROWS_AS(std_normal_quantile(-0.1), remeta::DomainError);
    CHECK_THROWS_AS(std_normal_quantile(std::nan("")), remeta::DomainError);
}

TEST_CASE("student t quantile: closed forms and normal limit") {
    CHECK(student_t_quantile(0.5, 7) == 0.0);
    CHECK(student_t_quantile(0.975, 1) == doctest::Approx(std::tan(0.475 * std::numbers::pi)).epsilon(1e-12));
    CHECK(student_t_quantile(0.975, 1) == doctest::Approx(12.70620).epsilon(1e-6));
    CHECK(std::fabs(student_t_quantile(0.975, 1000000) - std_normal_quantile(0.975)) < 1e-4);
    // df = 2: F(t) = 1/2 + t / (2 sqrt(2 + t^2)); check by round trip through the CDF.
    for (double p : {0.01, 0.2, 0.6, 0.975}) {
        const double t = student_t_quantile(p, 2);
        CHECK(0.5 + t / (2.0 * std::sqrt(2.0 + t * t)) == doctest::Approx(p).epsilon(1e-12));
    }
}

TEST_CASE("student t quantile matches boost to 1e-8") {
    for (int df : {1, 2, 3, 4, 5, 7, 10, 30, 100, 1000}) {
        boost::math::students_t_distribution<double> t(df);
        for (double p : {1e-6, 0.001, 0.025, 0.1, 0.4, 0.6, 0.9, 0.975, 0.995, 1 - 1e-6}) {
            CAPTURE(df);
            CAPTURE(p);
            const double expect = boost::math::quantile(t, p);
            CHECK(std::fabs(student_t_quantile(p, df) - expect) < 1e-8 * std::max(1.0, std::fabs(expect)));
        }
    }
}

TEST_CASE("student t domain errors") {
    CHECK_THROWS_AS(student_t_quantile(0.5, 0), remeta::DomainError);
    CHECK_THROWS_AS(student_t_quantile(1.5, 3), remeta::DomainError);
    CHECK_THROWS_AS(student_t_cdf(1.0, -2), remeta::DomainError);
}

TEST_CASE("chi-square closed forms for df = 2") {
    CHECK(chi_square_cdf(0.0, 3) == 0.0);
    CHECK(chi_square_quantile(0.95, 2) == doctest::Approx(5.99146).epsilon(1e-6));
    CHECK(chi_square_quantile(0.95, 2) == doctest::Approx(-2.0 * std::log(0.05)).epsilon(1e-14));
    CHECK(chi_square_quantile(0.025, 2) == doctest::Approx(-2.0 * std::log(0.975)).epsilon(1e-12));
    CHECK(chi_square_quantile(0.025, 2) == doctest::Approx(0.05064).epsilon(1e-4));
    for (double x : {0.1, 1.0, 4.0, 20.0}) {
        CHECK(chi_square_cdf(x, 2) == doctest::Approx(1.0 - std::exp(-x / 2.0)).epsilon(1e-13));
    }
}

TEST_CASE("chi-square quantile matches boost") {
    for (int df : {1, 2, 3, 4, 5, 10, 50}) {
        boost::math::chi_squared_distribution<double> c(df);
        for (double p : {1e-6, 0.001, 0.025, 0.3, 0.5, 0.9, 0.975, 0.999}) {
            CAPTURE(df);
            CAPTURE(p);
            const double expect = boost::math::quantile(c, p);
            CHECK(std::fabs(chi_square_quantile(p, df) - expect) <= 1e-9 * expect);
            CHECK(std::fabs(chi_square_cdf(expect, df) - p) < 1e-12);
        }
    }
}

TEST_CASE("round trip quantile(cdf(x)) on a log-spaced grid") {
    for (int df : {1, 2, 3, 4, 6, 10, 25}) {
        for (double x = 1e-3; x < 200.0; x *= 1.7) {
            CAPTURE(df);
            CAPTURE(x);
            const double p = chi_square_cdf(x, df);
            if (p <= 1e-300 || p >= 1.0 - 1e-12) continue;
            CHECK(std::fabs(chi_square_quantile(p, df) - x) <= 1e-7 * x);
            const double tp = student_t_cdf(x, df);
            // Upper-tail cdf values near 1 carry too few digits for a fair round trip.
            if (tp < 1.0 - 1e-6) CHECK(std::fabs(student_t_quantile(tp, df) - x) <= 1e-8 * std::max(1.0, x));
            const double tn = student_t_cdf(-x, df);
            CHECK(std::fabs(student_t_quantile(tn, df) + x) <= 1e-8 * std::max(1.0, x));
        }
    }
    for (double x = -8.0; x <= 0.0; x += 0.37) {
        CHECK(std::fabs(std_normal_quantile(std_normal_cdf(x)) - x) < 1e-12);
        CHECK(std::fabs(std_normal_quantile(std_normal_cdf(-x)) + x) < 1e-9 * std::exp(0.5 * x * x));
    }
}

TEST_CASE("quantiles are strictly increasing in p") {
    double prev_z = -INFINITY, prev_t = -INFINITY, prev_c = -INFINITY;
    for (int i = 1; i < 1000; ++i) {
        const double p = i / 1000.0;
        const double z = std_normal_quantile(p);
        const double t = student_t_quantile(p, 4);
        const double c = chi_square_quantile(p, 3);
        CHECK(z > prev_z);
        CHECK(t > prev_t);
        CHECK(c > prev_c);
        prev_z = z;
        prev_t = t;
        prev_c = c;
    }
}

TEST_CASE("chi-square domain errors") {
    CHECK_THROWS_AS(chi_square_cdf(-1.0, 2), remeta::DomainError);
    CHECK_THROWS_AS(chi_square_quantile(0.0, 2), remeta::DomainError);
    CHECK_THROWS_AS(chi_square_quantile(0.5, 0), remeta::DomainError);
}

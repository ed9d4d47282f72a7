#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>
#include <vector>

#include "remeta/errors.hpp"
#include "remeta/model.hpp"

using namespace remeta;

namespace {

Dataset make(std::vector<double> y, std::vector<double> s) {
    return Dataset::from_arrays(y, s);
}

}  // namespace

TEST_CASE("dataset validation") {
    CHECK_THROWS_AS(Dataset(std::vector<Study>{}), ContractError);
    CHECK_THROWS_AS(make({1.0}, {0.0}), DomainError);
    CHECK_THROWS_AS(make({1.0}, {-1.0}), DomainError);
    CHECK_THROWS_AS(make({NAN}, {1.0}), DomainError);
    CHECK_THROWS_AS(make({1.0}, {INFINITY}), DomainError);
    CHECK_THROWS_AS(make({1.0, 2.0}, {1.0}), ContractError);
    const Dataset d({{"a", 0.5, 2.0}, {"b", -1.0, 0.5}});
    CHECK(d.size() == 2);
    CHECK(d.study(0).label == "a");
    CHECK(d.variances()[0] == 4.0);
    CHECK(d.variances()[1] == 0.25);
}

TEST_CASE("weights") {
    CHECK(weights(make({0, 0}, {1, 1}), 0.0) == std::vector<double>{1.0, 1.0});
    CHECK(weights(make({0, 0}, {1, 2}), 0.0) == std::vector<double>{1.0, 0.25});
    CHECK(weights(make({0, 0}, {1, 1}), 1.0) == std::vector<double>{0.5, 0.5});
    CHECK_THROWS_AS(weights(make({0, 0}, {1, 1}), -0.1), DomainError);
}

TEST_CASE("pooled estimate") {
    const std::vector<double> eq{1.0, 1.0};
    CHECK(pooled_estimate(make({0, 2}, {1, 1}), eq) == 1.0);
    const std::vector<double> w3{0.3, 2.0, 7.0};
    CHECK(pooled_estimate(make({1, 1, 1}, {1, 2, 3}), w3) == doctest::Approx(1.0).epsilon(1e-15));
    const std::vector<double> w21{2.0, 1.0};
    CHECK(pooled_estimate(make({0, 3}, {1, 1}), w21) == 1.0);
    CHECK_THROWS_AS(pooled_estimate(make({0, 3}, {1, 1}), w3), ContractError);
}

TEST_CASE("pooled standard error") {
    CHECK(pooled_se(std::vector<double>{1.0, 1.0}) == doctest::Approx(0.70711).epsilon(1e-5));
    CHECK(pooled_se(std::vector<double>{4.0}) == 0.5);
    CHECK(pooled_se(std::vector<double>{1.0, 1.0, 2.0}) == 0.5);
    CHECK_THROWS_AS(pooled_se(std::vector<double>{}), ContractError);
    CHECK_THROWS_AS(pooled_se(std::vector<double>{1.0, 0.0}), ContractError);
}

TEST_CASE("I^2 and its inverse") {
    CHECK(i_squared(0.0, make({0, 0}, {1, 3})) == 0.0);
    CHECK(i_squared(1.0, make({0, 0}, {1, 1})) == 0.5);
    CHECK(i_squared(5.0, make({0, 0}, {1, 3})) == 0.5);
    const auto unit = make({0, 0}, {1, 1});
    CHECK(tau2_from_i2(0.0, unit) == 0.0);
    CHECK(tau2_from_i2(0.5, unit) == 1.0);
    CHECK(tau2_from_i2(0.9, unit) == doctest::Approx(9.0).epsilon(1e-14));
    CHECK_THROWS_AS(tau2_from_i2(1.0, unit), DomainError);
    CHECK_THROWS_AS(tau2_from_i2(-0.1, unit), DomainError);
}

TEST_CASE("property: i_squared and tau2_from_i2 are mutually inverse") {
    std::mt19937_64 gen(11);
    std::uniform_real_distribution<double> se(0.05, 3.0), i2(0.0, 0.999);
    for (int rep = 0; rep < 200; ++rep) {
        const auto d = make({0, 0, 0, 0}, {se(gen), se(gen), se(gen), se(gen)});
        const double target = i2(gen);
        CHECK(std::fabs(i_squared(tau2_from_i2(target, d), d) - target) < 1e-12);
    }
}

TEST_CASE("property: shift, scale and permutation behaviour of pooling") {
    std::mt19937_64 gen(5);
    std::uniform_real_distribution<double> yv(-3.0, 3.0), se(0.1, 2.0), t2(0.0, 2.0), shift(-10, 10), scale(0.1, 10);
    for (int rep = 0; rep < 100; ++rep) {
        std::vector<double> y(5), s(5);
        for (int i = 0; i < 5; ++i) {
            y[i] = yv(gen);
            s[i] = se(gen);
        }
        const double tau2 = t2(gen);
        const auto base = pool(make(y, s), tau2);
        const double lo = *std::min_element(y.begin(), y.end());
        const double hi = *std::max_element(y.begin(), y.end());
        CHECK(base.mu_hat >= lo);
        CHECK(base.mu_hat <= hi);
        CHECK(base.sigma_mu_hat == doctest::Approx(1.0 / std::sqrt(std::accumulate(base.weights.begin(), base.weights.end(), 0.0))));

        const double d = shift(gen);
        auto ys = y;
        for (auto& v : ys) v += d;
        const auto shifted = pool(make(ys, s), tau2);
        CHECK(shifted.mu_hat == doctest::Approx(base.mu_hat + d).epsilon(1e-12));
        CHECK(shifted.sigma_mu_hat == base.sigma_mu_hat);

        const double c = scale(gen);
        auto yc = y, sc = s;
        for (auto& v : yc) v *= c;
        for (auto& v : sc) v *= c;
        const auto scaled = pool(make(yc, sc), c * c * tau2);
        CHECK(scaled.mu_hat == doctest::Approx(c * base.mu_hat).epsilon(1e-12));
        CHECK(scaled.sigma_mu_hat == doctest::Approx(c * base.sigma_mu_hat).epsilon(1e-12));
        CHECK(i_squared(c * c * tau2, make(yc, sc)) == doctest::Approx(i_squared(tau2, make(y, s))).epsilon(1e-12));

        std::vector<std::size_t> idx{0, 1, 2, 3, 4};
        std::shuffle(idx.begin(), idx.end(), gen);
        std::vector<double> yp, sp;
        for (auto i : idx) {
            yp.push_back(y[i]);
            sp.push_back(s[i]);
        }
        const auto perm = pool(make(yp, sp), tau2);
        CHECK(perm.mu_hat == doctest::Approx(base.mu_hat).epsilon(1e-13));
        CHECK(perm.sigma_mu_hat == doctest::Approx(base.sigma_mu_hat).epsilon(1e-13));
    }
}

#include <doctest.h>

#include <cmath>
#include <vector>

#include "remeta/errors.hpp"
#include "remeta/rng.hpp"

using remeta::RngStream;

TEST_CASE("same seed and stream reproduce the sequence") {
    RngStream a(42, 7);
    RngStream b(42, 7);
    for (int i = 0; i < 100; ++i) CHECK(remeta::draw_normal(a, 0.0, 1.0) == remeta::draw_normal(b, 0.0, 1.0));
}

TEST_CASE("different streams or seeds diverge") {
    RngStream a(42, 7);
    RngStream b(42, 8);
    RngStream c(43, 7);
    int same_b = 0, same_c = 0;
    for (int i = 0; i < 100; ++i) {
        const auto x = a.next_u64();
        same_b += x == b.next_u64();
        same_c += x == c.next_u64();
    }
    CHECK(same_b == 0);
    CHECK(same_c == 0);
}

TEST_CASE("draw_normal with sd = 0 returns the mean exactly") {
    RngStream s(1, 1);
    CHECK(remeta::draw_normal(s, 3.7, 0.0) == 3.7);
    CHECK_THROWS_AS(remeta::draw_normal(s, 0.0, -1.0), remeta::DomainError);
}

TEST_CASE("uniforms stay inside (0,1)") {
    RngStream s(0, 0);
    for (int i = 0; i < 100000; ++i) {
        const double u = s.next_uniform();
        REQUIRE(u > 0.0);
        REQUIRE(u < 1.0);
    }
}

TEST_CASE("normal draws have the right first two moments") {
    RngStream s(2024, 1);
    constexpr int n = 100000;
    double sum = 0.0, sum2 = 0.0;
    for (int i = 0; i < n; ++i) {
        const double x = remeta::draw_normal(s, 0.0, 1.0);
        sum += x;
        sum2 += x * x;
    }
    const double mean = sum / n;
    CHECK(std::fabs(mean) < 0.01);
    CHECK(std::fabs(sum2 / n - mean * mean - 1.0) < 0.02);
}

TEST_CASE("distinct stream ids are uncorrelated") {
    constexpr int n = 10000;
    for (std::uint64_t id = 0; id < 20; ++id) {
        RngStream a(99, remeta::combine_stream_id(0, id));
        RngStream b(99, remeta::combine_stream_id(0, id + 1));
        double sa = 0, sb = 0, saa = 0, sbb = 0, sab = 0;
        for (int i = 0; i < n; ++i) {
            const double x = a.next_std_normal();
            const double y = b.next_std_normal();
            sa += x;
            sb += y;
            saa += x * x;
            sbb += y * y;
            sab += x * y;
        }
        const double cov = sab / n - (sa / n) * (sb / n);
        const double r = cov / std::sqrt((saa / n - sa * sa / n / n) * (sbb / n - sb * sb / n / n));
        CAPTURE(id);
        CHECK(std::fabs(r) < 0.05);
    }
}

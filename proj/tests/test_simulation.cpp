#include <doctest.h>

#include <cmath>
#include <numeric>
#include <vector>

#include "remeta/errors.hpp"
#include "remeta/simulation.hpp"

using namespace remeta;
using namespace remeta::sim;

TEST_CASE("scenario variances") {
    CHECK(scenario_variances({Scenario::A, 4}) == std::vector<double>{1, 1, 1, 1});
    CHECK(scenario_variances({Scenario::B, 3}) == std::vector<double>{1, 1, 10});
    CHECK(scenario_variances({Scenario::C, 4}) == std::vector<double>{1, 1, 10, 10});
    CHECK(scenario_variances({Scenario::C, 5}) == std::vector<double>{1, 1, 1, 10, 10});
    CHECK(scenario_variances({Scenario::C, 2}) == std::vector<double>{1, 10});
    CHECK(scenario_variances({Scenario::D, 3}) == std::vector<double>{1, 1, 0.1});
    CHECK_THROWS_AS(scenario_variances({Scenario::A, 1}), DomainError);
    CHECK(parse_scenario("c") == Scenario::C);
    CHECK_THROWS_AS(parse_scenario("E"), DomainError);
}

TEST_CASE("mc_stderr") {
    CHECK(mc_stderr(0.95, 10000) == doctest::Approx(0.0021794).epsilon(1e-4));
    CHECK(mc_stderr(0.5, 100) == doctest::Approx(0.05));
    CHECK(mc_stderr(1.0, 10) == 0.0);
    CHECK_THROWS_AS(mc_stderr(1.2, 10), DomainError);
    CHECK_THROWS_AS(mc_stderr(0.5, 0), DomainError);
}

TEST_CASE("replicates are deterministic and distinct") {
    const ScenarioSpec spec{Scenario::B, 4};
    const auto v = scenario_variances(spec);
    const auto a = draw_replicate(v, 0.5, 11, replicate_stream_id(spec, 0.5, 3));
    const auto b = draw_replicate(v, 0.5, 11, replicate_stream_id(spec, 0.5, 3));
    const auto c = draw_replicate(v, 0.5, 11, replicate_stream_id(spec, 0.5, 4));
    CHECK(std::vector<double>(a.estimates().begin(), a.estimates().end()) ==
          std::vector<double>(b.estimates().begin(), b.estimates().end()));
    CHECK(a.estimates()[0] != c.estimates()[0]);
    CHECK(replicate_stream_id(spec, 0.5, 0) != replicate_stream_id(spec, 0.25, 0));
    CHECK(replicate_stream_id(spec, 0.5, 0) != replicate_stream_id({Scenario::C, 4}, 0.5, 0));
    CHECK(a.variances()[3] == doctest::Approx(10.0));
}

TEST_CASE("simulate_cell") {
    SimCell cell{{Scenario::A, 3}, 0.5, {Estimator::DL, Estimator::PM}, 0.05, 2000, 5};
    const auto r1 = simulate_cell(cell);
    const auto r2 = simulate_cell(cell);
    REQUIRE(r1.by_estimator.size() == 2);
    CHECK(r1.tau2_true == doctest::Approx(1.0));
    for (std::size_t e = 0; e < 2; ++e) {
        const auto& s = r1.by_estimator[e];
        CHECK(s.completed + s.failures == cell.reps);
        CHECK(s.coverage == r2.by_estimator[e].coverage);
        CHECK(s.coverage_of(IntervalMethod::Mkh) >= s.coverage_of(IntervalMethod::Hksj));
        CHECK(s.mean_len_ratio >= 1.0);
        CHECK(s.mc_se[1] == doctest::Approx(mc_stderr(s.coverage[1], s.completed)));
    }
    // PM never leaves q above one, so its fraction below one plus ties at one is everything.
    const auto* pm = r1.find(Estimator::PM);
    REQUIRE(pm);
    CHECK(pm->mean_q <= 1.0 + 1e-9);
    CHECK(r1.find(Estimator::REML) == nullptr);

    SimCell bad = cell;
    bad.i2 = 1.0;
    CHECK_THROWS_AS(simulate_cell(bad), DomainError);
    bad = cell;
    bad.reps = 0;
    CHECK_THROWS_AS(simulate_cell(bad), DomainError);
}

TEST_CASE("estimators in a cell share replicate data") {
    SimCell both{{Scenario::D, 4}, 0.25, {Estimator::DL, Estimator::REML}, 0.05, 500, 9};
    SimCell dl_only = both;
    dl_only.estimators = {Estimator::DL};
    const auto a = simulate_cell(both);
    const auto b = simulate_cell(dl_only);
    CHECK(a.by_estimator[0].coverage == b.by_estimator[0].coverage);
    CHECK(a.by_estimator[0].frac_q_lt_1 == b.by_estimator[0].frac_q_lt_1);
}

TEST_CASE("run_grid") {
    GridSpec g;
    g.scenarios = {Scenario::D, Scenario::A, Scenario::A};
    g.k_min = 2;
    g.k_max = 3;
    g.i2_values = {0.5, 0.0};
    g.estimators = {Estimator::PM, Estimator::DL};
    g.reps = 200;
    g.seed = 42;
    const auto cells = grid_cells(g);
    REQUIRE(cells.size() == 8);
    CHECK(cells.front().spec.scenario == Scenario::A);
    CHECK(cells.front().i2 == 0.0);
    CHECK(cells.back().spec.scenario == Scenario::D);
    CHECK(cells.back().spec.k == 3);
    CHECK(cells.front().estimators == std::vector<Estimator>{Estimator::DL, Estimator::PM});

    const auto one = run_grid(g, 1);
    const auto three = run_grid(g, 3);
    REQUIRE(one.size() == three.size());
    for (std::size_t i = 0; i < one.size(); ++i) {
        CHECK_FALSE(one[i].error);
        for (std::size_t e = 0; e < 2; ++e) {
            CHECK(one[i].by_estimator[e].coverage == three[i].by_estimator[e].coverage);
            CHECK(one[i].by_estimator[e].mean_tau2_hat == three[i].by_estimator[e].mean_tau2_hat);
        }
    }

    // A single cell run on its own matches the same cell inside the grid.
    GridSpec sub = g;
    sub.scenarios = {Scenario::D};
    sub.k_min = sub.k_max = 3;
    sub.i2_values = {0.5};
    const auto alone = run_grid(sub, 1);
    REQUIRE(alone.size() == 1);
    CHECK(alone[0].by_estimator[0].coverage == one.back().by_estimator[0].coverage);

    GridSpec bad = g;
    bad.i2_values = {0.5, 1.5};
    const auto with_error = run_grid(bad, 2);
    std::size_t errors = 0;
    for (const auto& r : with_error) errors += r.error.has_value();
    CHECK(errors == 4);

    GridSpec empty = g;
    empty.estimators.clear();
    CHECK_THROWS_AS(grid_cells(empty), DomainError);
    GridSpec k1 = g;
    k1.k_min = 1;
    CHECK_THROWS_AS(grid_cells(k1), DomainError);
}

TEST_CASE("q at the true tau2 averages to one") {
    for (auto sc : {Scenario::A, Scenario::C}) {
        const auto q = sample_q_at_true_tau2({sc, 4}, 0.75, 4000, 3);
        const double mean = std::accumulate(q.begin(), q.end(), 0.0) / static_cast<double>(q.size());
        // (k - 1) q is chi-square(3): var(q) = 2 / 3.
        const double se = std::sqrt(2.0 / 3.0 / static_cast<double>(q.size()));
        CHECK(std::fabs(mean - 1.0) < 4.0 * se);
    }
}

#include "remeta/simulation.hpp"

#include <algorithm>
#include <atomic>
#include <bit>
#include <cctype>
#include <cmath>
#include <limits>
#include <string>
#include <thread>

#include "remeta/errors.hpp"
#include "remeta/rng.hpp"

namespace remeta::sim {
namespace {

constexpr double kSmallTrialVariance = 10.0;
constexpr double kLargeTrialVariance = 0.1;
constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

void validate(const SimCell& cell) {
    if (cell.spec.k < 2) throw DomainError("simulation cell needs k >= 2");
    if (!(cell.i2 >= 0.0 && cell.i2 < 1.0)) throw DomainError("simulation cell needs 0 <= I^2 < 1");
    if (!(cell.alpha > 0.0 && cell.alpha < 1.0)) throw DomainError("simulation cell needs 0 < alpha < 1");
    if (cell.reps < 1) throw DomainError("simulation cell needs reps >= 1");
}

struct Tally {
    std::size_t completed = 0;
    std::size_t failures = 0;
    std::array<std::size_t, 3> covered{};
    double ratio_sum = 0.0;
    std::size_t ratio_n = 0;
    std::size_t ratio_excluded = 0;
    std::size_t q_lt_1 = 0;
    double q_sum = 0.0;
    double tau2_sum = 0.0;

    void add(const AnalysisResult& r, double true_mu) {
        ++completed;
        if (r.normal.contains(true_mu)) ++covered[0];
        if (r.hksj.contains(true_mu)) ++covered[1];
        if (r.mkh.contains(true_mu)) ++covered[2];
        if (r.q >= kVanishingQ) {
            ratio_sum += std::sqrt(r.q_star / r.q);
            ++ratio_n;
        } else {
            ++ratio_excluded;
        }
        if (r.q < kQBelowOne) ++q_lt_1;
        q_sum += r.q;
        tau2_sum += r.tau2.value;
    }

    EstimatorSummary summarize(Estimator e) const {
        EstimatorSummary s;
        s.estimator = e;
        s.completed = completed;
        s.failures = failures;
        s.ratio_excluded = ratio_excluded;
        const double n = static_cast<double>(completed);
        for (std::size_t m = 0; m < 3; ++m) {
            s.coverage[m] = completed ? static_cast<double>(covered[m]) / n : kNaN;
            s.mc_se[m] = completed ? mc_stderr(s.coverage[m], completed) : kNaN;
        }
        s.mean_len_ratio = ratio_n ? ratio_sum / static_cast<double>(ratio_n) : kNaN;
        s.frac_q_lt_1 = completed ? static_cast<double>(q_lt_1) / n : kNaN;
        s.mean_q = completed ? q_sum / n : kNaN;
        s.mean_tau2_hat = completed ? tau2_sum / n : kNaN;
        return s;
    }
};

template <class T>
void sort_unique(std::vector<T>& v) {
    std::sort(v.begin(), v.end());
    v.erase(std::unique(v.begin(), v.end()), v.end());
}

}  // namespace

std::string_view to_string(Scenario s) noexcept {
    switch (s) {
        case Scenario::A: return "A";
        case Scenario::B: return "B";
        case Scenario::C: return "C";
        case Scenario::D: return "D";
    }
    return "?";
}

Scenario parse_scenario(std::string_view name) {
    if (name.size() == 1) {
        switch (std::toupper(static_cast<unsigned char>(name[0]))) {
            case 'A': return Scenario::A;
            case 'B': return Scenario::B;
            case 'C': return Scenario::C;
            case 'D': return Scenario::D;
            default: break;
        }
    }
    throw DomainError("unknown scenario '" + std::string(name) + "' (expected A, B, C or D)");
}

std::vector<double> scenario_variances(const ScenarioSpec& spec) {
    const std::size_t k = spec.k;
    if (k < 2) throw DomainError("scenario_variances: k must be >= 2");
    std::vector<double> v(k, 1.0);
    switch (spec.scenario) {
        case Scenario::A: break;
        case Scenario::B: v.back() = kSmallTrialVariance; break;
        case Scenario::C:
            // First ceil(k/2) large (s^2 = 1), the rest small.
            for (std::size_t i = (k + 1) / 2; i < k; ++i) v[i] = kSmallTrialVariance;
            break;
        case Scenario::D: v.back() = kLargeTrialVariance; break;
    }
    return v;
}

const EstimatorSummary* CellResult::find(Estimator e) const noexcept {
    for (const auto& s : by_estimator) {
        if (s.estimator == e) return &s;
    }
    return nullptr;
}

std::uint64_t replicate_stream_id(const ScenarioSpec& spec, double i2, std::uint64_t replicate) noexcept {
    std::uint64_t id = combine_stream_id(0, static_cast<std::uint64_t>(spec.scenario));
    id = combine_stream_id(id, spec.k);
    id = combine_stream_id(id, std::bit_cast<std::uint64_t>(i2));
    return combine_stream_id(id, replicate);
}

Dataset draw_replicate(std::span<const double> variances, double tau2, std::uint64_t seed,
                       std::uint64_t stream_id) {
    RngStream stream(seed, stream_id);
    std::vector<double> y(variances.size());
    std::vector<double> se(variances.size());
    for (std::size_t i = 0; i < variances.size(); ++i) {
        y[i] = draw_normal(stream, 0.0, std::sqrt(variances[i] + tau2));
        se[i] = std::sqrt(variances[i]);
    }
    return Dataset::from_arrays(y, se);
}

CellResult simulate_cell(const SimCell& cell) {
    validate(cell);
    const auto variances = scenario_variances(cell.spec);
    const double tau2 = tau2_from_i2(cell.i2, variances);
    const auto crit = CriticalValues::compute(cell.spec.k, cell.alpha);
    constexpr double kTrueMu = 0.0;

    std::vector<Tally> tallies(cell.estimators.size());
    for (std::size_t r = 0; r < cell.reps; ++r) {
        const auto d = draw_replicate(variances, tau2, cell.seed, replicate_stream_id(cell.spec, cell.i2, r));
        for (std::size_t e = 0; e < cell.estimators.size(); ++e) {
            try {
                tallies[e].add(analyze(d, cell.estimators[e], crit), kTrueMu);
            } catch (const ConvergenceError&) {
                ++tallies[e].failures;
            }
        }
    }

    CellResult out;
    out.cell = cell;
    out.tau2_true = tau2;
    out.by_estimator.reserve(tallies.size());
    for (std::size_t e = 0; e < tallies.size(); ++e) {
        out.by_estimator.push_back(tallies[e].summarize(cell.estimators[e]));
    }
    return out;
}

std::vector<SimCell> grid_cells(const GridSpec& grid) {
    if (grid.scenarios.empty() || grid.i2_values.empty() || grid.estimators.empty()) {
        throw DomainError("simulation grid: every axis needs at least one value");
    }
    if (grid.k_min < 2 || grid.k_min > grid.k_max) {
        throw DomainError("simulation grid: need 2 <= k_min <= k_max");
    }
    auto scenarios = grid.scenarios;
    auto i2_values = grid.i2_values;
    auto estimators = grid.estimators;
    sort_unique(scenarios);
    sort_unique(i2_values);
    sort_unique(estimators);

    std::vector<SimCell> cells;
    cells.reserve(scenarios.size() * (grid.k_max - grid.k_min + 1) * i2_values.size());
    for (auto s : scenarios) {
        for (std::size_t k = grid.k_min; k <= grid.k_max; ++k) {
            for (double i2 : i2_values) {
                cells.push_back(SimCell{ScenarioSpec{s, k}, i2, estimators, grid.alpha, grid.reps, grid.seed});
            }
        }
    }
    return cells;
}

std::vector<CellResult> run_grid(const GridSpec& grid, unsigned workers) {
    const auto cells = grid_cells(grid);
    std::vector<CellResult> results(cells.size());

    auto evaluate = [&](std::size_t i) {
        try {
            results[i] = simulate_cell(cells[i]);
        } catch (const std::exception& ex) {
            results[i] = CellResult{};
            results[i].cell = cells[i];
            results[i].error = ex.what();
        }
    };

    if (workers == 0) workers = std::max(1u, std::thread::hardware_concurrency());
    workers = static_cast<unsigned>(std::min<std::size_t>(workers, cells.size()));
    if (workers <= 1) {
        for (std::size_t i = 0; i < cells.size(); ++i) evaluate(i);
        return results;
    }

    // Each slot is written by exactly one worker; no shared mutable state beyond the counter.
    std::atomic<std::size_t> next{0};
    {
        std::vector<std::jthread> pool;
        pool.reserve(workers);
        for (unsigned w = 0; w < workers; ++w) {
            pool.emplace_back([&] {
                for (std::size_t i = next.fetch_add(1); i < cells.size(); i = next.fetch_add(1)) evaluate(i);
            });
        }
    }
    return results;
}

double mc_stderr(double p_hat, std::size_t n) {
    if (!(p_hat >= 0.0 && p_hat <= 1.0)) throw DomainError("mc_stderr: p_hat must lie in [0,1]");
    if (n < 1) throw DomainError("mc_stderr: n must be >= 1");
    return std::sqrt(p_hat * (1.0 - p_hat) / static_cast<double>(n));
}

std::vector<double> sample_q_at_true_tau2(const ScenarioSpec& spec, double i2, std::size_t reps,
                                          std::uint64_t seed) {
    const auto variances = scenario_variances(spec);
    const double tau2 = tau2_from_i2(i2, variances);
    std::vector<double> q;
    q.reserve(reps);
    for (std::size_t r = 0; r < reps; ++r) {
        const auto d = draw_replicate(variances, tau2, seed, replicate_stream_id(spec, i2, r));
        q.push_back(q_factor(d, tau2));
    }
    return q;
}

}  // namespace remeta::sim

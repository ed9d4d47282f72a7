#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "remeta/heterogeneity.hpp"
#include "remeta/inference.hpp"

namespace remeta::sim {

// Study-size designs. "Small" and "large" trials differ by a factor of ten in s_i^2.
//   A: all equal            B: equal plus one small trial (last)
//   C: half large, half small (odd k: extra study is large)
//   D: equal plus one large trial (last)
enum class Scenario { A, B, C, D };

std::string_view to_string(Scenario s) noexcept;
Scenario parse_scenario(std::string_view name);

struct ScenarioSpec {
    Scenario scenario = Scenario::A;
    std::size_t k = 2;
};

/// Squared standard errors for a design, base unit s^2 = 1.
std::vector<double> scenario_variances(const ScenarioSpec& spec);

struct SimCell {
    ScenarioSpec spec;
    double i2 = 0.0;
    std::vector<Estimator> estimators{Estimator::DL};
    double alpha = 0.05;
    std::size_t reps = 10000;
    std::uint64_t seed = 0;
};

/// Threshold below which q counts as "modified" by the q* = max(1, q) floor.
inline constexpr double kQBelowOne = 1.0 - 1e-9;
/// Replicates with q below this are excluded from the length ratio average.
inline constexpr double kVanishingQ = 1e-12;

struct EstimatorSummary {
    Estimator estimator = Estimator::DL;
    std::size_t completed = 0;  // replicates analysed without error
    std::size_t failures = 0;   // replicates where the estimator did not converge
    std::array<double, 3> coverage{};  // indexed by IntervalMethod
    std::array<double, 3> mc_se{};
    double mean_len_ratio = 0.0;  // mKH / HKSJ, over replicates with q >= kVanishingQ
    std::size_t ratio_excluded = 0;
    double frac_q_lt_1 = 0.0;
    double mean_q = 0.0;
    double mean_tau2_hat = 0.0;

    double coverage_of(IntervalMethod m) const noexcept { return coverage[static_cast<std::size_t>(m)]; }
};

struct CellResult {
    SimCell cell;
    double tau2_true = 0.0;
    std::vector<EstimatorSummary> by_estimator;  // same order as cell.estimators
    std::optional<std::string> error;

    const EstimatorSummary* find(Estimator e) const noexcept;
};

/// Stream id for one replicate of a cell; a pure function of the coordinates.
std::uint64_t replicate_stream_id(const ScenarioSpec& spec, double i2, std::uint64_t replicate) noexcept;

/// Draw one replicate dataset y_i ~ N(0, s_i^2 + tau2) from the marginal model.
Dataset draw_replicate(std::span<const double> variances, double tau2, std::uint64_t seed,
                       std::uint64_t stream_id);

/// Runs cell.reps replicates and aggregates coverage and q statistics.
/// Throws on an invalid cell (k < 2, i2 outside [0,1), reps == 0, bad alpha).
CellResult simulate_cell(const SimCell& cell);

struct GridSpec {
    std::vector<Scenario> scenarios{Scenario::A, Scenario::B, Scenario::C, Scenario::D};
    std::size_t k_min = 2;
    std::size_t k_max = 11;
    std::vector<double> i2_values{0.0, 0.25, 0.5, 0.75, 0.9};
    std::vector<Estimator> estimators{Estimator::DL};
    double alpha = 0.05;
    std::size_t reps = 10000;
    std::uint64_t seed = 0;
};

/// Cells of the grid in canonical (scenario, k, i2) order; axes are sorted and deduplicated.
std::vector<SimCell> grid_cells(const GridSpec& grid);

/// Evaluates every cell on `workers` threads (0 = hardware concurrency). The
/// result is a pure function of the grid, independent of worker count. A cell
/// that throws is returned with `error` set.
std::vector<CellResult> run_grid(const GridSpec& grid, unsigned workers = 0);

/// sqrt(p (1 - p) / n).
double mc_stderr(double p_hat, std::size_t n);

/// q values computed with weights at the TRUE tau2 (no estimation), one per replicate.
std::vector<double> sample_q_at_true_tau2(const ScenarioSpec& spec, double i2, std::size_t reps,
                                          std::uint64_t seed);

}  // namespace remeta::sim

#pragma once

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

#include "remeta/simulation.hpp"

namespace remeta::cli {

enum class OutputFormat { Table, Json, Forest };

struct AnalyzeArgs {
    std::string input;
    Estimator estimator = Estimator::DL;
    double alpha = 0.05;
    OutputFormat format = OutputFormat::Table;
};

struct SimulateArgs {
    sim::GridSpec grid;
    std::string out;
    unsigned workers = 0;
};

inline constexpr std::string_view kSimulationCsvHeader =
    "scenario,k,i2,estimator,reps,seed,cov_normal,cov_hksj,cov_mkh,mc_se_hksj,"
    "mean_len_ratio,frac_q_lt_1,mean_tau2_hat";

// Exit codes.
inline constexpr int kExitOk = 0;
inline constexpr int kExitFailure = 1;
inline constexpr int kExitUsage = 2;

int cmd_analyze(const AnalyzeArgs& args, std::ostream& out, std::ostream& err);
int cmd_simulate(const SimulateArgs& args, std::ostream& err);

/// One row per (cell, estimator) in canonical order.
void write_simulation_csv(std::ostream& out, const std::vector<sim::CellResult>& results);

// Axis parsers; all throw DomainError with a usage message.
OutputFormat parse_format(std::string_view s);
std::pair<std::size_t, std::size_t> parse_k_range(std::string_view s);
std::vector<double> parse_i2_list(std::string_view s);
std::vector<sim::Scenario> parse_scenarios(std::string_view s);
std::vector<Estimator> parse_estimators(std::string_view s);

/// Full command-line entry point (argv[0] is the program name).
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace remeta::cli

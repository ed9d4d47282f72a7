#include "remeta/commands.hpp"

#include <charconv>
#include <cstdio>
#include <fstream>
#include <ostream>
#include <string>
#include <tuple>

#include <CLI11.hpp>

#include "remeta/errors.hpp"
#include "remeta/report.hpp"
#include "remeta/study_csv.hpp"

namespace remeta::cli {
namespace {

std::vector<std::string_view> split(std::string_view s, char sep) {
    std::vector<std::string_view> parts;
    while (true) {
        const auto pos = s.find(sep);
        parts.push_back(s.substr(0, pos));
        if (pos == std::string_view::npos) break;
        s.remove_prefix(pos + 1);
    }
    return parts;
}

std::size_t parse_count(std::string_view s, const char* what) {
    std::size_t v = 0;
    const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (s.empty() || ec != std::errc() || ptr != s.data() + s.size()) {
        throw DomainError(std::string("invalid ") + what + " '" + std::string(s) + "'");
    }
    return v;
}

std::string fixed4(double x) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.4f", x);
    return buf;
}

}  // namespace

OutputFormat parse_format(std::string_view s) {
    if (s == "table") return OutputFormat::Table;
    if (s == "json") return OutputFormat::Json;
    if (s == "forest") return OutputFormat::Forest;
    throw DomainError("unknown format '" + std::string(s) + "' (expected table, json or forest)");
}

std::pair<std::size_t, std::size_t> parse_k_range(std::string_view s) {
    const auto dots = s.find("..");
    const std::size_t lo = parse_count(s.substr(0, dots), "k");
    const std::size_t hi = dots == std::string_view::npos ? lo : parse_count(s.substr(dots + 2), "k");
    if (lo < 2) throw DomainError("k must be >= 2");
    if (hi < lo) throw DomainError("k range must be ascending");
    return {lo, hi};
}

std::vector<double> parse_i2_list(std::string_view s) {
    std::vector<double> out;
    for (auto part : split(s, ',')) {
        double v = 0.0;
        const auto [ptr, ec] = std::from_chars(part.data(), part.data() + part.size(), v);
        if (part.empty() || ec != std::errc() || ptr != part.data() + part.size()) {
            throw DomainError("invalid I^2 value '" + std::string(part) + "'");
        }
        if (!(v >= 0.0 && v < 1.0)) throw DomainError("I^2 values must lie in [0,1)");
        out.push_back(v);
    }
    return out;
}

std::vector<sim::Scenario> parse_scenarios(std::string_view s) {
    std::vector<sim::Scenario> out;
    for (auto part : split(s, ',')) out.push_back(sim::parse_scenario(part));
    return out;
}

std::vector<Estimator> parse_estimators(std::string_view s) {
    std::vector<Estimator> out;
    for (auto part : split(s, ',')) out.push_back(parse_estimator(part));
    return out;
}

int cmd_analyze(const AnalyzeArgs& args, std::ostream& out, std::ostream& err) {
    try {
        const auto d = read_study_csv(args.input);
        const auto result = analyze(d, args.estimator, args.alpha);
        switch (args.format) {
            case OutputFormat::Table: out << render_table(result, q_profile_ci(d, args.alpha)); break;
            case OutputFormat::Json: out << render_json(result, q_profile_ci(d, args.alpha)); break;
            case OutputFormat::Forest: out << render_forest(d, result); break;
        }
        return out ? kExitOk : kExitFailure;
    } catch (const std::exception& ex) {
        err << "error: " << args.input << ": " << ex.what() << '\n';
        return kExitFailure;
    }
}

void write_simulation_csv(std::ostream& out, const std::vector<sim::CellResult>& results) {
    out << kSimulationCsvHeader << '\n';
    for (const auto& cell : results) {
        const auto& c = cell.cell;
        const std::string prefix = std::string(sim::to_string(c.spec.scenario)) + ',' + std::to_string(c.spec.k) +
                                   ',' + format_number(c.i2) + ',';
        const std::string suffix_ids = ',' + std::to_string(c.reps) + ',' + std::to_string(c.seed) + ',';
        for (std::size_t e = 0; e < c.estimators.size(); ++e) {
            out << prefix << to_string(c.estimators[e]) << suffix_ids;
            const auto* s = cell.error ? nullptr : cell.find(c.estimators[e]);
            if (!s) {
                out << "nan,nan,nan,nan,nan,nan,nan\n";
                continue;
            }
            out << fixed4(s->coverage_of(IntervalMethod::Normal)) << ',' << fixed4(s->coverage_of(IntervalMethod::Hksj))
                << ',' << fixed4(s->coverage_of(IntervalMethod::Mkh)) << ','
                << format_number(s->mc_se[static_cast<std::size_t>(IntervalMethod::Hksj)]) << ','
                << format_number(s->mean_len_ratio) << ',' << fixed4(s->frac_q_lt_1) << ','
                << format_number(s->mean_tau2_hat) << '\n';
        }
    }
}

int cmd_simulate(const SimulateArgs& args, std::ostream& err) {
    std::ofstream file(args.out, std::ios::binary | std::ios::trunc);
    if (!file) {
        err << "error: cannot write '" << args.out << "'\n";
        return kExitFailure;
    }
    std::vector<sim::CellResult> results;
    try {
        results = sim::run_grid(args.grid, args.workers);
    } catch (const std::exception& ex) {
        err << "error: " << ex.what() << '\n';
        return kExitFailure;
    }
    write_simulation_csv(file, results);
    file.flush();
    if (!file) {
        err << "error: failed writing '" << args.out << "'\n";
        return kExitFailure;
    }

    bool ok = true;
    for (const auto& r : results) {
        if (r.error) {
            ok = false;
            err << "error: cell " << sim::to_string(r.cell.spec.scenario) << " k=" << r.cell.spec.k
                << " i2=" << format_number(r.cell.i2) << ": " << *r.error << '\n';
            continue;
        }
        for (const auto& s : r.by_estimator) {
            if (s.failures > 0) {
                err << "warning: cell " << sim::to_string(r.cell.spec.scenario) << " k=" << r.cell.spec.k
                    << " i2=" << format_number(r.cell.i2) << " " << to_string(s.estimator) << ": " << s.failures
                    << " replicate(s) failed to converge and were excluded\n";
            }
        }
    }
    return ok ? kExitOk : kExitFailure;
}

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
    CLI::App app{"Random-effects meta-analysis with normal, HKSJ and modified KH intervals"};
    app.require_subcommand(1);

    std::string input;
    std::string estimator = "dl";
    double alpha = 0.05;
    std::string format = "table";
    auto* analyze_cmd = app.add_subcommand("analyze", "Analyze a label,estimate,stderr CSV file");
    analyze_cmd->add_option("--input", input, "Study CSV")->required();
    analyze_cmd->add_option("--estimator", estimator, "Heterogeneity estimator: dl, reml or pm");
    analyze_cmd->add_option("--alpha", alpha, "Interval error level");
    analyze_cmd->add_option("--format", format, "table, json or forest");

    std::string scenarios = "A,B,C,D";
    std::string k_range = "2..11";
    std::string i2_list = "0,0.25,0.5,0.75,0.9";
    std::string estimators = "dl";
    double sim_alpha = 0.05;
    std::size_t reps = 10000;
    std::uint64_t seed = 0;
    std::string out_path;
    unsigned workers = 0;
    auto* sim_cmd = app.add_subcommand("simulate", "Run the Monte Carlo coverage grid");
    sim_cmd->add_option("--scenarios", scenarios, "Comma-separated subset of A,B,C,D");
    sim_cmd->add_option("--k", k_range, "Number of studies, N or MIN..MAX");
    sim_cmd->add_option("--i2", i2_list, "Comma-separated true I^2 values");
    sim_cmd->add_option("--estimators", estimators, "Comma-separated subset of dl,reml,pm");
    sim_cmd->add_option("--alpha", sim_alpha, "Interval error level");
    sim_cmd->add_option("--reps", reps, "Replicates per cell");
    sim_cmd->add_option("--seed", seed, "Base RNG seed");
    sim_cmd->add_option("--out", out_path, "Output CSV path")->required();
    sim_cmd->add_option("--workers", workers, "Worker threads (0 = all cores)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e, out, err);
        return code == 0 ? kExitOk : kExitUsage;
    }

    try {
        if (analyze_cmd->parsed()) {
            AnalyzeArgs a;
            a.input = input;
            a.estimator = parse_estimator(estimator);
            if (!(alpha > 0.0 && alpha < 1.0)) throw DomainError("--alpha must lie in (0,1)");
            a.alpha = alpha;
            a.format = parse_format(format);
            return cmd_analyze(a, out, err);
        }
        SimulateArgs s;
        s.grid.scenarios = parse_scenarios(scenarios);
        std::tie(s.grid.k_min, s.grid.k_max) = parse_k_range(k_range);
        s.grid.i2_values = parse_i2_list(i2_list);
        s.grid.estimators = parse_estimators(estimators);
        if (!(sim_alpha > 0.0 && sim_alpha < 1.0)) throw DomainError("--alpha must lie in (0,1)");
        s.grid.alpha = sim_alpha;
        if (reps < 1) throw DomainError("--reps must be >= 1");
        s.grid.reps = reps;
        s.grid.seed = seed;
        s.out = out_path;
        s.workers = workers;
        return cmd_simulate(s, err);
    } catch (const DomainError& ex) {
        err << "usage error: " << ex.what() << '\n';
        return kExitUsage;
    }
}

}  // namespace remeta::cli

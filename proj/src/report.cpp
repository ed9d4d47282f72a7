#include "remeta/report.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <sstream>
#include <string>
#include <vector>

#include "remeta/errors.hpp"
#include "remeta/stats_kernel.hpp"

namespace remeta {
namespace {

constexpr int kAxisWidth = 41;
constexpr IntervalMethod kMethods[] = {IntervalMethod::Normal, IntervalMethod::Hksj, IntervalMethod::Mkh};

std::string pad_right(std::string s, std::size_t width) {
    if (s.size() < width) s.append(width - s.size(), ' ');
    return s;
}

std::string pad_left(std::string s, std::size_t width) {
    if (s.size() < width) s.insert(0, width - s.size(), ' ');
    return s;
}

std::string lower_name(IntervalMethod m) {
    std::string s(to_string(m));
    std::transform(s.begin(), s.end(), s.begin(), [](unsigned char c) { return std::tolower(c); });
    return s;
}

struct ForestRow {
    std::string label;
    double center;
    double lower;
    double upper;
    char center_mark;
};

class Axis {
public:
    Axis(double lo, double hi) : lo_(lo), hi_(hi) {}

    int column(double x) const {
        const double t = (x - lo_) / (hi_ - lo_);
        return std::clamp(static_cast<int>(std::lround(t * (kAxisWidth - 1))), 0, kAxisWidth - 1);
    }

    std::string draw(const ForestRow& row) const {
        std::string line(kAxisWidth, ' ');
        const int zero = column(0.0);
        line[zero] = '|';
        const int a = column(row.lower);
        const int b = column(row.upper);
        for (int c = a; c <= b; ++c) line[c] = '-';
        line[a] = '[';
        line[b] = ']';
        line[column(row.center)] = row.center_mark;
        return line;
    }

    std::string ruler() const {
        std::string line(kAxisWidth, '-');
        line.front() = '+';
        line.back() = '+';
        line[column(0.0)] = '+';
        return line;
    }

    std::string labels() const {
        std::string line(kAxisWidth, ' ');
        const std::string left = format_number(lo_);
        const std::string right = format_number(hi_);
        line.replace(0, left.size(), left);
        const std::size_t right_at = kAxisWidth - right.size();
        line.replace(right_at, right.size(), right);
        const int zero = column(0.0);
        if (static_cast<std::size_t>(zero) > left.size() && static_cast<std::size_t>(zero) + 1 < right_at) {
            line[zero] = '0';
        }
        return line;
    }

private:
    double lo_;
    double hi_;
};

}  // namespace

std::string format_number(double x) {
    if (x == 0.0) x = 0.0;  // no "-0"
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.6g", x);
    return buf;
}

std::string render_table(const AnalysisResult& r, const std::optional<TauInterval>& tau_ci) {
    std::ostringstream os;
    os << "Random-effects meta-analysis\n";
    auto row = [&](const std::string& key, const std::string& value) {
        os << "  " << pad_right(key, 14) << value << '\n';
    };
    row("k", std::to_string(r.k));
    row("estimator", std::string(to_string(r.estimator)));
    row("alpha", format_number(r.alpha));
    row("tau2_hat", format_number(r.tau2.value));
    if (tau_ci) row("tau2_ci", "[" + format_number(tau_ci->lower) + ", " + format_number(tau_ci->upper) + "]");
    row("i2_hat", format_number(r.i2_hat));
    row("mu_hat", format_number(r.mu_hat));
    row("sigma_mu_hat", format_number(r.sigma_mu_hat));
    row("q", format_number(r.q));
    row("q_star", format_number(r.q_star));
    os << '\n' << "  " << pad_right("method", 8) << pad_left("lower", 12) << pad_left("upper", 12) << '\n';
    for (auto m : kMethods) {
        const auto& ci = r.interval(m);
        os << "  " << pad_right(std::string(to_string(m)), 8) << pad_left(format_number(ci.lower), 12)
           << pad_left(format_number(ci.upper), 12) << '\n';
    }
    return os.str();
}

std::string render_json(const AnalysisResult& r, const std::optional<TauInterval>& tau_ci) {
    std::vector<std::pair<std::string, std::string>> kv;
    kv.emplace_back("k", std::to_string(r.k));
    kv.emplace_back("estimator", "\"" + std::string(to_string(r.estimator)) + "\"");
    kv.emplace_back("alpha", format_number(r.alpha));
    kv.emplace_back("tau2_hat", format_number(r.tau2.value));
    kv.emplace_back("i2_hat", format_number(r.i2_hat));
    kv.emplace_back("mu_hat", format_number(r.mu_hat));
    kv.emplace_back("sigma_mu_hat", format_number(r.sigma_mu_hat));
    kv.emplace_back("q", format_number(r.q));
    kv.emplace_back("q_star", format_number(r.q_star));
    for (auto m : kMethods) {
        const auto& ci = r.interval(m);
        kv.emplace_back(lower_name(m) + "_lower", format_number(ci.lower));
        kv.emplace_back(lower_name(m) + "_upper", format_number(ci.upper));
    }
    if (tau_ci) {
        kv.emplace_back("tau2_ci_lower", format_number(tau_ci->lower));
        kv.emplace_back("tau2_ci_upper", format_number(tau_ci->upper));
    }
    std::string out = "{\n";
    for (std::size_t i = 0; i < kv.size(); ++i) {
        out += "  \"" + kv[i].first + "\": " + kv[i].second + (i + 1 < kv.size() ? ",\n" : "\n");
    }
    out += "}\n";
    return out;
}

std::string render_forest(const Dataset& d, const AnalysisResult& r) {
    if (d.size() < 2) throw InsufficientDataError(d.size());
    if (d.size() != r.k) throw ContractError("render_forest: result was computed for a different dataset");

    const double z = stats::std_normal_quantile(1.0 - 0.5 * r.alpha);
    std::vector<ForestRow> studies;
    for (std::size_t i = 0; i < d.size(); ++i) {
        const auto s = d.study(i);
        studies.push_back({s.label, s.estimate, s.estimate - z * s.std_error, s.estimate + z * s.std_error, 'o'});
    }
    std::vector<ForestRow> pooled;
    for (auto m : kMethods) {
        const auto& ci = r.interval(m);
        pooled.push_back({std::string(to_string(m)), r.mu_hat, ci.lower, ci.upper, '#'});
    }

    double lo = 0.0;
    double hi = 0.0;
    for (const auto* rows : {&studies, &pooled}) {
        for (const auto& row : *rows) {
            lo = std::min(lo, row.lower);
            hi = std::max(hi, row.upper);
        }
    }
    const double pad = 0.05 * (hi - lo > 0.0 ? hi - lo : 1.0);
    const Axis axis(lo - pad, hi + pad);

    std::size_t label_width = 6;
    for (const auto& row : studies) label_width = std::max(label_width, row.label.size());
    label_width += 2;
    constexpr std::size_t kNum = 11;

    std::ostringstream os;
    const int level = static_cast<int>(std::lround(100.0 * (1.0 - r.alpha)));
    os << "Forest plot (" << level << "% intervals, estimator " << to_string(r.estimator)
       << ", tau2_hat = " << format_number(r.tau2.value) << ")\n";
    const std::string head = pad_right("study", label_width) + pad_left("estimate", kNum) +
                             pad_left("lower", kNum) + pad_left("upper", kNum) + "  ";
    os << head << '\n';
    auto emit = [&](const ForestRow& row) {
        os << pad_right(row.label, label_width) << pad_left(format_number(row.center), kNum)
           << pad_left(format_number(row.lower), kNum) << pad_left(format_number(row.upper), kNum) << "  "
           << axis.draw(row) << '\n';
    };
    for (const auto& row : studies) emit(row);
    os << std::string(head.size() + kAxisWidth, '=') << '\n';
    for (const auto& row : pooled) emit(row);
    os << std::string(head.size(), ' ') << axis.ruler() << '\n';
    os << std::string(head.size(), ' ') << axis.labels() << '\n';
    return os.str();
}

}  // namespace remeta

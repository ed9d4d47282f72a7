#include "remeta/study_csv.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "remeta/errors.hpp"

namespace remeta {
namespace {

std::string_view strip_cr(std::string_view line) {
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    return line;
}

std::string_view trim(std::string_view s) {
    while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
    while (!s.empty() && (s.back() == ' ' || s.back() == '\t')) s.remove_suffix(1);
    return s;
}

double parse_number(std::string_view field, const char* name, std::size_t line) {
    field = trim(field);
    if (!field.empty() && field.front() == '+') field.remove_prefix(1);
    double value = 0.0;
    const auto [ptr, ec] = std::from_chars(field.data(), field.data() + field.size(), value);
    if (field.empty() || ec != std::errc() || ptr != field.data() + field.size() || !std::isfinite(value)) {
        throw FormatError(std::string(name) + " '" + std::string(field) + "' is not a finite number", line);
    }
    return value;
}

}  // namespace

Dataset parse_study_csv(std::string_view text) {
    constexpr std::string_view kBom = "\xEF\xBB\xBF";
    if (text.substr(0, kBom.size()) == kBom) text.remove_prefix(kBom.size());

    std::vector<Study> studies;
    std::size_t line_no = 0;
    bool header_seen = false;
    while (!text.empty()) {
        const auto nl = text.find('\n');
        std::string_view line = strip_cr(text.substr(0, nl));
        text = nl == std::string_view::npos ? std::string_view{} : text.substr(nl + 1);
        ++line_no;

        if (!header_seen) {
            if (trim(line) != kStudyCsvHeader) {
                throw FormatError("expected header '" + std::string(kStudyCsvHeader) + "', found '" +
                                      std::string(line) + "'",
                                  line_no);
            }
            header_seen = true;
            continue;
        }
        if (trim(line).empty()) continue;

        const auto c1 = line.find(',');
        const auto c2 = c1 == std::string_view::npos ? c1 : line.find(',', c1 + 1);
        if (c2 == std::string_view::npos || line.find(',', c2 + 1) != std::string_view::npos) {
            throw FormatError("expected 3 fields (label,estimate,stderr)", line_no);
        }
        Study s;
        s.label = std::string(trim(line.substr(0, c1)));
        s.estimate = parse_number(line.substr(c1 + 1, c2 - c1 - 1), "estimate", line_no);
        s.std_error = parse_number(line.substr(c2 + 1), "stderr", line_no);
        if (!(s.std_error > 0.0)) throw FormatError("stderr must be positive", line_no);
        studies.push_back(std::move(s));
    }
    if (!header_seen) throw FormatError("empty input: expected header '" + std::string(kStudyCsvHeader) + "'");
    if (studies.empty()) throw FormatError("empty input: no study rows after the header");
    return Dataset(std::move(studies));
}

Dataset read_study_csv(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot open '" + path.string() + "'");
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_study_csv(buf.str());
}

}  // namespace remeta

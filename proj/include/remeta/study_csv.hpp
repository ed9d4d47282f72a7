#pragma once

#include <filesystem>
#include <string_view>

#include "remeta/model.hpp"

namespace remeta {

inline constexpr std::string_view kStudyCsvHeader = "label,estimate,stderr";

/// Parses `label,estimate,stderr` CSV text (LF or CRLF, optional UTF-8 BOM).
/// Throws FormatError for a bad header, a malformed row (with its line number)
/// or a file without data rows.
Dataset parse_study_csv(std::string_view text);

Dataset read_study_csv(const std::filesystem::path& path);

}  // namespace remeta

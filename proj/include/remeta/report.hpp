#pragma once

#include <optional>
#include <string>

#include "remeta/heterogeneity.hpp"
#include "remeta/inference.hpp"
#include "remeta/model.hpp"

namespace remeta {

/// Numbers in reports use 6 significant digits.
std::string format_number(double x);

std::string render_table(const AnalysisResult& r, const std::optional<TauInterval>& tau_ci = std::nullopt);

/// Flat JSON object, one key per scalar.
std::string render_json(const AnalysisResult& r, const std::optional<TauInterval>& tau_ci = std::nullopt);

/// Fixed-width text forest plot: study rows (y_i +/- z s_i), a separator, the
/// three pooled rows and a shared axis.
std::string render_forest(const Dataset& d, const AnalysisResult& r);

}  // namespace remeta

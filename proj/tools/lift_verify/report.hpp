#pragma once

#include <string>

#include <nlohmann/json.hpp>

#include "lift/verify.hpp"

namespace lift::cli {

inline constexpr const char* kVersion = "0.1.0";

/// {meta: {seed, samples, tol, version}, results: [...], pass}
nlohmann::json to_json(const PropertyReport& report);
std::string render_json(const PropertyReport& report);
/// Aligned table, one row per result, followed by a summary line.
std::string render_text(const PropertyReport& report);

}  // namespace lift::cli

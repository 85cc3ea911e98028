#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "lift/base_geometry.hpp"
#include "lift/verify.hpp"

namespace lift::cli {

/// Malformed manifest: TOML syntax, unknown keys, bad values, invalid metric
/// expressions.
class ManifestError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct RunSettings {
  std::optional<int> samples;
  std::optional<std::uint64_t> seed;
  std::optional<double> tolerance;
  std::vector<Suite> suites;
};

struct Manifest {
  std::vector<ManifoldSpec> manifolds;
  RunSettings run;
};

Manifest parse_manifest(std::string_view text, std::string_view source = "<manifest>");
Manifest load_manifest(const std::filesystem::path& path);

}  // namespace lift::cli

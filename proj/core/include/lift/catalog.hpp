#pragma once

#include <optional>
#include <string_view>
#include <vector>

#include "lift/base_geometry.hpp"

namespace lift {

/// flat2, sphere2 and halfplane2, in that order.
std::vector<ManifoldSpec> builtin_catalog();

/// A catalog manifold by name, or nullopt.
std::optional<ManifoldSpec> find_catalog_manifold(std::string_view name);

/// Lower threshold for the "complete lift is not symplectic" control on a
/// catalog manifold. Half of the largest |nabla omega| component seen by the
/// finite-difference oracle in tests/oracles over 100 samples (seed 42).
/// Manifolds without a frozen threshold have no control.
std::optional<double> not_symplectic_threshold(std::string_view name);

}  // namespace lift

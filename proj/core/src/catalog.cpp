#include "lift/catalog.hpp"

#include <numbers>

namespace lift {

std::vector<ManifoldSpec> builtin_catalog() {
  const double pi = std::numbers::pi;
  std::vector<ManifoldSpec> out;
  out.push_back(make_manifold("flat2", {"x", "y"}, {{{0, 0}, "1"}, {{1, 1}, "1"}}, {{-1.0, 1.0}, {-1.0, 1.0}}));
  out.push_back(make_manifold("sphere2", {"theta", "phi"}, {{{0, 0}, "1"}, {{1, 1}, "sin(theta)^2"}},
                              {{0.3, pi - 0.3}, {0.0, 2.0 * pi}}));
  out.push_back(make_manifold("halfplane2", {"x", "y"}, {{{0, 0}, "1/y^2"}, {{1, 1}, "1/y^2"}},
                              {{-1.0, 1.0}, {0.5, 2.0}}));
  return out;
}

std::optional<ManifoldSpec> find_catalog_manifold(std::string_view name) {
  for (auto& m : builtin_catalog()) {
    if (m.name == name) return m;
  }
  return std::nullopt;
}

std::optional<double> not_symplectic_threshold(std::string_view name) {
  // Frozen from tests/oracles/complete_lift_oracle.py.
  if (name == "sphere2") return 1.97055;
  if (name == "halfplane2") return 7.09954;
  return std::nullopt;
}

}  // namespace lift

#pragma once

#include <cstdint>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "lift/base_geometry.hpp"
#include "lift/cotangent.hpp"
#include "lift/lifted_connections.hpp"

namespace lift {

struct SampleConfig {
  std::uint64_t seed = 42;
  int samples = 100;
  double tolerance = 1e-8;
  CurvatureSign curvature_sign = CurvatureSign::Standard;
  /// Worker threads for the sample loop; 0 picks the hardware concurrency.
  int threads = 0;
};

void validate(const SampleConfig& cfg);

class UnknownPropertyError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Upper bounds pass when the residual is at most the threshold; lower bounds
/// (positive controls) pass when it is at least the threshold.
enum class Bound { AtMost, AtLeast };

struct PropertyResult {
  std::string manifold;
  std::string property;
  std::string anchor;
  Bound bound = Bound::AtMost;
  double threshold = 0.0;
  double max_residual = 0.0;
  std::vector<double> argmax_point;  // chart coordinates (x, p)
  int samples = 0;
  bool pass = false;
};

struct PropertyReport {
  SampleConfig config;
  std::vector<PropertyResult> results;

  bool pass() const;
};

enum class Suite { Properties, Lemmas, Theorem };

const char* to_string(Suite s);
Suite parse_suite(std::string_view name);

// ---------------------------------------------------------------------------
// Sampling.

/// Sample `index` of the stream keyed by (seed, manifold name). Uniform on the
/// base box times the fiber box, redrawn while |p| is inside the exclusion
/// ball or the metric is not positive definite. Throws DomainError with the
/// last point after 1000 draws.
PhasePoint sample_point(const ManifoldSpec& m, std::uint64_t seed, int index);

/// Fixed fields used by the identity checks: three vector fields, three
/// 1-forms and two (1,1)-tensors with non-constant components, built from the
/// manifold's coordinate names.
struct FieldTestSet {
  std::vector<FieldSpec> vectors;
  std::vector<FieldSpec> oneforms;
  std::vector<FieldSpec> tensors;
};

FieldTestSet field_test_set(const ManifoldSpec& m);

// ---------------------------------------------------------------------------
// Checks.

/// lift, torsion, symplectic, homogeneous, bnw-curv, degree, not-symplectic-complete.
std::vector<std::string> property_ids();

/// One result per connection the property applies to. Empty when it applies
/// to none on this manifold (the positive control without a threshold).
std::vector<PropertyResult> check_property(const ManifoldSpec& m, const SampleConfig& cfg, std::string_view id);

/// max |Gamma^s - Gamma^bnw| / (1 + |Gamma^bnw|) over samples and components.
PropertyResult check_theorem(const ManifoldSpec& m, const SampleConfig& cfg);

/// Identities of the lift calculus over the field test set, one result each.
std::vector<PropertyResult> check_lemma_suite(const ManifoldSpec& m, const SampleConfig& cfg);

/// Names and formulas of the lemma suite items, in report order.
struct LemmaItem {
  std::string id;
  std::string anchor;
};
const std::vector<LemmaItem>& lemma_items();

PropertyReport run_suites(std::span<const ManifoldSpec> manifolds, const SampleConfig& cfg,
                          std::span<const Suite> suites);

}  // namespace lift

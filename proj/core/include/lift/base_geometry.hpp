#pragma once

#include <map>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "lift/expr.hpp"
#include "lift/jets.hpp"
#include "lift/tensor.hpp"

namespace lift {

struct Interval {
  double lo = 0.0;
  double hi = 0.0;
};

/// A Riemannian manifold given in a single chart: coordinate names, metric
/// component expressions and the box that points are sampled from.
struct ManifoldSpec {
  std::string name;
  int dim = 0;
  std::vector<std::string> coords;
  /// Row-major n x n, symmetric (entry (j,i) shares the expression of (i,j)).
  std::vector<Expr> metric;
  std::vector<Interval> domain;
  /// Sampling interval for every momentum component.
  Interval fiber{-2.0, 2.0};
  /// Momenta with |p| below this radius are not sampled.
  double fiber_exclusion = 0.1;

  const Expr& metric_component(int i, int j) const {
    return metric[static_cast<std::size_t>(i * dim + j)];
  }
};

/// Builds and validates a ManifoldSpec. `upper` maps (i, j) with i <= j to the
/// expression text of g_ij; missing off-diagonal entries are zero, missing
/// diagonal entries are an error.
ManifoldSpec make_manifold(std::string name, std::vector<std::string> coords,
                           const std::map<std::pair<int, int>, std::string>& upper, std::vector<Interval> domain,
                           Interval fiber = {-2.0, 2.0}, double fiber_exclusion = 0.1);

struct BasePoint {
  std::vector<double> q;
};

bool in_domain(const ManifoldSpec& m, const BasePoint& q);

/// Gamma^c_ab stored at (c, a, b).
struct ConnectionValue {
  int dim = 0;
  Tensor<double> coeffs;
  std::string label;

  double operator()(int c, int a, int b) const { return coeffs(c, a, b); }
};

/// R^k_lij stored at (k, l, i, j), with R(X,Y)Z = nabla_X nabla_Y Z - nabla_Y nabla_X Z
/// - nabla_[X,Y] Z and the slots Z = l, X = i, Y = j.
struct CurvatureValue {
  int dim = 0;
  Tensor<double> coeffs;
  std::string label;

  double operator()(int k, int l, int i, int j) const { return coeffs(k, l, i, j); }
};

enum class FieldRole { Scalar, Vector, OneForm, Tensor11 };

const char* to_string(FieldRole role);

/// Tensor field on the base. Components: Vector X^k, OneForm alpha_k,
/// Tensor11 T^k_m at index k * n + m, Scalar a single entry.
struct FieldSpec {
  FieldRole role = FieldRole::Vector;
  std::string label;
  std::vector<Expr> components;
};

FieldSpec make_field(const ManifoldSpec& m, FieldRole role, std::string label,
                     const std::vector<std::string>& components);

void require_role(const FieldSpec& f, FieldRole role);

// ---------------------------------------------------------------------------
// Jet-level kernel. `coords` are jets over d >= n variables whose first n
// variables are the base coordinates; everything returned is a jet of the
// same variable count.

/// Seeds x^i as variable i of `vars` at truncation `order`.
std::vector<Jet> seed_coordinates(std::span<const double> values, int vars, int order);

/// g_ij at the truncation order of `coords`. Throws DomainError when the
/// metric is not positive definite at the base point.
Tensor<Jet> metric_jets(const ManifoldSpec& m, std::span<const Jet> coords);
/// Inverse of a symmetric matrix of jets (Gauss-Jordan, pivoting on values).
Tensor<Jet> inverse_jets(const Tensor<Jet>& a);
/// Gamma^k_ij at (k, i, j), one order below the metric.
Tensor<Jet> christoffel_jets(const Tensor<Jet>& metric, const Tensor<Jet>& inverse);
/// R^k_lij at (k, l, i, j), one order below Gamma. Requires Gamma of order >= 1.
Tensor<Jet> riemann_jets(const Tensor<Jet>& christoffel);

std::vector<Jet> field_jets(const FieldSpec& f, std::span<const Jet> coords);

/// (nabla X)^k_i = d_i X^k + Gamma^k_im X^m at (k, i); one order below X.
Tensor<Jet> covariant_gradient_jets(std::span<const Jet> x, const Tensor<Jet>& christoffel);
/// (nabla_X alpha)_i = X^m (d_m alpha_i - Gamma^k_mi alpha_k); one order below alpha.
std::vector<Jet> covariant_derivative_oneform_jets(std::span<const Jet> alpha, std::span<const Jet> x,
                                                   const Tensor<Jet>& christoffel);

/// The metric, its inverse, Gamma and (for order >= 2) R at a point.
struct BaseGeometry {
  int dim = 0;
  int order = 0;
  std::vector<Jet> coords;
  Tensor<Jet> metric;
  Tensor<Jet> inverse;
  Tensor<Jet> christoffel;
  Tensor<Jet> riemann;  // empty when order < 2
};

BaseGeometry base_geometry(const ManifoldSpec& m, std::span<const Jet> coords);

// ---------------------------------------------------------------------------
// Pointwise operations.

/// Metric components as jets over the n base coordinates, truncated at `order`.
Tensor<Jet> metric_at(const ManifoldSpec& m, const BasePoint& q, int order);
ConnectionValue christoffel_at(const ManifoldSpec& m, const BasePoint& q);
CurvatureValue riemann_at(const ManifoldSpec& m, const BasePoint& q);
/// g^lj R^i_lij.
double scalar_curvature_at(const ManifoldSpec& m, const BasePoint& q);
/// (nabla X)^k_i at (k, i), the convention (nabla X)(Y) = nabla_Y X.
Tensor<double> grad_vector_field_at(const ManifoldSpec& m, const FieldSpec& x, const BasePoint& q);
std::vector<double> covariant_derivative_oneform_at(const ManifoldSpec& m, const FieldSpec& alpha,
                                                    const FieldSpec& x, const BasePoint& q);

/// Values (order-0 coefficients) of a table of jets.
Tensor<double> values_of(const Tensor<Jet>& t);
std::vector<double> values_of(std::span<const Jet> v);

}  // namespace lift

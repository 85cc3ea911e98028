#pragma once

#include <functional>
#include <span>
#include <vector>

#include "lift/base_geometry.hpp"
#include "lift/jets.hpp"
#include "lift/tensor.hpp"

namespace lift {

/// A covector p in T*_q Q in the induced chart (x^1..x^n, p_1..p_n).
struct PhasePoint {
  BasePoint q;
  std::vector<double> p;

  int dim() const { return static_cast<int>(p.size()); }
  /// (x^1..x^n, p_1..p_n)
  std::vector<double> chart() const;
};

/// Tangent vector of T*Q at `base`, components in the basis
/// (d/dx^1..d/dx^n, d/dp_1..d/dp_n).
struct PhaseVector {
  std::vector<double> components;
  PhasePoint base;
};

/// Vector field on T*Q near a point, as 2n component jets.
using PhaseField = std::vector<Jet>;

/// Callable returning the components of a vector field on T*Q, given the
/// seeded chart jets (x^1..x^n, p_1..p_n). Must be re-entrant.
using PhaseFieldFn = std::function<PhaseField(std::span<const Jet> chart)>;

/// Geometry jets at a point of T*Q over the 2n chart variables: the base
/// data of order K, K-1, K-2 (metric, Gamma, R) and the seeded momenta.
struct PhaseGeometry {
  int dim = 0;
  int order = 0;
  BaseGeometry base;
  std::vector<Jet> momenta;

  std::span<const Jet> x() const { return base.coords; }
  std::span<const Jet> p() const { return momenta; }
  std::vector<Jet> chart() const;
};

PhaseGeometry phase_geometry(const ManifoldSpec& m, const PhasePoint& pt, int order);

/// Constant matrix omega_ab = omega(d_a, d_b) of omega = d theta = dp_i ^ dx^i.
Tensor<double> omega_matrix(int n);
/// Inverse of omega_matrix; equals its negative.
Tensor<double> omega_inverse_matrix(int n);

// ---------------------------------------------------------------------------
// Jet-level lifts. Orders follow the inputs: anything involving a first
// derivative or Gamma drops one order, and results are truncated to the
// lowest order among their ingredients.

Jet tautological(std::span<const Jet> x_field, std::span<const Jet> p);
PhaseField vertical_lift_oneform(std::span<const Jet> alpha);
/// v T: fiber components p_k T^k_m, T row-major n x n.
PhaseField vertical_lift_tensor(std::span<const Jet> tensor, std::span<const Jet> p);
/// c X = (X^i ; -p_k d_i X^k).
PhaseField complete_lift(std::span<const Jet> x_field, std::span<const Jet> p);
/// h X = (X^i ; p_k Gamma^k_im X^m).
PhaseField horizontal_lift(std::span<const Jet> x_field, std::span<const Jet> p, const Tensor<Jet>& christoffel);
PhaseField liouville(std::span<const Jet> p);
/// K(V)_i = b_i - p_k Gamma^k_mi a^m for V = (a ; b).
std::vector<Jet> connection_map(std::span<const Jet> v, std::span<const Jet> p, const Tensor<Jet>& christoffel);
/// [V, W]^c = V^a d_a W^c - W^a d_a V^c.
PhaseField phase_bracket(std::span<const Jet> v, std::span<const Jet> w);
/// V(f) = V^a d_a f.
Jet directional_derivative(std::span<const Jet> v, const Jet& f);
/// omega(V, W) = V^a omega_ab W^b.
Jet omega_pair(std::span<const Jet> v, std::span<const Jet> w);

/// Truncates every component to `order`.
PhaseField truncated(std::span<const Jet> v, int order);
int min_order(std::span<const Jet> v);

// ---------------------------------------------------------------------------
// Pointwise operations.

double tautological_at(const FieldSpec& x, const PhasePoint& pt);
std::vector<double> theta_at(const PhasePoint& pt);
Tensor<double> omega_at(const PhasePoint& pt);
PhaseVector vlift_oneform_at(const FieldSpec& alpha, const PhasePoint& pt);
PhaseVector vlift_tensor_at(const FieldSpec& t, const PhasePoint& pt);
PhaseVector complete_lift_at(const FieldSpec& x, const PhasePoint& pt);
PhaseVector horizontal_lift_at(const ManifoldSpec& m, const FieldSpec& x, const PhasePoint& pt);
PhaseVector liouville_at(const PhasePoint& pt);
/// Throws ShapeError when V is based elsewhere.
std::vector<double> connection_map_at(const ManifoldSpec& m, const PhaseVector& v, const PhasePoint& pt);
/// Bracket of two jet-evaluable fields; `seed_order` is the jet order the
/// chart is seeded at (fields built from first derivatives need 2).
PhaseVector phase_bracket_at(const PhaseFieldFn& v, const PhaseFieldFn& w, const PhasePoint& pt, int seed_order = 2);

}  // namespace lift

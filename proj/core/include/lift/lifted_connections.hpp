#pragma once

#include <span>
#include <string>

#include "lift/base_geometry.hpp"
#include "lift/cotangent.hpp"
#include "lift/tensor.hpp"

namespace lift {

/// Sign applied to the base curvature wherever it enters the BNW frame
/// formulas. `Standard` uses R exactly as computed by riemann_jets; it is the
/// convention under which the BNW lift equals the symplectified complete lift
/// (see docs/conventions.md). `Flipped` exists to demonstrate that the
/// opposite choice is detected.
enum class CurvatureSign { Standard = 1, Flipped = -1 };

enum class LiftedConnection { Complete, Bnw, Symplectified };

const char* to_string(LiftedConnection which);

/// 2n x 2n metric [[A, I], [I, 0]], A_ij = -2 p_k Gamma^k_ij; one order below the metric.
Tensor<Jet> riemann_extension_jets(const PhaseGeometry& g);
/// Analytic inverse [[0, I], [I, -A]] of riemann_extension_jets.
Tensor<Jet> riemann_extension_inverse_jets(const Tensor<Jet>& extension);

/// Levi-Civita connection of the Riemann extension at (c, a, b); two orders below the metric.
Tensor<Jet> complete_connection_jets(const PhaseGeometry& g);
/// BNW connection in chart coordinates; two orders below the metric.
Tensor<Jet> bnw_connection_jets(const PhaseGeometry& g, CurvatureSign sign = CurvatureSign::Standard);

/// Coordinate coefficients of a connection given on a frame.
///
/// `frame(A, c)`: components of frame vector A in the chart basis.
/// `coeff(a, A)`: d_a = sum_A coeff(a, A) frame_A.
/// `values(A, B, c)`: components of nabla_{frame_A} frame_B.
/// Returns Gamma^c_ab = sum_A coeff(a,A) sum_B [frame_A(coeff(b,B)) frame_B^c + coeff(b,B) values(A,B,c)],
/// one order below the lowest of frame and coeff.
Tensor<Jet> expand_frame_connection(const Tensor<Jet>& frame, const Tensor<Jet>& coeff, const Tensor<Jet>& values);

/// (nabla_a omega)_bc = -Gamma^d_ab omega_dc - Gamma^d_ac omega_bd at (a, b, c).
Tensor<Jet> nabla_omega_jets(const Tensor<Jet>& gamma);
/// N^d_ab at (d, a, b) from omega(N(V,W),U) = (nabla_V omega)(W,U).
Tensor<Jet> n_tensor_jets(const Tensor<Jet>& gamma);
/// Gamma^c_ab + N^c_ab / 3 + N^c_ba / 3.
Tensor<Jet> symplectify_jets(const Tensor<Jet>& gamma, const Tensor<Jet>& n_tensor);

/// nabla_V W = V^a d_a W^c + Gamma^c_ab V^a W^b.
PhaseField covariant_derivative(const Tensor<Jet>& gamma, std::span<const Jet> v, std::span<const Jet> w);
/// N(V, W)^c = N^c_ab V^a W^b.
PhaseField apply_n_tensor(const Tensor<Jet>& n_tensor, std::span<const Jet> v, std::span<const Jet> w);
/// (L_xi nabla)(d_a, d_b) = [xi, nabla_a d_b] - nabla_[xi, d_a] d_b - nabla_a [xi, d_b] at (c, a, b),
/// built from brackets of chart fields; one order below gamma.
Tensor<Jet> liouville_lie_derivative_jets(const Tensor<Jet>& gamma, std::span<const Jet> p);

/// Coefficients of `which` at the order of `g` minus two.
Tensor<Jet> lifted_connection_jets(const PhaseGeometry& g, LiftedConnection which,
                                   CurvatureSign sign = CurvatureSign::Standard);

// ---------------------------------------------------------------------------
// Pointwise operations.

struct NTensorValue {
  int dim = 0;
  Tensor<double> coeffs;  // N^c_ab at (c, a, b)

  double operator()(int c, int a, int b) const { return coeffs(c, a, b); }
};

/// Riemann extension as jets over the 2n chart variables, truncated at `order`.
Tensor<Jet> riemann_extension_at(const ManifoldSpec& m, const PhasePoint& pt, int order);
ConnectionValue complete_connection_at(const ManifoldSpec& m, const PhasePoint& pt);
ConnectionValue bnw_connection_at(const ManifoldSpec& m, const PhasePoint& pt,
                                  CurvatureSign sign = CurvatureSign::Standard);
/// (nabla_a omega)_bc at (a, b, c); omega is constant in the chart.
Tensor<double> nabla_omega_at(const ConnectionValue& gamma);
NTensorValue n_tensor_at(const ManifoldSpec& m, const PhasePoint& pt);
ConnectionValue symplectify_at(const ConnectionValue& gamma, const NTensorValue& n_tensor);
CurvatureValue phase_curvature_at(const ManifoldSpec& m, const PhasePoint& pt, LiftedConnection which,
                                  CurvatureSign sign = CurvatureSign::Standard);

}  // namespace lift

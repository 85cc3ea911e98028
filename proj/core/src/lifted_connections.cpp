#include "lift/lifted_connections.hpp"

#include <algorithm>

#include "lift/errors.hpp"

namespace lift {
namespace {

std::size_t idx(int i) { return static_cast<std::size_t>(i); }

Tensor<Jet> truncated(const Tensor<Jet>& t, int order) {
  return t.map([order](const Jet& j) { return j.truncated(order); });
}

int order_of(const Tensor<Jet>& t) {
  int k = kMaxJetOrder;
  for (const auto& j : t.flat()) k = std::min(k, j.order());
  return k;
}

Tensor<Jet> as_jets(const Tensor<double>& t) {
  return t.map([](double v) { return Jet::constant(v, 0, 0); });
}

ConnectionValue to_connection(const Tensor<Jet>& gamma, std::string label) {
  return {gamma.extent(0), values_of(gamma), std::move(label)};
}

// The constant chart field d_a at `order`.
PhaseField coordinate_field(int a, int m, const Jet& proto, int order) {
  const Jet zero = proto.truncated(order).constant_like(0.0);
  PhaseField v(idx(m), zero);
  v[idx(a)] = zero.constant_like(1.0);
  return v;
}

}  // namespace

const char* to_string(LiftedConnection which) {
  switch (which) {
    case LiftedConnection::Complete: return "complete";
    case LiftedConnection::Bnw: return "bnw";
    case LiftedConnection::Symplectified: return "symplectified";
  }
  return "?";
}

Tensor<Jet> riemann_extension_jets(const PhaseGeometry& g) {
  const int n = g.dim;
  const Tensor<Jet>& gamma = g.base.christoffel;
  const int order = order_of(gamma);
  const Jet zero = gamma(0, 0, 0).constant_like(0.0);
  const Jet one = zero.constant_like(1.0);
  Tensor<Jet> ext({2 * n, 2 * n}, zero);
  for (int i = 0; i < n; ++i) {
    ext(i, n + i) = one;
    ext(n + i, i) = one;
    for (int j = 0; j < n; ++j) {
      Jet a = zero;
      for (int k = 0; k < n; ++k) a += g.momenta[idx(k)].truncated(order) * gamma(k, i, j);
      ext(i, j) = a * -2.0;
    }
  }
  return ext;
}

Tensor<Jet> riemann_extension_inverse_jets(const Tensor<Jet>& ext) {
  const int n = ext.extent(0) / 2;
  const Jet zero = ext(0, 0).constant_like(0.0);
  const Jet one = zero.constant_like(1.0);
  Tensor<Jet> inv({2 * n, 2 * n}, zero);
  for (int i = 0; i < n; ++i) {
    inv(i, n + i) = one;
    inv(n + i, i) = one;
    for (int j = 0; j < n; ++j) inv(n + i, n + j) = -ext(i, j);
  }
  return inv;
}

Tensor<Jet> complete_connection_jets(const PhaseGeometry& g) {
  const Tensor<Jet> ext = riemann_extension_jets(g);
  const int m = ext.extent(0);
  const int order = order_of(ext) - 1;
  const Tensor<Jet> inv = truncated(riemann_extension_inverse_jets(ext), order);
  Tensor<Jet> d({m, m, m}, Jet{});  // d(a, b, c) = d_a G_bc
  for (int a = 0; a < m; ++a) {
    for (int b = 0; b < m; ++b) {
      for (int c = 0; c < m; ++c) d(a, b, c) = ext(b, c).derivative(a);
    }
  }
  const Jet zero = inv(0, 0).constant_like(0.0);
  Tensor<Jet> gamma({m, m, m}, zero);
  for (int c = 0; c < m; ++c) {
    for (int a = 0; a < m; ++a) {
      for (int b = a; b < m; ++b) {
        Jet s = zero;
        for (int e = 0; e < m; ++e) s += inv(c, e) * (d(a, e, b) + d(b, e, a) - d(e, a, b));
        s *= 0.5;
        gamma(c, a, b) = s;
        gamma(c, b, a) = s;
      }
    }
  }
  return gamma;
}

Tensor<Jet> expand_frame_connection(const Tensor<Jet>& frame, const Tensor<Jet>& coeff, const Tensor<Jet>& values) {
  const int m = frame.extent(0);
  const int order = std::min(order_of(frame), order_of(coeff)) - 1;
  const Tensor<Jet> frame_low = truncated(frame, order);
  const Tensor<Jet> coeff_low = truncated(coeff, order);
  const Tensor<Jet> values_low = truncated(values, order);

  // frame_A applied to coeff(b, B), at (A, b, B).
  const Jet zero = frame_low(0, 0).constant_like(0.0);
  Tensor<Jet> derived({m, m, m}, zero);
  for (int a = 0; a < m; ++a) {
    for (int b = 0; b < m; ++b) {
      for (int bb = 0; bb < m; ++bb) {
        Jet s = zero;
        for (int c = 0; c < m; ++c) s += frame_low(a, c) * coeff(b, bb).derivative(c).truncated(order);
        derived(a, b, bb) = s;
      }
    }
  }

  Tensor<Jet> gamma({m, m, m}, zero);
  for (int a = 0; a < m; ++a) {
    for (int b = 0; b < m; ++b) {
      // nabla_{frame_A} d_b, summed against coeff(a, A).
      for (int fa = 0; fa < m; ++fa) {
        const Jet& ca = coeff_low(a, fa);
        if (std::all_of(ca.coefficients().begin(), ca.coefficients().end(), [](double x) { return x == 0.0; })) {
          continue;
        }
        for (int c = 0; c < m; ++c) {
          Jet s = zero;
          for (int fb = 0; fb < m; ++fb) {
            s += derived(fa, b, fb) * frame_low(fb, c) + coeff_low(b, fb) * values_low(fa, fb, c);
          }
          gamma(c, a, b) += ca * s;
        }
      }
    }
  }
  return gamma;
}

Tensor<Jet> bnw_connection_jets(const PhaseGeometry& g, CurvatureSign sign) {
  const int n = g.dim;
  const int m = 2 * n;
  const Tensor<Jet>& gamma = g.base.christoffel;
  const Tensor<Jet>& r = g.base.riemann;
  if (r.size() == 0) throw JetError("BNW connection needs phase geometry of order >= 2");
  const int order = order_of(gamma);
  const int low = order - 1;
  const double s = static_cast<double>(static_cast<int>(sign));

  std::vector<Jet> p;
  for (const auto& pk : g.momenta) p.push_back(pk.truncated(order));
  const Jet zero = gamma(0, 0, 0).constant_like(0.0);
  const Jet one = zero.constant_like(1.0);

  // P_ij = p_k Gamma^k_ij
  Tensor<Jet> pg({n, n}, zero);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      for (int k = 0; k < n; ++k) pg(i, j) += p[idx(k)] * gamma(k, i, j);
    }
  }

  // Frame E_i = h(d_i) = d_{x^i} + P_im d_{p_m}, F^j = v(dx^j) = d_{p_j}.
  Tensor<Jet> frame({m, m}, zero);
  Tensor<Jet> coeff({m, m}, zero);
  for (int i = 0; i < n; ++i) {
    frame(i, i) = one;
    frame(n + i, n + i) = one;
    coeff(i, i) = one;
    coeff(n + i, n + i) = one;
    for (int j = 0; j < n; ++j) {
      frame(i, n + j) = pg(i, j);
      coeff(i, n + j) = -pg(i, j);  // d_{x^i} = E_i - P_ij F^j
    }
  }

  const Jet zero_low = zero.truncated(low);
  Tensor<Jet> values({m, m, m}, zero_low);
  for (int i = 0; i < n; ++i) {
    // nabla_{hX}(v alpha) = v(nabla_X alpha): nabla_{d_i} dx^j = -Gamma^j_im dx^m
    for (int j = 0; j < n; ++j) {
      for (int k = 0; k < n; ++k) values(i, n + j, n + k) = -gamma(j, i, k).truncated(low);
    }
    // nabla_{hX}(hY) = h(nabla_X Y) + v(R(X,Y)/2 + R(X,.)Y/6 + R(Y,.)X/6), X = d_i, Y = d_j
    for (int j = 0; j < n; ++j) {
      for (int c = 0; c < m; ++c) {
        Jet acc = zero_low;
        for (int k = 0; k < n; ++k) acc += gamma(k, i, j).truncated(low) * frame(k, c).truncated(low);
        values(i, j, c) = acc;
      }
      for (int mm = 0; mm < n; ++mm) {
        Jet acc = zero_low;
        for (int k = 0; k < n; ++k) {
          const Jet t = r(k, mm, i, j) * 0.5 + r(k, j, i, mm) * (1.0 / 6.0) + r(k, i, j, mm) * (1.0 / 6.0);
          acc += p[idx(k)].truncated(low) * t;
        }
        values(i, j, n + mm) += acc * s;
      }
    }
  }
  // nabla_{v alpha}(v beta) = 0 and nabla_{v alpha}(hX) = 0: rows n..2n-1 stay zero.
  return expand_frame_connection(frame, coeff, values);
}

Tensor<Jet> nabla_omega_jets(const Tensor<Jet>& gamma) {
  const int m = gamma.extent(0);
  const Tensor<double> w = omega_matrix(m / 2);
  const Jet zero = gamma(0, 0, 0).constant_like(0.0);
  Tensor<Jet> out({m, m, m}, zero);
  for (int a = 0; a < m; ++a) {
    for (int b = 0; b < m; ++b) {
      for (int c = 0; c < m; ++c) {
        Jet s = zero;
        for (int d = 0; d < m; ++d) {
          if (w(d, c) != 0.0) s -= gamma(d, a, b) * w(d, c);
          if (w(b, d) != 0.0) s -= gamma(d, a, c) * w(b, d);
        }
        out(a, b, c) = s;
      }
    }
  }
  return out;
}

Tensor<Jet> n_tensor_jets(const Tensor<Jet>& gamma) {
  const int m = gamma.extent(0);
  const Tensor<Jet> s = nabla_omega_jets(gamma);
  const Tensor<double> winv = omega_inverse_matrix(m / 2);
  const Jet zero = gamma(0, 0, 0).constant_like(0.0);
  Tensor<Jet> out({m, m, m}, zero);
  for (int d = 0; d < m; ++d) {
    for (int a = 0; a < m; ++a) {
      for (int b = 0; b < m; ++b) {
        Jet acc = zero;
        for (int c = 0; c < m; ++c) {
          if (winv(c, d) != 0.0) acc += s(a, b, c) * winv(c, d);
        }
        out(d, a, b) = acc;
      }
    }
  }
  return out;
}

Tensor<Jet> symplectify_jets(const Tensor<Jet>& gamma, const Tensor<Jet>& n) {
  if (gamma.shape() != n.shape()) throw ShapeError("symplectify: connection and N differ in shape");
  const int m = gamma.extent(0);
  Tensor<Jet> out = gamma;
  for (int c = 0; c < m; ++c) {
    for (int a = 0; a < m; ++a) {
      for (int b = 0; b < m; ++b) out(c, a, b) += (n(c, a, b) + n(c, b, a)) * (1.0 / 3.0);
    }
  }
  return out;
}

PhaseField covariant_derivative(const Tensor<Jet>& gamma, std::span<const Jet> v, std::span<const Jet> w) {
  const int m = gamma.extent(0);
  if (static_cast<int>(v.size()) != m || static_cast<int>(w.size()) != m) {
    throw ShapeError("covariant derivative: dimension mismatch");
  }
  const int order = std::min({order_of(gamma), min_order(v), min_order(w) - 1});
  const PhaseField vl = lift::truncated(v, order);
  const PhaseField wl = lift::truncated(w, order);
  PhaseField out;
  for (int c = 0; c < m; ++c) {
    Jet s = directional_derivative(vl, w[idx(c)]).truncated(order);
    for (int a = 0; a < m; ++a) {
      for (int b = 0; b < m; ++b) s += gamma(c, a, b).truncated(order) * vl[idx(a)] * wl[idx(b)];
    }
    out.push_back(s);
  }
  return out;
}

PhaseField apply_n_tensor(const Tensor<Jet>& n, std::span<const Jet> v, std::span<const Jet> w) {
  const int m = n.extent(0);
  if (static_cast<int>(v.size()) != m || static_cast<int>(w.size()) != m) throw ShapeError("N: dimension mismatch");
  const int order = std::min({order_of(n), min_order(v), min_order(w)});
  PhaseField out;
  for (int c = 0; c < m; ++c) {
    Jet s = n(0, 0, 0).truncated(order).constant_like(0.0);
    for (int a = 0; a < m; ++a) {
      for (int b = 0; b < m; ++b) {
        s += n(c, a, b).truncated(order) * v[idx(a)].truncated(order) * w[idx(b)].truncated(order);
      }
    }
    out.push_back(s);
  }
  return out;
}

Tensor<Jet> liouville_lie_derivative_jets(const Tensor<Jet>& gamma, std::span<const Jet> p) {
  const int m = gamma.extent(0);
  const int order = order_of(gamma);
  if (order < 1) throw JetError("Lie derivative of a connection needs coefficients of order >= 1");
  if (min_order(p) < order + 1) throw JetError("Lie derivative of a connection needs momenta of order >= gamma + 1");
  const PhaseField xi = liouville(lift::truncated(p, order + 1));
  const Jet zero = gamma(0, 0, 0).truncated(order - 1).constant_like(0.0);
  Tensor<Jet> out({m, m, m}, zero);
  for (int a = 0; a < m; ++a) {
    const PhaseField da = coordinate_field(a, m, p[0], order + 1);
    const PhaseField xi_da = phase_bracket(xi, da);
    for (int b = 0; b < m; ++b) {
      const PhaseField db = coordinate_field(b, m, p[0], order + 1);
      const PhaseField xi_db = phase_bracket(xi, db);
      PhaseField nab;
      for (int c = 0; c < m; ++c) nab.push_back(gamma(c, a, b));
      const PhaseField t1 = phase_bracket(xi, nab);
      const PhaseField t2 = covariant_derivative(gamma, xi_da, db);
      const PhaseField t3 = covariant_derivative(gamma, da, xi_db);
      for (int c = 0; c < m; ++c) {
        out(c, a, b) = t1[idx(c)].truncated(order - 1) - t2[idx(c)].truncated(order - 1) -
                       t3[idx(c)].truncated(order - 1);
      }
    }
  }
  return out;
}

Tensor<Jet> lifted_connection_jets(const PhaseGeometry& g, LiftedConnection which, CurvatureSign sign) {
  switch (which) {
    case LiftedConnection::Complete: return complete_connection_jets(g);
    case LiftedConnection::Bnw: return bnw_connection_jets(g, sign);
    case LiftedConnection::Symplectified: {
      const Tensor<Jet> c = complete_connection_jets(g);
      return symplectify_jets(c, n_tensor_jets(c));
    }
  }
  throw std::logic_error("unknown lifted connection");
}

Tensor<Jet> riemann_extension_at(const ManifoldSpec& m, const PhasePoint& pt, int order) {
  return riemann_extension_jets(phase_geometry(m, pt, order + 1));
}

ConnectionValue complete_connection_at(const ManifoldSpec& m, const PhasePoint& pt) {
  return to_connection(complete_connection_jets(phase_geometry(m, pt, 2)), "complete@" + m.name);
}

ConnectionValue bnw_connection_at(const ManifoldSpec& m, const PhasePoint& pt, CurvatureSign sign) {
  return to_connection(bnw_connection_jets(phase_geometry(m, pt, 2), sign), "bnw@" + m.name);
}

Tensor<double> nabla_omega_at(const ConnectionValue& gamma) {
  return values_of(nabla_omega_jets(as_jets(gamma.coeffs)));
}

NTensorValue n_tensor_at(const ManifoldSpec& m, const PhasePoint& pt) {
  const Tensor<Jet> c = complete_connection_jets(phase_geometry(m, pt, 2));
  return {2 * m.dim, values_of(n_tensor_jets(c))};
}

ConnectionValue symplectify_at(const ConnectionValue& gamma, const NTensorValue& n) {
  if (gamma.dim != n.dim) throw ShapeError("symplectify: connection and N differ in dimension");
  return to_connection(symplectify_jets(as_jets(gamma.coeffs), as_jets(n.coeffs)), "symplectified:" + gamma.label);
}

CurvatureValue phase_curvature_at(const ManifoldSpec& m, const PhasePoint& pt, LiftedConnection which,
                                  CurvatureSign sign) {
  const Tensor<Jet> gamma = lifted_connection_jets(phase_geometry(m, pt, 3), which, sign);
  return {2 * m.dim, values_of(riemann_jets(gamma)), std::string("curvature:") + to_string(which) + "@" + m.name};
}

}  // namespace lift

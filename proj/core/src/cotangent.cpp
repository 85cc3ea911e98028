#include "lift/cotangent.hpp"

#include <algorithm>

#include "lift/errors.hpp"

namespace lift {
namespace {

std::size_t idx(int i) { return static_cast<std::size_t>(i); }

bool same_point(const PhasePoint& a, const PhasePoint& b) { return a.q.q == b.q.q && a.p == b.p; }

void require_phase_dim(std::span<const Jet> v, int n) {
  if (static_cast<int>(v.size()) != 2 * n) {
    throw ShapeError("phase vector has " + std::to_string(v.size()) + " components, expected " + std::to_string(2 * n));
  }
}

// Chart jets of order `order` seeded at pt, without evaluating any geometry.
std::vector<Jet> seed_chart(const PhasePoint& pt, int order) {
  const auto chart = pt.chart();
  return seed_coordinates(chart, static_cast<int>(chart.size()), order);
}

PhaseVector to_vector(std::span<const Jet> v, const PhasePoint& pt) { return {values_of(v), pt}; }

}  // namespace

std::vector<double> PhasePoint::chart() const {
  std::vector<double> c = q.q;
  c.insert(c.end(), p.begin(), p.end());
  return c;
}

std::vector<Jet> PhaseGeometry::chart() const {
  std::vector<Jet> c(base.coords.begin(), base.coords.end());
  c.insert(c.end(), momenta.begin(), momenta.end());
  return c;
}

PhaseGeometry phase_geometry(const ManifoldSpec& m, const PhasePoint& pt, int order) {
  if (pt.dim() != m.dim || static_cast<int>(pt.q.q.size()) != m.dim) {
    throw ShapeError("phase point dimension does not match manifold '" + m.name + "'");
  }
  const auto seeds = seed_chart(pt, order);
  PhaseGeometry g;
  g.dim = m.dim;
  g.order = order;
  g.base = base_geometry(m, std::span<const Jet>(seeds).first(idx(m.dim)));
  g.momenta.assign(seeds.begin() + m.dim, seeds.end());
  return g;
}

Tensor<double> omega_matrix(int n) {
  Tensor<double> w({2 * n, 2 * n}, 0.0);
  for (int i = 0; i < n; ++i) {
    w(n + i, i) = 1.0;
    w(i, n + i) = -1.0;
  }
  return w;
}

Tensor<double> omega_inverse_matrix(int n) {
  Tensor<double> w = omega_matrix(n);
  for (double& x : w.flat()) x = -x;
  return w;
}

PhaseField truncated(std::span<const Jet> v, int order) {
  PhaseField out;
  out.reserve(v.size());
  for (const auto& j : v) out.push_back(j.truncated(order));
  return out;
}

int min_order(std::span<const Jet> v) {
  int k = kMaxJetOrder;
  for (const auto& j : v) k = std::min(k, j.order());
  return k;
}

Jet tautological(std::span<const Jet> x_field, std::span<const Jet> p) {
  if (x_field.size() != p.size()) throw ShapeError("tautological function: dimension mismatch");
  const int order = std::min(min_order(x_field), min_order(p));
  Jet s = p[0].truncated(order).constant_like(0.0);
  for (std::size_t k = 0; k < p.size(); ++k) s += p[k].truncated(order) * x_field[k].truncated(order);
  return s;
}

PhaseField vertical_lift_oneform(std::span<const Jet> alpha) {
  PhaseField v;
  v.reserve(2 * alpha.size());
  for (std::size_t i = 0; i < alpha.size(); ++i) v.push_back(alpha[i].constant_like(0.0));
  v.insert(v.end(), alpha.begin(), alpha.end());
  const int order = min_order(v);
  return truncated(v, order);
}

PhaseField vertical_lift_tensor(std::span<const Jet> t, std::span<const Jet> p) {
  const int n = static_cast<int>(p.size());
  if (static_cast<int>(t.size()) != n * n) throw ShapeError("vertical lift of a (1,1)-tensor: dimension mismatch");
  const int order = std::min(min_order(t), min_order(p));
  const Jet zero = p[0].truncated(order).constant_like(0.0);
  PhaseField v(idx(2 * n), zero);
  for (int m = 0; m < n; ++m) {
    for (int k = 0; k < n; ++k) v[idx(n + m)] += p[idx(k)].truncated(order) * t[idx(k * n + m)].truncated(order);
  }
  return v;
}

PhaseField complete_lift(std::span<const Jet> x, std::span<const Jet> p) {
  const int n = static_cast<int>(p.size());
  if (static_cast<int>(x.size()) != n) throw ShapeError("complete lift: dimension mismatch");
  const int order = std::min(min_order(x) - 1, min_order(p));
  PhaseField v = truncated(x, order);
  for (int i = 0; i < n; ++i) {
    Jet s = v[0].constant_like(0.0);
    for (int k = 0; k < n; ++k) s -= p[idx(k)].truncated(order) * x[idx(k)].derivative(i).truncated(order);
    v.push_back(s);
  }
  return v;
}

PhaseField horizontal_lift(std::span<const Jet> x, std::span<const Jet> p, const Tensor<Jet>& gamma) {
  const int n = static_cast<int>(p.size());
  if (static_cast<int>(x.size()) != n || gamma.extent(0) != n) throw ShapeError("horizontal lift: dimension mismatch");
  const int order = std::min({min_order(x), min_order(p), gamma(0, 0, 0).order()});
  PhaseField v = truncated(x, order);
  for (int i = 0; i < n; ++i) {
    Jet s = v[0].constant_like(0.0);
    for (int k = 0; k < n; ++k) {
      for (int m = 0; m < n; ++m) {
        s += p[idx(k)].truncated(order) * gamma(k, i, m).truncated(order) * x[idx(m)].truncated(order);
      }
    }
    v.push_back(s);
  }
  return v;
}

PhaseField liouville(std::span<const Jet> p) {
  PhaseField v;
  for (const auto& pk : p) v.push_back(pk.constant_like(0.0));
  v.insert(v.end(), p.begin(), p.end());
  return v;
}

std::vector<Jet> connection_map(std::span<const Jet> v, std::span<const Jet> p, const Tensor<Jet>& gamma) {
  const int n = static_cast<int>(p.size());
  require_phase_dim(v, n);
  const int order = std::min({min_order(v), min_order(p), gamma(0, 0, 0).order()});
  std::vector<Jet> out;
  for (int i = 0; i < n; ++i) {
    Jet s = v[idx(n + i)].truncated(order);
    for (int k = 0; k < n; ++k) {
      for (int m = 0; m < n; ++m) {
        s -= p[idx(k)].truncated(order) * gamma(k, m, i).truncated(order) * v[idx(m)].truncated(order);
      }
    }
    out.push_back(s);
  }
  return out;
}

Jet directional_derivative(std::span<const Jet> v, const Jet& f) {
  const int order = std::min(min_order(v), f.order() - 1);
  Jet s = f.derivative(0).truncated(order).constant_like(0.0);
  for (std::size_t a = 0; a < v.size(); ++a) {
    s += v[a].truncated(order) * f.derivative(static_cast<int>(a)).truncated(order);
  }
  return s;
}

PhaseField phase_bracket(std::span<const Jet> v, std::span<const Jet> w) {
  if (v.size() != w.size()) throw ShapeError("bracket of fields of different dimension");
  const int order = std::min(min_order(v), min_order(w)) - 1;
  PhaseField out;
  for (std::size_t c = 0; c < v.size(); ++c) {
    out.push_back(directional_derivative(v, w[c]).truncated(order) - directional_derivative(w, v[c]).truncated(order));
  }
  return out;
}

Jet omega_pair(std::span<const Jet> v, std::span<const Jet> w) {
  if (v.size() != w.size() || v.size() % 2) throw ShapeError("omega: dimension mismatch");
  const int n = static_cast<int>(v.size() / 2);
  const int order = std::min(min_order(v), min_order(w));
  // omega(V, W) = sum_i V^{p_i} W^{x^i} - V^{x^i} W^{p_i}
  Jet s = v[0].truncated(order).constant_like(0.0);
  for (int i = 0; i < n; ++i) {
    s += v[idx(n + i)].truncated(order) * w[idx(i)].truncated(order);
    s -= v[idx(i)].truncated(order) * w[idx(n + i)].truncated(order);
  }
  return s;
}

double tautological_at(const FieldSpec& x, const PhasePoint& pt) {
  require_role(x, FieldRole::Vector);
  const auto chart = seed_chart(pt, 0);
  const auto n = idx(pt.dim());
  const std::span<const Jet> c(chart);
  return tautological(field_jets(x, c.first(n)), c.subspan(n)).value();
}

std::vector<double> theta_at(const PhasePoint& pt) {
  // theta = p_i dx^i
  std::vector<double> theta(pt.p.begin(), pt.p.end());
  theta.resize(2 * pt.p.size(), 0.0);
  return theta;
}

Tensor<double> omega_at(const PhasePoint& pt) { return omega_matrix(pt.dim()); }

PhaseVector vlift_oneform_at(const FieldSpec& alpha, const PhasePoint& pt) {
  require_role(alpha, FieldRole::OneForm);
  const auto chart = seed_chart(pt, 0);
  return to_vector(vertical_lift_oneform(field_jets(alpha, std::span<const Jet>(chart).first(idx(pt.dim())))), pt);
}

PhaseVector vlift_tensor_at(const FieldSpec& t, const PhasePoint& pt) {
  require_role(t, FieldRole::Tensor11);
  const auto chart = seed_chart(pt, 0);
  const auto n = idx(pt.dim());
  const std::span<const Jet> c(chart);
  return to_vector(vertical_lift_tensor(field_jets(t, c.first(n)), c.subspan(n)), pt);
}

PhaseVector complete_lift_at(const FieldSpec& x, const PhasePoint& pt) {
  require_role(x, FieldRole::Vector);
  const auto chart = seed_chart(pt, 1);
  const auto n = idx(pt.dim());
  const std::span<const Jet> c(chart);
  return to_vector(complete_lift(field_jets(x, c.first(n)), c.subspan(n)), pt);
}

PhaseVector horizontal_lift_at(const ManifoldSpec& m, const FieldSpec& x, const PhasePoint& pt) {
  require_role(x, FieldRole::Vector);
  const auto g = phase_geometry(m, pt, 1);
  return to_vector(horizontal_lift(field_jets(x, g.x()), g.p(), g.base.christoffel), pt);
}

PhaseVector liouville_at(const PhasePoint& pt) {
  std::vector<double> v(pt.p.size(), 0.0);
  v.insert(v.end(), pt.p.begin(), pt.p.end());
  return {v, pt};
}

std::vector<double> connection_map_at(const ManifoldSpec& m, const PhaseVector& v, const PhasePoint& pt) {
  if (!same_point(v.base, pt)) throw ShapeError("connection map: vector is based at a different point");
  const auto g = phase_geometry(m, pt, 1);
  std::vector<Jet> comps;
  for (double c : v.components) comps.push_back(g.momenta[0].truncated(0).constant_like(c));
  const auto gamma = g.base.christoffel.map([](const Jet& j) { return j.truncated(0); });
  return values_of(connection_map(comps, truncated(g.p(), 0), gamma));
}

PhaseVector phase_bracket_at(const PhaseFieldFn& v, const PhaseFieldFn& w, const PhasePoint& pt, int seed_order) {
  const auto chart = seed_chart(pt, seed_order);
  const PhaseField fv = v(chart);
  const PhaseField fw = w(chart);
  require_phase_dim(fv, pt.dim());
  require_phase_dim(fw, pt.dim());
  return to_vector(phase_bracket(fv, fw), pt);
}

}  // namespace lift

#include "lift/base_geometry.hpp"

#include <cmath>
#include <sstream>

#include "lift/errors.hpp"

namespace lift {
namespace {

std::string format_point(std::span<const double> q) {
  std::ostringstream os;
  os.precision(17);
  os << '(';
  for (std::size_t i = 0; i < q.size(); ++i) os << (i ? ", " : "") << q[i];
  os << ')';
  return os.str();
}

// Cholesky on the values; false when not positive definite.
bool positive_definite(const Tensor<double>& a) {
  const int n = a.extent(0);
  std::vector<double> l(static_cast<std::size_t>(n * n), 0.0);
  auto at = [&](int i, int j) -> double& { return l[static_cast<std::size_t>(i * n + j)]; };
  for (int j = 0; j < n; ++j) {
    double d = a(j, j);
    for (int k = 0; k < j; ++k) d -= at(j, k) * at(j, k);
    if (!(d > 0.0) || !std::isfinite(d)) return false;
    at(j, j) = std::sqrt(d);
    for (int i = j + 1; i < n; ++i) {
      double s = a(i, j);
      for (int k = 0; k < j; ++k) s -= at(i, k) * at(j, k);
      at(i, j) = s / at(j, j);
    }
  }
  return true;
}

}  // namespace

ManifoldSpec make_manifold(std::string name, std::vector<std::string> coords,
                           const std::map<std::pair<int, int>, std::string>& upper, std::vector<Interval> domain,
                           Interval fiber, double fiber_exclusion) {
  const int n = static_cast<int>(coords.size());
  if (n < 1) throw ShapeError("manifold '" + name + "' needs at least one coordinate");
  if (static_cast<int>(domain.size()) != n) throw ShapeError("manifold '" + name + "': one interval per coordinate");
  for (std::size_t i = 0; i < coords.size(); ++i) {
    for (std::size_t j = i + 1; j < coords.size(); ++j) {
      if (coords[i] == coords[j]) throw ShapeError("manifold '" + name + "': duplicate coordinate " + coords[i]);
    }
    if (!(domain[i].lo < domain[i].hi)) {
      throw ShapeError("manifold '" + name + "': empty domain for " + coords[i]);
    }
  }
  if (!(fiber.lo < fiber.hi)) throw ShapeError("manifold '" + name + "': empty fiber interval");
  if (fiber_exclusion < 0.0) throw ShapeError("manifold '" + name + "': negative fiber exclusion radius");

  ManifoldSpec m;
  m.name = std::move(name);
  m.dim = n;
  m.coords = std::move(coords);
  m.domain = std::move(domain);
  m.fiber = fiber;
  m.fiber_exclusion = fiber_exclusion;
  m.metric.assign(static_cast<std::size_t>(n * n), Expr::constant(0.0, m.coords));
  for (const auto& [ij, text] : upper) {
    const auto [i, j] = ij;
    if (i < 0 || j < 0 || i >= n || j >= n || i > j) {
      throw ShapeError("manifold '" + m.name + "': metric entry (" + std::to_string(i) + "," + std::to_string(j) +
                       ") is not in the upper triangle");
    }
    Expr e = Expr::parse(text, m.coords);
    m.metric[static_cast<std::size_t>(i * n + j)] = e;
    m.metric[static_cast<std::size_t>(j * n + i)] = e;
  }
  for (int i = 0; i < n; ++i) {
    if (!upper.count({i, i})) {
      throw ShapeError("manifold '" + m.name + "': missing diagonal metric entry for " + m.coords[static_cast<std::size_t>(i)]);
    }
  }
  return m;
}

bool in_domain(const ManifoldSpec& m, const BasePoint& q) {
  if (static_cast<int>(q.q.size()) != m.dim) return false;
  for (int i = 0; i < m.dim; ++i) {
    const auto& box = m.domain[static_cast<std::size_t>(i)];
    if (q.q[static_cast<std::size_t>(i)] < box.lo || q.q[static_cast<std::size_t>(i)] > box.hi) return false;
  }
  return true;
}

const char* to_string(FieldRole role) {
  switch (role) {
    case FieldRole::Scalar: return "scalar";
    case FieldRole::Vector: return "vector field";
    case FieldRole::OneForm: return "1-form";
    case FieldRole::Tensor11: return "(1,1)-tensor";
  }
  return "?";
}

FieldSpec make_field(const ManifoldSpec& m, FieldRole role, std::string label,
                     const std::vector<std::string>& components) {
  const std::size_t n = static_cast<std::size_t>(m.dim);
  const std::size_t expected = role == FieldRole::Scalar ? 1 : role == FieldRole::Tensor11 ? n * n : n;
  if (components.size() != expected) {
    throw ShapeError(std::string(to_string(role)) + " '" + label + "' needs " + std::to_string(expected) +
                     " components, got " + std::to_string(components.size()));
  }
  FieldSpec f;
  f.role = role;
  f.label = std::move(label);
  for (const auto& text : components) f.components.push_back(Expr::parse(text, m.coords));
  return f;
}

void require_role(const FieldSpec& f, FieldRole role) {
  if (f.role != role) {
    throw ShapeError("expected a " + std::string(to_string(role)) + ", got " + to_string(f.role) + " '" + f.label + "'");
  }
}

std::vector<Jet> seed_coordinates(std::span<const double> values, int vars, int order) {
  std::vector<Jet> out;
  out.reserve(values.size());
  for (std::size_t i = 0; i < values.size(); ++i) {
    out.push_back(Jet::variable(static_cast<int>(i), values[i], vars, order));
  }
  return out;
}

Tensor<Jet> metric_jets(const ManifoldSpec& m, std::span<const Jet> coords) {
  if (static_cast<int>(coords.size()) != m.dim) throw ShapeError("coordinate count does not match manifold dimension");
  const int n = m.dim;
  Tensor<Jet> g({n, n}, Jet{});
  for (int i = 0; i < n; ++i) {
    for (int j = i; j < n; ++j) {
      g(i, j) = m.metric_component(i, j).eval(coords);
      if (j != i) g(j, i) = g(i, j);
    }
  }
  if (!positive_definite(values_of(g))) {
    throw DomainError("metric of '" + m.name + "' is not positive definite at q = " +
                      format_point(values_of(coords)));
  }
  return g;
}

Tensor<Jet> inverse_jets(const Tensor<Jet>& a) {
  const int n = a.extent(0);
  Tensor<Jet> work = a;
  const Jet& proto = a(0, 0);
  Tensor<Jet> inv({n, n}, proto.constant_like(0.0));
  for (int i = 0; i < n; ++i) inv(i, i) = proto.constant_like(1.0);
  for (int col = 0; col < n; ++col) {
    int pivot = col;
    for (int r = col + 1; r < n; ++r) {
      if (std::abs(work(r, col).value()) > std::abs(work(pivot, col).value())) pivot = r;
    }
    if (work(pivot, col).value() == 0.0) throw DomainError("singular matrix");
    if (pivot != col) {
      for (int c = 0; c < n; ++c) {
        std::swap(work(pivot, c), work(col, c));
        std::swap(inv(pivot, c), inv(col, c));
      }
    }
    const Jet scale = 1.0 / work(col, col);
    for (int c = 0; c < n; ++c) {
      work(col, c) = work(col, c) * scale;
      inv(col, c) = inv(col, c) * scale;
    }
    for (int r = 0; r < n; ++r) {
      if (r == col) continue;
      const Jet f = work(r, col);
      for (int c = 0; c < n; ++c) {
        work(r, c) -= f * work(col, c);
        inv(r, c) -= f * inv(col, c);
      }
    }
  }
  return inv;
}

Tensor<Jet> christoffel_jets(const Tensor<Jet>& metric, const Tensor<Jet>& inverse) {
  const int n = metric.extent(0);
  const int order = metric(0, 0).order() - 1;
  // dg(l, i, j) = d_l g_ij
  Tensor<Jet> dg({n, n, n}, Jet{});
  for (int l = 0; l < n; ++l) {
    for (int i = 0; i < n; ++i) {
      for (int j = 0; j < n; ++j) dg(l, i, j) = metric(i, j).derivative(l);
    }
  }
  const Jet zero = dg(0, 0, 0).constant_like(0.0);
  Tensor<Jet> gamma({n, n, n}, zero);
  for (int k = 0; k < n; ++k) {
    for (int i = 0; i < n; ++i) {
      for (int j = i; j < n; ++j) {
        Jet s = zero;
        for (int l = 0; l < n; ++l) {
          s += inverse(k, l).truncated(order) * (dg(i, l, j) + dg(j, l, i) - dg(l, i, j));
        }
        s *= 0.5;
        gamma(k, i, j) = s;
        gamma(k, j, i) = s;
      }
    }
  }
  return gamma;
}

Tensor<Jet> riemann_jets(const Tensor<Jet>& gamma) {
  const int n = gamma.extent(0);
  const int order = gamma(0, 0, 0).order() - 1;
  Tensor<Jet> low = gamma.map([&](const Jet& j) { return j.truncated(order); });
  const Jet zero = low(0, 0, 0).constant_like(0.0);
  Tensor<Jet> r({n, n, n, n}, zero);
  for (int k = 0; k < n; ++k) {
    for (int l = 0; l < n; ++l) {
      for (int i = 0; i < n; ++i) {
        for (int j = i + 1; j < n; ++j) {
          Jet s = gamma(k, j, l).derivative(i) - gamma(k, i, l).derivative(j);
          for (int m = 0; m < n; ++m) s += low(k, i, m) * low(m, j, l) - low(k, j, m) * low(m, i, l);
          r(k, l, i, j) = s;
          r(k, l, j, i) = -s;
        }
      }
    }
  }
  return r;
}

std::vector<Jet> field_jets(const FieldSpec& f, std::span<const Jet> coords) {
  std::vector<Jet> out;
  out.reserve(f.components.size());
  for (const auto& e : f.components) out.push_back(e.eval(coords));
  return out;
}

Tensor<Jet> covariant_gradient_jets(std::span<const Jet> x, const Tensor<Jet>& gamma) {
  const int n = static_cast<int>(x.size());
  const int order = gamma(0, 0, 0).order();
  Tensor<Jet> out({n, n}, Jet{});
  for (int k = 0; k < n; ++k) {
    for (int i = 0; i < n; ++i) {
      Jet s = x[static_cast<std::size_t>(k)].derivative(i).truncated(order);
      for (int m = 0; m < n; ++m) s += gamma(k, i, m) * x[static_cast<std::size_t>(m)].truncated(order);
      out(k, i) = s;
    }
  }
  return out;
}

std::vector<Jet> covariant_derivative_oneform_jets(std::span<const Jet> alpha, std::span<const Jet> x,
                                                   const Tensor<Jet>& gamma) {
  const int n = static_cast<int>(alpha.size());
  const int order = gamma(0, 0, 0).order();
  std::vector<Jet> out;
  for (int i = 0; i < n; ++i) {
    Jet s = gamma(0, 0, 0).constant_like(0.0);
    for (int m = 0; m < n; ++m) {
      Jet inner = alpha[static_cast<std::size_t>(i)].derivative(m).truncated(order);
      for (int k = 0; k < n; ++k) inner -= gamma(k, m, i) * alpha[static_cast<std::size_t>(k)].truncated(order);
      s += x[static_cast<std::size_t>(m)].truncated(order) * inner;
    }
    out.push_back(s);
  }
  return out;
}

BaseGeometry base_geometry(const ManifoldSpec& m, std::span<const Jet> coords) {
  BaseGeometry b;
  b.dim = m.dim;
  b.order = coords.empty() ? 0 : coords.front().order();
  if (b.order < 1) throw JetError("base geometry needs jets of order >= 1");
  b.coords.assign(coords.begin(), coords.end());
  b.metric = metric_jets(m, coords);
  b.inverse = inverse_jets(b.metric);
  b.christoffel = christoffel_jets(b.metric, b.inverse);
  if (b.order >= 2) b.riemann = riemann_jets(b.christoffel);
  return b;
}

Tensor<Jet> metric_at(const ManifoldSpec& m, const BasePoint& q, int order) {
  return metric_jets(m, seed_coordinates(q.q, m.dim, order));
}

ConnectionValue christoffel_at(const ManifoldSpec& m, const BasePoint& q) {
  const auto coords = seed_coordinates(q.q, m.dim, 1);
  const auto g = metric_jets(m, coords);
  return {m.dim, values_of(christoffel_jets(g, inverse_jets(g))), "levi-civita@" + m.name};
}

CurvatureValue riemann_at(const ManifoldSpec& m, const BasePoint& q) {
  const auto b = base_geometry(m, seed_coordinates(q.q, m.dim, 2));
  return {m.dim, values_of(b.riemann), "riemann@" + m.name};
}

double scalar_curvature_at(const ManifoldSpec& m, const BasePoint& q) {
  const auto b = base_geometry(m, seed_coordinates(q.q, m.dim, 2));
  double s = 0.0;
  for (int i = 0; i < m.dim; ++i) {
    for (int l = 0; l < m.dim; ++l) {
      for (int j = 0; j < m.dim; ++j) s += b.inverse(l, j).value() * b.riemann(i, l, i, j).value();
    }
  }
  return s;
}

Tensor<double> grad_vector_field_at(const ManifoldSpec& m, const FieldSpec& x, const BasePoint& q) {
  require_role(x, FieldRole::Vector);
  const auto b = base_geometry(m, seed_coordinates(q.q, m.dim, 1));
  return values_of(covariant_gradient_jets(field_jets(x, b.coords), b.christoffel));
}

std::vector<double> covariant_derivative_oneform_at(const ManifoldSpec& m, const FieldSpec& alpha,
                                                    const FieldSpec& x, const BasePoint& q) {
  require_role(alpha, FieldRole::OneForm);
  require_role(x, FieldRole::Vector);
  const auto b = base_geometry(m, seed_coordinates(q.q, m.dim, 1));
  return values_of(covariant_derivative_oneform_jets(field_jets(alpha, b.coords), field_jets(x, b.coords),
                                                     b.christoffel));
}

Tensor<double> values_of(const Tensor<Jet>& t) {
  return t.map([](const Jet& j) { return j.value(); });
}

std::vector<double> values_of(std::span<const Jet> v) {
  std::vector<double> out;
  out.reserve(v.size());
  for (const auto& j : v) out.push_back(j.value());
  return out;
}

}  // namespace lift

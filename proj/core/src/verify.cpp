#include "lift/verify.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <functional>
#include <limits>
#include <map>
#include <mutex>
#include <sstream>
#include <thread>

#include "lift/catalog.hpp"
#include "lift/errors.hpp"

namespace lift {
namespace {

std::size_t idx(int i) { return static_cast<std::size_t>(i); }

// ---------------------------------------------------------------------------
// Counter-based sampling.

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

std::uint64_t fnv1a(std::string_view s) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : s) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

double unit_interval(std::uint64_t key) { return static_cast<double>(key >> 11) * 0x1.0p-53; }

double draw(std::uint64_t stream, int coordinate, const Interval& box) {
  const double u = unit_interval(splitmix64(stream ^ splitmix64(static_cast<std::uint64_t>(coordinate) + 1)));
  return box.lo + (box.hi - box.lo) * u;
}

std::string format_point(std::span<const double> v) {
  std::ostringstream os;
  os.precision(17);
  os << '(';
  for (std::size_t i = 0; i < v.size(); ++i) os << (i ? ", " : "") << v[i];
  os << ')';
  return os.str();
}

// ---------------------------------------------------------------------------
// Parallel sample loop with ordered reduction.

struct Item {
  std::string property;
  std::string anchor;
  Bound bound = Bound::AtMost;
  double threshold = 0.0;
};

using Evaluator = std::function<std::vector<double>(const PhasePoint&)>;

int worker_count(const SampleConfig& cfg) {
  int t = cfg.threads > 0 ? cfg.threads : static_cast<int>(std::thread::hardware_concurrency());
  return std::clamp(t, 1, cfg.samples);
}

std::vector<PropertyResult> run_items(const ManifoldSpec& m, const SampleConfig& cfg, const std::vector<Item>& items,
                                      const Evaluator& eval) {
  validate(cfg);
  const auto n_samples = idx(cfg.samples);
  std::vector<PhasePoint> points(n_samples);
  std::vector<std::vector<double>> residuals(n_samples);
  std::vector<std::exception_ptr> errors(n_samples);

  std::atomic<int> next{0};
  auto work = [&] {
    for (int i = next++; i < cfg.samples; i = next++) {
      try {
        points[idx(i)] = sample_point(m, cfg.seed, i);
        residuals[idx(i)] = eval(points[idx(i)]);
      } catch (...) {
        errors[idx(i)] = std::current_exception();
      }
    }
  };
  const int workers = worker_count(cfg);
  if (workers == 1) {
    work();
  } else {
    std::vector<std::jthread> pool;
    for (int w = 0; w < workers; ++w) pool.emplace_back(work);
  }
  for (const auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }

  std::vector<PropertyResult> out;
  for (std::size_t k = 0; k < items.size(); ++k) {
    PropertyResult r;
    r.manifold = m.name;
    r.property = items[k].property;
    r.anchor = items[k].anchor;
    r.bound = items[k].bound;
    r.threshold = items[k].threshold;
    r.samples = cfg.samples;
    double best = -1.0;
    for (std::size_t i = 0; i < n_samples; ++i) {
      double v = residuals[i].at(k);
      if (std::isnan(v)) v = std::numeric_limits<double>::infinity();
      if (v > best) {
        best = v;
        r.argmax_point = points[i].chart();
      }
    }
    r.max_residual = best;
    r.pass = r.bound == Bound::AtMost ? best <= r.threshold : best >= r.threshold;
    out.push_back(std::move(r));
  }
  return out;
}

double max_abs(std::span<const double> v) {
  double r = 0.0;
  for (double x : v) r = std::max(r, std::abs(x));
  return r;
}

double max_abs_diff(std::span<const double> a, std::span<const double> b) {
  if (a.size() != b.size()) throw ShapeError("residual of values with different sizes");
  double r = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) r = std::max(r, std::abs(a[i] - b[i]));
  return r;
}

// ---------------------------------------------------------------------------
// Property residuals on pointwise coefficient tables.

double lift_residual(const Tensor<double>& gamma, const Tensor<double>& base, int n) {
  double r = 0.0;
  for (int c = 0; c < n; ++c) {
    for (int a = 0; a < 2 * n; ++a) {
      for (int b = 0; b < 2 * n; ++b) {
        const double expected = (a < n && b < n) ? base(c, a, b) : 0.0;
        r = std::max(r, std::abs(gamma(c, a, b) - expected));
      }
    }
  }
  return r;
}

double torsion_residual(const Tensor<double>& gamma) {
  const int m = gamma.extent(0);
  double r = 0.0;
  for (int c = 0; c < m; ++c) {
    for (int a = 0; a < m; ++a) {
      for (int b = 0; b < m; ++b) r = std::max(r, std::abs(gamma(c, a, b) - gamma(c, b, a)));
    }
  }
  return r;
}

double symplectic_residual(const Tensor<double>& gamma) {
  ConnectionValue v{gamma.extent(0), gamma, ""};
  return max_abs(nabla_omega_at(v).flat());
}

// sum over cyclic (X1, X2, X3) of omega(X1, R(Y,X2)X3 + R(Y,X3)X2), all basis quadruples.
double cyclic_curvature_residual(const Tensor<double>& r) {
  const int m = r.extent(0);
  const Tensor<double> w = omega_matrix(m / 2);
  auto term = [&](int y, int x1, int x2, int x3) {
    double s = 0.0;
    for (int k = 0; k < m; ++k) {
      if (w(x1, k) != 0.0) s += w(x1, k) * (r(k, x3, y, x2) + r(k, x2, y, x3));
    }
    return s;
  };
  double res = 0.0;
  for (int y = 0; y < m; ++y) {
    for (int a = 0; a < m; ++a) {
      for (int b = 0; b < m; ++b) {
        for (int c = 0; c < m; ++c) {
          res = std::max(res, std::abs(term(y, a, b, c) + term(y, b, c, a) + term(y, c, a, b)));
        }
      }
    }
  }
  return res;
}

// Base-base -> fiber coefficients scale linearly in p, all others are p-independent.
double degree_residual(const Tensor<double>& at_p, const Tensor<double>& at_2p, int n) {
  const int m = 2 * n;
  double r = 0.0;
  for (int c = 0; c < m; ++c) {
    for (int a = 0; a < m; ++a) {
      for (int b = 0; b < m; ++b) {
        const double scale = (c >= n && a < n && b < n) ? 2.0 : 1.0;
        r = std::max(r, std::abs(at_2p(c, a, b) - scale * at_p(c, a, b)));
      }
    }
  }
  return r;
}

const std::vector<LiftedConnection> kConnections = {LiftedConnection::Complete, LiftedConnection::Bnw,
                                                    LiftedConnection::Symplectified};

struct PropertyInfo {
  std::string id;
  std::string anchor;
  bool curvature_based = false;
  bool needs_third_order = false;
  std::vector<LiftedConnection> applies_to;
};

const std::vector<PropertyInfo>& property_table() {
  static const std::vector<PropertyInfo> table = {
      {"lift", "Gamma^x_{x x} = base Gamma, Gamma^x_{p .} = Gamma^x_{. p} = 0", false, false, kConnections},
      {"torsion", "Gamma^c_ab = Gamma^c_ba", false, false, kConnections},
      {"symplectic", "nabla omega = 0", false, false, {LiftedConnection::Bnw, LiftedConnection::Symplectified}},
      {"homogeneous", "[xi, nabla_X Y] - nabla_[xi,X] Y - nabla_X [xi,Y] = 0", false, true, kConnections},
      {"bnw-curv", "omega(X1, R(Y,X2)X3 + R(Y,X3)X2) + cyclic(X1,X2,X3) = 0", true, true,
       {LiftedConnection::Bnw, LiftedConnection::Symplectified}},
      {"degree", "Gamma^p_{x x}(2p) = 2 Gamma^p_{x x}(p), other blocks independent of p", false, false, kConnections},
      {"not-symplectic-complete", "max |nabla^c omega| >= threshold", false, false, {LiftedConnection::Complete}},
  };
  return table;
}

const PropertyInfo& property_info(std::string_view id) {
  for (const auto& p : property_table()) {
    if (p.id == id) return p;
  }
  throw UnknownPropertyError("unknown property id '" + std::string(id) + "'");
}

struct PropertyRequest {
  const PropertyInfo* info;
  LiftedConnection which;
};

std::vector<double> evaluate_properties(const ManifoldSpec& m, const PhasePoint& pt, const SampleConfig& cfg,
                                        const std::vector<PropertyRequest>& requests) {
  bool third = false;
  bool degree = false;
  for (const auto& r : requests) {
    third = third || r.info->needs_third_order;
    degree = degree || r.info->id == "degree";
  }
  const PhaseGeometry g = phase_geometry(m, pt, third ? 3 : 2);
  const Tensor<double> base = values_of(g.base.christoffel);

  std::map<LiftedConnection, Tensor<Jet>> jets;
  std::map<LiftedConnection, Tensor<double>> values;
  std::map<LiftedConnection, Tensor<double>> doubled;
  auto connection = [&](LiftedConnection w) -> const Tensor<Jet>& {
    auto it = jets.find(w);
    if (it == jets.end()) it = jets.emplace(w, lifted_connection_jets(g, w, cfg.curvature_sign)).first;
    return it->second;
  };
  auto value = [&](LiftedConnection w) -> const Tensor<double>& {
    auto it = values.find(w);
    if (it == values.end()) it = values.emplace(w, values_of(connection(w))).first;
    return it->second;
  };
  std::optional<PhaseGeometry> g2p;
  auto value_2p = [&](LiftedConnection w) -> const Tensor<double>& {
    auto it = doubled.find(w);
    if (it == doubled.end()) {
      if (!g2p) {
        PhasePoint q2 = pt;
        for (double& x : q2.p) x *= 2.0;
        g2p = phase_geometry(m, q2, 2);
      }
      it = doubled.emplace(w, values_of(lifted_connection_jets(*g2p, w, cfg.curvature_sign))).first;
    }
    return it->second;
  };

  std::vector<double> out;
  for (const auto& r : requests) {
    const std::string& id = r.info->id;
    if (id == "lift") {
      out.push_back(lift_residual(value(r.which), base, m.dim));
    } else if (id == "torsion") {
      out.push_back(torsion_residual(value(r.which)));
    } else if (id == "symplectic" || id == "not-symplectic-complete") {
      out.push_back(symplectic_residual(value(r.which)));
    } else if (id == "homogeneous") {
      out.push_back(max_abs(values_of(liouville_lie_derivative_jets(connection(r.which), g.p())).flat()));
    } else if (id == "bnw-curv") {
      out.push_back(cyclic_curvature_residual(values_of(riemann_jets(connection(r.which)))));
    } else if (id == "degree") {
      out.push_back(degree_residual(value(r.which), value_2p(r.which), m.dim));
    } else {
      throw UnknownPropertyError("unknown property id '" + id + "'");
    }
  }
  return out;
}

std::vector<PropertyResult> run_properties(const ManifoldSpec& m, const SampleConfig& cfg,
                                           const std::vector<std::string_view>& ids) {
  std::vector<PropertyRequest> requests;
  std::vector<Item> items;
  for (auto id : ids) {
    const PropertyInfo& info = property_info(id);
    std::optional<double> control;
    if (info.id == "not-symplectic-complete") {
      control = not_symplectic_threshold(m.name);
      if (!control) continue;
    }
    for (auto w : info.applies_to) {
      requests.push_back({&info, w});
      Item item;
      item.property = info.id == "not-symplectic-complete" ? info.id : info.id + "/" + to_string(w);
      item.anchor = info.anchor;
      if (control) {
        item.bound = Bound::AtLeast;
        item.threshold = *control;
      } else {
        item.threshold = info.curvature_based ? 10.0 * cfg.tolerance : cfg.tolerance;
      }
      items.push_back(std::move(item));
    }
  }
  if (items.empty()) return {};
  return run_items(m, cfg, items, [&](const PhasePoint& pt) { return evaluate_properties(m, pt, cfg, requests); });
}

// ---------------------------------------------------------------------------
// Base tensor algebra on jets. Vector fields and 1-forms have n components,
// (1,1)-tensors n*n with T^k_m at k*n + m. Results sit at the lowest order
// among their ingredients.

using Field = std::vector<Jet>;

int order_of(const Tensor<Jet>& t) {
  int k = kMaxJetOrder;
  for (const auto& j : t.flat()) k = std::min(k, j.order());
  return k;
}

Jet zero_at(const Jet& proto, int order) { return proto.truncated(order).constant_like(0.0); }

Field lincomb(double a, std::span<const Jet> x, double b, std::span<const Jet> y) {
  if (x.size() != y.size()) throw ShapeError("lincomb: size mismatch");
  const int order = std::min(min_order(x), min_order(y));
  Field out;
  for (std::size_t i = 0; i < x.size(); ++i) out.push_back(x[i].truncated(order) * a + y[i].truncated(order) * b);
  return out;
}

Field scaled(double a, std::span<const Jet> x) {
  Field out;
  for (const auto& j : x) out.push_back(j * a);
  return out;
}

struct BaseAlgebra {
  int n;
  const Tensor<Jet>& gamma;  // Gamma^k_ij
  const Tensor<Jet>& riemann;  // R^k_lij

  Jet pair(std::span<const Jet> alpha, std::span<const Jet> x) const {
    const int order = std::min(min_order(alpha), min_order(x));
    Jet s = zero_at(alpha[0], order);
    for (int k = 0; k < n; ++k) s += alpha[idx(k)].truncated(order) * x[idx(k)].truncated(order);
    return s;
  }

  // (nabla X)^k_i = d_i X^k + Gamma^k_im X^m
  Field grad(std::span<const Jet> x) const {
    const Tensor<Jet> t = covariant_gradient_jets(x, gamma);
    return Field(t.flat().begin(), t.flat().end());
  }

  // nabla_X Y
  Field cov(std::span<const Jet> x, std::span<const Jet> y) const { return apply(grad(y), x); }

  Field cov_form(std::span<const Jet> x, std::span<const Jet> alpha) const {
    return covariant_derivative_oneform_jets(alpha, x, gamma);
  }

  // (nabla_X T)^k_m = X^i (d_i T^k_m + Gamma^k_ij T^j_m - Gamma^j_im T^k_j)
  Field cov_tensor(std::span<const Jet> x, std::span<const Jet> t) const {
    const int order = std::min({min_order(x), min_order(t) - 1, order_of(gamma)});
    Field out;
    for (int k = 0; k < n; ++k) {
      for (int mm = 0; mm < n; ++mm) {
        Jet s = zero_at(t[0], order);
        for (int i = 0; i < n; ++i) {
          Jet d = t[idx(k * n + mm)].derivative(i).truncated(order);
          for (int j = 0; j < n; ++j) {
            d += gamma(k, i, j).truncated(order) * t[idx(j * n + mm)].truncated(order);
            d -= gamma(j, i, mm).truncated(order) * t[idx(k * n + j)].truncated(order);
          }
          s += x[idx(i)].truncated(order) * d;
        }
        out.push_back(s);
      }
    }
    return out;
  }

  // (T o S)^k_m = T^k_j S^j_m
  Field compose(std::span<const Jet> t, std::span<const Jet> s) const {
    const int order = std::min(min_order(t), min_order(s));
    Field out;
    for (int k = 0; k < n; ++k) {
      for (int mm = 0; mm < n; ++mm) {
        Jet acc = zero_at(t[0], order);
        for (int j = 0; j < n; ++j) acc += t[idx(k * n + j)].truncated(order) * s[idx(j * n + mm)].truncated(order);
        out.push_back(acc);
      }
    }
    return out;
  }

  // (alpha o T)_m = alpha_k T^k_m
  Field form_compose(std::span<const Jet> alpha, std::span<const Jet> t) const {
    const int order = std::min(min_order(alpha), min_order(t));
    Field out;
    for (int mm = 0; mm < n; ++mm) {
      Jet acc = zero_at(t[0], order);
      for (int k = 0; k < n; ++k) acc += alpha[idx(k)].truncated(order) * t[idx(k * n + mm)].truncated(order);
      out.push_back(acc);
    }
    return out;
  }

  // T(X)^k = T^k_m X^m
  Field apply(std::span<const Jet> t, std::span<const Jet> x) const {
    const int order = std::min(min_order(t), min_order(x));
    Field out;
    for (int k = 0; k < n; ++k) {
      Jet acc = zero_at(t[0], order);
      for (int mm = 0; mm < n; ++mm) acc += t[idx(k * n + mm)].truncated(order) * x[idx(mm)].truncated(order);
      out.push_back(acc);
    }
    return out;
  }

  // X (x) alpha
  Field outer(std::span<const Jet> x, std::span<const Jet> alpha) const {
    const int order = std::min(min_order(x), min_order(alpha));
    Field out;
    for (int k = 0; k < n; ++k) {
      for (int mm = 0; mm < n; ++mm) out.push_back(x[idx(k)].truncated(order) * alpha[idx(mm)].truncated(order));
    }
    return out;
  }

  // R(X,Y) as the tensor Z -> R(X,Y)Z: R^k_mij X^i Y^j
  Field r_xy(std::span<const Jet> x, std::span<const Jet> y) const {
    const int order = std::min({min_order(x), min_order(y), order_of(riemann)});
    Field out;
    for (int k = 0; k < n; ++k) {
      for (int mm = 0; mm < n; ++mm) {
        Jet acc = zero_at(x[0], order);
        for (int i = 0; i < n; ++i) {
          for (int j = 0; j < n; ++j) {
            acc += riemann(k, mm, i, j).truncated(order) * x[idx(i)].truncated(order) * y[idx(j)].truncated(order);
          }
        }
        out.push_back(acc);
      }
    }
    return out;
  }

  // R(X,.)Y as the tensor Z -> R(X,Z)Y: R^k_lim Y^l X^i
  Field r_x_dot(std::span<const Jet> x, std::span<const Jet> y) const {
    const int order = std::min({min_order(x), min_order(y), order_of(riemann)});
    Field out;
    for (int k = 0; k < n; ++k) {
      for (int mm = 0; mm < n; ++mm) {
        Jet acc = zero_at(x[0], order);
        for (int l = 0; l < n; ++l) {
          for (int i = 0; i < n; ++i) {
            acc += riemann(k, l, i, mm).truncated(order) * y[idx(l)].truncated(order) * x[idx(i)].truncated(order);
          }
        }
        out.push_back(acc);
      }
    }
    return out;
  }
};

// ---------------------------------------------------------------------------
// Lemma suite.

const std::vector<LemmaItem> kLemmaItems = {
    {"tautological-on-section", "X~ o alpha = <alpha, X>"},
    {"vertical-oneform-on-tautological", "(v alpha) X~ = v<alpha, X>"},
    {"vertical-tensor-on-tautological", "(v T) X~ = (T(X))~"},
    {"vertical-tensor-factorized", "v(X (x) alpha) = X~ v alpha"},
    {"complete-lift-projects", "pi' c X = X"},
    {"complete-lift-defining", "omega(V, c X) = dX~(V)"},
    {"complete-lift-on-tautological", "(c X) Y~ = omega(c X, c Y) = [X, Y]~"},
    {"complete-lift-bracket", "[c X, c Y] = c [X, Y]"},
    {"horizontal-decomposition", "h X = c X + v(nabla X)"},
    {"theta-on-horizontal", "<theta, h X> = X~"},
    {"connection-map-vertical", "K(v alpha) = alpha"},
    {"connection-map-horizontal", "K(h X) = 0"},
    {"connection-map-pushforward", "K(alpha' X) = nabla_X alpha"},
    {"complete-vv", "nabla^c_{v alpha} v beta = 0"},
    {"complete-vc", "nabla^c_{v alpha} c X = -v(alpha o nabla X)"},
    {"complete-cv", "nabla^c_{c X} v alpha = v(nabla_X alpha)"},
    {"complete-cc", "nabla^c_{c X} c Y = c(nabla_X Y) + v(nabla X o nabla Y + nabla Y o nabla X - R(X,.)Y - R(Y,.)X)"},
    {"complete-v-tensor", "nabla^c_{v alpha} v T = v(alpha o T)"},
    {"complete-tensor-v", "nabla^c_{v T} v alpha = 0"},
    {"complete-c-tensor", "nabla^c_{c X} v T = v(nabla_X T) - v(nabla X o T)"},
    {"complete-tensor-c", "nabla^c_{v T} c X = -v(T o nabla X)"},
    {"complete-tensor-tensor", "nabla^c_{v T} v S = v(T o S)"},
    {"complete-vh", "nabla^c_{v alpha} h X = 0"},
    {"complete-hv", "nabla^c_{h X} v alpha = v(nabla_X alpha)"},
    {"complete-hh", "nabla^c_{h X} h Y = h(nabla_X Y) - v(R(Y,.)X)"},
    {"complete-hh-symmetric", "nabla^c_{h X} h Y = h(nabla_X Y) - 1/2 v(R(X,Y) + R(X,.)Y + R(Y,.)X)"},
    {"omega-vertical-isotropic", "omega(v alpha, v beta) = omega(v alpha, v T) = omega(v T, v S) = 0"},
    {"omega-vertical-horizontal", "omega(v alpha, h X) = v<alpha, X>"},
    {"omega-tensor-horizontal", "omega(v T, h X) = (T(X))~"},
    {"omega-horizontal-isotropic", "omega(h X, h Y) = 0"},
    {"n-tensor-defining", "omega(N(V,W), U) = (nabla^c_V omega)(W, U)"},
    {"n-tensor-vertical-slots", "N(v alpha, v beta) = N(v alpha, h X) = N(h X, v alpha) = 0"},
    {"n-tensor-horizontal", "N(h X, h Y) = 2 v(R(Y,.)X)"},
};

struct LiftedFields {
  std::vector<Field> x;  // base vector fields
  std::vector<Field> alpha;
  std::vector<Field> t;
  std::vector<Field> cx, hx, va, vt;
};

std::vector<double> evaluate_lemmas(const ManifoldSpec& m, const PhasePoint& pt, const FieldTestSet& fields) {
  const int n = m.dim;
  const PhaseGeometry g = phase_geometry(m, pt, 2);
  const Tensor<Jet>& gamma = g.base.christoffel;
  const BaseAlgebra base{n, gamma, g.base.riemann};
  const auto p = g.p();
  const Tensor<Jet> complete = complete_connection_jets(g);
  const Tensor<Jet> n_tensor = n_tensor_jets(complete);

  LiftedFields f;
  for (const auto& x : fields.vectors) {
    f.x.push_back(field_jets(x, g.x()));
    f.cx.push_back(complete_lift(f.x.back(), p));
    f.hx.push_back(horizontal_lift(f.x.back(), p, gamma));
  }
  for (const auto& a : fields.oneforms) {
    f.alpha.push_back(field_jets(a, g.x()));
    f.va.push_back(vertical_lift_oneform(f.alpha.back()));
  }
  for (const auto& t : fields.tensors) {
    f.t.push_back(field_jets(t, g.x()));
    f.vt.push_back(vertical_lift_tensor(f.t.back(), p));
  }

  auto vals = [](std::span<const Jet> v) { return values_of(v); };
  auto diff = [&](std::span<const Jet> a, std::span<const Jet> b) { return max_abs_diff(vals(a), vals(b)); };
  auto nabla = [&](std::span<const Jet> v, std::span<const Jet> w) { return covariant_derivative(complete, v, w); };
  auto vform = [&](std::span<const Jet> a) { return vertical_lift_oneform(a); };
  auto vtensor = [&](std::span<const Jet> t) { return vertical_lift_tensor(t, p); };
  auto taut = [&](std::span<const Jet> x) { return tautological(x, p); };

  std::map<std::string, double> r;
  auto upd = [&](const char* id, double v) {
    double& slot = r[id];
    slot = std::max(slot, std::isnan(v) ? std::numeric_limits<double>::infinity() : v);
  };
  for (const auto& item : kLemmaItems) r[item.id] = 0.0;

  const std::vector<double> q = pt.q.q;
  const Tensor<double> w = omega_matrix(n);
  const int dim2 = 2 * n;

  for (std::size_t i = 0; i < f.x.size(); ++i) {
    const Field& x = f.x[i];
    const Field& cx = f.cx[i];
    const Field& hx = f.hx[i];
    const Field gx = base.grad(x);
    const Jet xt = taut(x);

    upd("complete-lift-projects", max_abs_diff(std::span<const double>(vals(cx)).first(idx(n)),
                                               std::span<const double>(vals(x)).first(idx(n))));
    {
      // omega(e_a, cX) = sum_b W_ab cX^b against d_a X~
      double res = 0.0;
      for (int a = 0; a < dim2; ++a) {
        double lhs = 0.0;
        for (int b = 0; b < dim2; ++b) lhs += w(a, b) * cx[idx(b)].value();
        res = std::max(res, std::abs(lhs - xt.derivative(a).value()));
      }
      upd("complete-lift-defining", res);
    }
    upd("horizontal-decomposition", diff(hx, lincomb(1.0, cx, 1.0, vtensor(gx))));
    {
      std::vector<double> theta = theta_at(pt);
      double s = 0.0;
      for (int a = 0; a < dim2; ++a) s += theta[idx(a)] * hx[idx(a)].value();
      upd("theta-on-horizontal", std::abs(s - xt.value()));
    }
    upd("connection-map-horizontal", max_abs(vals(connection_map(hx, p, gamma))));

    for (std::size_t j = 0; j < f.x.size(); ++j) {
      const Field& y = f.x[j];
      const Field& cy = f.cx[j];
      const Field& hy = f.hx[j];
      const Field gy = base.grad(y);
      const Field bracket = phase_bracket(x, y);

      const double xy_tilde = taut(bracket).value();
      upd("complete-lift-on-tautological",
          std::max(std::abs(directional_derivative(cx, taut(y)).value() - xy_tilde),
                   std::abs(omega_pair(cx, cy).value() - xy_tilde)));
      upd("complete-lift-bracket", diff(phase_bracket(cx, cy), complete_lift(bracket, p)));

      const Field nxy = base.cov(x, y);
      {
        Field t = lincomb(1.0, base.compose(gx, gy), 1.0, base.compose(gy, gx));
        t = lincomb(1.0, t, -1.0, base.r_x_dot(x, y));
        t = lincomb(1.0, t, -1.0, base.r_x_dot(y, x));
        upd("complete-cc", diff(nabla(cx, cy), lincomb(1.0, complete_lift(nxy, p), 1.0, vtensor(t))));
      }
      const Field h_nxy = horizontal_lift(nxy, p, gamma);
      upd("complete-hh", diff(nabla(hx, hy), lincomb(1.0, h_nxy, -1.0, vtensor(base.r_x_dot(y, x)))));
      {
        Field t = lincomb(1.0, base.r_xy(x, y), 1.0, base.r_x_dot(x, y));
        t = lincomb(1.0, t, 1.0, base.r_x_dot(y, x));
        upd("complete-hh-symmetric", diff(nabla(hx, hy), lincomb(1.0, h_nxy, -0.5, vtensor(t))));
      }
      upd("omega-horizontal-isotropic", std::abs(omega_pair(hx, hy).value()));
      upd("n-tensor-horizontal",
          diff(apply_n_tensor(n_tensor, hx, hy), scaled(2.0, vtensor(base.r_x_dot(y, x)))));
    }

    for (std::size_t k = 0; k < f.alpha.size(); ++k) {
      const Field& a = f.alpha[k];
      const Field& va = f.va[k];
      const double ax = base.pair(a, x).value();

      {
        PhasePoint on_section{pt.q, vals(a)};
        upd("tautological-on-section", std::abs(tautological_at(fields.vectors[i], on_section) - ax));
      }
      upd("vertical-oneform-on-tautological", std::abs(directional_derivative(va, xt).value() - ax));
      upd("vertical-tensor-factorized", diff(vtensor(base.outer(x, a)), scaled(1.0, [&] {
                                          Field out;
                                          for (const auto& c : va) out.push_back(c.truncated(xt.order()) * xt);
                                          return out;
                                        }())));
      {
        // alpha' X = (X ; X^m d_m alpha_j) at p = alpha(q)
        Field push(x.begin(), x.end());
        for (int j = 0; j < n; ++j) {
          Jet s = zero_at(a[0], 0);
          for (int mm = 0; mm < n; ++mm) s += x[idx(mm)].truncated(0) * a[idx(j)].derivative(mm).truncated(0);
          push.push_back(s);
        }
        const Field on_section = truncated(a, 0);
        upd("connection-map-pushforward",
            diff(connection_map(truncated(push, 0), on_section, gamma), base.cov_form(x, a)));
      }
      upd("complete-vc", diff(nabla(va, cx), scaled(-1.0, vform(base.form_compose(a, gx)))));
      upd("complete-cv", diff(nabla(cx, va), vform(base.cov_form(x, a))));
      upd("complete-vh", max_abs(vals(nabla(va, hx))));
      upd("complete-hv", diff(nabla(hx, va), vform(base.cov_form(x, a))));
      upd("omega-vertical-horizontal", std::abs(omega_pair(va, hx).value() - ax));
      upd("n-tensor-vertical-slots",
          std::max(max_abs(vals(apply_n_tensor(n_tensor, va, hx))), max_abs(vals(apply_n_tensor(n_tensor, hx, va)))));
    }

    for (std::size_t k = 0; k < f.t.size(); ++k) {
      const Field& t = f.t[k];
      const Field& vt = f.vt[k];
      const double txt = taut(base.apply(t, x)).value();
      upd("vertical-tensor-on-tautological", std::abs(directional_derivative(vt, xt).value() - txt));
      upd("complete-c-tensor",
          diff(nabla(cx, vt), lincomb(1.0, vtensor(base.cov_tensor(x, t)), -1.0, vtensor(base.compose(gx, t)))));
      upd("complete-tensor-c", diff(nabla(vt, cx), scaled(-1.0, vtensor(base.compose(t, gx)))));
      upd("omega-tensor-horizontal", std::abs(omega_pair(vt, hx).value() - txt));
    }
  }

  for (std::size_t k = 0; k < f.alpha.size(); ++k) {
    const Field& a = f.alpha[k];
    const Field& va = f.va[k];
    upd("connection-map-vertical", diff(connection_map(va, p, gamma), a));
    for (std::size_t l = 0; l < f.alpha.size(); ++l) {
      upd("complete-vv", max_abs(vals(nabla(va, f.va[l]))));
      upd("omega-vertical-isotropic", std::abs(omega_pair(va, f.va[l]).value()));
      upd("n-tensor-vertical-slots", max_abs(vals(apply_n_tensor(n_tensor, va, f.va[l]))));
    }
    for (std::size_t l = 0; l < f.t.size(); ++l) {
      const Field& t = f.t[l];
      const Field& vt = f.vt[l];
      upd("complete-v-tensor", diff(nabla(va, vt), vform(base.form_compose(a, t))));
      upd("complete-tensor-v", max_abs(vals(nabla(vt, va))));
      upd("omega-vertical-isotropic", std::abs(omega_pair(va, vt).value()));
    }
  }
  for (std::size_t k = 0; k < f.t.size(); ++k) {
    for (std::size_t l = 0; l < f.t.size(); ++l) {
      upd("complete-tensor-tensor", diff(nabla(f.vt[k], f.vt[l]), vtensor(base.compose(f.t[k], f.t[l]))));
      upd("omega-vertical-isotropic", std::abs(omega_pair(f.vt[k], f.vt[l]).value()));
    }
  }
  {
    // omega(N(e_a, e_b), e_c) = (nabla^c_a omega)_bc
    const Tensor<double> nv = values_of(n_tensor);
    const Tensor<double> s = values_of(nabla_omega_jets(complete));
    const Tensor<double> wm = omega_matrix(n);
    double res = 0.0;
    for (int a = 0; a < dim2; ++a) {
      for (int b = 0; b < dim2; ++b) {
        for (int c = 0; c < dim2; ++c) {
          double lhs = 0.0;
          for (int d = 0; d < dim2; ++d) lhs += nv(d, a, b) * wm(d, c);
          res = std::max(res, std::abs(lhs - s(a, b, c)));
        }
      }
    }
    upd("n-tensor-defining", res);
  }

  std::vector<double> out;
  for (const auto& item : kLemmaItems) out.push_back(r.at(item.id));
  return out;
}

std::vector<double> evaluate_theorem(const ManifoldSpec& m, const PhasePoint& pt, const SampleConfig& cfg) {
  const PhaseGeometry g = phase_geometry(m, pt, 2);
  const Tensor<double> bnw = values_of(bnw_connection_jets(g, cfg.curvature_sign));
  const Tensor<double> sym = values_of(lifted_connection_jets(g, LiftedConnection::Symplectified));
  double r = 0.0;
  for (std::size_t i = 0; i < bnw.size(); ++i) {
    const double b = bnw.flat()[i];
    r = std::max(r, std::abs(sym.flat()[i] - b) / (1.0 + std::abs(b)));
  }
  return {r};
}

}  // namespace

void validate(const SampleConfig& cfg) {
  if (cfg.samples < 1) throw std::invalid_argument("samples must be at least 1");
  if (!(cfg.tolerance > 0.0)) throw std::invalid_argument("tolerance must be positive");
  if (cfg.threads < 0) throw std::invalid_argument("thread count must be nonnegative");
}

bool PropertyReport::pass() const {
  return std::all_of(results.begin(), results.end(), [](const PropertyResult& r) { return r.pass; });
}

const char* to_string(Suite s) {
  switch (s) {
    case Suite::Properties: return "properties";
    case Suite::Lemmas: return "lemmas";
    case Suite::Theorem: return "theorem";
  }
  return "?";
}

Suite parse_suite(std::string_view name) {
  if (name == "properties") return Suite::Properties;
  if (name == "lemmas") return Suite::Lemmas;
  if (name == "theorem") return Suite::Theorem;
  throw std::invalid_argument("unknown suite '" + std::string(name) + "' (expected properties, lemmas or theorem)");
}

PhasePoint sample_point(const ManifoldSpec& m, std::uint64_t seed, int index) {
  constexpr int kMaxDraws = 1000;
  const std::uint64_t key = splitmix64(splitmix64(seed) ^ fnv1a(m.name));
  const std::uint64_t sample_key = splitmix64(key ^ splitmix64(static_cast<std::uint64_t>(index)));
  std::string reason;
  PhasePoint pt;
  for (int attempt = 0; attempt < kMaxDraws; ++attempt) {
    const std::uint64_t stream = splitmix64(sample_key ^ splitmix64(~static_cast<std::uint64_t>(attempt)));
    pt.q.q.assign(idx(m.dim), 0.0);
    pt.p.assign(idx(m.dim), 0.0);
    double norm2 = 0.0;
    for (int i = 0; i < m.dim; ++i) {
      pt.q.q[idx(i)] = draw(stream, i, m.domain[idx(i)]);
      pt.p[idx(i)] = draw(stream, m.dim + i, m.fiber);
      norm2 += pt.p[idx(i)] * pt.p[idx(i)];
    }
    if (std::sqrt(norm2) < m.fiber_exclusion) {
      reason = "momentum inside the excluded ball";
      continue;
    }
    try {
      (void)base_geometry(m, seed_coordinates(pt.q.q, m.dim, 3));
      return pt;
    } catch (const DomainError& e) {
      reason = e.what();
    }
  }
  throw DomainError("manifold '" + m.name + "': no admissible sample in " + std::to_string(kMaxDraws) +
                    " draws; last point q = " + format_point(pt.q.q) + ", p = " + format_point(pt.p) + ": " + reason);
}

FieldTestSet field_test_set(const ManifoldSpec& m) {
  const int n = m.dim;
  auto c = [&](int i) { return m.coords[idx(((i % n) + n) % n)]; };
  auto num = [](int k) { return std::to_string(k); };
  FieldTestSet s;
  std::vector<std::string> x1, x2, x3, a1, a2, a3, t1, t2;
  for (int k = 0; k < n; ++k) {
    x1.push_back("sin(" + c(k) + ") + " + c(k + 1));
    x2.push_back(c(0) + "*" + c(n - 1) + " + " + num(k + 1));
    x3.push_back("cos(" + c(k + 1) + ") - 0.5*" + c(k) + "^2");
    a1.push_back(c(k + 1) + "^2 + " + num(1 - k));
    a2.push_back("exp(0.3*" + c(k) + ") - " + c(k + 1));
    a3.push_back(num(k + 1) + "*sin(" + c(0) + " + " + c(n - 1) + ")");
    for (int mm = 0; mm < n; ++mm) {
      t1.push_back(c(k) + "*" + c(mm) + (k == mm ? " + 1" : ""));
      t2.push_back("sin(" + c(mm) + ") - " + num(k - mm) + "*0.5*" + c(0));
    }
  }
  s.vectors = {make_field(m, FieldRole::Vector, "X1", x1), make_field(m, FieldRole::Vector, "X2", x2),
               make_field(m, FieldRole::Vector, "X3", x3)};
  s.oneforms = {make_field(m, FieldRole::OneForm, "alpha1", a1), make_field(m, FieldRole::OneForm, "alpha2", a2),
                make_field(m, FieldRole::OneForm, "alpha3", a3)};
  s.tensors = {make_field(m, FieldRole::Tensor11, "T1", t1), make_field(m, FieldRole::Tensor11, "T2", t2)};
  return s;
}

std::vector<std::string> property_ids() {
  std::vector<std::string> ids;
  for (const auto& p : property_table()) ids.push_back(p.id);
  return ids;
}

std::vector<PropertyResult> check_property(const ManifoldSpec& m, const SampleConfig& cfg, std::string_view id) {
  return run_properties(m, cfg, {id});
}

PropertyResult check_theorem(const ManifoldSpec& m, const SampleConfig& cfg) {
  Item item{"theorem", "nabla^s = nabla^c + N(V,W)/3 + N(W,V)/3 equals the BNW connection", Bound::AtMost,
            cfg.tolerance};
  return run_items(m, cfg, {item}, [&](const PhasePoint& pt) { return evaluate_theorem(m, pt, cfg); }).front();
}

const std::vector<LemmaItem>& lemma_items() { return kLemmaItems; }

std::vector<PropertyResult> check_lemma_suite(const ManifoldSpec& m, const SampleConfig& cfg) {
  const FieldTestSet fields = field_test_set(m);
  std::vector<Item> items;
  for (const auto& li : kLemmaItems) items.push_back({li.id, li.anchor, Bound::AtMost, cfg.tolerance});
  return run_items(m, cfg, items, [&](const PhasePoint& pt) { return evaluate_lemmas(m, pt, fields); });
}

PropertyReport run_suites(std::span<const ManifoldSpec> manifolds, const SampleConfig& cfg,
                          std::span<const Suite> suites) {
  validate(cfg);
  PropertyReport report;
  report.config = cfg;
  for (const auto& m : manifolds) {
    for (Suite s : suites) {
      switch (s) {
        case Suite::Properties: {
          std::vector<std::string_view> ids;
          for (const auto& p : property_table()) ids.push_back(p.id);
          auto r = run_properties(m, cfg, ids);
          report.results.insert(report.results.end(), r.begin(), r.end());
          break;
        }
        case Suite::Lemmas: {
          auto r = check_lemma_suite(m, cfg);
          report.results.insert(report.results.end(), r.begin(), r.end());
          break;
        }
        case Suite::Theorem:
          report.results.push_back(check_theorem(m, cfg));
          break;
      }
    }
  }
  return report;
}

}  // namespace lift

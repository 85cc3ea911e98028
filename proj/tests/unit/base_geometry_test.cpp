#include <cmath>
#include <numbers>
#include <random>
#include <vector>

#include <gtest/gtest.h>

#include "finite_difference.hpp"
#include "lift/base_geometry.hpp"
#include "lift/catalog.hpp"

namespace {

using lift::BasePoint;
using lift::FieldRole;
using lift::ManifoldSpec;

ManifoldSpec catalog(const char* name) { return *lift::find_catalog_manifold(name); }

std::vector<BasePoint> random_points(const ManifoldSpec& m, int count, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::vector<BasePoint> out;
  for (int s = 0; s < count; ++s) {
    BasePoint q;
    for (const auto& b : m.domain) q.q.push_back(std::uniform_real_distribution<double>(b.lo, b.hi)(rng));
    out.push_back(q);
  }
  return out;
}

double metric_entry(const ManifoldSpec& m, int i, int j, std::span<const double> q) {
  return m.metric_component(i, j).eval(std::vector<double>(q.begin(), q.end()));
}

// Christoffel symbols from Richardson differences of the metric expressions.
std::vector<double> christoffel_oracle(const ManifoldSpec& m, const BasePoint& q) {
  const int n = m.dim;
  std::vector<double> dg(static_cast<std::size_t>(n * n * n));  // d_l g_ij at (l, i, j)
  for (int l = 0; l < n; ++l) {
    std::vector<int> alpha(static_cast<std::size_t>(n), 0);
    alpha[static_cast<std::size_t>(l)] = 1;
    for (int i = 0; i < n; ++i) {
      for (int j = 0; j < n; ++j) {
        dg[static_cast<std::size_t>((l * n + i) * n + j)] = lift::testing::richardson_partial(
            [&](std::span<const double> v) { return metric_entry(m, i, j, v); }, q.q, alpha);
      }
    }
  }
  // 2x2 inverse; the catalog is two-dimensional.
  const double a = metric_entry(m, 0, 0, q.q), b = metric_entry(m, 0, 1, q.q), d = metric_entry(m, 1, 1, q.q);
  const double det = a * d - b * b;
  const double inv[2][2] = {{d / det, -b / det}, {-b / det, a / det}};
  auto D = [&](int l, int i, int j) { return dg[static_cast<std::size_t>((l * n + i) * n + j)]; };
  std::vector<double> gam(static_cast<std::size_t>(n * n * n));
  for (int k = 0; k < n; ++k)
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) {
        double s = 0;
        for (int l = 0; l < n; ++l) s += 0.5 * inv[k][l] * (D(i, l, j) + D(j, l, i) - D(l, i, j));
        gam[static_cast<std::size_t>((k * n + i) * n + j)] = s;
      }
  return gam;
}

TEST(MetricAt, Examples) {
  const auto flat = lift::metric_at(catalog("flat2"), BasePoint{{0.3, -0.2}}, 1);
  EXPECT_EQ(flat(0, 0).value(), 1.0);
  EXPECT_EQ(flat(0, 1).value(), 0.0);
  EXPECT_EQ(flat(1, 1).value(), 1.0);

  const auto hp = lift::metric_at(catalog("halfplane2"), BasePoint{{0.0, 1.0}}, 1);
  EXPECT_EQ(hp(0, 0).value(), 1.0);
  EXPECT_EQ(hp(1, 1).value(), 1.0);
  EXPECT_EQ(hp(0, 1).value(), 0.0);

  const auto s = lift::metric_at(catalog("sphere2"), BasePoint{{std::numbers::pi / 4, 0.0}}, 1);
  EXPECT_NEAR(s(0, 0).value(), 1.0, 1e-15);
  EXPECT_NEAR(s(1, 1).value(), 0.5, 1e-15);
}

TEST(MetricAt, RejectsIndefiniteMetric) {
  const auto m = lift::make_manifold("bad", {"x", "y"}, {{{0, 0}, "1"}, {{1, 1}, "x"}}, {{-1, 1}, {-1, 1}});
  EXPECT_THROW(lift::metric_at(m, BasePoint{{-0.5, 0.0}}, 1), lift::DomainError);
}

TEST(Christoffel, FlatIsZero) {
  const auto g = lift::christoffel_at(catalog("flat2"), BasePoint{{0.1, 0.2}});
  for (double c : g.coeffs.flat()) EXPECT_EQ(c, 0.0);
}

TEST(Christoffel, HalfPlaneAtUnitHeight) {
  const auto g = lift::christoffel_at(catalog("halfplane2"), BasePoint{{0.0, 1.0}});
  const auto oracle = christoffel_oracle(catalog("halfplane2"), BasePoint{{0.0, 1.0}});
  for (std::size_t i = 0; i < oracle.size(); ++i) EXPECT_NEAR(g.coeffs.flat()[i], oracle[i], 1e-8);
  EXPECT_NEAR(g(0, 0, 1), -1.0, 1e-14);
  EXPECT_NEAR(g(0, 1, 0), -1.0, 1e-14);
  EXPECT_NEAR(g(1, 0, 0), 1.0, 1e-14);
  EXPECT_NEAR(g(1, 1, 1), -1.0, 1e-14);
  EXPECT_NEAR(g(0, 0, 0), 0.0, 1e-14);
  EXPECT_NEAR(g(0, 1, 1), 0.0, 1e-14);
  EXPECT_NEAR(g(1, 0, 1), 0.0, 1e-14);
}

TEST(Christoffel, SphereAtQuarterPi) {
  const BasePoint q{{std::numbers::pi / 4, 1.0}};
  const auto g = lift::christoffel_at(catalog("sphere2"), q);
  const auto oracle = christoffel_oracle(catalog("sphere2"), q);
  for (std::size_t i = 0; i < oracle.size(); ++i) EXPECT_NEAR(g.coeffs.flat()[i], oracle[i], 1e-8);
  EXPECT_NEAR(g(0, 1, 1), -0.5, 1e-14);
  EXPECT_NEAR(g(1, 0, 1), 1.0, 1e-14);
  EXPECT_NEAR(g(1, 1, 0), 1.0, 1e-14);
}

TEST(Christoffel, AgreesWithOracleAtRandomPoints) {
  for (const char* name : {"sphere2", "halfplane2"}) {
    const auto m = catalog(name);
    for (const auto& q : random_points(m, 20, 5)) {
      const auto g = lift::christoffel_at(m, q);
      const auto oracle = christoffel_oracle(m, q);
      for (std::size_t i = 0; i < oracle.size(); ++i) {
        EXPECT_LE(lift::testing::mixed_error(g.coeffs.flat()[i], oracle[i]), 1e-7) << name;
      }
    }
  }
}

TEST(Christoffel, SymmetricAndMetric) {
  for (const auto& m : lift::builtin_catalog()) {
    const int n = m.dim;
    for (const auto& q : random_points(m, 100, 11)) {
      const auto g = lift::christoffel_at(m, q);
      const auto metric = lift::metric_at(m, q, 1);
      for (int k = 0; k < n; ++k)
        for (int i = 0; i < n; ++i)
          for (int j = 0; j < n; ++j) EXPECT_EQ(g(k, i, j), g(k, j, i));
      // (nabla_k g)_ij = d_k g_ij - Gamma^l_ki g_lj - Gamma^l_kj g_il
      for (int k = 0; k < n; ++k) {
        std::vector<int> e(static_cast<std::size_t>(n), 0);
        e[static_cast<std::size_t>(k)] = 1;
        for (int i = 0; i < n; ++i)
          for (int j = 0; j < n; ++j) {
            double r = metric(i, j).partial(e);
            for (int l = 0; l < n; ++l) {
              r -= g(l, k, i) * metric(l, j).value() + g(l, k, j) * metric(i, l).value();
            }
            EXPECT_LE(std::abs(r), 1e-10) << m.name;
          }
      }
    }
  }
}

TEST(Riemann, FlatIsZero) {
  const auto r = lift::riemann_at(catalog("flat2"), BasePoint{{0.5, -0.5}});
  for (double c : r.coeffs.flat()) EXPECT_EQ(c, 0.0);
  EXPECT_EQ(lift::scalar_curvature_at(catalog("flat2"), BasePoint{{0.5, -0.5}}), 0.0);
}

TEST(Riemann, ScalarCurvatureOfCatalog) {
  for (const auto& [name, expected] : {std::pair{"sphere2", 2.0}, std::pair{"halfplane2", -2.0}}) {
    const auto m = catalog(name);
    for (const auto& q : random_points(m, 50, 21)) {
      EXPECT_NEAR(lift::scalar_curvature_at(m, q), expected, 1e-9) << name;
    }
  }
}

TEST(Riemann, AntisymmetryAndBianchi) {
  for (const auto& m : lift::builtin_catalog()) {
    const int n = m.dim;
    for (const auto& q : random_points(m, 50, 31)) {
      const auto r = lift::riemann_at(m, q);
      for (int k = 0; k < n; ++k)
        for (int l = 0; l < n; ++l)
          for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j) {
              EXPECT_LE(std::abs(r(k, l, i, j) + r(k, l, j, i)), 1e-10);
              EXPECT_LE(std::abs(r(k, l, i, j) + r(k, i, j, l) + r(k, j, l, i)), 1e-10);
            }
    }
  }
}

TEST(Riemann, SphereComponentFromChristoffelDifferences) {
  // R^theta_{phi theta phi} = d_theta Gamma^theta_{phi phi} + Gamma^theta_{theta m} Gamma^m_{phi phi}
  //                          - Gamma^theta_{phi m} Gamma^m_{theta phi}
  // with the Gamma derivative taken by finite differences of christoffel_at.
  const auto m = catalog("sphere2");
  const BasePoint q{{1.1, 0.4}};
  const std::vector<double> at{1.1, 0.4};
  const std::vector<int> dtheta{1, 0};
  const double d = lift::testing::richardson_partial(
      [&](std::span<const double> v) { return lift::christoffel_at(m, BasePoint{{v[0], v[1]}})(0, 1, 1); }, at,
      dtheta);
  const auto g = lift::christoffel_at(m, q);
  double expected = d;
  for (int k = 0; k < 2; ++k) expected += g(0, 0, k) * g(k, 1, 1) - g(0, 1, k) * g(k, 0, 1);
  EXPECT_NEAR(lift::riemann_at(m, q)(0, 1, 0, 1), expected, 1e-8);
  EXPECT_NEAR(expected, std::sin(1.1) * std::sin(1.1), 1e-8);
}

TEST(CovariantGradient, Examples) {
  const auto flat = catalog("flat2");
  const auto dx = lift::make_field(flat, FieldRole::Vector, "d_x", {"1", "0"});
  for (const auto v = lift::grad_vector_field_at(flat, dx, BasePoint{{0.2, 0.3}}); double c : v.flat()) EXPECT_EQ(c, 0.0);

  const auto line = lift::make_manifold("line", {"x"}, {{{0, 0}, "1"}}, {{-1, 1}});
  const auto xdx = lift::make_field(line, FieldRole::Vector, "x d_x", {"x"});
  EXPECT_EQ(lift::grad_vector_field_at(line, xdx, BasePoint{{0.6}})(0, 0), 1.0);

  const auto hp = catalog("halfplane2");
  const auto hdx = lift::make_field(hp, FieldRole::Vector, "d_x", {"1", "0"});
  const auto t = lift::grad_vector_field_at(hp, hdx, BasePoint{{0.0, 1.0}});
  const auto oracle = christoffel_oracle(hp, BasePoint{{0.0, 1.0}});
  // (nabla X)^k_i = Gamma^k_{i x}
  EXPECT_NEAR(t(1, 0), oracle[(1 * 2 + 0) * 2 + 0], 1e-8);
  EXPECT_NEAR(t(0, 1), oracle[(0 * 2 + 1) * 2 + 0], 1e-8);
  EXPECT_NEAR(t(1, 0), 1.0, 1e-14);
  EXPECT_NEAR(t(0, 1), -1.0, 1e-14);
  EXPECT_NEAR(t(0, 0), 0.0, 1e-14);
  EXPECT_NEAR(t(1, 1), 0.0, 1e-14);
}

TEST(CovariantGradient, RoleMismatch) {
  const auto flat = catalog("flat2");
  const auto alpha = lift::make_field(flat, FieldRole::OneForm, "dx", {"1", "0"});
  EXPECT_THROW(lift::grad_vector_field_at(flat, alpha, BasePoint{{0, 0}}), lift::ShapeError);
  EXPECT_THROW(lift::covariant_derivative_oneform_at(flat, alpha, alpha, BasePoint{{0, 0}}), lift::ShapeError);
}

TEST(CovariantOneForm, Examples) {
  const auto flat = catalog("flat2");
  const auto c = lift::make_field(flat, FieldRole::OneForm, "c", {"2", "-3"});
  const auto x = lift::make_field(flat, FieldRole::Vector, "X", {"x * y", "sin(x)"});
  for (double v : lift::covariant_derivative_oneform_at(flat, c, x, BasePoint{{0.4, 0.6}})) EXPECT_EQ(v, 0.0);

  const auto hp = catalog("halfplane2");
  const auto dx = lift::make_field(hp, FieldRole::OneForm, "dx", {"1", "0"});
  const auto ddx = lift::make_field(hp, FieldRole::Vector, "d_x", {"1", "0"});
  const auto r = lift::covariant_derivative_oneform_at(hp, dx, ddx, BasePoint{{0.0, 1.0}});
  const auto oracle = christoffel_oracle(hp, BasePoint{{0.0, 1.0}});
  // -Gamma^x_{x i}
  EXPECT_NEAR(r[0], -oracle[(0 * 2 + 0) * 2 + 0], 1e-8);
  EXPECT_NEAR(r[1], -oracle[(0 * 2 + 0) * 2 + 1], 1e-8);
  EXPECT_NEAR(r[0], 0.0, 1e-14);
  EXPECT_NEAR(r[1], 1.0, 1e-14);
}

TEST(CovariantOneForm, LeibnizWithPairing) {
  // d_i <alpha, X> = <nabla_i alpha, X> + <alpha, (nabla X)_i>
  for (const auto& m : lift::builtin_catalog()) {
    const auto& c = m.coords;
    const auto alpha = lift::make_field(m, FieldRole::OneForm, "a", {c[1] + "^2 + 1", "exp(0.3 * " + c[0] + ")"});
    const auto x = lift::make_field(m, FieldRole::Vector, "X", {"sin(" + c[0] + ") + " + c[1], c[0] + " * " + c[1]});
    for (const auto& q : random_points(m, 20, 41)) {
      const auto grad_x = lift::grad_vector_field_at(m, x, q);
      std::vector<double> xv;
      std::vector<double> av;
      for (int k = 0; k < 2; ++k) {
        xv.push_back(x.components[static_cast<std::size_t>(k)].eval(q.q));
        av.push_back(alpha.components[static_cast<std::size_t>(k)].eval(q.q));
      }
      for (int i = 0; i < 2; ++i) {
        const auto e = lift::make_field(m, FieldRole::Vector, "e", {i == 0 ? "1" : "0", i == 1 ? "1" : "0"});
        const auto na = lift::covariant_derivative_oneform_at(m, alpha, e, q);
        std::vector<int> alpha_i{0, 0};
        alpha_i[static_cast<std::size_t>(i)] = 1;
        const double lhs = lift::testing::richardson_partial(
            [&](std::span<const double> v) {
              const std::vector<double> p(v.begin(), v.end());
              return alpha.components[0].eval(p) * x.components[0].eval(p) +
                     alpha.components[1].eval(p) * x.components[1].eval(p);
            },
            q.q, alpha_i);
        double rhs = 0;
        for (int k = 0; k < 2; ++k) rhs += na[static_cast<std::size_t>(k)] * xv[static_cast<std::size_t>(k)] +
                                           av[static_cast<std::size_t>(k)] * grad_x(k, i);
        EXPECT_LE(lift::testing::mixed_error(rhs, lhs), 1e-8) << m.name;
      }
    }
  }
}

}  // namespace

#include <cmath>
#include <fstream>
#include <random>
#include <vector>

#include <gtest/gtest.h>
#include <nlohmann/json.hpp>

#include "finite_difference.hpp"
#include "lift/base_geometry.hpp"
#include "lift/catalog.hpp"
#include "lift/cotangent.hpp"
#include "lift/lifted_connections.hpp"

namespace {

using lift::BasePoint;
using lift::ConnectionValue;
using lift::CurvatureSign;
using lift::FieldRole;
using lift::FieldSpec;
using lift::Jet;
using lift::LiftedConnection;
using lift::ManifoldSpec;
using lift::PhasePoint;
using lift::Tensor;

ManifoldSpec catalog(const char* name) { return *lift::find_catalog_manifold(name); }

std::vector<PhasePoint> random_points(const ManifoldSpec& m, int count, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> fiber(-2.0, 2.0);
  std::vector<PhasePoint> out;
  while (static_cast<int>(out.size()) < count) {
    PhasePoint pt;
    for (const auto& b : m.domain) pt.q.q.push_back(std::uniform_real_distribution<double>(b.lo, b.hi)(rng));
    double norm = 0;
    for (int i = 0; i < m.dim; ++i) {
      pt.p.push_back(fiber(rng));
      norm += pt.p.back() * pt.p.back();
    }
    if (std::sqrt(norm) < 0.1) continue;
    out.push_back(pt);
  }
  return out;
}

double max_abs(std::span<const double> v) {
  double r = 0;
  for (double x : v) r = std::max(r, std::abs(x));
  return r;
}

TEST(RiemannExtension, FlatAndHalfPlane) {
  const auto flat = lift::riemann_extension_at(catalog("flat2"), PhasePoint{BasePoint{{0.2, 0.1}}, {1, 2}}, 1);
  for (int a = 0; a < 4; ++a)
    for (int b = 0; b < 4; ++b) {
      const bool off_block = (a < 2) != (b < 2);
      EXPECT_EQ(flat(a, b).value(), off_block && std::abs(a - b) == 2 ? 1.0 : 0.0) << a << b;
    }

  const auto g = lift::riemann_extension_at(catalog("halfplane2"), PhasePoint{BasePoint{{0.0, 1.0}}, {2, 3}}, 1);
  EXPECT_NEAR(g(0, 0).value(), -6.0, 1e-14);
  EXPECT_NEAR(g(0, 1).value(), 4.0, 1e-14);
  EXPECT_NEAR(g(1, 0).value(), 4.0, 1e-14);
  EXPECT_NEAR(g(1, 1).value(), 6.0, 1e-14);
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j) {
      EXPECT_EQ(g(i, 2 + j).value(), i == j ? 1.0 : 0.0);
      EXPECT_EQ(g(2 + i, j).value(), i == j ? 1.0 : 0.0);
      EXPECT_EQ(g(2 + i, 2 + j).value(), 0.0);
    }
}

TEST(CompleteConnection, MatchesFrozenFiniteDifferenceOracle) {
  std::ifstream in(std::string(LIFT_TEST_DATA_DIR) + "/complete_connection_oracle.json");
  ASSERT_TRUE(in) << "missing oracle data";
  const auto data = nlohmann::json::parse(in);
  int checked = 0;
  for (const auto& [name, entries] : data.items()) {
    const auto m = catalog(name.c_str());
    for (const auto& e : entries) {
      const auto z = e["point"].get<std::vector<double>>();
      const auto expected = e["coefficients"].get<std::vector<double>>();
      const PhasePoint pt{BasePoint{{z[0], z[1]}}, {z[2], z[3]}};
      const auto got = lift::complete_connection_at(m, pt);
      ASSERT_EQ(got.coeffs.size(), expected.size());
      for (std::size_t i = 0; i < expected.size(); ++i) {
        EXPECT_LE(lift::testing::mixed_error(got.coeffs.flat()[i], expected[i]), 1e-6) << name << " " << i;
      }
      ++checked;
    }
  }
  EXPECT_EQ(checked, 4);
}

TEST(LiftedConnections, FlatIsZero) {
  const auto m = catalog("flat2");
  const PhasePoint pt{BasePoint{{0.3, -0.6}}, {1.1, 0.4}};
  for (const auto v = lift::complete_connection_at(m, pt); double c : v.coeffs.flat()) EXPECT_EQ(c, 0.0);
  for (const auto v = lift::bnw_connection_at(m, pt); double c : v.coeffs.flat()) EXPECT_EQ(c, 0.0);
  for (const auto v = lift::n_tensor_at(m, pt); double c : v.coeffs.flat()) EXPECT_EQ(c, 0.0);
  for (auto which : {LiftedConnection::Complete, LiftedConnection::Bnw, LiftedConnection::Symplectified}) {
    for (const auto v = lift::phase_curvature_at(m, pt, which); double c : v.coeffs.flat()) EXPECT_EQ(c, 0.0);
  }
}

TEST(LiftedConnections, BaseBlockAndTorsion) {
  for (const auto& m : lift::builtin_catalog()) {
    for (const auto& pt : random_points(m, 20, 3)) {
      const auto base = lift::christoffel_at(m, pt.q);
      for (const auto& g : {lift::complete_connection_at(m, pt), lift::bnw_connection_at(m, pt)}) {
        for (int k = 0; k < 2; ++k)
          for (int i = 0; i < 2; ++i)
            for (int j = 0; j < 2; ++j) EXPECT_NEAR(g(k, i, j), base(k, i, j), 1e-10) << m.name;
        for (int c = 0; c < 4; ++c)
          for (int a = 0; a < 4; ++a)
            for (int b = 0; b < 4; ++b) EXPECT_NEAR(g(c, a, b), g(c, b, a), 1e-12);
      }
    }
  }
}

TEST(BnwConnection, FiberFiberCoefficientsVanish) {
  for (const auto& m : lift::builtin_catalog()) {
    for (const auto& pt : random_points(m, 20, 5)) {
      const auto g = lift::bnw_connection_at(m, pt);
      for (int c = 0; c < 4; ++c)
        for (int i = 2; i < 4; ++i)
          for (int j = 2; j < 4; ++j) EXPECT_EQ(g(c, i, j), 0.0);
    }
  }
}

TEST(BnwConnection, SymplecticOnSphere) {
  const auto m = catalog("sphere2");
  for (const auto& pt : random_points(m, 20, 7)) {
    EXPECT_LE(max_abs(lift::nabla_omega_at(lift::bnw_connection_at(m, pt)).flat()), 1e-8);
  }
}

TEST(CompleteConnection, NotSymplecticOnCurvedBases) {
  for (const char* name : {"sphere2", "halfplane2"}) {
    const auto m = catalog(name);
    double worst = 0;
    for (const auto& pt : random_points(m, 20, 9)) {
      worst = std::max(worst, max_abs(lift::nabla_omega_at(lift::complete_connection_at(m, pt)).flat()));
    }
    EXPECT_GT(worst, 0.5) << name;
  }
}

TEST(NTensor, DefiningRelation) {
  for (const auto& m : lift::builtin_catalog()) {
    for (const auto& pt : random_points(m, 20, 11)) {
      const auto c = lift::complete_connection_at(m, pt);
      const auto n = lift::n_tensor_at(m, pt);
      const auto dw = lift::nabla_omega_at(c);
      const auto w = lift::omega_matrix(2);
      // omega(N(V,W),U) = (nabla_V omega)(W,U) on basis triples
      for (int a = 0; a < 4; ++a)
        for (int b = 0; b < 4; ++b)
          for (int u = 0; u < 4; ++u) {
            double lhs = 0;
            for (int d = 0; d < 4; ++d) lhs += n(d, a, b) * w(d, u);
            EXPECT_NEAR(lhs, dw(a, b, u), 1e-10);
          }
    }
  }
}

TEST(NTensor, VanishesWhenEitherSlotIsVertical) {
  for (const auto& m : lift::builtin_catalog()) {
    for (const auto& pt : random_points(m, 20, 13)) {
      const auto n = lift::n_tensor_at(m, pt);
      for (int c = 0; c < 4; ++c)
        for (int a = 0; a < 4; ++a)
          for (int b = 0; b < 4; ++b) {
            if (a >= 2 || b >= 2) EXPECT_NEAR(n(c, a, b), 0.0, 1e-8);
          }
    }
  }
}

TEST(Symplectify, ZeroTensorIsIdentity) {
  const auto m = catalog("sphere2");
  const PhasePoint pt{BasePoint{{1.0, 0.5}}, {0.3, -1.2}};
  const auto c = lift::complete_connection_at(m, pt);
  lift::NTensorValue zero{4, Tensor<double>({4, 4, 4}, 0.0)};
  const auto s = lift::symplectify_at(c, zero);
  for (std::size_t i = 0; i < c.coeffs.size(); ++i) EXPECT_EQ(s.coeffs.flat()[i], c.coeffs.flat()[i]);
  lift::NTensorValue wrong{2, Tensor<double>({2, 2, 2}, 0.0)};
  EXPECT_THROW(lift::symplectify_at(c, wrong), lift::ShapeError);
}

TEST(Symplectify, ProducesTheBnwConnection) {
  for (const auto& m : lift::builtin_catalog()) {
    for (const auto& pt : random_points(m, 20, 17)) {
      const auto s = lift::symplectify_at(lift::complete_connection_at(m, pt), lift::n_tensor_at(m, pt));
      const auto b = lift::bnw_connection_at(m, pt);
      EXPECT_LE(max_abs(lift::nabla_omega_at(s).flat()), 1e-8) << m.name;
      for (std::size_t i = 0; i < b.coeffs.size(); ++i) {
        EXPECT_LE(std::abs(s.coeffs.flat()[i] - b.coeffs.flat()[i]) / (1 + std::abs(b.coeffs.flat()[i])), 1e-8);
      }
    }
  }
}

TEST(Symplectify, FlippedCurvatureSignBreaksAgreement) {
  const auto m = catalog("sphere2");
  const PhasePoint pt{BasePoint{{1.0, 0.5}}, {0.8, -1.2}};
  const auto s = lift::symplectify_at(lift::complete_connection_at(m, pt), lift::n_tensor_at(m, pt));
  const auto b = lift::bnw_connection_at(m, pt, CurvatureSign::Flipped);
  double worst = 0;
  for (std::size_t i = 0; i < b.coeffs.size(); ++i) worst = std::max(worst, std::abs(s.coeffs.flat()[i] - b.coeffs.flat()[i]));
  EXPECT_GT(worst, 0.1);
}

// (L_xi nabla)^c_ab = xi(Gamma^c_ab) + (f_a + f_b - f_c) Gamma^c_ab with f = 1 on fiber indices.
Tensor<double> lie_derivative_formula(const Tensor<Jet>& gamma, std::span<const double> p) {
  const int m = gamma.extent(0);
  const int n = m / 2;
  Tensor<double> out({m, m, m}, 0.0);
  for (int c = 0; c < m; ++c)
    for (int a = 0; a < m; ++a)
      for (int b = 0; b < m; ++b) {
        const Jet& g = gamma(c, a, b);
        double xi_g = 0;
        for (int i = 0; i < n; ++i) {
          std::vector<int> e(static_cast<std::size_t>(m), 0);
          e[static_cast<std::size_t>(n + i)] = 1;
          xi_g += p[static_cast<std::size_t>(i)] * g.partial(e);
        }
        const int w = (a >= n) + (b >= n) - (c >= n);
        out(c, a, b) = xi_g + w * g.value();
      }
  return out;
}

TEST(Homogeneity, LieDerivativeMatchesCoordinateFormula) {
  const auto m = catalog("halfplane2");
  for (const auto& pt : random_points(m, 10, 19)) {
    const auto geo = lift::phase_geometry(m, pt, 3);
    for (auto which : {LiftedConnection::Complete, LiftedConnection::Bnw, LiftedConnection::Symplectified}) {
      const auto gamma = lift::lifted_connection_jets(geo, which);
      const auto lie = lift::liouville_lie_derivative_jets(gamma, geo.p());
      const auto formula = lie_derivative_formula(gamma, pt.p);
      for (std::size_t i = 0; i < formula.size(); ++i) {
        EXPECT_NEAR(lie.flat()[i].value(), formula.flat()[i], 1e-12);
        EXPECT_NEAR(lie.flat()[i].value(), 0.0, 1e-10);
      }
    }
  }
}

TEST(Homogeneity, DetectsNonHomogeneousCoefficients) {
  const auto m = catalog("sphere2");
  const PhasePoint pt{BasePoint{{1.0, 0.5}}, {0.8, -1.2}};
  const auto geo = lift::phase_geometry(m, pt, 3);
  auto gamma = lift::complete_connection_jets(geo);
  // A fiber-fiber -> base coefficient quadratic in p has weight 2 + 2 - 0 and xi-degree 2.
  gamma(0, 2, 3) += geo.momenta[0].truncated(1) * geo.momenta[1].truncated(1);
  gamma(0, 3, 2) += geo.momenta[0].truncated(1) * geo.momenta[1].truncated(1);
  const auto lie = lift::liouville_lie_derivative_jets(gamma, geo.p());
  const auto formula = lie_derivative_formula(gamma, pt.p);
  for (std::size_t i = 0; i < formula.size(); ++i) EXPECT_NEAR(lie.flat()[i].value(), formula.flat()[i], 1e-12);
  EXPECT_NEAR(lie(0, 2, 3).value(), 4 * 0.8 * -1.2, 1e-12);
}

TEST(PhaseCurvature, AntisymmetricInLastPair) {
  for (const char* name : {"sphere2", "halfplane2"}) {
    const auto m = catalog(name);
    for (const auto& pt : random_points(m, 5, 23)) {
      for (auto which : {LiftedConnection::Complete, LiftedConnection::Bnw, LiftedConnection::Symplectified}) {
        const auto r = lift::phase_curvature_at(m, pt, which);
        for (int k = 0; k < 4; ++k)
          for (int l = 0; l < 4; ++l)
            for (int i = 0; i < 4; ++i)
              for (int j = 0; j < 4; ++j) EXPECT_NEAR(r(k, l, i, j), -r(k, l, j, i), 1e-9);
      }
    }
  }
}

TEST(PhaseCurvature, CompleteLiftCurvatureHasRiemannianSymmetries) {
  // The complete lift is Levi-Civita for the Riemann extension G, so
  // R_{klij} = G_km R^m_lij is antisymmetric in (k, l) and pair-symmetric.
  const auto m = catalog("sphere2");
  for (const auto& pt : random_points(m, 5, 29)) {
    const auto r = lift::phase_curvature_at(m, pt, LiftedConnection::Complete);
    const auto g = lift::riemann_extension_at(m, pt, 0);
    auto lowered = [&](int k, int l, int i, int j) {
      double s = 0;
      for (int d = 0; d < 4; ++d) s += g(k, d).value() * r(d, l, i, j);
      return s;
    };
    for (int k = 0; k < 4; ++k)
      for (int l = 0; l < 4; ++l)
        for (int i = 0; i < 4; ++i)
          for (int j = 0; j < 4; ++j) {
            EXPECT_NEAR(lowered(k, l, i, j), -lowered(l, k, i, j), 1e-9);
            EXPECT_NEAR(lowered(k, l, i, j), lowered(i, j, k, l), 1e-9);
          }
  }
}

// Base-level helpers for the horizontal-horizontal identity.
struct BaseData {
  std::vector<double> x, y, nabla_x_y;
  ConnectionValue gamma;
  lift::CurvatureValue r;
};

BaseData base_data(const ManifoldSpec& m, const FieldSpec& x, const FieldSpec& y, const BasePoint& q) {
  BaseData d;
  for (const auto& c : x.components) d.x.push_back(c.eval(q.q));
  for (const auto& c : y.components) d.y.push_back(c.eval(q.q));
  const auto gy = lift::grad_vector_field_at(m, y, q);
  for (int k = 0; k < m.dim; ++k) {
    double s = 0;
    for (int i = 0; i < m.dim; ++i) s += gy(k, i) * d.x[static_cast<std::size_t>(i)];
    d.nabla_x_y.push_back(s);
  }
  d.gamma = lift::christoffel_at(m, q);
  d.r = lift::riemann_at(m, q);
  return d;
}

TEST(CompleteConnection, HorizontalPairAndItsSymmetricForm) {
  // nabla^c_{hX} hY = h(nabla_X Y) - v(R(Y,.)X). By the first Bianchi identity
  // R(X,Y) = R(X,.)Y - R(Y,.)X, so the same vertical part can be written
  // -1/2 v(-R(X,Y) + R(X,.)Y + R(Y,.)X); with +R(X,Y) instead, the vertical
  // part becomes -v(R(X,.)Y), which differs by v(R(X,Y)).
  for (const char* name : {"sphere2", "halfplane2"}) {
    const auto m = catalog(name);
    const auto& a = m.coords[0];
    const auto& b = m.coords[1];
    const auto fx = lift::make_field(m, FieldRole::Vector, "X", {"sin(" + a + ") + " + b, a + " * " + b + " + 1"});
    const auto fy = lift::make_field(m, FieldRole::Vector, "Y", {"cos(" + b + ") - 0.5 * " + a + "^2", b + "^2 - " + a});
    double printed_gap = 0;
    for (const auto& pt : random_points(m, 10, 31)) {
      const auto geo = lift::phase_geometry(m, pt, 2);
      const auto gamma = lift::complete_connection_jets(geo);
      const auto hx = lift::horizontal_lift(lift::field_jets(fx, geo.x()), geo.p(), geo.base.christoffel);
      const auto hy = lift::horizontal_lift(lift::field_jets(fy, geo.x()), geo.p(), geo.base.christoffel);
      const auto lhs = lift::values_of(lift::covariant_derivative(gamma, hx, hy));

      const auto d = base_data(m, fx, fy, pt.q);
      const int n = 2;
      std::vector<double> h(4, 0.0);
      for (int k = 0; k < n; ++k) h[static_cast<std::size_t>(k)] = d.nabla_x_y[static_cast<std::size_t>(k)];
      for (int i = 0; i < n; ++i)
        for (int k = 0; k < n; ++k)
          for (int j = 0; j < n; ++j)
            h[static_cast<std::size_t>(n + i)] +=
                pt.p[static_cast<std::size_t>(k)] * d.gamma(k, i, j) * d.nabla_x_y[static_cast<std::size_t>(j)];
      for (int mm = 0; mm < n; ++mm) {
        double r_xy = 0, r_x_y = 0, r_y_x = 0;
        for (int k = 0; k < n; ++k)
          for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j) {
              const double pk = pt.p[static_cast<std::size_t>(k)];
              const double xi = d.x[static_cast<std::size_t>(i)], yj = d.y[static_cast<std::size_t>(j)];
              r_xy += pk * d.r(k, mm, i, j) * xi * yj;
              r_x_y += pk * d.r(k, j, i, mm) * yj * xi;
              r_y_x += pk * d.r(k, i, j, mm) * xi * yj;
            }
        const double got = lhs[static_cast<std::size_t>(n + mm)] - h[static_cast<std::size_t>(n + mm)];
        EXPECT_NEAR(got, -r_y_x, 1e-10) << name;
        EXPECT_NEAR(got, -0.5 * (-r_xy + r_x_y + r_y_x), 1e-10) << name;
        printed_gap = std::max(printed_gap, std::abs(got + 0.5 * (r_xy + r_x_y + r_y_x)));
        EXPECT_NEAR(got + 0.5 * (r_xy + r_x_y + r_y_x), r_xy, 1e-10);
      }
      for (int k = 0; k < n; ++k) EXPECT_NEAR(lhs[static_cast<std::size_t>(k)], h[static_cast<std::size_t>(k)], 1e-10);
    }
    EXPECT_GT(printed_gap, 1e-2) << name;
  }
}

TEST(NTensor, HorizontalPair) {
  // N(hX, hY) = 2 v(R(Y,.)X)
  const auto m = catalog("sphere2");
  const auto fx = lift::make_field(m, FieldRole::Vector, "X", {"sin(theta) + phi", "theta * phi + 1"});
  const auto fy = lift::make_field(m, FieldRole::Vector, "Y", {"cos(phi)", "phi^2 - theta"});
  for (const auto& pt : random_points(m, 20, 37)) {
    const auto n = lift::n_tensor_at(m, pt);
    const auto hx = lift::horizontal_lift_at(m, fx, pt).components;
    const auto hy = lift::horizontal_lift_at(m, fy, pt).components;
    const auto d = base_data(m, fx, fy, pt.q);
    for (int c = 0; c < 4; ++c) {
      double got = 0;
      for (int a = 0; a < 4; ++a)
        for (int b = 0; b < 4; ++b) got += n(c, a, b) * hx[static_cast<std::size_t>(a)] * hy[static_cast<std::size_t>(b)];
      double expected = 0;
      if (c >= 2) {
        const int mm = c - 2;
        for (int k = 0; k < 2; ++k)
          for (int i = 0; i < 2; ++i)
            for (int j = 0; j < 2; ++j)
              expected += 2 * pt.p[static_cast<std::size_t>(k)] * d.r(k, i, j, mm) * d.x[static_cast<std::size_t>(i)] *
                          d.y[static_cast<std::size_t>(j)];
      }
      EXPECT_NEAR(got, expected, 1e-8);
    }
  }
}

}  // namespace

namespace {

// omega(X1, R(Y,X2)X3 + R(Y,X3)X2) + cyclic in (X1, X2, X3), on chart basis vectors.
double cyclic_curvature_sum(const lift::CurvatureValue& r, const Tensor<double>& w, int y, int a, int b, int c) {
  auto term = [&](int x1, int x2, int x3) {
    double s = 0;
    for (int k = 0; k < 4; ++k) s += w(x1, k) * (r(k, x3, y, x2) + r(k, x2, y, x3));
    return s;
  };
  return term(a, b, c) + term(b, c, a) + term(c, a, b);
}

TEST(PhaseCurvature, CyclicConditionByBlock) {
  // Worst value of the cyclic sum for the BNW curvature, split by whether Y and
  // the X slots are base (< 2) or fiber (>= 2) chart directions.
  const auto m = catalog("sphere2");
  const auto w = lift::omega_matrix(2);
  double vertical_y = 0, vertical_x = 0, horizontal = 0;
  for (const auto& pt : random_points(m, 10, 41)) {
    const auto r = lift::phase_curvature_at(m, pt, LiftedConnection::Bnw);
    for (int y = 0; y < 4; ++y)
      for (int a = 0; a < 4; ++a)
        for (int b = 0; b < 4; ++b)
          for (int c = 0; c < 4; ++c) {
            const double v = std::abs(cyclic_curvature_sum(r, w, y, a, b, c));
            if (y >= 2) vertical_y = std::max(vertical_y, v);
            if (a >= 2 && b >= 2 && c >= 2) vertical_x = std::max(vertical_x, v);
            if (y < 2 && a < 2 && b < 2 && c < 2) horizontal = std::max(horizontal, v);
          }
  }
  EXPECT_LE(vertical_y, 1e-9);
  EXPECT_LE(vertical_x, 1e-9);
  EXPECT_GT(horizontal, 1e-3);
}

}  // namespace

#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <stdexcept>
#include <vector>

namespace lift {

/// Highest truncation order supported by the jet kernel.
inline constexpr int kMaxJetOrder = 3;

using MultiIndex = std::vector<int>;

class JetError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Enumeration of all multi-indices |alpha| <= order over `vars` variables,
/// graded lexicographic, together with the precomputed tables used by jet
/// arithmetic. Layouts are interned: one instance per (vars, order), never
/// destroyed, shared read-only between threads.
///
/// Because the ordering is graded, the layout of (d, k) is a prefix of the
/// layout of (d, K) for every k <= K.
class JetLayout {
 public:
  struct ProductTerm {
    std::uint32_t lhs;
    std::uint32_t rhs;
    std::uint32_t out;
  };
  struct DerivativeTerm {
    std::uint32_t source;
    double factor;
  };

  static const JetLayout& get(int vars, int order);

  int vars() const { return vars_; }
  int order() const { return order_; }
  std::size_t size() const { return indices_.size(); }

  const MultiIndex& multi_index(std::size_t pos) const { return indices_[pos]; }
  /// Position of alpha; throws JetError when |alpha| > order or the arity is wrong.
  std::size_t position(std::span<const int> alpha) const;
  /// Number of entries with total degree <= k.
  std::size_t degree_end(int k) const { return degree_end_[static_cast<std::size_t>(k)]; }

  std::span<const ProductTerm> product_terms() const { return products_; }
  /// Entries of d/dx_var as a table over the (vars, order - 1) layout:
  /// result[j] = factor * source coefficient.
  std::span<const DerivativeTerm> derivative_terms(int var) const;

 private:
  JetLayout(int vars, int order);

  int vars_;
  int order_;
  std::vector<MultiIndex> indices_;
  std::vector<std::size_t> degree_end_;
  std::vector<ProductTerm> products_;
  std::vector<std::vector<DerivativeTerm>> derivatives_;
};

/// Truncated multivariate Taylor expansion. Coefficient alpha stores
/// d^alpha f / alpha!, so products are plain truncated Cauchy products.
class Jet {
 public:
  /// The zero constant over zero variables.
  Jet();

  static Jet constant(double value, int vars, int order);
  static Jet variable(int index, double value, int vars, int order);
  static Jet zero(int vars, int order) { return constant(0.0, vars, order); }

  int vars() const { return layout_->vars(); }
  int order() const { return layout_->order(); }
  const JetLayout& layout() const { return *layout_; }

  double value() const { return coeffs_[0]; }
  std::span<const double> coefficients() const { return coeffs_; }
  double coefficient(std::span<const int> alpha) const;
  double coefficient(std::initializer_list<int> alpha) const {
    return coefficient(std::span<const int>(alpha.begin(), alpha.size()));
  }
  /// alpha! * coefficient(alpha), i.e. the partial derivative d^alpha at the base point.
  double partial(std::span<const int> alpha) const;
  double partial(std::initializer_list<int> alpha) const {
    return partial(std::span<const int>(alpha.begin(), alpha.size()));
  }

  /// d/dx_var, one order lower.
  Jet derivative(int var) const;
  Jet truncated(int order) const;
  /// Same shape, only the order-0 coefficient kept.
  Jet constant_like(double value) const;

  Jet& operator+=(const Jet& rhs);
  Jet& operator-=(const Jet& rhs);
  Jet& operator*=(const Jet& rhs);
  Jet& operator/=(const Jet& rhs);
  Jet& operator+=(double rhs);
  Jet& operator-=(double rhs);
  Jet& operator*=(double rhs);
  Jet& operator/=(double rhs);

  friend Jet operator-(Jet a);
  friend Jet operator+(Jet a, const Jet& b) { return a += b; }
  friend Jet operator-(Jet a, const Jet& b) { return a -= b; }
  friend Jet operator*(const Jet& a, const Jet& b);
  friend Jet operator/(const Jet& a, const Jet& b);
  friend Jet operator+(Jet a, double b) { return a += b; }
  friend Jet operator-(Jet a, double b) { return a -= b; }
  friend Jet operator*(Jet a, double b) { return a *= b; }
  friend Jet operator/(Jet a, double b) { return a /= b; }
  friend Jet operator+(double a, Jet b) { return b += a; }
  friend Jet operator-(double a, const Jet& b);
  friend Jet operator*(double a, Jet b) { return b *= a; }
  friend Jet operator/(double a, const Jet& b);

 private:
  Jet(const JetLayout* layout, std::vector<double> coeffs)
      : layout_(layout), coeffs_(std::move(coeffs)) {}
  void require_same_shape(const Jet& other, const char* op) const;

  friend Jet compose(const Jet& a, std::span<const double> taylor);

  const JetLayout* layout_;
  std::vector<double> coeffs_;
};

/// f(a) given the univariate Taylor coefficients f^(k)(a0)/k! for k = 0..order.
Jet compose(const Jet& a, std::span<const double> taylor);

Jet sin(const Jet& a);
Jet cos(const Jet& a);
Jet tan(const Jet& a);
Jet sinh(const Jet& a);
Jet cosh(const Jet& a);
Jet exp(const Jet& a);
Jet log(const Jet& a);
Jet sqrt(const Jet& a);
/// Real power; requires a positive base value.
Jet pow(const Jet& a, double exponent);
/// Integer power by repeated multiplication; negative exponents divide.
Jet powi(const Jet& a, int exponent);

}  // namespace lift

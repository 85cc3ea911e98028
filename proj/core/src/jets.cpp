#include "lift/jets.hpp"

#include <cmath>
#include <map>
#include <memory>
#include <mutex>
#include <numeric>
#include <string>
#include <utility>

#include "lift/errors.hpp"

namespace lift {
namespace {

// All compositions of `degree` into `vars` parts, lexicographically descending.
void append_degree(int vars, int degree, std::vector<MultiIndex>& out) {
  MultiIndex alpha(static_cast<std::size_t>(vars), 0);
  auto recurse = [&](auto&& self, int slot, int remaining) -> void {
    if (slot == vars - 1) {
      alpha[static_cast<std::size_t>(slot)] = remaining;
      out.push_back(alpha);
      return;
    }
    for (int k = remaining; k >= 0; --k) {
      alpha[static_cast<std::size_t>(slot)] = k;
      self(self, slot + 1, remaining - k);
    }
  };
  if (vars == 0) {
    if (degree == 0) out.push_back(alpha);
    return;
  }
  recurse(recurse, 0, degree);
}

int total_degree(const MultiIndex& alpha) { return std::accumulate(alpha.begin(), alpha.end(), 0); }

double factorial_of(std::span<const int> alpha) {
  double f = 1.0;
  for (int a : alpha) {
    for (int k = 2; k <= a; ++k) f *= k;
  }
  return f;
}

}  // namespace

JetLayout::JetLayout(int vars, int order) : vars_(vars), order_(order) {
  for (int k = 0; k <= order; ++k) {
    append_degree(vars, k, indices_);
    degree_end_.push_back(indices_.size());
  }

  std::map<MultiIndex, std::uint32_t> lookup;
  for (std::size_t i = 0; i < indices_.size(); ++i) lookup.emplace(indices_[i], static_cast<std::uint32_t>(i));

  MultiIndex sum(static_cast<std::size_t>(vars));
  for (std::size_t i = 0; i < indices_.size(); ++i) {
    const int di = total_degree(indices_[i]);
    for (std::size_t j = 0; j < degree_end_[static_cast<std::size_t>(order - di)]; ++j) {
      for (std::size_t v = 0; v < sum.size(); ++v) sum[v] = indices_[i][v] + indices_[j][v];
      products_.push_back({static_cast<std::uint32_t>(i), static_cast<std::uint32_t>(j), lookup.at(sum)});
    }
  }

  if (order > 0) {
    const std::size_t lower = degree_end_[static_cast<std::size_t>(order - 1)];
    derivatives_.resize(static_cast<std::size_t>(vars));
    for (int v = 0; v < vars; ++v) {
      auto& table = derivatives_[static_cast<std::size_t>(v)];
      table.reserve(lower);
      for (std::size_t j = 0; j < lower; ++j) {
        MultiIndex raised = indices_[j];
        raised[static_cast<std::size_t>(v)] += 1;
        table.push_back({lookup.at(raised), static_cast<double>(raised[static_cast<std::size_t>(v)])});
      }
    }
  }
}

const JetLayout& JetLayout::get(int vars, int order) {
  if (vars < 0 || order < 0 || order > kMaxJetOrder) {
    throw JetError("jet shape out of range: vars=" + std::to_string(vars) + " order=" + std::to_string(order));
  }
  static std::mutex mutex;
  static std::map<std::pair<int, int>, std::unique_ptr<const JetLayout>> registry;
  std::lock_guard lock(mutex);
  auto& slot = registry[{vars, order}];
  if (!slot) slot.reset(new JetLayout(vars, order));
  return *slot;
}

std::size_t JetLayout::position(std::span<const int> alpha) const {
  if (static_cast<int>(alpha.size()) != vars_) {
    throw JetError("multi-index has " + std::to_string(alpha.size()) + " entries, expected " + std::to_string(vars_));
  }
  int degree = 0;
  for (int a : alpha) {
    if (a < 0) throw JetError("negative multi-index entry");
    degree += a;
  }
  if (degree > order_) {
    throw JetError("multi-index degree " + std::to_string(degree) + " exceeds jet order " + std::to_string(order_));
  }
  const std::size_t begin = degree == 0 ? 0 : degree_end_[static_cast<std::size_t>(degree - 1)];
  for (std::size_t i = begin; i < degree_end_[static_cast<std::size_t>(degree)]; ++i) {
    if (std::equal(alpha.begin(), alpha.end(), indices_[i].begin())) return i;
  }
  throw JetError("multi-index not found");  // unreachable for valid input
}

std::span<const JetLayout::DerivativeTerm> JetLayout::derivative_terms(int var) const {
  if (var < 0 || var >= vars_) throw JetError("derivative variable " + std::to_string(var) + " out of range");
  if (order_ == 0) throw JetError("cannot differentiate an order-0 jet");
  return derivatives_[static_cast<std::size_t>(var)];
}

Jet::Jet() : layout_(&JetLayout::get(0, 0)), coeffs_(1, 0.0) {}

Jet Jet::constant(double value, int vars, int order) {
  const auto& layout = JetLayout::get(vars, order);
  std::vector<double> c(layout.size(), 0.0);
  c[0] = value;
  return Jet(&layout, std::move(c));
}

Jet Jet::variable(int index, double value, int vars, int order) {
  if (index < 0 || index >= vars) {
    throw JetError("variable index " + std::to_string(index) + " out of range for " + std::to_string(vars) +
                   " variables");
  }
  Jet j = constant(value, vars, order);
  if (order > 0) j.coeffs_[1 + static_cast<std::size_t>(index)] = 1.0;
  return j;
}

double Jet::coefficient(std::span<const int> alpha) const { return coeffs_[layout_->position(alpha)]; }

double Jet::partial(std::span<const int> alpha) const { return factorial_of(alpha) * coefficient(alpha); }

Jet Jet::derivative(int var) const {
  const auto terms = layout_->derivative_terms(var);
  const auto& lower = JetLayout::get(vars(), order() - 1);
  std::vector<double> c(lower.size());
  for (std::size_t j = 0; j < c.size(); ++j) c[j] = terms[j].factor * coeffs_[terms[j].source];
  return Jet(&lower, std::move(c));
}

Jet Jet::truncated(int new_order) const {
  if (new_order > order()) {
    throw JetError("cannot raise jet order from " + std::to_string(order()) + " to " + std::to_string(new_order));
  }
  const auto& lower = JetLayout::get(vars(), new_order);
  return Jet(&lower, std::vector<double>(coeffs_.begin(), coeffs_.begin() + static_cast<std::ptrdiff_t>(lower.size())));
}

Jet Jet::constant_like(double value) const { return constant(value, vars(), order()); }

void Jet::require_same_shape(const Jet& other, const char* op) const {
  if (layout_ != other.layout_) {
    throw JetError(std::string("jet shape mismatch in '") + op + "': (" + std::to_string(vars()) + "," +
                   std::to_string(order()) + ") vs (" + std::to_string(other.vars()) + "," +
                   std::to_string(other.order()) + ")");
  }
}

Jet& Jet::operator+=(const Jet& rhs) {
  require_same_shape(rhs, "+");
  for (std::size_t i = 0; i < coeffs_.size(); ++i) coeffs_[i] += rhs.coeffs_[i];
  return *this;
}

Jet& Jet::operator-=(const Jet& rhs) {
  require_same_shape(rhs, "-");
  for (std::size_t i = 0; i < coeffs_.size(); ++i) coeffs_[i] -= rhs.coeffs_[i];
  return *this;
}

Jet& Jet::operator*=(const Jet& rhs) { return *this = *this * rhs; }
Jet& Jet::operator/=(const Jet& rhs) { return *this = *this / rhs; }

Jet& Jet::operator+=(double rhs) {
  coeffs_[0] += rhs;
  return *this;
}
Jet& Jet::operator-=(double rhs) {
  coeffs_[0] -= rhs;
  return *this;
}
Jet& Jet::operator*=(double rhs) {
  for (double& c : coeffs_) c *= rhs;
  return *this;
}
Jet& Jet::operator/=(double rhs) {
  if (rhs == 0.0) throw DomainError("jet division by zero scalar");
  for (double& c : coeffs_) c /= rhs;
  return *this;
}

Jet operator-(Jet a) {
  for (double& c : a.coeffs_) c = -c;
  return a;
}

Jet operator*(const Jet& a, const Jet& b) {
  a.require_same_shape(b, "*");
  std::vector<double> c(a.coeffs_.size(), 0.0);
  for (const auto& t : a.layout_->product_terms()) c[t.out] += a.coeffs_[t.lhs] * b.coeffs_[t.rhs];
  return Jet(a.layout_, std::move(c));
}

namespace {

std::vector<double> reciprocal_series(double b, int order) {
  if (b == 0.0) throw DomainError("jet division by a value of zero");
  std::vector<double> t(static_cast<std::size_t>(order) + 1);
  double term = 1.0 / b;
  for (auto& x : t) {
    x = term;
    term *= -1.0 / b;
  }
  return t;
}

}  // namespace

Jet operator/(const Jet& a, const Jet& b) {
  a.require_same_shape(b, "/");
  Jet q = a * compose(b, reciprocal_series(b.value(), b.order()));
  q.coeffs_[0] = a.value() / b.value();  // correctly rounded, matching plain division
  return q;
}

Jet operator-(double a, const Jet& b) { return -b + a; }

Jet operator/(double a, const Jet& b) {
  Jet q = compose(b, reciprocal_series(b.value(), b.order())) * a;
  q.coeffs_[0] = a / b.value();
  return q;
}

Jet compose(const Jet& a, std::span<const double> taylor) {
  const int order = a.order();
  if (static_cast<int>(taylor.size()) < order + 1) throw JetError("Taylor series shorter than jet order");
  Jet h = a;
  h.coeffs_[0] = 0.0;
  // Horner in the nilpotent increment h.
  Jet result = a.constant_like(taylor[static_cast<std::size_t>(order)]);
  for (int k = order - 1; k >= 0; --k) {
    result = result * h;
    result.coeffs_[0] += taylor[static_cast<std::size_t>(k)];
  }
  return result;
}

Jet sin(const Jet& a) {
  const double s = std::sin(a.value()), c = std::cos(a.value());
  const double t[] = {s, c, -s / 2.0, -c / 6.0};
  return compose(a, t);
}

Jet cos(const Jet& a) {
  const double s = std::sin(a.value()), c = std::cos(a.value());
  const double t[] = {c, -s, -c / 2.0, s / 6.0};
  return compose(a, t);
}

Jet tan(const Jet& a) {
  if (std::cos(a.value()) == 0.0) throw DomainError("tan at a pole");
  const double v = std::tan(a.value());
  const double sec2 = 1.0 + v * v;
  const double t[] = {v, sec2, v * sec2, sec2 * (1.0 + 3.0 * v * v) / 3.0};
  return compose(a, t);
}

Jet sinh(const Jet& a) {
  const double s = std::sinh(a.value()), c = std::cosh(a.value());
  const double t[] = {s, c, s / 2.0, c / 6.0};
  return compose(a, t);
}

Jet cosh(const Jet& a) {
  const double s = std::sinh(a.value()), c = std::cosh(a.value());
  const double t[] = {c, s, c / 2.0, s / 6.0};
  return compose(a, t);
}

Jet exp(const Jet& a) {
  const double e = std::exp(a.value());
  const double t[] = {e, e, e / 2.0, e / 6.0};
  return compose(a, t);
}

Jet log(const Jet& a) {
  const double x = a.value();
  if (!(x > 0.0)) throw DomainError("log of nonpositive value " + std::to_string(x));
  const double t[] = {std::log(x), 1.0 / x, -1.0 / (2.0 * x * x), 1.0 / (3.0 * x * x * x)};
  return compose(a, t);
}

Jet sqrt(const Jet& a) {
  const double x = a.value();
  if (!(x > 0.0)) throw DomainError("sqrt of nonpositive value " + std::to_string(x));
  const double r = std::sqrt(x);
  const double t[] = {r, 1.0 / (2.0 * r), -1.0 / (8.0 * r * x), 1.0 / (16.0 * r * x * x)};
  return compose(a, t);
}

Jet pow(const Jet& a, double e) {
  const double x = a.value();
  if (!(x > 0.0)) throw DomainError("real power of nonpositive value " + std::to_string(x));
  const double t[] = {std::pow(x, e), e * std::pow(x, e - 1.0), e * (e - 1.0) / 2.0 * std::pow(x, e - 2.0),
                      e * (e - 1.0) * (e - 2.0) / 6.0 * std::pow(x, e - 3.0)};
  return compose(a, t);
}

Jet powi(const Jet& a, int e) {
  if (e < 0) return 1.0 / powi(a, -e);
  Jet result = a.constant_like(1.0);
  Jet base = a;
  while (e > 0) {
    if (e & 1) result *= base;
    e >>= 1;
    if (e > 0) base *= base;
  }
  return result;
}

}  // namespace lift

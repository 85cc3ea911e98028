#pragma once

#include <cmath>
#include <cstddef>
#include <map>
#include <memory>
#include <set>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "lift/errors.hpp"
#include "lift/jets.hpp"

namespace lift {

class ParseError : public std::runtime_error {
 public:
  ParseError(std::size_t offset, const std::string& what)
      : std::runtime_error("offset " + std::to_string(offset) + ": " + what), offset_(offset) {}
  /// Byte offset into the source text.
  std::size_t offset() const { return offset_; }

 private:
  std::size_t offset_;
};

enum class UnaryFn { Sin, Cos, Tan, Sinh, Cosh, Exp, Log, Sqrt, Neg };
enum class BinaryOp { Add, Sub, Mul, Div, Pow };

struct ExprNode {
  enum class Kind { Constant, Variable, Unary, Binary };

  Kind kind = Kind::Constant;
  double value = 0.0;   // Constant
  int var = -1;         // Variable: index into the declared variable list
  std::string name;     // Variable
  UnaryFn fn = UnaryFn::Neg;
  BinaryOp op = BinaryOp::Add;
  std::shared_ptr<const ExprNode> lhs;  // Unary operand, Binary left / Pow base
  std::shared_ptr<const ExprNode> rhs;  // Binary right / Pow exponent (variable-free)
};

/// Immutable scalar expression over a declared list of variables.
///
/// Grammar, loosest to tightest: `+ -` (left), `* /` (left), unary `-`,
/// `^` (right; the exponent may not mention variables), then atoms: numbers,
/// variables, `( expr )`, and `f(expr)` for f in sin cos tan sinh cosh exp log sqrt.
class Expr {
 public:
  using NodePtr = std::shared_ptr<const ExprNode>;

  static Expr parse(std::string_view text, std::span<const std::string> vars);
  static Expr parse(std::string_view text, std::initializer_list<std::string> vars) {
    const std::vector<std::string> v(vars);
    return parse(text, v);
  }
  static Expr constant(double value, std::vector<std::string> vars = {});

  const ExprNode& root() const { return *root_; }
  const std::vector<std::string>& vars() const { return *vars_; }

  std::set<std::string> free_vars() const;
  /// Canonical text with minimal parentheses; parse(to_string()) rebuilds the same tree.
  std::string to_string() const;
  static std::string to_string(const ExprNode& node);

  /// Evaluates over any ring with the elementary function set (double, Jet).
  /// `values[i]` binds `vars()[i]`.
  template <class T>
  T eval(std::span<const T> values) const;
  template <class T>
  T eval(const std::vector<T>& values) const {
    return eval(std::span<const T>(values));
  }
  template <class T>
  T eval(const std::map<std::string, T>& env) const;

 private:
  Expr(NodePtr root, std::shared_ptr<const std::vector<std::string>> vars)
      : root_(std::move(root)), vars_(std::move(vars)) {}

  NodePtr root_;
  std::shared_ptr<const std::vector<std::string>> vars_;
};

namespace detail {

inline double ring_value(double x) { return x; }
inline double ring_value(const Jet& x) { return x.value(); }
inline double make_like(double, double c) { return c; }
inline Jet make_like(const Jet& proto, double c) { return proto.constant_like(c); }

template <class T>
T int_power(const T& base, long long e) {
  if (e < 0) {
    T positive = int_power(base, -e);
    return make_like(base, 1.0) / positive;
  }
  T result = make_like(base, 1.0);
  T b = base;
  while (e > 0) {
    if (e & 1) result = result * b;
    e >>= 1;
    if (e > 0) b = b * b;
  }
  return result;
}

inline double real_power(double base, double e) { return std::pow(base, e); }
inline Jet real_power(const Jet& base, double e) { return pow(base, e); }

[[noreturn]] inline void domain_failure(const ExprNode& node, const std::string& what) {
  throw DomainError(what + " in subexpression '" + Expr::to_string(node) + "'");
}

template <class T>
T eval_node(const ExprNode& node, std::span<const T> values, const T& proto) {
  using std::cos;
  using std::cosh;
  using std::exp;
  using std::log;
  using std::sin;
  using std::sinh;
  using std::sqrt;
  using std::tan;
  switch (node.kind) {
    case ExprNode::Kind::Constant:
      return make_like(proto, node.value);
    case ExprNode::Kind::Variable:
      return values[static_cast<std::size_t>(node.var)];
    case ExprNode::Kind::Unary: {
      T a = eval_node(*node.lhs, values, proto);
      const double v = ring_value(a);
      switch (node.fn) {
        case UnaryFn::Neg: return -a;
        case UnaryFn::Sin: return sin(a);
        case UnaryFn::Cos: return cos(a);
        case UnaryFn::Tan:
          if (std::cos(v) == 0.0) domain_failure(node, "tan at a pole");
          return tan(a);
        case UnaryFn::Sinh: return sinh(a);
        case UnaryFn::Cosh: return cosh(a);
        case UnaryFn::Exp: return exp(a);
        case UnaryFn::Log:
          if (!(v > 0.0)) domain_failure(node, "log of nonpositive value " + std::to_string(v));
          return log(a);
        case UnaryFn::Sqrt:
          if (!(v > 0.0)) domain_failure(node, "sqrt of nonpositive value " + std::to_string(v));
          return sqrt(a);
      }
      break;
    }
    case ExprNode::Kind::Binary: {
      if (node.op == BinaryOp::Pow) {
        T base = eval_node(*node.lhs, values, proto);
        const double e = eval_node<double>(*node.rhs, std::span<const double>(), 0.0);
        if (std::isfinite(e) && e == std::trunc(e) && std::abs(e) <= 1 << 20) {
          if (e < 0 && ring_value(base) == 0.0) domain_failure(node, "division by zero");
          return int_power(base, static_cast<long long>(e));
        }
        if (!(ring_value(base) > 0.0)) {
          domain_failure(node, "real power of nonpositive base " + std::to_string(ring_value(base)));
        }
        return real_power(base, e);
      }
      T a = eval_node(*node.lhs, values, proto);
      T b = eval_node(*node.rhs, values, proto);
      switch (node.op) {
        case BinaryOp::Add: return a + b;
        case BinaryOp::Sub: return a - b;
        case BinaryOp::Mul: return a * b;
        case BinaryOp::Div:
          if (ring_value(b) == 0.0) domain_failure(node, "division by zero");
          return a / b;
        case BinaryOp::Pow: break;
      }
      break;
    }
  }
  throw std::logic_error("corrupt expression node");
}

}  // namespace detail

template <class T>
T Expr::eval(std::span<const T> values) const {
  if (values.size() != vars_->size()) {
    throw ShapeError("expression over " + std::to_string(vars_->size()) + " variables evaluated with " +
                     std::to_string(values.size()) + " values");
  }
  const T proto = values.empty() ? T{} : detail::make_like(values.front(), 0.0);
  return detail::eval_node(*root_, values, proto);
}

template <class T>
T Expr::eval(const std::map<std::string, T>& env) const {
  const std::set<std::string> needed = free_vars();
  std::vector<T> values;
  values.reserve(vars_->size());
  const T* proto = env.empty() ? nullptr : &env.begin()->second;
  for (const auto& name : *vars_) {
    auto it = env.find(name);
    if (it != env.end()) {
      values.push_back(it->second);
    } else if (needed.count(name)) {
      throw std::invalid_argument("unbound variable '" + name + "'");
    } else {
      values.push_back(proto ? detail::make_like(*proto, 0.0) : T{});
    }
  }
  return eval(std::span<const T>(values));
}

}  // namespace lift

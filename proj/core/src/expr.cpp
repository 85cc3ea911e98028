#include "lift/expr.hpp"

#include <cctype>
#include <charconv>
#include <cstdlib>
#include <functional>

namespace lift {
namespace {

struct FunctionName {
  std::string_view name;
  UnaryFn fn;
};

constexpr FunctionName kFunctions[] = {
    {"sin", UnaryFn::Sin},   {"cos", UnaryFn::Cos}, {"tan", UnaryFn::Tan}, {"sinh", UnaryFn::Sinh},
    {"cosh", UnaryFn::Cosh}, {"exp", UnaryFn::Exp}, {"log", UnaryFn::Log}, {"sqrt", UnaryFn::Sqrt},
};

const FunctionName* find_function(std::string_view name) {
  for (const auto& f : kFunctions) {
    if (f.name == name) return &f;
  }
  return nullptr;
}

std::string_view function_name(UnaryFn fn) {
  for (const auto& f : kFunctions) {
    if (f.fn == fn) return f.name;
  }
  return "-";
}

using NodePtr = Expr::NodePtr;

NodePtr make_constant(double v) {
  auto n = std::make_shared<ExprNode>();
  n->kind = ExprNode::Kind::Constant;
  n->value = v;
  return n;
}

NodePtr make_unary(UnaryFn fn, NodePtr a) {
  auto n = std::make_shared<ExprNode>();
  n->kind = ExprNode::Kind::Unary;
  n->fn = fn;
  n->lhs = std::move(a);
  return n;
}

NodePtr make_binary(BinaryOp op, NodePtr a, NodePtr b) {
  auto n = std::make_shared<ExprNode>();
  n->kind = ExprNode::Kind::Binary;
  n->op = op;
  n->lhs = std::move(a);
  n->rhs = std::move(b);
  return n;
}

bool mentions_variables(const ExprNode& n) {
  switch (n.kind) {
    case ExprNode::Kind::Constant: return false;
    case ExprNode::Kind::Variable: return true;
    case ExprNode::Kind::Unary: return mentions_variables(*n.lhs);
    case ExprNode::Kind::Binary: return mentions_variables(*n.lhs) || mentions_variables(*n.rhs);
  }
  return false;
}

class Parser {
 public:
  Parser(std::string_view text, std::span<const std::string> vars) : text_(text), vars_(vars) {}

  NodePtr parse() {
    skip_space();
    if (pos_ == text_.size()) throw ParseError(pos_, "empty expression");
    NodePtr e = parse_sum();
    skip_space();
    if (pos_ != text_.size()) throw ParseError(pos_, std::string("unexpected '") + text_[pos_] + "'");
    return e;
  }

 private:
  void skip_space() {
    while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
  }

  bool accept(char c) {
    skip_space();
    if (pos_ < text_.size() && text_[pos_] == c) {
      ++pos_;
      return true;
    }
    return false;
  }

  NodePtr parse_sum() {
    NodePtr lhs = parse_product();
    for (;;) {
      if (accept('+')) {
        lhs = make_binary(BinaryOp::Add, lhs, parse_product());
      } else if (accept('-')) {
        lhs = make_binary(BinaryOp::Sub, lhs, parse_product());
      } else {
        return lhs;
      }
    }
  }

  NodePtr parse_product() {
    NodePtr lhs = parse_unary();
    for (;;) {
      if (accept('*')) {
        lhs = make_binary(BinaryOp::Mul, lhs, parse_unary());
      } else if (accept('/')) {
        lhs = make_binary(BinaryOp::Div, lhs, parse_unary());
      } else {
        return lhs;
      }
    }
  }

  NodePtr parse_unary() {
    if (accept('-')) return make_unary(UnaryFn::Neg, parse_unary());
    return parse_power();
  }

  NodePtr parse_power() {
    NodePtr base = parse_atom();
    skip_space();
    const std::size_t at = pos_;
    if (!accept('^')) return base;
    NodePtr exponent = parse_unary();
    if (mentions_variables(*exponent)) throw ParseError(at, "exponent must not depend on variables");
    return make_binary(BinaryOp::Pow, base, exponent);
  }

  NodePtr parse_atom() {
    skip_space();
    if (pos_ == text_.size()) throw ParseError(pos_, "unexpected end of input");
    const char c = text_[pos_];
    if (c == '(') {
      ++pos_;
      NodePtr inner = parse_sum();
      if (!accept(')')) throw ParseError(pos_, "expected ')'");
      return inner;
    }
    if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') return parse_number();
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') return parse_identifier();
    throw ParseError(pos_, std::string("unexpected '") + c + "'");
  }

  NodePtr parse_number() {
    const std::size_t start = pos_;
    auto digits = [&] {
      std::size_t n = 0;
      while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) ++pos_, ++n;
      return n;
    };
    std::size_t mantissa = digits();
    if (pos_ < text_.size() && text_[pos_] == '.') {
      ++pos_;
      mantissa += digits();
    }
    if (mantissa == 0) throw ParseError(start, "malformed number");
    if (pos_ < text_.size() && (text_[pos_] == 'e' || text_[pos_] == 'E')) {
      ++pos_;
      if (pos_ < text_.size() && (text_[pos_] == '+' || text_[pos_] == '-')) ++pos_;
      if (digits() == 0) throw ParseError(pos_, "malformed exponent in number");
    }
    double value = 0.0;
    const auto res = std::from_chars(text_.data() + start, text_.data() + pos_, value);
    if (res.ec != std::errc() || res.ptr != text_.data() + pos_) throw ParseError(start, "malformed number");
    return make_constant(value);
  }

  NodePtr parse_identifier() {
    const std::size_t start = pos_;
    while (pos_ < text_.size() && (std::isalnum(static_cast<unsigned char>(text_[pos_])) || text_[pos_] == '_')) {
      ++pos_;
    }
    const std::string_view name = text_.substr(start, pos_ - start);
    if (const FunctionName* f = find_function(name)) {
      if (!accept('(')) throw ParseError(pos_, "function '" + std::string(name) + "' requires parentheses");
      std::vector<NodePtr> args;
      skip_space();
      if (!accept(')')) {
        args.push_back(parse_sum());
        while (accept(',')) args.push_back(parse_sum());
        if (!accept(')')) throw ParseError(pos_, "expected ')'");
      }
      if (args.size() != 1) {
        throw ParseError(start, "function '" + std::string(name) + "' takes 1 argument, got " +
                                    std::to_string(args.size()));
      }
      return make_unary(f->fn, args.front());
    }
    for (std::size_t i = 0; i < vars_.size(); ++i) {
      if (vars_[i] == name) {
        auto n = std::make_shared<ExprNode>();
        n->kind = ExprNode::Kind::Variable;
        n->var = static_cast<int>(i);
        n->name = std::string(name);
        return n;
      }
    }
    throw ParseError(start, "unknown variable '" + std::string(name) + "'");
  }

  std::string_view text_;
  std::span<const std::string> vars_;
  std::size_t pos_ = 0;
};

// Binding strength used by the printer.
enum Level : int { kSum = 1, kProduct = 2, kUnary = 3, kPower = 4, kAtom = 5 };

int level_of(const ExprNode& n) {
  switch (n.kind) {
    case ExprNode::Kind::Constant: return n.value < 0 ? kUnary : kAtom;
    case ExprNode::Kind::Variable: return kAtom;
    case ExprNode::Kind::Unary: return n.fn == UnaryFn::Neg ? kUnary : kAtom;
    case ExprNode::Kind::Binary:
      switch (n.op) {
        case BinaryOp::Add:
        case BinaryOp::Sub: return kSum;
        case BinaryOp::Mul:
        case BinaryOp::Div: return kProduct;
        case BinaryOp::Pow: return kPower;
      }
  }
  return kAtom;
}

void print(const ExprNode& n, int min_level, std::string& out) {
  const bool parens = level_of(n) < min_level;
  if (parens) out += '(';
  switch (n.kind) {
    case ExprNode::Kind::Constant: {
      char buf[64];
      const auto res = std::to_chars(buf, buf + sizeof buf, n.value);
      out.append(buf, res.ptr);
      break;
    }
    case ExprNode::Kind::Variable:
      out += n.name;
      break;
    case ExprNode::Kind::Unary:
      if (n.fn == UnaryFn::Neg) {
        out += '-';
        print(*n.lhs, kUnary, out);
      } else {
        out += function_name(n.fn);
        out += '(';
        print(*n.lhs, kSum, out);
        out += ')';
      }
      break;
    case ExprNode::Kind::Binary:
      switch (n.op) {
        case BinaryOp::Add:
        case BinaryOp::Sub:
          print(*n.lhs, kSum, out);
          out += n.op == BinaryOp::Add ? " + " : " - ";
          print(*n.rhs, kProduct, out);
          break;
        case BinaryOp::Mul:
        case BinaryOp::Div:
          print(*n.lhs, kProduct, out);
          out += n.op == BinaryOp::Mul ? "*" : "/";
          print(*n.rhs, kUnary, out);
          break;
        case BinaryOp::Pow:
          print(*n.lhs, kAtom, out);
          out += '^';
          print(*n.rhs, kUnary, out);
          break;
      }
      break;
  }
  if (parens) out += ')';
}

void collect_vars(const ExprNode& n, std::set<std::string>& out) {
  switch (n.kind) {
    case ExprNode::Kind::Constant: break;
    case ExprNode::Kind::Variable: out.insert(n.name); break;
    case ExprNode::Kind::Unary: collect_vars(*n.lhs, out); break;
    case ExprNode::Kind::Binary:
      collect_vars(*n.lhs, out);
      collect_vars(*n.rhs, out);
      break;
  }
}

}  // namespace

Expr Expr::parse(std::string_view text, std::span<const std::string> vars) {
  auto declared = std::make_shared<const std::vector<std::string>>(vars.begin(), vars.end());
  NodePtr root = Parser(text, *declared).parse();
  return Expr(std::move(root), std::move(declared));
}

Expr Expr::constant(double value, std::vector<std::string> vars) {
  return Expr(make_constant(value), std::make_shared<const std::vector<std::string>>(std::move(vars)));
}

std::set<std::string> Expr::free_vars() const {
  std::set<std::string> out;
  collect_vars(*root_, out);
  return out;
}

std::string Expr::to_string(const ExprNode& node) {
  std::string out;
  print(node, kSum, out);
  return out;
}

std::string Expr::to_string() const { return to_string(*root_); }

}  // namespace lift

#pragma once

// Expression language for metric components, map components and scalar fields.
//
//   expr    := term (('+' | '-') term)*
//   term    := unary (('*' | '/') unary)*
//   unary   := '-' unary | power
//   power   := primary ('^' unary)?          right-associative
//   primary := number | 'pi' | 'x' index | func '(' args ')' | '(' expr ')'
//
// Unary minus binds looser than '^', so "-x1^2" is -(x1^2) and "2^3^2" is 512.
// Implicit multiplication is not accepted.

#include <cmath>
#include <cstddef>
#include <memory>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "symphonic/autodiff.hpp"
#include "symphonic/errors.hpp"

namespace symphonic::expr {

enum class NodeKind { constant, variable, add, sub, mul, div, pow, neg, call };
enum class Function { sin, cos, tan, exp, log, sqrt, abs, atan2 };

const char* function_name(Function fn);
std::size_t function_arity(Function fn);

struct Node {
  NodeKind kind = NodeKind::constant;
  double value = 0.0;         // constant
  bool named_pi = false;      // constant spelled "pi"
  std::size_t index = 0;      // variable, 0-based (x1 -> 0)
  Function fn = Function::sin;
  std::vector<std::shared_ptr<const Node>> args;
  std::size_t offset = 0;     // byte offset of the node in its source text
};

using NodePtr = std::shared_ptr<const Node>;

NodePtr make_constant(double value, std::size_t offset = 0);
NodePtr make_variable(std::size_t index, std::size_t offset = 0);
NodePtr make_unary(NodeKind kind, NodePtr arg, std::size_t offset = 0);
NodePtr make_binary(NodeKind kind, NodePtr lhs, NodePtr rhs, std::size_t offset = 0);
NodePtr make_call(Function fn, std::vector<NodePtr> args, std::size_t offset = 0);

/// Counters for evaluation events that are not errors.
struct EvalDiagnostics {
  /// abs() evaluated at exactly 0 with a live derivative; derivative set to 0.
  std::size_t abs_kinks = 0;
};

/// Immutable parsed expression in the variables x1..x{arity}.
class Expression {
public:
  Expression() = default;
  Expression(NodePtr root, std::size_t arity, std::string source = {});

  static Expression constant(double value, std::size_t arity);
  static Expression variable(std::size_t index, std::size_t arity);

  std::size_t arity() const { return arity_; }
  const Node& root() const { return *root_; }
  const NodePtr& root_ptr() const { return root_; }
  const std::string& source() const { return source_; }

  /// Evaluates on plain doubles, Dual or HyperDual scalars through one code path.
  template <class T>
  T evaluate(std::span<const T> point, EvalDiagnostics* diag = nullptr) const;

  template <class T>
  T operator()(std::span<const T> point) const { return evaluate(point); }

  /// Fully parenthesised text that parses back to the same tree.
  std::string to_string() const;

private:
  NodePtr root_;
  std::size_t arity_ = 0;
  std::string source_;
};

Expression parse(std::string_view src, std::size_t arity);

std::string print(const Node& node);

bool structurally_equal(const Node& a, const Node& b);

/// Largest variable index used plus one (0 for closed expressions).
std::size_t variables_used(const Node& node);

// --- evaluation ------------------------------------------------------------

namespace detail {

[[noreturn]] void domain_failure(const Node& node, const std::string& what, double arg);

template <class T>
T eval(const Node& node, std::span<const T> x, EvalDiagnostics* diag) {
  using std::abs;
  using std::atan2;
  using std::cos;
  using std::exp;
  using std::log;
  using std::pow;
  using std::sin;
  using std::sqrt;
  using std::tan;

  switch (node.kind) {
  case NodeKind::constant:
    return T(node.value);
  case NodeKind::variable:
    return x[node.index];
  case NodeKind::neg:
    return -eval(*node.args[0], x, diag);
  case NodeKind::add:
    return eval(*node.args[0], x, diag) + eval(*node.args[1], x, diag);
  case NodeKind::sub:
    return eval(*node.args[0], x, diag) - eval(*node.args[1], x, diag);
  case NodeKind::mul:
    return eval(*node.args[0], x, diag) * eval(*node.args[1], x, diag);
  case NodeKind::div: {
    const T den = eval(*node.args[1], x, diag);
    if (value_of(den) == 0.0) domain_failure(node, "division by zero", 0.0);
    return eval(*node.args[0], x, diag) / den;
  }
  case NodeKind::pow: {
    const T base = eval(*node.args[0], x, diag);
    const T ex = eval(*node.args[1], x, diag);
    const double b = value_of(base);
    if (is_constant(ex)) {
      const double c = value_of(ex);
      if (b < 0.0 && c != std::floor(c))
        domain_failure(node, "negative base with non-integer exponent", b);
      if (b == 0.0 && c < 0.0) domain_failure(node, "zero base with negative exponent", b);
      if constexpr (std::is_same_v<T, double>) {
        return std::pow(b, c);
      } else {
        return pow(base, c);
      }
    }
    if (b <= 0.0) domain_failure(node, "non-positive base with variable exponent", b);
    return pow(base, ex);
  }
  case NodeKind::call: {
    const T a = eval(*node.args[0], x, diag);
    const double av = value_of(a);
    switch (node.fn) {
    case Function::sin:
      return sin(a);
    case Function::cos:
      return cos(a);
    case Function::tan:
      if (cos(av) == 0.0) domain_failure(node, "tan pole", av);
      return tan(a);
    case Function::exp:
      return exp(a);
    case Function::log:
      if (!(av > 0.0)) domain_failure(node, "log of non-positive argument", av);
      return log(a);
    case Function::sqrt:
      if (av < 0.0) domain_failure(node, "sqrt of negative argument", av);
      return sqrt(a);
    case Function::abs:
      if (av == 0.0 && !is_constant(a) && diag) ++diag->abs_kinks;
      return abs(a);
    case Function::atan2: {
      const T b = eval(*node.args[1], x, diag);
      if (av == 0.0 && value_of(b) == 0.0) domain_failure(node, "atan2(0, 0)", 0.0);
      return atan2(a, b);
    }
    }
    break;
  }
  }
  throw Error("expression node of unknown kind");
}

} // namespace detail

template <class T>
T Expression::evaluate(std::span<const T> point, EvalDiagnostics* diag) const {
  if (point.size() != arity_)
    throw ArgumentError("expression of arity " + std::to_string(arity_) + " evaluated at " +
                        std::to_string(point.size()) + " coordinates");
  return detail::eval(*root_, point, diag);
}

} // namespace symphonic::expr

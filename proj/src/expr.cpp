#include "symphonic/expr.hpp"

#include <algorithm>
#include <array>
#include <cctype>
#include <charconv>
#include <numbers>
#include <optional>

namespace symphonic::expr {

namespace {

struct FunctionEntry {
  const char* name;
  Function fn;
  std::size_t arity;
};

constexpr std::array<FunctionEntry, 8> kFunctions{{
    {"sin", Function::sin, 1},
    {"cos", Function::cos, 1},
    {"tan", Function::tan, 1},
    {"exp", Function::exp, 1},
    {"log", Function::log, 1},
    {"sqrt", Function::sqrt, 1},
    {"abs", Function::abs, 1},
    {"atan2", Function::atan2, 2},
}};

std::optional<FunctionEntry> lookup_function(std::string_view name) {
  for (const auto& e : kFunctions)
    if (name == e.name) return e;
  return std::nullopt;
}

const std::vector<std::string> kOperandStart{"number", "variable", "function", "pi", "(", "-"};

class Parser {
public:
  Parser(std::string_view src, std::size_t arity) : src_(src), arity_(arity) {}

  NodePtr parse_all() {
    auto node = parse_expr();
    skip_ws();
    if (pos_ != src_.size()) {
      throw ParseError("unexpected '" + std::string(1, src_[pos_]) + "' at offset " +
                           std::to_string(pos_),
                       pos_, {"+", "-", "*", "/", "^", "end of input"});
    }
    return node;
  }

private:
  void skip_ws() {
    while (pos_ < src_.size() && std::isspace(static_cast<unsigned char>(src_[pos_]))) ++pos_;
  }

  bool accept(char c) {
    skip_ws();
    if (pos_ < src_.size() && src_[pos_] == c) {
      ++pos_;
      return true;
    }
    return false;
  }

  [[noreturn]] void fail_expected(std::vector<std::string> expected) {
    std::string got = pos_ < src_.size() ? "'" + std::string(1, src_[pos_]) + "'" : "end of input";
    std::string list;
    for (std::size_t i = 0; i < expected.size(); ++i) list += (i ? ", " : "") + expected[i];
    throw ParseError("syntax error at offset " + std::to_string(pos_) + ": got " + got +
                         ", expected one of {" + list + "}",
                     pos_, std::move(expected));
  }

  NodePtr parse_expr() {
    auto lhs = parse_term();
    for (;;) {
      skip_ws();
      const std::size_t at = pos_;
      if (accept('+')) {
        lhs = make_binary(NodeKind::add, lhs, parse_term(), at);
      } else if (accept('-')) {
        lhs = make_binary(NodeKind::sub, lhs, parse_term(), at);
      } else {
        return lhs;
      }
    }
  }

  NodePtr parse_term() {
    auto lhs = parse_unary();
    for (;;) {
      skip_ws();
      const std::size_t at = pos_;
      if (accept('*')) {
        lhs = make_binary(NodeKind::mul, lhs, parse_unary(), at);
      } else if (accept('/')) {
        lhs = make_binary(NodeKind::div, lhs, parse_unary(), at);
      } else {
        return lhs;
      }
    }
  }

  NodePtr parse_unary() {
    skip_ws();
    const std::size_t at = pos_;
    if (accept('-')) return make_unary(NodeKind::neg, parse_unary(), at);
    return parse_power();
  }

  NodePtr parse_power() {
    auto base = parse_primary();
    skip_ws();
    const std::size_t at = pos_;
    if (accept('^')) return make_binary(NodeKind::pow, base, parse_unary(), at);
    return base;
  }

  NodePtr parse_primary() {
    skip_ws();
    if (pos_ >= src_.size()) fail_expected(kOperandStart);
    const std::size_t at = pos_;
    const char c = src_[pos_];

    if (c == '(') {
      ++pos_;
      auto inner = parse_expr();
      if (!accept(')')) fail_expected({")", "+", "-", "*", "/", "^"});
      return inner;
    }
    if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') return parse_number();
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
      std::size_t end = pos_;
      while (end < src_.size() &&
             (std::isalnum(static_cast<unsigned char>(src_[end])) || src_[end] == '_'))
        ++end;
      const std::string_view ident = src_.substr(pos_, end - pos_);
      pos_ = end;

      if (ident == "pi") {
        auto node = std::make_shared<Node>();
        node->kind = NodeKind::constant;
        node->value = std::numbers::pi;
        node->named_pi = true;
        node->offset = at;
        return node;
      }
      if (auto fn = lookup_function(ident)) return parse_call(*fn, at);
      if (ident.size() > 1 && ident[0] == 'x' &&
          std::all_of(ident.begin() + 1, ident.end(),
                      [](char d) { return std::isdigit(static_cast<unsigned char>(d)); })) {
        std::size_t index = 0;
        std::from_chars(ident.data() + 1, ident.data() + ident.size(), index);
        if (index < 1 || index > arity_) {
          throw ParseError("variable '" + std::string(ident) + "' at offset " +
                               std::to_string(at) + " is out of range for arity " +
                               std::to_string(arity_),
                           at, {"x1..x" + std::to_string(arity_)});
        }
        return make_variable(index - 1, at);
      }
      throw ParseError("unknown identifier '" + std::string(ident) + "' at offset " +
                           std::to_string(at),
                       at, {"variable", "function", "pi"});
    }
    fail_expected(kOperandStart);
  }

  NodePtr parse_call(const FunctionEntry& entry, std::size_t at) {
    if (!accept('(')) fail_expected({"("});
    std::vector<NodePtr> args;
    args.push_back(parse_expr());
    while (accept(',')) args.push_back(parse_expr());
    if (!accept(')')) fail_expected({")", ","});
    if (args.size() != entry.arity) {
      throw ParseError(std::string(entry.name) + " expects " + std::to_string(entry.arity) +
                           " argument(s), got " + std::to_string(args.size()),
                       at, {});
    }
    return make_call(entry.fn, std::move(args), at);
  }

  NodePtr parse_number() {
    const std::size_t at = pos_;
    std::size_t end = pos_;
    auto digits = [&] {
      const std::size_t start = end;
      while (end < src_.size() && std::isdigit(static_cast<unsigned char>(src_[end]))) ++end;
      return end > start;
    };
    bool any = digits();
    if (end < src_.size() && src_[end] == '.') {
      ++end;
      any = digits() || any;
    }
    if (!any) {
      pos_ = at;
      fail_expected({"number"});
    }
    if (end < src_.size() && (src_[end] == 'e' || src_[end] == 'E')) {
      std::size_t save = end;
      ++end;
      if (end < src_.size() && (src_[end] == '+' || src_[end] == '-')) ++end;
      if (!digits()) {
        pos_ = save + 1;
        fail_expected({"exponent digits"});
      }
    }
    double value = 0.0;
    const auto res = std::from_chars(src_.data() + at, src_.data() + end, value);
    if (res.ec != std::errc() || res.ptr != src_.data() + end) {
      pos_ = at;
      fail_expected({"number"});
    }
    pos_ = end;
    skip_ws();
    if (pos_ < src_.size() &&
        (std::isalpha(static_cast<unsigned char>(src_[pos_])) || src_[pos_] == '(')) {
      throw ParseError("implicit multiplication is not allowed at offset " + std::to_string(pos_),
                       pos_, {"*", "+", "-", "/", "^", "end of input"});
    }
    return make_constant(value, at);
  }

  std::string_view src_;
  std::size_t arity_;
  std::size_t pos_ = 0;
};

std::string format_constant(double v) {
  std::array<char, 64> buf{};
  const auto res = std::to_chars(buf.data(), buf.data() + buf.size(), v);
  return std::string(buf.data(), res.ptr);
}

} // namespace

const char* function_name(Function fn) {
  for (const auto& e : kFunctions)
    if (e.fn == fn) return e.name;
  return "?";
}

std::size_t function_arity(Function fn) {
  for (const auto& e : kFunctions)
    if (e.fn == fn) return e.arity;
  return 0;
}

NodePtr make_constant(double value, std::size_t offset) {
  auto node = std::make_shared<Node>();
  node->kind = NodeKind::constant;
  node->value = value;
  node->offset = offset;
  return node;
}

NodePtr make_variable(std::size_t index, std::size_t offset) {
  auto node = std::make_shared<Node>();
  node->kind = NodeKind::variable;
  node->index = index;
  node->offset = offset;
  return node;
}

NodePtr make_unary(NodeKind kind, NodePtr arg, std::size_t offset) {
  auto node = std::make_shared<Node>();
  node->kind = kind;
  node->args = {std::move(arg)};
  node->offset = offset;
  return node;
}

NodePtr make_binary(NodeKind kind, NodePtr lhs, NodePtr rhs, std::size_t offset) {
  auto node = std::make_shared<Node>();
  node->kind = kind;
  node->args = {std::move(lhs), std::move(rhs)};
  node->offset = offset;
  return node;
}

NodePtr make_call(Function fn, std::vector<NodePtr> args, std::size_t offset) {
  auto node = std::make_shared<Node>();
  node->kind = NodeKind::call;
  node->fn = fn;
  node->args = std::move(args);
  node->offset = offset;
  return node;
}

Expression::Expression(NodePtr root, std::size_t arity, std::string source)
    : root_(std::move(root)), arity_(arity), source_(std::move(source)) {
  if (!root_) throw ArgumentError("expression without a root node");
  if (variables_used(*root_) > arity_)
    throw ArgumentError("expression uses variables beyond its arity " + std::to_string(arity_));
  if (source_.empty()) source_ = print(*root_);
}

Expression Expression::constant(double value, std::size_t arity) {
  return Expression(make_constant(value), arity);
}

Expression Expression::variable(std::size_t index, std::size_t arity) {
  return Expression(make_variable(index), arity);
}

std::string Expression::to_string() const { return print(*root_); }

Expression parse(std::string_view src, std::size_t arity) {
  Parser parser(src, arity);
  return Expression(parser.parse_all(), arity, std::string(src));
}

std::string print(const Node& node) {
  switch (node.kind) {
  case NodeKind::constant:
    return node.named_pi ? "pi" : format_constant(node.value);
  case NodeKind::variable:
    return "x" + std::to_string(node.index + 1);
  case NodeKind::neg:
    return "(-" + print(*node.args[0]) + ")";
  case NodeKind::add:
    return "(" + print(*node.args[0]) + " + " + print(*node.args[1]) + ")";
  case NodeKind::sub:
    return "(" + print(*node.args[0]) + " - " + print(*node.args[1]) + ")";
  case NodeKind::mul:
    return "(" + print(*node.args[0]) + " * " + print(*node.args[1]) + ")";
  case NodeKind::div:
    return "(" + print(*node.args[0]) + " / " + print(*node.args[1]) + ")";
  case NodeKind::pow:
    return "(" + print(*node.args[0]) + " ^ " + print(*node.args[1]) + ")";
  case NodeKind::call: {
    std::string s = std::string(function_name(node.fn)) + "(";
    for (std::size_t i = 0; i < node.args.size(); ++i) s += (i ? ", " : "") + print(*node.args[i]);
    return s + ")";
  }
  }
  return "?";
}

bool structurally_equal(const Node& a, const Node& b) {
  if (a.kind != b.kind || a.args.size() != b.args.size()) return false;
  switch (a.kind) {
  case NodeKind::constant:
    if (a.value != b.value) return false;
    break;
  case NodeKind::variable:
    if (a.index != b.index) return false;
    break;
  case NodeKind::call:
    if (a.fn != b.fn) return false;
    break;
  default:
    break;
  }
  for (std::size_t i = 0; i < a.args.size(); ++i)
    if (!structurally_equal(*a.args[i], *b.args[i])) return false;
  return true;
}

std::size_t variables_used(const Node& node) {
  std::size_t n = node.kind == NodeKind::variable ? node.index + 1 : 0;
  for (const auto& arg : node.args) n = std::max(n, variables_used(*arg));
  return n;
}

namespace detail {

void domain_failure(const Node& node, const std::string& what, double arg) {
  std::string name;
  switch (node.kind) {
  case NodeKind::call:
    name = function_name(node.fn);
    break;
  case NodeKind::div:
    name = "/";
    break;
  case NodeKind::pow:
    name = "^";
    break;
  default:
    name = "?";
  }
  throw DomainError("domain error at node " + name + " (offset " + std::to_string(node.offset) +
                        "): " + what + " [argument " + format_constant(arg) + "]",
                    name, node.offset);
}

} // namespace detail

} // namespace symphonic::expr

#include <gtest/gtest.h>

#include <random>

#include "symphonic/errors.hpp"
#include "symphonic/expr.hpp"

using namespace symphonic;
using namespace symphonic::expr;

namespace {

double eval_at(const std::string& src, std::size_t arity, std::vector<double> x) {
  return parse(src, arity).evaluate(std::span<const double>(x));
}

// Plain recursive interpreter used as the reference for evaluate().
double reference(const Node& n, const std::vector<double>& x) {
  auto arg = [&](std::size_t i) { return reference(*n.args[i], x); };
  switch (n.kind) {
    case NodeKind::constant: return n.value;
    case NodeKind::variable: return x[n.index];
    case NodeKind::add: return arg(0) + arg(1);
    case NodeKind::sub: return arg(0) - arg(1);
    case NodeKind::mul: return arg(0) * arg(1);
    case NodeKind::div: return arg(0) / arg(1);
    case NodeKind::pow: return std::pow(arg(0), arg(1));
    case NodeKind::neg: return -arg(0);
    case NodeKind::call:
      switch (n.fn) {
        case Function::sin: return std::sin(arg(0));
        case Function::cos: return std::cos(arg(0));
        case Function::tan: return std::tan(arg(0));
        case Function::exp: return std::exp(arg(0));
        case Function::log: return std::log(arg(0));
        case Function::sqrt: return std::sqrt(arg(0));
        case Function::abs: return std::abs(arg(0));
        case Function::atan2: return std::atan2(arg(0), arg(1));
      }
  }
  return 0;
}

class RandomTree {
public:
  explicit RandomTree(std::uint64_t seed) : rng_(seed) {}

  NodePtr make(int depth) {
    std::uniform_int_distribution<int> pick(0, depth <= 0 ? 1 : 8);
    switch (pick(rng_)) {
      case 0: {
        std::uniform_real_distribution<double> v(0.0, 5.0);
        return make_constant(std::round(v(rng_) * 1000.0) / 1000.0);
      }
      case 1: return make_variable(std::uniform_int_distribution<std::size_t>(0, 2)(rng_));
      case 2: return make_binary(NodeKind::add, make(depth - 1), make(depth - 1));
      case 3: return make_binary(NodeKind::sub, make(depth - 1), make(depth - 1));
      case 4: return make_binary(NodeKind::mul, make(depth - 1), make(depth - 1));
      case 5: return make_binary(NodeKind::div, make(depth - 1), make(depth - 1));
      case 6: return make_binary(NodeKind::pow, make(depth - 1), make(depth - 1));
      case 7: return make_unary(NodeKind::neg, make(depth - 1));
      default: {
        const Function fns[] = {Function::sin, Function::cos, Function::tan, Function::exp,
                                Function::log, Function::sqrt, Function::abs, Function::atan2};
        const Function fn = fns[std::uniform_int_distribution<int>(0, 7)(rng_)];
        std::vector<NodePtr> args{make(depth - 1)};
        if (fn == Function::atan2) args.push_back(make(depth - 1));
        return make_call(fn, std::move(args));
      }
    }
  }

private:
  std::mt19937_64 rng_;
};

} // namespace

TEST(Parse, BuildsExpectedTree) {
  const auto e = parse("x1^2 + sin(x2)", 2);
  const Node& root = e.root();
  ASSERT_EQ(root.kind, NodeKind::add);
  EXPECT_EQ(root.args[0]->kind, NodeKind::pow);
  EXPECT_EQ(root.args[0]->args[0]->kind, NodeKind::variable);
  EXPECT_EQ(root.args[0]->args[0]->index, 0u);
  EXPECT_EQ(root.args[0]->args[1]->value, 2.0);
  EXPECT_EQ(root.args[1]->kind, NodeKind::call);
  EXPECT_EQ(root.args[1]->fn, Function::sin);
}

TEST(Parse, PoincareFactor) {
  const auto e = parse("4/(1 - x1^2 - x2^2)^2", 2);
  EXPECT_EQ(e.root().kind, NodeKind::div);
  EXPECT_DOUBLE_EQ(eval_at("4/(1 - x1^2 - x2^2)^2", 2, {0.0, 0.0}), 4.0);
}

TEST(Parse, TrailingOperatorReportsOffset) {
  try {
    parse("x3 +", 3);
    FAIL() << "expected a parse error";
  } catch (const ParseError& e) {
    EXPECT_EQ(e.offset(), 4u);
    EXPECT_FALSE(e.expected().empty());
  }
}

TEST(Parse, Errors) {
  EXPECT_THROW(parse("x4", 3), ParseError);
  EXPECT_THROW(parse("x0", 3), ParseError);
  EXPECT_THROW(parse("foo(x1)", 1), ParseError);
  EXPECT_THROW(parse("2x1", 1), ParseError);
  EXPECT_THROW(parse("sin(x1, x1)", 1), ParseError);
  EXPECT_THROW(parse("(x1", 1), ParseError);
  EXPECT_THROW(parse("", 1), ParseError);
  EXPECT_THROW(parse("x1 $ 2", 1), ParseError);
}

TEST(Parse, WhitespaceAndLiterals) {
  EXPECT_DOUBLE_EQ(eval_at("  1.5e2*x1 ", 1, {2.0}), 300.0);
  EXPECT_DOUBLE_EQ(eval_at("pi", 1, {0.0}), M_PI);
  EXPECT_DOUBLE_EQ(eval_at(".5 + 2E-1", 1, {0.0}), 0.7);
}

TEST(Precedence, Corpus) {
  EXPECT_DOUBLE_EQ(eval_at("2+3*4^2", 1, {0.0}), 50.0);
  EXPECT_DOUBLE_EQ(eval_at("-x1^2", 1, {3.0}), -9.0);
  EXPECT_DOUBLE_EQ(eval_at("2^3^2", 1, {0.0}), 512.0);
  EXPECT_DOUBLE_EQ(eval_at("2^-1", 1, {0.0}), 0.5);
  EXPECT_DOUBLE_EQ(eval_at("8/4/2", 1, {0.0}), 1.0);
  EXPECT_DOUBLE_EQ(eval_at("1-2-3", 1, {0.0}), -4.0);
}

TEST(Evaluate, Basics) {
  EXPECT_EQ(eval_at("x1*x2", 2, {3.0, 5.0}), 15.0);
  EXPECT_NEAR(eval_at("atan2(x1, x2)", 2, {1.0, 1.0}), M_PI / 4, 1e-15);
}

TEST(Evaluate, DomainErrorNamesNode) {
  try {
    eval_at("1 + sqrt(x1)", 1, {-1.0});
    FAIL() << "expected a domain error";
  } catch (const DomainError& e) {
    EXPECT_EQ(e.node(), "sqrt");
    EXPECT_EQ(e.offset(), 4u);
  }
  EXPECT_THROW(eval_at("log(x1)", 1, {0.0}), DomainError);
  EXPECT_THROW(eval_at("1/x1", 1, {0.0}), DomainError);
}

TEST(Evaluate, ExpJet) {
  const auto e = parse("exp(x1)", 1);
  const std::vector<double> x{0.0};
  const auto jet = evaluate_jet2(e, std::span<const double>(x));
  EXPECT_EQ(jet.value, 1.0);
  EXPECT_EQ(jet.grad(0), 1.0);
  EXPECT_EQ(jet.hess(0, 0), 1.0);
}

TEST(Evaluate, AbsKinkIsFlagged) {
  const auto e = parse("abs(x1)", 1);
  std::vector<HyperDual> x{HyperDual(0.0, 1.0, 1.0, 0.0)};
  EvalDiagnostics diag;
  const auto v = e.evaluate(std::span<const HyperDual>(x), &diag);
  EXPECT_EQ(v.v, 0.0);
  EXPECT_EQ(v.e1, 0.0);
  EXPECT_EQ(diag.abs_kinks, 1u);
}

TEST(Evaluate, PlainEqualsJetValue) {
  const auto e = parse("sin(x1*x2)^2 + x1^x2 - log(x2)/x1", 2);
  const std::vector<double> x{0.7, 1.3};
  const auto jet = evaluate_jet2(e, std::span<const double>(x));
  EXPECT_EQ(jet.value, e.evaluate(std::span<const double>(x)));
}

TEST(RoundTrip, RandomTrees) {
  RandomTree gen(2024);
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> coord(0.2, 1.8);
  int compared = 0;
  for (int i = 0; i < 1000; ++i) {
    const Expression e(gen.make(4), 3);
    const std::string text = e.to_string();
    const auto again = parse(text, 3);
    ASSERT_TRUE(structurally_equal(e.root(), again.root())) << text;
    ASSERT_EQ(again.to_string(), text);

    const std::vector<double> x{coord(rng), coord(rng), coord(rng)};
    const double want = reference(e.root(), x);
    if (!std::isfinite(want)) continue;
    try {
      const double got = e.evaluate(std::span<const double>(x));
      ASSERT_NEAR(got, want, 1e-12 * std::max(1.0, std::abs(want))) << text;
      ++compared;
    } catch (const DomainError&) {
    }
  }
  EXPECT_GT(compared, 300);
}

TEST(VariablesUsed, CountsHighestIndex) {
  EXPECT_EQ(variables_used(parse("x2 + 1", 3).root()), 2u);
  EXPECT_EQ(variables_used(parse("pi", 3).root()), 0u);
}

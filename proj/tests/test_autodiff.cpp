#include <gtest/gtest.h>

#include <random>

#include "corpus.hpp"
#include "oracles.hpp"
#include "symphonic/autodiff.hpp"
#include "symphonic/errors.hpp"
#include "symphonic/expr.hpp"
#include "symphonic/sampling.hpp"

using namespace symphonic;

namespace {

std::vector<double> pt(std::initializer_list<double> v) { return v; }

} // namespace

TEST(Jet2, Constant) {
  auto fn = [](auto x) { return decltype(x[0])(7.0) + 0.0 * x[0]; };
  const auto p = pt({1, 2});
  const auto jet = evaluate_jet2(fn, std::span<const double>(p));
  EXPECT_EQ(jet.value, 7.0);
  EXPECT_EQ(jet.grad.norm(), 0.0);
  EXPECT_EQ(jet.hess.norm(), 0.0);
}

TEST(Jet2, Bilinear) {
  auto fn = [](auto x) { return x[0] * x[1]; };
  const auto p = pt({3, 5});
  const auto jet = evaluate_jet2(fn, std::span<const double>(p));
  EXPECT_EQ(jet.value, 15.0);
  EXPECT_EQ(jet.grad(0), 5.0);
  EXPECT_EQ(jet.grad(1), 3.0);
  EXPECT_EQ(jet.hess(0, 0), 0.0);
  EXPECT_EQ(jet.hess(0, 1), 1.0);
  EXPECT_EQ(jet.hess(1, 0), 1.0);
  EXPECT_EQ(jet.hess(1, 1), 0.0);
}

TEST(Jet2, SineAgainstCentralDifferences) {
  auto fn = [](auto x) {
    using std::sin;
    return sin(x[0]);
  };
  const auto p = pt({0.3});
  const auto jet = evaluate_jet2(fn, std::span<const double>(p));
  const auto fd = finite_difference_jet2(fn, std::span<const double>(p), 1e-4);
  EXPECT_NEAR(jet.grad(0), fd.grad(0), 1e-6);
  EXPECT_NEAR(jet.hess(0, 0), fd.hess(0, 0), 1e-6);
  EXPECT_NEAR(jet.grad(0), std::cos(0.3), 1e-15);
  EXPECT_NEAR(jet.hess(0, 0), -std::sin(0.3), 1e-15);
}

TEST(FiniteDifference, QuadraticIsExactUpToRoundoff) {
  auto fn = [](std::span<const double> x) { return x[0] * x[0]; };
  const auto p = pt({1.0});
  const auto fd = finite_difference_jet2(fn, std::span<const double>(p), 1e-3);
  EXPECT_NEAR(fd.grad(0), 2.0, 1e-5);
}

TEST(FiniteDifference, Exponential) {
  auto fn = [](std::span<const double> x) { return std::exp(x[0]); };
  const auto p = pt({0.0});
  const auto fd = finite_difference_jet2(fn, std::span<const double>(p), 1e-4);
  EXPECT_EQ(fd.value, 1.0);
  EXPECT_NEAR(fd.grad(0), 1.0, 1e-7);
}

TEST(FiniteDifference, ConstantHasZeroGradient) {
  auto fn = [](std::span<const double>) { return 3.25; };
  const auto p = pt({0.1, -4.0, 2.0});
  const auto fd = finite_difference_jet2(fn, std::span<const double>(p));
  EXPECT_EQ(fd.grad.norm(), 0.0);
}

TEST(FiniteDifference, RejectsNonPositiveStep) {
  auto fn = [](std::span<const double> x) { return x[0]; };
  const auto p = pt({0.0});
  EXPECT_THROW(finite_difference_jet2(fn, std::span<const double>(p), 0.0), ArgumentError);
  EXPECT_THROW(finite_difference_jet2(fn, std::span<const double>(p), -1e-3), ArgumentError);
}

TEST(FiniteDifference, DomainViolationIsReported) {
  auto fn = [](std::span<const double> x) { return x[0]; };
  const Box box = Box::cube(1, 0.0, 1.0);
  const auto p = pt({0.9995});
  EXPECT_THROW(finite_difference_jet2(fn, std::span<const double>(p), 1e-3, &box),
               EvaluationError);
}

TEST(Jet2, DomainViolationCarriesCoordinate) {
  auto fn = [](auto x) { return x[0] + x[1]; };
  const Box box = Box::cube(2, 0.0, 1.0);
  const auto p = pt({0.5, 1.5});
  try {
    evaluate_jet2(fn, std::span<const double>(p), box);
    FAIL() << "expected an evaluation error";
  } catch (const EvaluationError& e) {
    EXPECT_EQ(e.coordinate(), 1);
  }
}

TEST(Jet2, NonFiniteIntermediateIsReported) {
  const auto e = expr::parse("log(x1)", 1);
  const auto p = pt({-1.0});
  EXPECT_THROW(evaluate_jet2(e, std::span<const double>(p)), NonFiniteError);
}

TEST(Jet2, HessianIsSymmetric) {
  const auto e = expr::parse("sin(x1*x2)*exp(x3) + x1^3*x3", 3);
  const auto p = pt({0.4, -0.7, 0.2});
  const auto jet = evaluate_jet2(e, std::span<const double>(p));
  EXPECT_EQ((jet.hess - jet.hess.transpose()).norm(), 0.0);
}

// Leibniz rule on random cubic polynomials: jet(a*b) equals the combination
// of the factor jets.
TEST(Jet2, ProductRuleOnPolynomials) {
  std::mt19937_64 rng(11);
  std::uniform_int_distribution<int> coef(-3, 3);
  auto poly = [&] {
    std::string s = std::to_string(coef(rng));
    const char* monomials[] = {"x1", "x2", "x1^2", "x1*x2", "x2^3", "x1^2*x2"};
    for (const char* m : monomials) s += " + " + std::to_string(coef(rng)) + "*" + m;
    return expr::parse(s, 2);
  };
  for (int trial = 0; trial < 50; ++trial) {
    const auto a = poly(), b = poly();
    const auto prod = expr::Expression(
        expr::make_binary(expr::NodeKind::mul, a.root_ptr(), b.root_ptr()), 2);
    const auto p = pt({0.3 * trial / 50.0 - 0.7, 1.1 - 0.02 * trial});
    const auto ja = evaluate_jet2(a, std::span<const double>(p));
    const auto jb = evaluate_jet2(b, std::span<const double>(p));
    const auto jp = evaluate_jet2(prod, std::span<const double>(p));
    const double scale = 1.0 + std::abs(jp.value);
    EXPECT_NEAR(jp.value, ja.value * jb.value, 1e-12 * scale);
    const Eigen::VectorXd grad = ja.grad * jb.value + jb.grad * ja.value;
    EXPECT_LT((jp.grad - grad).norm(), 1e-11 * scale);
    const Eigen::MatrixXd hess = ja.hess * jb.value + jb.hess * ja.value +
                                 ja.grad * jb.grad.transpose() + jb.grad * ja.grad.transpose();
    EXPECT_LT((jp.hess - hess).norm(), 1e-11 * scale);
  }
}

TEST(Jet2, ChainRuleThroughExp) {
  const auto inner = expr::parse("x1^2 - x1*x2", 2);
  const auto outer = expr::parse("exp(x1^2 - x1*x2)", 2);
  const auto p = pt({0.6, -0.4});
  const auto ji = evaluate_jet2(inner, std::span<const double>(p));
  const auto jo = evaluate_jet2(outer, std::span<const double>(p));
  const double e = std::exp(ji.value);
  EXPECT_NEAR(jo.value, e, 1e-14);
  EXPECT_LT((jo.grad - e * ji.grad).norm(), 1e-13);
  const Eigen::MatrixXd hess = e * (ji.hess + ji.grad * ji.grad.transpose());
  EXPECT_LT((jo.hess - hess).norm(), 1e-13);
}

// Exhaustive comparison on the expression corpus against extrapolated finite
// differences. Tolerance is absolute, relative once the magnitude exceeds 1.
TEST(Jet2, AgreesWithFiniteDifferencesOnCorpus) {
  for (const auto& entry : corpus::expressions()) {
    const auto e = expr::parse(entry.source, entry.arity);
    const auto pts = sample_box(entry.box, 1000, 5);
    for (const auto& x : pts) {
      const auto jet = evaluate_jet2(e, std::span<const double>(x));
      const auto fd = oracle::richardson_jet2(
          [&](std::span<const double> y) { return e.evaluate(y); }, std::span<const double>(x));
      for (Eigen::Index a = 0; a < jet.grad.size(); ++a) {
        ASSERT_LT(std::abs(jet.grad(a) - fd.grad(a)), 1e-5 * std::max(1.0, std::abs(jet.grad(a))))
            << entry.source;
        for (Eigen::Index b = 0; b < jet.grad.size(); ++b)
          ASSERT_LT(std::abs(jet.hess(a, b) - fd.hess(a, b)),
                    1e-5 * std::max(1.0, std::abs(jet.hess(a, b))))
              << entry.source;
      }
    }
  }
}

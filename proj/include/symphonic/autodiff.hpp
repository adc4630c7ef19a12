#pragma once

// Forward-mode differentiation used throughout the engine.
//
// Dual carries one directional derivative; HyperDual carries two independent
// first-order perturbations e1, e2 and their mixed term e1*e2, so a single
// evaluation seeded along (e_a, e_b) yields f, d_a f, d_b f and d_a d_b f with
// no subtractive cancellation.

#include <cmath>
#include <cstddef>
#include <span>
#include <type_traits>
#include <vector>

#include <Eigen/Dense>

#include "symphonic/box.hpp"
#include "symphonic/errors.hpp"

namespace symphonic {

struct Dual {
  double v = 0.0;
  double d = 0.0;

  constexpr Dual() = default;
  constexpr Dual(double value) : v(value) {}
  constexpr Dual(double value, double derivative) : v(value), d(derivative) {}

  Dual& operator+=(const Dual& o) { v += o.v; d += o.d; return *this; }
  Dual& operator-=(const Dual& o) { v -= o.v; d -= o.d; return *this; }
  Dual& operator*=(const Dual& o) { d = d * o.v + v * o.d; v *= o.v; return *this; }
  Dual& operator/=(const Dual& o) {
    const double inv = 1.0 / o.v;
    d = (d - v * inv * o.d) * inv;
    v *= inv;
    return *this;
  }
  friend Dual operator+(Dual a, const Dual& b) { return a += b; }
  friend Dual operator-(Dual a, const Dual& b) { return a -= b; }
  friend Dual operator*(Dual a, const Dual& b) { return a *= b; }
  friend Dual operator/(Dual a, const Dual& b) { return a /= b; }
  friend Dual operator-(const Dual& a) { return {-a.v, -a.d}; }
  friend Dual operator+(const Dual& a) { return a; }

  friend bool operator<(const Dual& a, const Dual& b) { return a.v < b.v; }
  friend bool operator>(const Dual& a, const Dual& b) { return a.v > b.v; }
  friend bool operator<=(const Dual& a, const Dual& b) { return a.v <= b.v; }
  friend bool operator>=(const Dual& a, const Dual& b) { return a.v >= b.v; }
  friend bool operator==(const Dual& a, const Dual& b) { return a.v == b.v && a.d == b.d; }
  friend bool operator!=(const Dual& a, const Dual& b) { return !(a == b); }
};

struct HyperDual {
  double v = 0.0;
  double e1 = 0.0;
  double e2 = 0.0;
  double e12 = 0.0;

  constexpr HyperDual() = default;
  constexpr HyperDual(double value) : v(value) {}
  constexpr HyperDual(double value, double d1, double d2, double d12)
      : v(value), e1(d1), e2(d2), e12(d12) {}

  HyperDual& operator+=(const HyperDual& o) {
    v += o.v; e1 += o.e1; e2 += o.e2; e12 += o.e12;
    return *this;
  }
  HyperDual& operator-=(const HyperDual& o) {
    v -= o.v; e1 -= o.e1; e2 -= o.e2; e12 -= o.e12;
    return *this;
  }
  HyperDual& operator*=(const HyperDual& o) {
    const HyperDual a = *this;
    v = a.v * o.v;
    e1 = a.v * o.e1 + a.e1 * o.v;
    e2 = a.v * o.e2 + a.e2 * o.v;
    e12 = a.v * o.e12 + a.e1 * o.e2 + a.e2 * o.e1 + a.e12 * o.v;
    return *this;
  }
  HyperDual& operator/=(const HyperDual& o);

  friend HyperDual operator+(HyperDual a, const HyperDual& b) { return a += b; }
  friend HyperDual operator-(HyperDual a, const HyperDual& b) { return a -= b; }
  friend HyperDual operator*(HyperDual a, const HyperDual& b) { return a *= b; }
  friend HyperDual operator/(HyperDual a, const HyperDual& b) { return a /= b; }
  friend HyperDual operator-(const HyperDual& a) { return {-a.v, -a.e1, -a.e2, -a.e12}; }

  friend bool operator<(const HyperDual& a, const HyperDual& b) { return a.v < b.v; }
  friend bool operator>(const HyperDual& a, const HyperDual& b) { return a.v > b.v; }
};

namespace detail {

// f(a) given f(a.v), f'(a.v), f''(a.v).
inline HyperDual chain(const HyperDual& a, double f0, double f1, double f2) {
  return {f0, f1 * a.e1, f1 * a.e2, f1 * a.e12 + f2 * a.e1 * a.e2};
}

inline Dual chain(const Dual& a, double f0, double f1) { return {f0, f1 * a.d}; }

} // namespace detail

inline HyperDual& HyperDual::operator/=(const HyperDual& o) {
  const double inv = 1.0 / o.v;
  return *this *= detail::chain(o, inv, -inv * inv, 2.0 * inv * inv * inv);
}

// --- elementary functions -------------------------------------------------

inline double value_of(double x) { return x; }
inline double value_of(const Dual& x) { return x.v; }
inline double value_of(const HyperDual& x) { return x.v; }

/// True when the scalar carries no perturbation (a plain constant).
inline bool is_constant(double) { return true; }
inline bool is_constant(const Dual& x) { return x.d == 0.0; }
inline bool is_constant(const HyperDual& x) { return x.e1 == 0.0 && x.e2 == 0.0 && x.e12 == 0.0; }

inline Dual sin(const Dual& a) { return detail::chain(a, std::sin(a.v), std::cos(a.v)); }
inline Dual cos(const Dual& a) { return detail::chain(a, std::cos(a.v), -std::sin(a.v)); }
inline Dual tan(const Dual& a) {
  const double t = std::tan(a.v);
  return detail::chain(a, t, 1.0 + t * t);
}
inline Dual exp(const Dual& a) {
  const double e = std::exp(a.v);
  return detail::chain(a, e, e);
}
inline Dual log(const Dual& a) { return detail::chain(a, std::log(a.v), 1.0 / a.v); }
inline Dual sqrt(const Dual& a) {
  const double s = std::sqrt(a.v);
  return detail::chain(a, s, 0.5 / s);
}
inline Dual abs(const Dual& a) {
  return detail::chain(a, std::abs(a.v), a.v > 0 ? 1.0 : (a.v < 0 ? -1.0 : 0.0));
}
inline Dual pow(const Dual& a, double c) {
  if (c == 0.0) return Dual(1.0);
  return detail::chain(a, std::pow(a.v, c), c * std::pow(a.v, c - 1.0));
}
inline Dual pow(const Dual& a, const Dual& b) {
  if (is_constant(b)) return pow(a, b.v);
  return exp(b * log(a));
}
inline Dual atan2(const Dual& y, const Dual& x) {
  const double r2 = x.v * x.v + y.v * y.v;
  return {std::atan2(y.v, x.v), (x.v * y.d - y.v * x.d) / r2};
}

inline HyperDual sin(const HyperDual& a) {
  const double s = std::sin(a.v);
  return detail::chain(a, s, std::cos(a.v), -s);
}
inline HyperDual cos(const HyperDual& a) {
  const double c = std::cos(a.v);
  return detail::chain(a, c, -std::sin(a.v), -c);
}
inline HyperDual tan(const HyperDual& a) {
  const double t = std::tan(a.v);
  const double sec2 = 1.0 + t * t;
  return detail::chain(a, t, sec2, 2.0 * t * sec2);
}
inline HyperDual exp(const HyperDual& a) {
  const double e = std::exp(a.v);
  return detail::chain(a, e, e, e);
}
inline HyperDual log(const HyperDual& a) {
  const double inv = 1.0 / a.v;
  return detail::chain(a, std::log(a.v), inv, -inv * inv);
}
inline HyperDual sqrt(const HyperDual& a) {
  const double s = std::sqrt(a.v);
  return detail::chain(a, s, 0.5 / s, -0.25 / (s * a.v));
}
/// Derivative at exactly 0 is taken as 0; callers flag that case themselves.
inline HyperDual abs(const HyperDual& a) {
  const double sign = a.v > 0 ? 1.0 : (a.v < 0 ? -1.0 : 0.0);
  return detail::chain(a, std::abs(a.v), sign, 0.0);
}
inline HyperDual pow(const HyperDual& a, double c) {
  if (c == 0.0) return HyperDual(1.0);
  if (c == 1.0) return a;
  if (c == 2.0) return a * a;
  return detail::chain(a, std::pow(a.v, c), c * std::pow(a.v, c - 1.0),
                       c * (c - 1.0) * std::pow(a.v, c - 2.0));
}
inline HyperDual pow(const HyperDual& a, const HyperDual& b) {
  if (is_constant(b)) return pow(a, b.v);
  return exp(b * log(a));
}
inline HyperDual atan2(const HyperDual& y, const HyperDual& x) {
  const double r2 = x.v * x.v + y.v * y.v;
  const double r4 = r2 * r2;
  const double fx = -y.v / r2, fy = x.v / r2;
  const double fxx = 2.0 * x.v * y.v / r4;
  const double fyy = -fxx;
  const double fxy = (y.v * y.v - x.v * x.v) / r4;
  return {std::atan2(y.v, x.v), fx * x.e1 + fy * y.e1, fx * x.e2 + fy * y.e2,
          fx * x.e12 + fy * y.e12 + fxx * x.e1 * x.e2 + fxy * (x.e1 * y.e2 + y.e1 * x.e2) +
              fyy * y.e1 * y.e2};
}

inline bool isfinite(const Dual& a) { return std::isfinite(a.v) && std::isfinite(a.d); }
inline bool isfinite(const HyperDual& a) {
  return std::isfinite(a.v) && std::isfinite(a.e1) && std::isfinite(a.e2) && std::isfinite(a.e12);
}

// --- jets -----------------------------------------------------------------

/// Value, gradient and Hessian of a scalar function at one point.
struct Jet2Scalar {
  double value = 0.0;
  Eigen::VectorXd grad;
  Eigen::MatrixXd hess;
};

/// Value and gradient only.
struct Jet1Scalar {
  double value = 0.0;
  Eigen::VectorXd grad;
};

namespace detail {

template <class Fn, class T>
std::vector<T> call_components(Fn& fn, std::span<const T> x) {
  using R = std::invoke_result_t<Fn&, std::span<const T>>;
  if constexpr (std::is_same_v<std::decay_t<R>, T>) {
    return {fn(x)};
  } else {
    return fn(x);
  }
}

void check_finite(const Jet2Scalar& jet, std::span<const double> point);
void check_finite(const Jet1Scalar& jet, std::span<const double> point);

} // namespace detail

/// Jets of every output of `fn` at `point`, via n(n+1)/2 hyper-dual passes.
///
/// `fn` takes std::span<const HyperDual> and returns either one HyperDual or a
/// std::vector<HyperDual>.
template <class Fn>
std::vector<Jet2Scalar> evaluate_jet2_components(Fn&& fn, std::span<const double> point) {
  const std::size_t n = point.size();
  std::vector<HyperDual> x(n);
  std::vector<Jet2Scalar> out;

  auto seeded_pass = [&](std::size_t a, std::size_t b) {
    for (std::size_t k = 0; k < n; ++k)
      x[k] = HyperDual(point[k], k == a ? 1.0 : 0.0, k == b ? 1.0 : 0.0, 0.0);
    return detail::call_components(fn, std::span<const HyperDual>(x));
  };

  if (n == 0) {
    const auto r = detail::call_components(fn, std::span<const HyperDual>(x));
    for (const auto& c : r) out.push_back({c.v, Eigen::VectorXd(0), Eigen::MatrixXd(0, 0)});
    return out;
  }

  for (std::size_t a = 0; a < n; ++a) {
    for (std::size_t b = a; b < n; ++b) {
      const auto r = seeded_pass(a, b);
      if (out.empty()) {
        out.resize(r.size());
        for (std::size_t c = 0; c < r.size(); ++c) {
          out[c].value = r[c].v;
          out[c].grad = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(n));
          out[c].hess = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(n),
                                              static_cast<Eigen::Index>(n));
        }
      }
      for (std::size_t c = 0; c < r.size(); ++c) {
        const auto ia = static_cast<Eigen::Index>(a), ib = static_cast<Eigen::Index>(b);
        if (a == b) out[c].grad(ia) = r[c].e1;
        out[c].hess(ia, ib) = r[c].e12;
        out[c].hess(ib, ia) = r[c].e12;
      }
    }
  }
  for (const auto& jet : out) detail::check_finite(jet, point);
  return out;
}

template <class Fn>
Jet2Scalar evaluate_jet2(Fn&& fn, std::span<const double> point) {
  auto jets = evaluate_jet2_components(std::forward<Fn>(fn), point);
  if (jets.size() != 1) throw ArgumentError("evaluate_jet2: function is not scalar-valued");
  return std::move(jets.front());
}

/// As evaluate_jet2, after checking `point` against `domain`.
template <class Fn>
Jet2Scalar evaluate_jet2(Fn&& fn, std::span<const double> point, const Box& domain) {
  require_inside(domain, point, "evaluate_jet2");
  return evaluate_jet2(std::forward<Fn>(fn), point);
}

/// Value and gradient via n first-order dual passes.
template <class Fn>
std::vector<Jet1Scalar> evaluate_jet1_components(Fn&& fn, std::span<const double> point) {
  const std::size_t n = point.size();
  std::vector<Dual> x(n);
  std::vector<Jet1Scalar> out;
  if (n == 0) {
    const auto r = detail::call_components(fn, std::span<const Dual>(x));
    for (const auto& c : r) out.push_back({c.v, Eigen::VectorXd(0)});
    return out;
  }
  for (std::size_t a = 0; a < n; ++a) {
    for (std::size_t k = 0; k < n; ++k) x[k] = Dual(point[k], k == a ? 1.0 : 0.0);
    const auto r = detail::call_components(fn, std::span<const Dual>(x));
    if (out.empty()) {
      out.resize(r.size());
      for (std::size_t c = 0; c < r.size(); ++c) {
        out[c].value = r[c].v;
        out[c].grad = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(n));
      }
    }
    for (std::size_t c = 0; c < r.size(); ++c) out[c].grad(static_cast<Eigen::Index>(a)) = r[c].d;
  }
  for (const auto& jet : out) detail::check_finite(jet, point);
  return out;
}

struct FiniteDifferenceSteps {
  double gradient = 1e-4;
  double hessian = 1e-3;
};

/// Central-difference oracle. Truncation error is O(step^2) in both the
/// gradient and the Hessian; round-off grows like eps/step and eps/step^2.
template <class Fn>
Jet2Scalar finite_difference_jet2(Fn&& fn, std::span<const double> point,
                                  FiniteDifferenceSteps steps = {}, const Box* domain = nullptr) {
  if (!(steps.gradient > 0.0) || !(steps.hessian > 0.0))
    throw ArgumentError("finite_difference_jet2: step must be positive");
  const std::size_t n = point.size();
  std::vector<double> x(point.begin(), point.end());

  auto eval = [&](const std::vector<double>& at) -> double {
    if (domain) require_inside(*domain, at, "finite_difference_jet2");
    return fn(std::span<const double>(at));
  };

  Jet2Scalar jet;
  jet.value = eval(x);
  jet.grad = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(n));
  jet.hess = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(n));

  const double hg = steps.gradient, hh = steps.hessian;
  for (std::size_t a = 0; a < n; ++a) {
    const auto ia = static_cast<Eigen::Index>(a);
    auto xp = x, xm = x;
    xp[a] += hg;
    xm[a] -= hg;
    jet.grad(ia) = (eval(xp) - eval(xm)) / (2.0 * hg);

    xp = x;
    xm = x;
    xp[a] += hh;
    xm[a] -= hh;
    jet.hess(ia, ia) = (eval(xp) - 2.0 * jet.value + eval(xm)) / (hh * hh);

    for (std::size_t b = a + 1; b < n; ++b) {
      const auto ib = static_cast<Eigen::Index>(b);
      auto pp = x, pm = x, mp = x, mm = x;
      pp[a] += hh; pp[b] += hh;
      pm[a] += hh; pm[b] -= hh;
      mp[a] -= hh; mp[b] += hh;
      mm[a] -= hh; mm[b] -= hh;
      const double v = (eval(pp) - eval(pm) - eval(mp) + eval(mm)) / (4.0 * hh * hh);
      jet.hess(ia, ib) = v;
      jet.hess(ib, ia) = v;
    }
  }
  return jet;
}

/// Single-step form: the same step for gradient and Hessian.
template <class Fn>
Jet2Scalar finite_difference_jet2(Fn&& fn, std::span<const double> point, double step,
                                  const Box* domain = nullptr) {
  return finite_difference_jet2(std::forward<Fn>(fn), point, FiniteDifferenceSteps{step, step},
                                domain);
}

} // namespace symphonic

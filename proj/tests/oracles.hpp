#pragma once

// Reference computations that share no code path with the engine beyond
// plain expression evaluation on doubles.

#include <cmath>
#include <functional>
#include <span>
#include <vector>

#include <Eigen/Dense>

#include "symphonic/autodiff.hpp"
#include "symphonic/geometry.hpp"
#include "symphonic/maps.hpp"

namespace oracle {

using Vec = Eigen::VectorXd;
using Mat = Eigen::MatrixXd;
using ScalarFn = std::function<double(std::span<const double>)>;

/// Central differences of a vector function: jac(i, a) and hess[i](a, b).
struct FdJet {
  Vec value;
  Mat jac;
  std::vector<Mat> hess;
};

inline FdJet fd_jet(const std::function<Vec(const Vec&)>& fn, const Vec& x, double h1 = 1e-5,
                    double h2 = 1e-4) {
  const Eigen::Index n = x.size();
  FdJet out;
  out.value = fn(x);
  const Eigen::Index m = out.value.size();
  out.jac = Mat::Zero(m, n);
  out.hess.assign(static_cast<std::size_t>(m), Mat::Zero(n, n));
  for (Eigen::Index a = 0; a < n; ++a) {
    Vec xp = x, xm = x;
    xp(a) += h1;
    xm(a) -= h1;
    out.jac.col(a) = (fn(xp) - fn(xm)) / (2 * h1);
    for (Eigen::Index b = 0; b < n; ++b) {
      Vec pp = x, pm = x, mp = x, mm = x;
      pp(a) += h2; pp(b) += h2;
      pm(a) += h2; pm(b) -= h2;
      mp(a) -= h2; mp(b) += h2;
      mm(a) -= h2; mm(b) -= h2;
      const Vec d = (fn(pp) - fn(pm) - fn(mp) + fn(mm)) / (4 * h2 * h2);
      for (Eigen::Index i = 0; i < m; ++i) out.hess[static_cast<std::size_t>(i)](a, b) = d(i);
    }
  }
  return out;
}

// Central differences at the default steps and at half of them, combined by
// one Richardson step so the O(h^2) truncation term cancels.
template <class Fn>
symphonic::Jet2Scalar richardson_jet2(Fn&& fn, std::span<const double> x) {
  const symphonic::FiniteDifferenceSteps coarse{};
  const symphonic::FiniteDifferenceSteps fine{coarse.gradient / 2, coarse.hessian / 2};
  auto a = symphonic::finite_difference_jet2(fn, x, coarse);
  const auto b = symphonic::finite_difference_jet2(fn, x, fine);
  a.grad = (4 * b.grad - a.grad) / 3;
  a.hess = (4 * b.hess - a.hess) / 3;
  return a;
}

inline Vec map_value(const symphonic::SmoothMap& u, const Vec& x) {
  std::vector<double> pt(x.data(), x.data() + x.size());
  const auto y = u.evaluate(std::span<const double>(pt));
  return Eigen::Map<const Vec>(y.data(), static_cast<Eigen::Index>(y.size()));
}

inline Mat metric_value(const symphonic::ChartManifold& m, const Vec& x) {
  std::vector<double> pt(x.data(), x.data() + x.size());
  return m.metric_at(pt);
}

/// Levi-Civita symbols from finite differences of the metric.
inline std::vector<Mat> fd_christoffel(const symphonic::ChartManifold& m, const Vec& x,
                                       double h = 1e-5) {
  const Eigen::Index n = x.size();
  std::vector<Mat> dg(static_cast<std::size_t>(n));
  for (Eigen::Index c = 0; c < n; ++c) {
    Vec xp = x, xm = x;
    xp(c) += h;
    xm(c) -= h;
    dg[static_cast<std::size_t>(c)] = (metric_value(m, xp) - metric_value(m, xm)) / (2 * h);
  }
  const Mat gi = metric_value(m, x).inverse();
  std::vector<Mat> gamma(static_cast<std::size_t>(n), Mat::Zero(n, n));
  for (Eigen::Index c = 0; c < n; ++c)
    for (Eigen::Index a = 0; a < n; ++a)
      for (Eigen::Index b = 0; b < n; ++b) {
        double s = 0;
        for (Eigen::Index d = 0; d < n; ++d)
          s += gi(c, d) * (dg[std::size_t(a)](d, b) + dg[std::size_t(b)](a, d) -
                           dg[std::size_t(d)](a, b));
        gamma[std::size_t(c)](a, b) = 0.5 * s;
      }
  return gamma;
}

/// sigma_m(X) = sum <du X, du e_i1> <du e_i1, du e_i2> ... du e_i(m-1), with the
/// frame columns of E, by explicit nested loops.
inline Mat frame_sum_sigma_m(const Mat& du, const Mat& h, const Mat& E, int m) {
  const Eigen::Index n = du.cols();
  auto inner = [&](const Vec& a, const Vec& b) { return a.dot(h * b); };
  std::vector<Vec> image(static_cast<std::size_t>(n));
  for (Eigen::Index i = 0; i < n; ++i) image[std::size_t(i)] = du * E.col(i);

  Mat out = Mat::Zero(du.rows(), n);
  for (Eigen::Index a = 0; a < n; ++a) {
    // walk[i] = coefficient of du e_i after k steps, starting from du(d_a)
    const Vec start = du.col(a);
    Vec coeff(n);
    for (Eigen::Index i = 0; i < n; ++i) coeff(i) = inner(start, image[std::size_t(i)]);
    for (int step = 2; step < m; ++step) {
      Vec next = Vec::Zero(n);
      for (Eigen::Index i = 0; i < n; ++i)
        for (Eigen::Index j = 0; j < n; ++j)
          next(j) += coeff(i) * inner(image[std::size_t(i)], image[std::size_t(j)]);
      coeff = next;
    }
    Vec col = Vec::Zero(du.rows());
    for (Eigen::Index i = 0; i < n; ++i) col += coeff(i) * image[std::size_t(i)];
    out.col(a) = col;
  }
  return out;
}

/// |du|^2 as a frame sum.
inline double frame_sum_energy(const Mat& du, const Mat& h, const Mat& E) {
  double s = 0;
  for (Eigen::Index i = 0; i < E.cols(); ++i) {
    const Vec v = du * E.col(i);
    s += v.dot(h * v);
  }
  return s;
}

/// div(|grad f|^{q-2} grad f) on flat R^n from the gradient and Hessian of f.
inline double q_laplacian(const Vec& grad, const Mat& hess, double q) {
  const double g2 = grad.squaredNorm();
  const double lap = hess.trace();
  const double quad = grad.dot(hess * grad);
  return std::pow(g2, 0.5 * (q - 2)) * lap + (q - 2) * std::pow(g2, 0.5 * (q - 4)) * quad;
}

/// Radial version for f = r^a on R^n: div(phi(r) f'(r) d_r) = (phi f')' + (n-1) phi f' / r
/// with phi = |f'|^{q-2}.
inline double radial_q_laplacian(double r, double a, double n, double q) {
  const double fp = a * std::pow(r, a - 1);
  const double flux = std::pow(std::abs(fp), q - 2) * fp;  // |a|^{q-2} a r^{(a-1)(q-1)}
  const double dflux = (a - 1) * (q - 1) * flux / r;
  return dflux + (n - 1) * flux / r;
}

/// The constraint polynomial by literal summation over i, j, k.
inline double prop2_brute(const Vec& C, const Mat& C2, double p) {
  const Eigen::Index n = C.size();
  double s = 0;
  for (Eigen::Index i = 0; i < n; ++i)
    for (Eigen::Index j = 0; j < n; ++j)
      for (Eigen::Index k = 0; k < n; ++k) {
        const double ci = C(i), cj = C(j), ck = C(k);
        s += 2 * (p - 2) * ck * ci * cj *
                 (ci * C2(i, k) * cj * cj + ci * ci * cj * C2(j, k)) +
             ci * ci * cj * cj *
                 (C2(k, k) * ci * cj + ck * C2(i, k) * cj + ck * ci * C2(j, k));
      }
  return s;
}

} // namespace oracle

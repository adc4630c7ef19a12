#pragma once

// Small dense linear algebra generic over double and Dual scalars.

#include <cmath>
#include <string>

#include <Eigen/Dense>

#include "symphonic/autodiff.hpp"

namespace Eigen {

template <>
struct NumTraits<symphonic::Dual> : GenericNumTraits<symphonic::Dual> {
  using Real = symphonic::Dual;
  using NonInteger = symphonic::Dual;
  using Nested = symphonic::Dual;
  using Literal = symphonic::Dual;

  enum {
    IsComplex = 0,
    IsInteger = 0,
    IsSigned = 1,
    RequireInitialization = 1,
    ReadCost = 2,
    AddCost = 2,
    MulCost = 4
  };

  static inline Real epsilon() { return Real(std::numeric_limits<double>::epsilon()); }
  static inline Real dummy_precision() { return Real(1e-12); }
  static inline Real highest() { return Real(std::numeric_limits<double>::max()); }
  static inline Real lowest() { return Real(std::numeric_limits<double>::lowest()); }
  static inline int digits10() { return std::numeric_limits<double>::digits10; }
};

} // namespace Eigen

namespace symphonic {

template <class T>
using Mat = Eigen::Matrix<T, Eigen::Dynamic, Eigen::Dynamic>;
template <class T>
using Vec = Eigen::Matrix<T, Eigen::Dynamic, 1>;

/// Inverse of a symmetric positive definite matrix by Gauss-Jordan without
/// pivoting (the diagonal pivots of an SPD matrix stay positive).
template <class T>
Mat<T> spd_inverse(const Mat<T>& a) {
  const Eigen::Index n = a.rows();
  Mat<T> work = a;
  Mat<T> inv = Mat<T>::Identity(n, n);
  for (Eigen::Index k = 0; k < n; ++k) {
    const T pivot = work(k, k);
    if (!(value_of(pivot) > 0.0)) throw GeometryError("metric is not positive definite");
    for (Eigen::Index j = 0; j < n; ++j) {
      work(k, j) = work(k, j) / pivot;
      inv(k, j) = inv(k, j) / pivot;
    }
    for (Eigen::Index i = 0; i < n; ++i) {
      if (i == k) continue;
      const T factor = work(i, k);
      if (value_of(factor) == 0.0 && is_constant(factor)) continue;
      for (Eigen::Index j = 0; j < n; ++j) {
        work(i, j) = work(i, j) - factor * work(k, j);
        inv(i, j) = inv(i, j) - factor * inv(k, j);
      }
    }
  }
  return inv;
}

/// Orthonormal frame E = L^{-T} from the Cholesky factor g = L L^T; columns
/// are frame vectors in the coordinate basis and E^T g E = I.
template <class T>
Mat<T> cholesky_frame(const Mat<T>& g) {
  using std::sqrt;
  const Eigen::Index n = g.rows();
  Mat<T> l = Mat<T>::Zero(n, n);
  for (Eigen::Index j = 0; j < n; ++j) {
    T diag = g(j, j);
    for (Eigen::Index k = 0; k < j; ++k) diag = diag - l(j, k) * l(j, k);
    if (!(value_of(diag) > 0.0)) throw GeometryError("metric is not positive definite");
    l(j, j) = sqrt(diag);
    for (Eigen::Index i = j + 1; i < n; ++i) {
      T s = g(i, j);
      for (Eigen::Index k = 0; k < j; ++k) s = s - l(i, k) * l(j, k);
      l(i, j) = s / l(j, j);
    }
  }
  // Invert the lower-triangular factor by forward substitution.
  Mat<T> linv = Mat<T>::Zero(n, n);
  for (Eigen::Index c = 0; c < n; ++c) {
    for (Eigen::Index i = c; i < n; ++i) {
      T s = (i == c) ? T(1.0) : T(0.0);
      for (Eigen::Index k = c; k < i; ++k) s = s - l(i, k) * linv(k, c);
      linv(i, c) = s / l(i, i);
    }
  }
  return linv.transpose();
}

template <class T>
T trace_of(const Mat<T>& a) {
  T s(0.0);
  for (Eigen::Index i = 0; i < a.rows(); ++i) s = s + a(i, i);
  return s;
}

/// Product computed with explicit loops; keeps Dual arithmetic off Eigen's
/// blocked kernels.
template <class T>
Mat<T> mul(const Mat<T>& a, const Mat<T>& b) {
  Mat<T> c(a.rows(), b.cols());
  for (Eigen::Index i = 0; i < a.rows(); ++i)
    for (Eigen::Index j = 0; j < b.cols(); ++j) {
      T s(0.0);
      for (Eigen::Index k = 0; k < a.cols(); ++k) s = s + a(i, k) * b(k, j);
      c(i, j) = s;
    }
  return c;
}

} // namespace symphonic

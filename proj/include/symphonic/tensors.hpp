#pragma once

// Stress-type tensors along a map and their (weighted) divergences.
//
// Every tensor here is a target-vector-valued 1-form built from du and the
// pullback endomorphism P = g^{-1} u*h:
//
//   sigma_p     du P                       sigma(X) = <du X, du e_k> du e_k
//   sigma_m     du P^{m-1}
//   sigma_T     du P - (tr P / dim) du
//   sigma_S     du P + ((dim - 4) / 4) tr P du
//   sigma_T_m   du P^{m-1} - (1/m) (tr P)^{p/2} du
//   sigma_S_m   du P^{m-1} + ((m - 4)/4) (tr P)^{p/2} du
//
// where dim is the source dimension and m the power order. Norms use
// orthonormal frames: |du|^2 = tr P, |u*h|^2 = tr P^2, |d_m u|^2 = tr P^m.

#include <span>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "symphonic/linalg.hpp"
#include "symphonic/maps.hpp"

namespace symphonic {

enum class SigmaKind { sigma_p, sigma_m, sigma_T, sigma_S, sigma_T_m, sigma_S_m };

const char* sigma_kind_name(SigmaKind kind);

struct SigmaSpec {
  SigmaKind kind = SigmaKind::sigma_p;
  int m = 2;        // power order (sigma_m, sigma_T_m, sigma_S_m)
  double p = 2.0;   // exponent of |du| in sigma_T_m, sigma_S_m

  static SigmaSpec plain() { return {}; }
  static SigmaSpec power(int m) { return {SigmaKind::sigma_m, m, 2.0}; }
  static SigmaSpec trace_T() { return {SigmaKind::sigma_T, 2, 2.0}; }
  static SigmaSpec trace_S() { return {SigmaKind::sigma_S, 2, 2.0}; }
  static SigmaSpec trace_T_m(int m, double p) { return {SigmaKind::sigma_T_m, m, p}; }
  static SigmaSpec trace_S_m(int m, double p) { return {SigmaKind::sigma_S_m, m, p}; }
};

/// A 1-form along `map` with values in the target tangent space.
class TensorField1FormValued {
public:
  TensorField1FormValued(MapPtr map, SigmaSpec spec);

  const SmoothMap& map() const { return *map_; }
  const MapPtr& map_ptr() const { return map_; }
  const SigmaSpec& spec() const { return spec_; }

  /// sigma^i_a at `point` (target.dim x source.dim).
  Eigen::MatrixXd components(std::span<const double> point) const;

private:
  MapPtr map_;
  SigmaSpec spec_;
};

// --- generic pointwise construction ----------------------------------------

template <class T>
Mat<T> matrix_power(const Mat<T>& a, int k) {
  Mat<T> r = Mat<T>::Identity(a.rows(), a.cols());
  for (int i = 0; i < k; ++i) r = mul(r, a);
  return r;
}

/// (tr P)^{p/2} with 0^{p/2} = 0.
template <class T>
T trace_power(const T& tr, double p) {
  using std::pow;
  if (value_of(tr) <= 0.0) return T(0.0);
  if (p == 2.0) return tr;
  return pow(tr, 0.5 * p);
}

/// Sigma tensor from du (n x m) and P (m x m).
template <class T>
Mat<T> sigma_from(const SigmaSpec& spec, const Mat<T>& du, const Mat<T>& P) {
  const double dim = static_cast<double>(du.cols());
  switch (spec.kind) {
  case SigmaKind::sigma_p:
    return mul(du, P);
  case SigmaKind::sigma_m:
    return mul(du, matrix_power(P, spec.m - 1));
  case SigmaKind::sigma_T: {
    const T c = trace_of(P) * T(1.0 / dim);
    Mat<T> s = mul(du, P);
    return s - du * c;
  }
  case SigmaKind::sigma_S: {
    const T c = trace_of(P) * T((dim - 4.0) / 4.0);
    Mat<T> s = mul(du, P);
    return s + du * c;
  }
  case SigmaKind::sigma_T_m: {
    const T c = trace_power(trace_of(P), spec.p) * T(1.0 / spec.m);
    Mat<T> s = mul(du, matrix_power(P, spec.m - 1));
    return s - du * c;
  }
  case SigmaKind::sigma_S_m: {
    const T c = trace_power(trace_of(P), spec.p) * T((spec.m - 4.0) / 4.0);
    Mat<T> s = mul(du, matrix_power(P, spec.m - 1));
    return s + du * c;
  }
  }
  throw ArgumentError("unknown sigma kind");
}

template <class T>
Mat<T> pullback_endomorphism(const Mat<T>& du, const Mat<T>& g, const Mat<T>& h) {
  const Mat<T> pullback = mul(Mat<T>(du.transpose()), mul(h, du));
  return mul(spd_inverse(g), pullback);
}

// --- pointwise operations ---------------------------------------------------

Eigen::MatrixXd sigma(const SmoothMap& map, std::span<const double> point);
Eigen::MatrixXd sigma_m(const SmoothMap& map, int m, std::span<const double> point);
Eigen::MatrixXd sigma_T(const SmoothMap& map, std::span<const double> point);
Eigen::MatrixXd sigma_S(const SmoothMap& map, std::span<const double> point);
Eigen::MatrixXd sigma_T_m(const SmoothMap& map, int m, double p, std::span<const double> point);
Eigen::MatrixXd sigma_S_m(const SmoothMap& map, int m, double p, std::span<const double> point);

Eigen::MatrixXd sigma_components(const SigmaSpec& spec, const MapJet& jet);

struct EnergyDensities {
  double e_du = 0.0;        // |du|^2 = tr P
  double e_pullback = 0.0;  // |u*h|^2 = tr P^2
  Eigen::MatrixXd P;

  /// |d_m u|^2 = tr P^m.
  double e_m(int m) const;
};

EnergyDensities energy_densities(const SmoothMap& map, std::span<const double> point);

// --- divergences ------------------------------------------------------------

/// Scalar whose power weights a divergence: |u*h| or |d_m u|.
struct WeightRule {
  enum class Kind { pullback_norm, dm_norm };
  Kind kind = Kind::pullback_norm;
  int m = 2;

  static WeightRule pullback() { return {}; }
  static WeightRule dm(int m) { return {Kind::dm_norm, m}; }

  /// Squared weight, tr P^2 or tr P^m.
  template <class T>
  T squared(const Mat<T>& P) const {
    return trace_of(matrix_power(P, kind == Kind::pullback_norm ? 2 : m));
  }
};

/// (nabla_a sigma)^i_b along the map, using source and pulled-back target
/// connections. nabla[i](a, b).
struct CovariantDerivative {
  MapJet jet;
  Eigen::MatrixXd sigma;
  std::vector<Eigen::MatrixXd> nabla;
};

CovariantDerivative covariant_derivative(const TensorField1FormValued& tensor,
                                         std::span<const double> point);

struct DivergenceResult {
  Eigen::VectorXd point;
  Eigen::VectorXd image;
  Eigen::VectorXd div;            // total
  double weight_value = 1.0;      // w^{p-2} at the point
  Eigen::VectorXd gradient_term;  // ((p-2)/2) w^{p-4} <grad w^2, e_a> sigma(e_a)
  Eigen::VectorXd plain_term;     // w^{p-2} div sigma
};

DivergenceResult divergence(const TensorField1FormValued& tensor, std::span<const double> point);

/// div(w^{p-2} sigma). The total is differentiated as one product inside the
/// dual pipeline; gradient_term and plain_term are computed separately.
DivergenceResult weighted_divergence(const TensorField1FormValued& tensor, const WeightRule& rule,
                                     double p, std::span<const double> point);

/// div g^{ab} nabla_a T_b for a tensor whose covariant derivative is known.
Eigen::VectorXd trace_divergence(const Eigen::MatrixXd& g_inv,
                                 const std::vector<Eigen::MatrixXd>& nabla);

namespace detail {

/// du, g and h(u(x)) as Duals differentiated along source coordinate `a`.
struct DualGeometry {
  Mat<Dual> du;
  Mat<Dual> g;
  Mat<Dual> h;
};

DualGeometry dual_geometry(const MapJet& jet, Eigen::Index a);

} // namespace detail

} // namespace symphonic

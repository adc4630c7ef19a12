#pragma once

// Pointwise predicates on maps and the jet machinery used to probe the
// morphism property with test functions of prescribed 2-jet.

#include <span>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "symphonic/maps.hpp"
#include "symphonic/report.hpp"
#include "symphonic/sampling.hpp"
#include "symphonic/tensors.hpp"

namespace symphonic {

// --- horizontal conformality -------------------------------------------------

/// Co-metric C^{ij} = g^{ab} u^i_a u^j_b compared with lambda^2 h^{ij}.
struct ConformalityAt {
  double lambda_sq = 0.0;
  double residual = 0.0;  // max |C - lambda^2 h^{-1}|
  Eigen::MatrixXd co_metric;
};

ConformalityAt conformality_at(const MapJet& jet);
ConformalityAt conformality_at(const SmoothMap& map, std::span<const double> point);

struct ConformalityPoint {
  std::vector<double> point;
  double lambda_sq = 0.0;
  double residual = 0.0;
};

struct ConformalityReport {
  std::string map_name;
  std::vector<ConformalityPoint> per_point;
  double max_residual = 0.0;
  double min_lambda = 0.0;
  double max_lambda = 0.0;
  double tolerance = 0.0;
  /// max lambda - min lambda below tolerance.
  bool lambda_constant = false;
  /// max_residual below tolerance.
  bool verdict = false;
  std::vector<std::string> warnings;
};

/// Requires source.dim >= target.dim.
ConformalityReport horizontal_conformality(const SmoothMap& map, const PointSet& samples, double tol);

// --- predicates --------------------------------------------------------------

/// Euclidean norm of div(|u*h|^{p-2} sigma_u) at every sample. Points where
/// the weight is singular are excluded and counted.
ResidualReport is_p_symphonic(const MapPtr& map, double p, const PointSet& samples, double tol);

/// Max-norm of the second fundamental form.
ResidualReport is_totally_geodesic(const SmoothMap& map, const PointSet& samples, double tol);

/// For a scalar f: lambda = g^{ij} f_i f_j / dim and residual max |f_i f_j - lambda g_ij|.
/// For dim >= 2 the condition can only hold where df = 0; the report notes it.
ResidualReport is_conformal_function(const SmoothMap& f, const PointSet& samples, double tol);

// --- 2-jet probes ------------------------------------------------------------

/// First and second derivatives (C_i, C_ij) prescribed for a test function.
struct Jet2Data {
  Eigen::VectorXd C;
  Eigen::MatrixXd C2;
};

/// Constraint polynomial on a 2-jet, summed over all repeated indices i, j, k:
///
///   2(p-2) C_k C_i C_j (C_i C_ik C_j^2 + C_i^2 C_j C_jk)
///     + C_i^2 C_j^2 (C_kk C_i C_j + C_k C_ik C_j + C_k C_i C_jk)
///
/// evaluated in contracted form.
double prop2_constraint(const Jet2Data& jet, double p);

/// C = e_k, C2 = 0 for k = 1..target_dim.
std::vector<Jet2Data> probe_jets(std::size_t target_dim);

/// Composes u with the coordinate functions y^k of its target and checks each
/// pullback for the p-symphonic equation. The residual per probe is
/// |div_composite - lambda^{2p} div_probe(u(x))|, the second term being the
/// probe's own defect (zero on flat targets). Passing is necessary, not
/// sufficient, for u to be a p-symphonic morphism.
ResidualReport morphism_probe_test(const MapPtr& u, double p, const PointSet& samples, double tol);

/// Coordinate function y^k on `target` as a map to the real line.
MapPtr coordinate_probe(const ManifoldPtr& target, std::size_t k);

// --- composition ingredients -------------------------------------------------

/// Frame-summed terms in the expansion of div(|(f o u)*h|^{p-2} sigma_{f o u})
/// for horizontally conformal u. With A_a = d(f o u) e_a, B_ab = df(nabla du(e_a, e_b)),
/// D_ab = df du(nabla_{e_a} e_b), S_a = sigma_{f o u}(e_a):
///
///   I_without_tension = <A_b, B_ba> A_a + <A_b, A_a> B_ba
///   I       = I_without_tension + <B_bb, A_a> A_a
///   II[0..5] = <B_ab,A_c><A_c,A_b>S_a,  <D_ab,A_c><A_c,A_b>S_a,
///              <A_b,B_ac><A_c,A_b>S_a,  <A_b,D_ac><A_c,A_b>S_a,
///              <A_b,A_c><B_ac,A_b>S_a,  <A_b,A_c><D_ac,A_b>S_a
///   III[0..2] = <S_b, nabla df(du e_a, du e_b)> S_a, <S_b, B_ab> S_a, <S_b, D_ab> S_a
///
/// The expansion checked by `decomposition_residual` is
///
///   lhs = lambda^{2p} div_h(|f*h|^{p-2} sigma_f)(u(x)) + w^{p-2} I
///         + ((p-2)/2) w^{p-4} (II[0] + II[2] + II[4] + III[1])
///
/// with w = |(f o u)*h|.
struct Theorem7Terms {
  Eigen::VectorXd I;
  Eigen::VectorXd I_without_tension;
  Eigen::VectorXd tension_term;
  std::vector<Eigen::VectorXd> II_terms;
  std::vector<Eigen::VectorXd> III_terms;
  Eigen::VectorXd II;
  Eigen::VectorXd III;
  Eigen::VectorXd du_part;      // II[0] + II[2] + II[4] + III[1]
  Eigen::VectorXd frame_part;   // II[1] + II[3] + II[5] + III[2]
  Eigen::VectorXd lhs;
  Eigen::VectorXd main_term;
  Eigen::VectorXd assembled;
  double lambda_sq = 0.0;
  double weight_sq = 0.0;       // w^2
  double decomposition_residual = 0.0;
};

Theorem7Terms theorem7_ingredients(const MapPtr& f, const MapPtr& u, double p,
                                   std::span<const double> point);

} // namespace symphonic

namespace symphonic::detail {

/// Evaluates `eval(index, point)` at every sample (in parallel when enabled) and
/// assembles the records in sample order. A SingularWeightError excludes its
/// point and adds a warning; any other exception propagates.
template <class Eval>
ResidualReport collect_points(std::string name, const PointSet& samples, double tol, Eval&& eval) {
  std::vector<PointRecord> records(samples.size());
  std::vector<std::string> singular(samples.size());
  parallel_for(samples.size(), [&](std::size_t i) {
    try {
      records[i] = eval(i, std::span<const double>(samples[i]));
    } catch (const SingularWeightError& e) {
      singular[i] = e.what();
    }
  });
  ResidualReport report;
  report.identity_name = std::move(name);
  for (std::size_t i = 0; i < samples.size(); ++i) {
    if (!singular[i].empty()) {
      ++report.excluded_points;
      report.warnings.push_back("excluded: " + singular[i]);
      continue;
    }
    report.add(std::move(records[i]));
  }
  report.finalize(tol);
  return report;
}

} // namespace symphonic::detail

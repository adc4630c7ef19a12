#pragma once

// Composition identities checked as falsifiable numerical equalities.
//
// Each check evaluates the left side from the composite f o u at x and the
// right side from f at u(x), scaled by the dilation lambda extracted from u
// at x (never a declared value). Hypotheses are checked alongside and
// recorded as annotations; a violated hypothesis does not abort the check.

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "symphonic/analysis.hpp"
#include "symphonic/maps.hpp"
#include "symphonic/report.hpp"
#include "symphonic/sampling.hpp"

namespace symphonic {

enum class IdentityKind {
  thm1_unweighted,
  thm1_weighted,
  lemma3,
  thm6_m_version,
  sec3_T_theorem,
  sec3_T_lemma,
  sec3_S_variant,
};

const char* identity_name(IdentityKind kind);
std::optional<IdentityKind> identity_from_name(const std::string& name);
std::vector<std::string> identity_names();

/// Which side structure a trace-modified identity uses.
enum class Sec3Form { automatic, theorem, lemma };

struct IdentityCase {
  IdentityKind kind = IdentityKind::thm1_unweighted;
  MapPtr u;
  MapPtr f;
  double p = 2.0;
  int m = 2;
  /// Drawn from u's sampling box (sample_count points, seed) when empty.
  PointSet samples;
  std::size_t sample_count = default_sample_count;
  std::uint64_t seed = 0;
  double tol = 1e-7;
  Sec3Form form = Sec3Form::automatic;
};

ResidualReport verify_thm1_unweighted(const MapPtr& u, const MapPtr& f, const PointSet& samples,
                                      double tol);
ResidualReport verify_thm1_weighted(const MapPtr& u, const MapPtr& f, double p,
                                    const PointSet& samples, double tol);
ResidualReport verify_lemma3(const MapPtr& u, const MapPtr& f, double p, const PointSet& samples,
                             double tol);
ResidualReport verify_thm6(const MapPtr& u, const MapPtr& f, double p, int m,
                           const PointSet& samples, double tol);

enum class Sec3Variant { T, S };

/// Theorem form lhs = lambda^4 div sigma_{T,f}(u(x)); lemma form adds
/// lambda_f^2 df(div sigma_{T,u}). `automatic` picks the lemma form when u is
/// not totally geodesic at the samples.
ResidualReport verify_sec3_T(const MapPtr& u, const MapPtr& f, const PointSet& samples, double tol,
                             Sec3Variant variant = Sec3Variant::T,
                             Sec3Form form = Sec3Form::automatic);

/// Dispatches on case.kind.
ResidualReport verify(const IdentityCase& c);

/// Family u_lambda parameterised by its dilation.
using MapFamily = std::function<MapPtr(double lambda)>;

struct SweepPoint {
  double lambda = 0.0;
  double mean_log_ratio = 0.0;  // mean of log(|lhs| / |rhs unscaled|)
  ResidualReport report;
};

struct SweepResult {
  std::string identity_name;
  double fitted_exponent = 0.0;
  double expected_exponent = 0.0;
  std::vector<SweepPoint> per_lambda;
};

/// Exponent the identity predicts for lhs / rhs-unscaled: 4, 2p, m p or 4.
double expected_exponent(IdentityKind kind, double p, int m);

/// Least-squares slope of the mean log ratio against log lambda. `base`
/// supplies f, p, m, the samples and the tolerance; u is taken from `family`.
/// Throws ArgumentError when fewer than two distinct lambdas are given or the
/// identity has no single scaling (lemma forms).
SweepResult exponent_sweep(const IdentityCase& base, const MapFamily& family,
                           const std::vector<double>& lambdas);

} // namespace symphonic

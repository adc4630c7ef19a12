#include "symphonic/autodiff.hpp"

#include <string>

namespace symphonic::detail {

namespace {

[[noreturn]] void non_finite(std::span<const double> point) {
  throw NonFiniteError("non-finite value or derivative at " + format_point(point));
}

} // namespace

void check_finite(const Jet2Scalar& jet, std::span<const double> point) {
  if (!std::isfinite(jet.value) || !jet.grad.allFinite() || !jet.hess.allFinite())
    non_finite(point);
}

void check_finite(const Jet1Scalar& jet, std::span<const double> point) {
  if (!std::isfinite(jet.value) || !jet.grad.allFinite()) non_finite(point);
}

} // namespace symphonic::detail

#include "symphonic/box.hpp"

#include <cstdio>
#include <sstream>

#include "symphonic/errors.hpp"

namespace symphonic {

namespace {

std::string format_number(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.6g", x);
  return buf;
}

} // namespace

std::string format_point(std::span<const double> point) {
  std::string s = "(";
  for (std::size_t i = 0; i < point.size(); ++i) {
    if (i) s += ", ";
    s += format_number(point[i]);
  }
  return s + ")";
}

std::string Box::describe() const {
  std::string s;
  for (std::size_t i = 0; i < sides_.size(); ++i) {
    if (i) s += " x ";
    s += "(" + format_number(sides_[i].lo) + ", " + format_number(sides_[i].hi) + ")";
  }
  return s;
}

void require_inside(const Box& box, std::span<const double> point, const std::string& what) {
  if (point.size() != box.dim())
    throw ArgumentError(what + ": point " + format_point(point) + " has dimension " +
                        std::to_string(point.size()) + ", expected " + std::to_string(box.dim()));
  if (auto bad = box.first_violation(point)) {
    throw EvaluationError(what + ": coordinate x" + std::to_string(*bad + 1) + " = " +
                              format_number(point[*bad]) + " of point " + format_point(point) +
                              " is outside the domain " + box.describe(),
                          static_cast<std::ptrdiff_t>(*bad));
  }
}

} // namespace symphonic

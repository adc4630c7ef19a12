#pragma once

#include <cstddef>
#include <limits>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace symphonic {

/// Open interval (lo, hi); either end may be infinite.
struct Interval {
  double lo = -std::numeric_limits<double>::infinity();
  double hi = std::numeric_limits<double>::infinity();

  bool contains(double x) const { return x > lo && x < hi; }
  bool bounded() const { return lo > -std::numeric_limits<double>::infinity() &&
                                hi < std::numeric_limits<double>::infinity(); }
};

/// Axis-aligned coordinate box.
class Box {
public:
  Box() = default;
  explicit Box(std::vector<Interval> sides) : sides_(std::move(sides)) {}

  static Box unbounded(std::size_t dim) { return Box(std::vector<Interval>(dim)); }
  static Box cube(std::size_t dim, double lo, double hi) {
    return Box(std::vector<Interval>(dim, Interval{lo, hi}));
  }

  std::size_t dim() const { return sides_.size(); }
  const Interval& operator[](std::size_t i) const { return sides_[i]; }
  const std::vector<Interval>& sides() const { return sides_; }

  bool empty() const {
    for (const auto& s : sides_)
      if (!(s.lo < s.hi)) return true;
    return false;
  }

  /// First coordinate of `point` outside the box, if any.
  std::optional<std::size_t> first_violation(std::span<const double> point) const {
    for (std::size_t i = 0; i < sides_.size() && i < point.size(); ++i)
      if (!sides_[i].contains(point[i])) return i;
    return std::nullopt;
  }

  bool contains(std::span<const double> point) const {
    return point.size() == sides_.size() && !first_violation(point);
  }

  std::string describe() const;

private:
  std::vector<Interval> sides_;
};

/// Throws EvaluationError naming the first coordinate of `point` outside `box`.
void require_inside(const Box& box, std::span<const double> point, const std::string& what);

std::string format_point(std::span<const double> point);

} // namespace symphonic

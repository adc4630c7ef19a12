#pragma once

#include <string>
#include <vector>

#include "symphonic/box.hpp"

namespace corpus {

struct Entry {
  std::string source;
  std::size_t arity;
  symphonic::Box box;  // where the expression is smooth
};

inline std::vector<Entry> expressions() {
  using symphonic::Box;
  using symphonic::Interval;
  const Box unit2 = Box::cube(2, -1.0, 1.0);
  const Box pos2 = Box::cube(2, 0.3, 2.0);
  const Box pos3 = Box::cube(3, 0.3, 1.5);
  return {
      {"7", 2, unit2},
      {"x1*x2", 2, unit2},
      {"x1^2 + sin(x2)", 2, unit2},
      {"-x1^2", 1, Box::cube(1, -2.0, 2.0)},
      {"2^x1", 1, Box::cube(1, -1.0, 1.0)},
      {"x1^x2", 2, pos2},
      {"4/(1 - x1^2 - x2^2)^2", 2, Box::cube(2, -0.6, 0.6)},
      {"exp(x1/2)*cos(x2/2)", 2, unit2},
      {"exp(x1/2)*sin(x2/2)", 2, unit2},
      {"log(x1) + sqrt(x2)", 2, pos2},
      {"tan(x1) - x2^3", 2, Box::cube(2, -1.0, 1.0)},
      {"atan2(x2, x1)", 2, pos2},
      {"abs(x1 - 0.1)*x2", 2, Box({Interval{0.3, 1.0}, Interval{-1.0, 1.0}})},
      {"sqrt(x1^2 + x2^2 + x3^2)^(1/3)", 3, pos3},
      {"(x1^2 + x2^2 + x3^2)^(-0.5)", 3, pos3},
      {"x1*x2*x3 - x1^3/3 + 2.5e-1*x3", 3, Box::cube(3, -1.0, 1.0)},
      {"sin(x1)^2 + cos(x1)^2", 1, Box::cube(1, -3.0, 3.0)},
      {"1/(1 + x1^2 + x2^2)", 2, Box::cube(2, -2.0, 2.0)},
      {"sin(pi*x1)*exp(-x2^2)", 2, unit2},
      {"(x1 - x2)/(x1 + x2)", 2, pos2},
      {"log(1 + x1^2)*atan2(x1, 2 + x2)", 2, unit2},
      {"x1^2.5 - 2*x1*x2^2", 2, pos2},
      {"cos(x1*x2 + x3)^3", 3, Box::cube(3, -1.0, 1.0)},
      {"sqrt(4 - x1^2 - x2^2 - x3^2 - x4^2)", 4, Box::cube(4, -0.8, 0.8)},
  };
}

} // namespace corpus

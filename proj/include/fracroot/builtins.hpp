#pragma once

// The four built-in test functions and their listed roots (5 significant digits).

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "fracroot/errors.hpp"
#include "fracroot/funcmodel.hpp"

namespace fracroot {

struct BuiltinFunction {
  std::string name;
  std::string formula;
  FunctionModel model;
  std::vector<Complex> roots;  // five significant decimals
};

/// f1(x) = −12.84x⁶ − 25.6x⁵ + 16.55x⁴ − 2.21x³ + 26.71x² − 4.29x − 15.21
inline BuiltinFunction builtin_f1() {
  FunctionModel m({{-12.84, 6}, {-25.6, 5}, {16.55, 4}, {-2.21, 3}, {26.71, 2}, {-4.29, 1},
                   {-15.21, 0}},
                  {});
  return {"f1", "-12.84x^6 - 25.6x^5 + 16.55x^4 - 2.21x^3 + 26.71x^2 - 4.29x - 15.21", m,
          {{0.82366, 0.24769}, {0.82366, -0.24769}, {-2.62297, 0.0}, {-0.584, 0.0},
           {-0.21705, 0.99911}, {-0.21705, -0.99911}}};
}

/// f2(x) = i·x^1.8 − x^0.9 − 16
inline BuiltinFunction builtin_f2() {
  FunctionModel m({{{0.0, 1.0}, 1.8}, {-1.0, 0.9}, {-16.0, 0}}, {});
  return {"f2", "i x^1.8 - x^0.9 - 16", m, {{2.90807, -4.24908}, {-3.85126, 1.74602}}};
}

/// f3(x) = e^x − 1
inline BuiltinFunction builtin_f3() {
  FunctionModel m({{-1.0, 0}}, {{1.0, 1.0}});
  return {"f3", "e^x - 1", m, {{0.0, 0.0}}};
}

/// f4(x) = sin(10x) − 0.5x + 0.2, the sine split into e^{±10ix}/(±2i)
inline BuiltinFunction builtin_f4() {
  FunctionModel m({{-0.5, 1}, {0.2, 0}},
                  {{{0.0, -0.5}, {0.0, 10.0}}, {{0.0, 0.5}, {0.0, -10.0}}});
  return {"f4", "sin(10x) - 0.5x + 0.2", m,
          {{-1.4523, 0}, {-1.3647, 0}, {-0.87345, 0}, {-0.6857, 0}, {-0.27949, 0},
           {-0.021219, 0}, {0.31824, 0}, {0.64036, 0}, {0.91636, 0}, {1.3035, 0},
           {1.5118, 0}, {1.9756, 0}, {2.0977, 0}}};
}

inline std::optional<BuiltinFunction> find_builtin(std::string_view name) {
  if (name == "f1") return builtin_f1();
  if (name == "f2") return builtin_f2();
  if (name == "f3") return builtin_f3();
  if (name == "f4") return builtin_f4();
  return std::nullopt;
}

inline BuiltinFunction builtin(std::string_view name) {
  auto b = find_builtin(name);
  if (!b) throw ConfigError("unknown built-in function: " + std::string(name));
  return *b;
}

inline std::vector<std::string> builtin_names() { return {"f1", "f2", "f3", "f4"}; }

}  // namespace fracroot

#pragma once

#include <cmath>
#include <span>
#include <string>
#include <variant>
#include <vector>

#include "hjnet/errors.hpp"

namespace hjnet {

struct ConstantCost {
  double value = 1.0;
};

/// f(x) = slope * (x1 - origin) + offset
struct AffineX1Cost {
  double slope = 0.0;
  double origin = 0.0;
  double offset = 0.0;
};

/// f(x) = mean + a * sin(k1 * x1) + b * cos(k2 * x2)
struct SinusoidalCost {
  double mean = 0.0;
  double a = 0.0;
  double k1 = 0.0;
  double b = 0.0;
  double k2 = 0.0;
};

/// f(x) = sum_k coef_k * fn_k(freq_k * (x[axis_k] - shift_k)), fn in {const, linear, sin, cos}.
struct ExpressionTableCost {
  enum class Fn { Const, Linear, Sin, Cos };
  struct Term {
    double coef = 0.0;
    Fn fn = Fn::Const;
    int axis = 0;
    double freq = 1.0;
    double shift = 0.0;
  };
  std::vector<Term> terms;
};

using CostForm = std::variant<ConstantCost, AffineX1Cost, SinusoidalCost, ExpressionTableCost>;

/// Running cost f with its declared positive lower bound eta.
struct CostSpec {
  CostForm form = ConstantCost{};
  double eta = 1.0;

  double operator()(std::span<const double> x) const {
    return std::visit([&](const auto& c) { return eval(c, x); }, form);
  }

  const char* kind() const {
    switch (form.index()) {
      case 0: return "constant";
      case 1: return "affine-x1";
      case 2: return "sinusoidal";
      default: return "expression-table";
    }
  }

  bool is_constant() const { return std::holds_alternative<ConstantCost>(form); }

 private:
  static double coord(std::span<const double> x, int axis) {
    if (axis < 0 || static_cast<std::size_t>(axis) >= x.size()) {
      throw Error(ErrorKind::InvalidInput, "cost references axis " + std::to_string(axis) +
                                               " of a " + std::to_string(x.size()) + "-d point");
    }
    return x[static_cast<std::size_t>(axis)];
  }
  static double eval(const ConstantCost& c, std::span<const double>) { return c.value; }
  static double eval(const AffineX1Cost& c, std::span<const double> x) {
    return c.slope * (coord(x, 0) - c.origin) + c.offset;
  }
  static double eval(const SinusoidalCost& c, std::span<const double> x) {
    return c.mean + c.a * std::sin(c.k1 * coord(x, 0)) + c.b * std::cos(c.k2 * coord(x, 1));
  }
  static double eval(const ExpressionTableCost& c, std::span<const double> x) {
    double f = 0.0;
    for (const auto& term : c.terms) {
      const double arg = term.freq * (coord(x, term.axis) - term.shift);
      switch (term.fn) {
        case ExpressionTableCost::Fn::Const: f += term.coef; break;
        case ExpressionTableCost::Fn::Linear: f += term.coef * arg; break;
        case ExpressionTableCost::Fn::Sin: f += term.coef * std::sin(arg); break;
        case ExpressionTableCost::Fn::Cos: f += term.coef * std::cos(arg); break;
      }
    }
    return f;
  }
};

}  // namespace hjnet

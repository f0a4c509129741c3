// potential.hpp -- polynomial bulk potential f(phi) and its derivatives
#pragma once

#include <cmath>
#include <cstddef>
#include <stdexcept>
#include <vector>

namespace pfgt {

// f(phi) = sum_k coeffs[k] * phi^k. One coefficient list serves f, f', f''.
struct BulkPotential {
  std::vector<double> coeffs;  // a_0 .. a_d, d >= 2

  BulkPotential() : coeffs{0.0, 0.0, 0.0} {}
  explicit BulkPotential(std::vector<double> c) : coeffs(std::move(c)) {
    validate();
  }

  // f = -(g/2) phi^2 + (1/4) phi^4, the classical cubic-nonlinearity well.
  static BulkPotential double_well(double g) {
    return BulkPotential({0.0, 0.0, -0.5 * g, 0.0, 0.25});
  }

  static BulkPotential zero() { return BulkPotential({0.0, 0.0, 0.0}); }

  void validate() const {
    if (coeffs.size() < 3)
      throw std::invalid_argument("BulkPotential: degree must be >= 2");
    for (double a : coeffs)
      if (!std::isfinite(a))
        throw std::invalid_argument("BulkPotential: non-finite coefficient");
  }

  struct Eval {
    double f, f1, f2;
  };

  // Single Horner sweep evaluating f, f', f''.
  Eval eval(double phi) const {
    double f = 0.0, f1 = 0.0, f2 = 0.0;
    for (std::size_t i = coeffs.size(); i-- > 0;) {
      f2 = f2 * phi + 2.0 * f1;
      f1 = f1 * phi + f;
      f = f * phi + coeffs[i];
    }
    return {f, f1, f2};
  }

  double value(double phi) const { return eval(phi).f; }
  double d1(double phi) const { return eval(phi).f1; }
  double d2(double phi) const { return eval(phi).f2; }
};

inline BulkPotential::Eval bulk_potential_eval(const BulkPotential& p, double phi) {
  return p.eval(phi);
}

}  // namespace pfgt

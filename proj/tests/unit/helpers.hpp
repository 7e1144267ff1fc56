#pragma once

#include <complex>
#include <initializer_list>
#include <vector>

#include "hroots/mp.hpp"
#include "hroots/poly.hpp"

namespace testing {

inline hroots::Polynomial real_poly(std::initializer_list<double> coeffs, hroots::mp::Bits bits = 256) {
  std::vector<std::complex<double>> c(coeffs.begin(), coeffs.end());
  return hroots::make_polynomial(c, bits);
}

inline hroots::mp::Complex cx(double re, double im = 0.0, hroots::mp::Bits bits = 256) { return {re, im, bits}; }

inline double dist(const hroots::mp::Complex& a, const hroots::mp::Complex& b) {
  return hroots::mp::distance(a, b).to_double();
}

inline double rel(const hroots::mp::Complex& a, const hroots::mp::Complex& b) {
  const double s = hroots::mp::abs(b).to_double();
  return s > 0 ? dist(a, b) / s : dist(a, b);
}

}  // namespace testing

#pragma once

#include <complex>
#include <span>
#include <vector>

#include "hroots/mp.hpp"

namespace hroots {

/// P(z) = a_0 z^n + a_1 z^{n-1} + ... + a_n with a_0 != 0.
///
/// Coefficients are kept in descending order of powers. The constant term may
/// be zero; the solver strips zero roots before running the series machinery.
class Polynomial {
 public:
  /// Validates and takes ownership of descending coefficients. All
  /// coefficients are rounded to the widest precision present.
  static Polynomial make(std::vector<mp::Complex> coeffs);

  [[nodiscard]] int degree() const { return static_cast<int>(coeffs_.size()) - 1; }
  [[nodiscard]] const std::vector<mp::Complex>& coeffs() const { return coeffs_; }
  [[nodiscard]] const mp::Complex& leading() const { return coeffs_.front(); }
  [[nodiscard]] const mp::Complex& constant_term() const { return coeffs_.back(); }
  /// Coefficient of z^j; zero for j > degree.
  [[nodiscard]] mp::Complex ascending(int j) const;
  [[nodiscard]] mp::Bits precision() const { return coeffs_.front().precision(); }
  [[nodiscard]] Polynomial with_precision(mp::Bits bits) const;

 private:
  explicit Polynomial(std::vector<mp::Complex> coeffs) : coeffs_(std::move(coeffs)) {}
  std::vector<mp::Complex> coeffs_;
};

Polynomial make_polynomial(std::vector<mp::Complex> coeffs);
Polynomial make_polynomial(std::span<const std::complex<double>> coeffs,
                           mp::Bits bits = mp::kDefaultBits);

struct StrippedPolynomial {
  Polynomial reduced;
  int zero_multiplicity = 0;
};

/// P(z) = z^count * Q(z) with Q(0) != 0.
StrippedPolynomial strip_zero_roots(const Polynomial& p);

/// Horner evaluation at the polynomial's working precision.
mp::Complex evaluate(const Polynomial& p, const mp::Complex& z);

Polynomial derivative(const Polynomial& p);

/// Q(z) = P(z + s) by binomial convolution.
Polynomial shift(const Polynomial& p, const mp::Complex& s);

struct RootMultiplicity {
  mp::Complex root;
  int multiplicity = 1;
};

/// a_0 * prod (z - z_j)^{m_j}, expanded.
Polynomial from_roots(std::span<const RootMultiplicity> roots, const mp::Complex& leading);

/// |P(z)| / sum |a_i| |z|^{n-i}: zero at exact roots, O(eps) at roots that
/// are exact for a nearby polynomial.
double relative_residual(const Polynomial& p, const mp::Complex& z);

enum class Provenance {
  Direct,       // degree-one factor, read off the coefficients
  TaylorSide,   // quotient of products from the Taylor-side determinant ratios
  LaurentSide,  // quotient of products from the Laurent-side determinant ratios
  Shifted,      // recovered from a shifted polynomial after a modulus tie
  Deflated,     // completed from the roots already found (sum or quotient), then refined
};

const char* to_string(Provenance p);

struct RootEntry {
  mp::Complex root;
  int multiplicity = 1;
  double residual = 0.0;
  Provenance provenance = Provenance::Direct;
};

struct RootSet {
  std::vector<RootEntry> entries;
  int zero_multiplicity = 0;
  int shifts_used = 0;

  [[nodiscard]] int distinct_count() const { return static_cast<int>(entries.size()); }
  /// Sum over entries; zero_multiplicity is not included.
  [[nodiscard]] int total_multiplicity() const;
};

}  // namespace hroots

#pragma once

// Multiple-precision real and complex scalars on top of MPFR.
//
// Every value carries its own mantissa precision in bits. Binary operations
// produce a result at the larger of the two operand precisions; compound
// assignment widens the left operand when the right one is wider.

#include <mpfr.h>

#include <complex>
#include <cstdint>
#include <string>

namespace hroots::mp {

using Bits = mpfr_prec_t;

inline constexpr Bits kDefaultBits = 256;

class Real {
 public:
  Real() : Real(kDefaultBits) {}
  explicit Real(Bits bits);
  Real(double x, Bits bits);
  Real(long x, Bits bits);
  Real(int x, Bits bits) : Real(static_cast<long>(x), bits) {}

  /// Parses a decimal or hexadecimal (0x...p...) string, rounding to nearest.
  static Real parse(const std::string& text, Bits bits);

  Real(const Real& other);
  Real(Real&& other) noexcept;
  Real& operator=(const Real& other);
  Real& operator=(Real&& other) noexcept;
  ~Real();

  [[nodiscard]] Bits precision() const { return mpfr_get_prec(v_); }
  [[nodiscard]] Real with_precision(Bits bits) const;

  [[nodiscard]] mpfr_ptr get() { return v_; }
  [[nodiscard]] mpfr_srcptr get() const { return v_; }

  [[nodiscard]] bool is_zero() const { return mpfr_zero_p(v_) != 0; }
  [[nodiscard]] bool is_finite() const { return mpfr_number_p(v_) != 0; }
  [[nodiscard]] int sign() const { return mpfr_sgn(v_); }

  [[nodiscard]] double to_double() const { return mpfr_get_d(v_, MPFR_RNDN); }
  /// log2|x|, finite for any nonzero value regardless of exponent range.
  [[nodiscard]] double log2_abs() const;
  /// Binary exponent e with |x| = f * 2^e, 1/2 <= f < 1 (0 for zero).
  [[nodiscard]] long exponent() const;
  [[nodiscard]] std::string to_string(int digits = 0) const;

  Real& operator+=(const Real& o);
  Real& operator-=(const Real& o);
  Real& operator*=(const Real& o);
  Real& operator/=(const Real& o);

 private:
  void widen_to(Bits bits);
  mpfr_t v_;
};

Real operator-(const Real& a);
Real operator+(const Real& a, const Real& b);
Real operator-(const Real& a, const Real& b);
Real operator*(const Real& a, const Real& b);
Real operator/(const Real& a, const Real& b);
Real operator*(const Real& a, long b);
Real operator/(const Real& a, long b);
Real operator+(const Real& a, long b);
Real operator-(const Real& a, long b);

bool operator<(const Real& a, const Real& b);
bool operator>(const Real& a, const Real& b);
bool operator<=(const Real& a, const Real& b);
bool operator>=(const Real& a, const Real& b);
bool operator==(const Real& a, const Real& b);

Real abs(const Real& x);
Real sqrt(const Real& x);
Real hypot(const Real& a, const Real& b);
/// x * 2^e, exact.
Real ldexp(const Real& x, long e);
Real pi(Bits bits);
Real cos(const Real& x);
Real sin(const Real& x);

class Complex {
 public:
  Complex() = default;
  explicit Complex(Bits bits) : re_(bits), im_(bits) {}
  Complex(double re, double im, Bits bits) : re_(re, bits), im_(im, bits) {}
  Complex(std::complex<double> z, Bits bits) : re_(z.real(), bits), im_(z.imag(), bits) {}
  Complex(Real re, Real im);
  explicit Complex(Real re);

  static Complex from_int(long re, Bits bits) { return Complex(Real(re, bits)); }
  /// e^{i*theta} for a rational multiple theta = 2*pi*num/den.
  static Complex unit_root(long num, long den, Bits bits);

  [[nodiscard]] const Real& real() const { return re_; }
  [[nodiscard]] const Real& imag() const { return im_; }
  [[nodiscard]] Real& real() { return re_; }
  [[nodiscard]] Real& imag() { return im_; }

  [[nodiscard]] Bits precision() const;
  [[nodiscard]] Complex with_precision(Bits bits) const;

  [[nodiscard]] bool is_zero() const { return re_.is_zero() && im_.is_zero(); }
  [[nodiscard]] bool is_finite() const { return re_.is_finite() && im_.is_finite(); }
  [[nodiscard]] std::complex<double> to_std() const { return {re_.to_double(), im_.to_double()}; }
  /// log2|z|; -infinity for zero.
  [[nodiscard]] double log2_abs() const;

  Complex& operator+=(const Complex& o);
  Complex& operator-=(const Complex& o);
  Complex& operator*=(const Complex& o);
  Complex& operator/=(const Complex& o);

 private:
  Real re_;
  Real im_;
};

Complex operator-(const Complex& a);
Complex operator+(const Complex& a, const Complex& b);
Complex operator-(const Complex& a, const Complex& b);
Complex operator*(const Complex& a, const Complex& b);
Complex operator/(const Complex& a, const Complex& b);
Complex operator*(const Complex& a, const Real& b);
Complex operator/(const Complex& a, const Real& b);
Complex operator*(const Complex& a, long b);
Complex operator/(const Complex& a, long b);

Complex conj(const Complex& z);
Real norm(const Complex& z);
Real abs(const Complex& z);
Complex pow(const Complex& z, unsigned long n);
Complex inverse(const Complex& z);
Complex ldexp(const Complex& z, long e);

/// |a - b|, convenient for tolerance checks.
Real distance(const Complex& a, const Complex& b);

}  // namespace hroots::mp

#include "hroots/mp.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace hroots::mp {

namespace {

Bits wider(const Real& a, const Real& b) { return std::max(a.precision(), b.precision()); }

}  // namespace

Real::Real(Bits bits) {
  mpfr_init2(v_, bits);
  mpfr_set_zero(v_, 1);
}

Real::Real(double x, Bits bits) {
  mpfr_init2(v_, bits);
  mpfr_set_d(v_, x, MPFR_RNDN);
}

Real::Real(long x, Bits bits) {
  mpfr_init2(v_, bits);
  mpfr_set_si(v_, x, MPFR_RNDN);
}

Real Real::parse(const std::string& text, Bits bits) {
  Real r(bits);
  if (mpfr_set_str(r.v_, text.c_str(), 0, MPFR_RNDN) != 0) {
    throw std::invalid_argument("not a number: " + text);
  }
  return r;
}

Real::Real(const Real& other) {
  mpfr_init2(v_, mpfr_get_prec(other.v_));
  mpfr_set(v_, other.v_, MPFR_RNDN);
}

Real::Real(Real&& other) noexcept {
  *v_ = *other.v_;
  other.v_->_mpfr_d = nullptr;
}

Real& Real::operator=(const Real& other) {
  if (this == &other) return *this;
  if (v_->_mpfr_d == nullptr) {
    mpfr_init2(v_, mpfr_get_prec(other.v_));
  } else if (mpfr_get_prec(v_) != mpfr_get_prec(other.v_)) {
    mpfr_set_prec(v_, mpfr_get_prec(other.v_));
  }
  mpfr_set(v_, other.v_, MPFR_RNDN);
  return *this;
}

Real& Real::operator=(Real&& other) noexcept {
  std::swap(*v_, *other.v_);
  return *this;
}

Real::~Real() {
  if (v_->_mpfr_d != nullptr) mpfr_clear(v_);
}

Real Real::with_precision(Bits bits) const {
  Real r(bits);
  mpfr_set(r.v_, v_, MPFR_RNDN);
  return r;
}

double Real::log2_abs() const {
  if (is_zero()) return -std::numeric_limits<double>::infinity();
  if (!is_finite()) return std::numeric_limits<double>::infinity();
  long e = 0;
  const double f = mpfr_get_d_2exp(&e, v_, MPFR_RNDN);
  return static_cast<double>(e) + std::log2(std::fabs(f));
}

long Real::exponent() const {
  if (is_zero() || !is_finite()) return 0;
  return mpfr_get_exp(v_);
}

std::string Real::to_string(int digits) const {
  char* raw = nullptr;
  if (digits <= 0) {
    mpfr_asprintf(&raw, "%.*Rg", static_cast<int>(precision() * 0.30103) + 1, v_);
  } else {
    mpfr_asprintf(&raw, "%.*Rg", digits, v_);
  }
  std::string out(raw);
  mpfr_free_str(raw);
  return out;
}

void Real::widen_to(Bits bits) {
  if (bits > precision()) mpfr_prec_round(v_, bits, MPFR_RNDN);
}

Real& Real::operator+=(const Real& o) {
  widen_to(o.precision());
  mpfr_add(v_, v_, o.v_, MPFR_RNDN);
  return *this;
}

Real& Real::operator-=(const Real& o) {
  widen_to(o.precision());
  mpfr_sub(v_, v_, o.v_, MPFR_RNDN);
  return *this;
}

Real& Real::operator*=(const Real& o) {
  widen_to(o.precision());
  mpfr_mul(v_, v_, o.v_, MPFR_RNDN);
  return *this;
}

Real& Real::operator/=(const Real& o) {
  widen_to(o.precision());
  mpfr_div(v_, v_, o.v_, MPFR_RNDN);
  return *this;
}

Real operator-(const Real& a) {
  Real r(a.precision());
  mpfr_neg(r.get(), a.get(), MPFR_RNDN);
  return r;
}

Real operator+(const Real& a, const Real& b) {
  Real r(wider(a, b));
  mpfr_add(r.get(), a.get(), b.get(), MPFR_RNDN);
  return r;
}

Real operator-(const Real& a, const Real& b) {
  Real r(wider(a, b));
  mpfr_sub(r.get(), a.get(), b.get(), MPFR_RNDN);
  return r;
}

Real operator*(const Real& a, const Real& b) {
  Real r(wider(a, b));
  mpfr_mul(r.get(), a.get(), b.get(), MPFR_RNDN);
  return r;
}

Real operator/(const Real& a, const Real& b) {
  Real r(wider(a, b));
  mpfr_div(r.get(), a.get(), b.get(), MPFR_RNDN);
  return r;
}

Real operator*(const Real& a, long b) {
  Real r(a.precision());
  mpfr_mul_si(r.get(), a.get(), b, MPFR_RNDN);
  return r;
}

Real operator/(const Real& a, long b) {
  Real r(a.precision());
  mpfr_div_si(r.get(), a.get(), b, MPFR_RNDN);
  return r;
}

Real operator+(const Real& a, long b) {
  Real r(a.precision());
  mpfr_add_si(r.get(), a.get(), b, MPFR_RNDN);
  return r;
}

Real operator-(const Real& a, long b) {
  Real r(a.precision());
  mpfr_sub_si(r.get(), a.get(), b, MPFR_RNDN);
  return r;
}

bool operator<(const Real& a, const Real& b) { return mpfr_less_p(a.get(), b.get()) != 0; }
bool operator>(const Real& a, const Real& b) { return mpfr_greater_p(a.get(), b.get()) != 0; }
bool operator<=(const Real& a, const Real& b) { return mpfr_lessequal_p(a.get(), b.get()) != 0; }
bool operator>=(const Real& a, const Real& b) { return mpfr_greaterequal_p(a.get(), b.get()) != 0; }
bool operator==(const Real& a, const Real& b) { return mpfr_equal_p(a.get(), b.get()) != 0; }

Real abs(const Real& x) {
  Real r(x.precision());
  mpfr_abs(r.get(), x.get(), MPFR_RNDN);
  return r;
}

Real sqrt(const Real& x) {
  Real r(x.precision());
  mpfr_sqrt(r.get(), x.get(), MPFR_RNDN);
  return r;
}

Real hypot(const Real& a, const Real& b) {
  Real r(wider(a, b));
  mpfr_hypot(r.get(), a.get(), b.get(), MPFR_RNDN);
  return r;
}

Real ldexp(const Real& x, long e) {
  Real r(x.precision());
  mpfr_mul_2si(r.get(), x.get(), e, MPFR_RNDN);
  return r;
}

Real pi(Bits bits) {
  Real r(bits);
  mpfr_const_pi(r.get(), MPFR_RNDN);
  return r;
}

Real cos(const Real& x) {
  Real r(x.precision());
  mpfr_cos(r.get(), x.get(), MPFR_RNDN);
  return r;
}

Real sin(const Real& x) {
  Real r(x.precision());
  mpfr_sin(r.get(), x.get(), MPFR_RNDN);
  return r;
}

Complex::Complex(Real re, Real im) : re_(std::move(re)), im_(std::move(im)) {
  if (re_.precision() < im_.precision()) re_ = re_.with_precision(im_.precision());
  if (im_.precision() < re_.precision()) im_ = im_.with_precision(re_.precision());
}

Complex::Complex(Real re) : re_(std::move(re)), im_(Real(0L, re_.precision())) {}

Complex Complex::unit_root(long num, long den, Bits bits) {
  // Work with a few extra bits so cos/sin of the rounded angle land within
  // an ulp of the exact values.
  const Bits work = bits + 32;
  Real theta = pi(work) * (2 * num) / den;
  return Complex(cos(theta).with_precision(bits), sin(theta).with_precision(bits));
}

Bits Complex::precision() const { return std::max(re_.precision(), im_.precision()); }

Complex Complex::with_precision(Bits bits) const {
  return Complex(re_.with_precision(bits), im_.with_precision(bits));
}

double Complex::log2_abs() const {
  if (is_zero()) return -std::numeric_limits<double>::infinity();
  const double lr = re_.log2_abs();
  const double li = im_.log2_abs();
  const double hi = std::max(lr, li);
  const double lo = std::min(lr, li);
  if (!std::isfinite(lo)) return hi;
  return hi + 0.5 * std::log2(1.0 + std::exp2(2.0 * (lo - hi)));
}

Complex& Complex::operator+=(const Complex& o) {
  re_ += o.re_;
  im_ += o.im_;
  return *this;
}

Complex& Complex::operator-=(const Complex& o) {
  re_ -= o.re_;
  im_ -= o.im_;
  return *this;
}

Complex& Complex::operator*=(const Complex& o) {
  *this = *this * o;
  return *this;
}

Complex& Complex::operator/=(const Complex& o) {
  *this = *this / o;
  return *this;
}

Complex operator-(const Complex& a) { return Complex(-a.real(), -a.imag()); }

Complex operator+(const Complex& a, const Complex& b) {
  return Complex(a.real() + b.real(), a.imag() + b.imag());
}

Complex operator-(const Complex& a, const Complex& b) {
  return Complex(a.real() - b.real(), a.imag() - b.imag());
}

Complex operator*(const Complex& a, const Complex& b) {
  const Bits bits = std::max(a.precision(), b.precision());
  Real re(bits);
  Real im(bits);
  // re = ar*br - ai*bi, im = ar*bi + ai*br, each with a single rounding.
  mpfr_fmms(re.get(), a.real().get(), b.real().get(), a.imag().get(), b.imag().get(), MPFR_RNDN);
  mpfr_fmma(im.get(), a.real().get(), b.imag().get(), a.imag().get(), b.real().get(), MPFR_RNDN);
  return Complex(std::move(re), std::move(im));
}

Complex operator/(const Complex& a, const Complex& b) {
  const Bits bits = std::max(a.precision(), b.precision());
  Real den(bits);
  Real re(bits);
  Real im(bits);
  mpfr_fmma(den.get(), b.real().get(), b.real().get(), b.imag().get(), b.imag().get(), MPFR_RNDN);
  mpfr_fmma(re.get(), a.real().get(), b.real().get(), a.imag().get(), b.imag().get(), MPFR_RNDN);
  mpfr_fmms(im.get(), a.imag().get(), b.real().get(), a.real().get(), b.imag().get(), MPFR_RNDN);
  re /= den;
  im /= den;
  return Complex(std::move(re), std::move(im));
}

Complex operator*(const Complex& a, const Real& b) { return Complex(a.real() * b, a.imag() * b); }
Complex operator/(const Complex& a, const Real& b) { return Complex(a.real() / b, a.imag() / b); }
Complex operator*(const Complex& a, long b) { return Complex(a.real() * b, a.imag() * b); }
Complex operator/(const Complex& a, long b) { return Complex(a.real() / b, a.imag() / b); }

Complex conj(const Complex& z) { return Complex(z.real(), -z.imag()); }

Real norm(const Complex& z) {
  Real r(z.precision());
  mpfr_fmma(r.get(), z.real().get(), z.real().get(), z.imag().get(), z.imag().get(), MPFR_RNDN);
  return r;
}

Real abs(const Complex& z) { return hypot(z.real(), z.imag()); }

Complex pow(const Complex& z, unsigned long n) {
  Complex result = Complex::from_int(1, z.precision());
  Complex base = z;
  while (n > 0) {
    if (n & 1UL) result *= base;
    n >>= 1;
    if (n > 0) base *= base;
  }
  return result;
}

Complex inverse(const Complex& z) { return Complex::from_int(1, z.precision()) / z; }

Complex ldexp(const Complex& z, long e) { return Complex(ldexp(z.real(), e), ldexp(z.imag(), e)); }

Real distance(const Complex& a, const Complex& b) { return abs(a - b); }

}  // namespace hroots::mp

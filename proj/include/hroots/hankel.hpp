#pragma once

#include <complex>
#include <cstdint>
#include <span>
#include <vector>

#include "hroots/mp.hpp"
#include "hroots/series.hpp"

namespace hroots {

inline constexpr int kDefaultGuardBits = 16;
inline constexpr std::size_t kDefaultZeroWindow = 5;

/// mantissa * 2^exponent with |mantissa| in [1/2, 2), or canonical zero.
///
/// Hankel determinants of P'/P coefficients scale like |z_1...z_r|^{-k}
/// (Taylor) or |z_1...z_r|^{k} (Laurent); keeping the binary exponent in a
/// separate 64-bit integer keeps them representable for any practical k.
class ScaledComplex {
 public:
  ScaledComplex() = default;
  static ScaledComplex from(const mp::Complex& z);

  [[nodiscard]] const mp::Complex& mantissa() const { return mantissa_; }
  [[nodiscard]] std::int64_t exponent() const { return exponent_; }
  [[nodiscard]] bool is_zero() const { return mantissa_.is_zero(); }
  [[nodiscard]] mp::Bits precision() const { return mantissa_.precision(); }

  /// The represented value as a plain multiple-precision complex.
  [[nodiscard]] mp::Complex value() const;
  [[nodiscard]] double log2_abs() const;
  /// Nearest double-precision value; overflows to inf / underflows to 0.
  [[nodiscard]] std::complex<double> to_std() const;

  friend ScaledComplex operator*(const ScaledComplex& a, const ScaledComplex& b);
  friend ScaledComplex operator/(const ScaledComplex& a, const ScaledComplex& b);
  friend ScaledComplex operator+(const ScaledComplex& a, const ScaledComplex& b);
  friend ScaledComplex operator-(const ScaledComplex& a, const ScaledComplex& b);

 private:
  ScaledComplex(mp::Complex mantissa, std::int64_t exponent);
  void normalize();

  mp::Complex mantissa_{mp::Complex(mp::Bits{64})};
  std::int64_t exponent_ = 0;
};

/// H_{k,r} = det[ s_{k+i+j} ]_{i,j<r} over a coefficient stream s.
struct HankelCell {
  long k = 0;
  int r = 1;
  ScaledComplex value;
  /// log2( prod of row norms / |det| ): bits lost to cancellation relative
  /// to the Hadamard bound. +inf for an exactly zero determinant.
  double cancellation_margin = 0.0;
  /// Set when the margin reaches precision - guard bits: the value is then
  /// indistinguishable from zero at this precision and must not be trusted.
  bool flagged = false;
};

HankelCell hadamard_det(CoefficientStream& stream, long k, int r, int guard_bits = kDefaultGuardBits);

/// Same as above over a fixed, pre-computed coefficient slice. Throws
/// InsufficientStream when values cannot supply indices k .. k+2(r-1).
HankelCell hadamard_det(std::span<const mp::Complex> values, long k, int r,
                        int guard_bits = kDefaultGuardBits);

/// Cells for every k in [k_from, k_to]; identical to individual calls.
std::vector<HankelCell> det_row(CoefficientStream& stream, long k_from, long k_to, int r,
                                int guard_bits = kDefaultGuardBits);

enum class ZeroTest {
  NonZero,         // no cell is at the noise floor
  StructuralZero,  // every cell is zero to the full extent the precision certifies
  Inconclusive,    // a mix: precision ran out somewhere in the window
};

const char* to_string(ZeroTest z);

/// Classifies a k-window of cells of one order r. Throws TooFewPoints when
/// the window is shorter than min_window.
ZeroTest structural_zero_test(std::span<const HankelCell> cells,
                              std::size_t min_window = kDefaultZeroWindow);

/// True exactly when structural_zero_test reports StructuralZero.
bool is_structural_zero(std::span<const HankelCell> cells, std::size_t min_window = kDefaultZeroWindow);

}  // namespace hroots

#include "hroots/hankel.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "hroots/error.hpp"

namespace hroots {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

long component_exponent(const mp::Complex& z) {
  long e = std::numeric_limits<long>::min();
  if (!z.real().is_zero()) e = std::max(e, z.real().exponent());
  if (!z.imag().is_zero()) e = std::max(e, z.imag().exponent());
  return e;
}

// log2 of the Euclidean norm of a row, from per-entry log2 magnitudes.
double log2_row_norm(std::span<const double> logs) {
  double top = -kInf;
  for (double l : logs) top = std::max(top, l);
  if (!std::isfinite(top)) return top;
  double sum = 0.0;
  for (double l : logs) {
    if (std::isfinite(l)) sum += std::exp2(2.0 * (l - top));
  }
  return top + 0.5 * std::log2(sum);
}

}  // namespace

ScaledComplex::ScaledComplex(mp::Complex mantissa, std::int64_t exponent)
    : mantissa_(std::move(mantissa)), exponent_(exponent) {
  normalize();
}

ScaledComplex ScaledComplex::from(const mp::Complex& z) { return ScaledComplex(z, 0); }

void ScaledComplex::normalize() {
  if (mantissa_.is_zero()) {
    mantissa_ = mp::Complex(mantissa_.precision());
    exponent_ = 0;
    return;
  }
  // Largest component in [1/2, 1) puts |mantissa| in [1/2, sqrt 2).
  const long e = component_exponent(mantissa_);
  if (e != 0) {
    mantissa_ = mp::ldexp(mantissa_, -e);
    exponent_ += e;
  }
}

mp::Complex ScaledComplex::value() const { return mp::ldexp(mantissa_, exponent_); }

double ScaledComplex::log2_abs() const {
  if (is_zero()) return -kInf;
  return static_cast<double>(exponent_) + mantissa_.log2_abs();
}

std::complex<double> ScaledComplex::to_std() const {
  const std::complex<double> m = mantissa_.to_std();
  const int e = static_cast<int>(std::clamp<std::int64_t>(exponent_, -100000, 100000));
  return {std::ldexp(m.real(), e), std::ldexp(m.imag(), e)};
}

ScaledComplex operator*(const ScaledComplex& a, const ScaledComplex& b) {
  return ScaledComplex(a.mantissa_ * b.mantissa_, a.exponent_ + b.exponent_);
}

ScaledComplex operator/(const ScaledComplex& a, const ScaledComplex& b) {
  return ScaledComplex(a.mantissa_ / b.mantissa_, a.exponent_ - b.exponent_);
}

ScaledComplex operator+(const ScaledComplex& a, const ScaledComplex& b) {
  if (a.is_zero()) return b;
  if (b.is_zero()) return a;
  const std::int64_t e = std::max(a.exponent_, b.exponent_);
  return ScaledComplex(mp::ldexp(a.mantissa_, static_cast<long>(a.exponent_ - e)) +
                           mp::ldexp(b.mantissa_, static_cast<long>(b.exponent_ - e)),
                       e);
}

ScaledComplex operator-(const ScaledComplex& a, const ScaledComplex& b) {
  if (b.is_zero()) return a;
  return a + ScaledComplex(-b.mantissa_, b.exponent_);
}

HankelCell hadamard_det(std::span<const mp::Complex> values, long k, int r, int guard_bits) {
  if (r < 1 || k < 0) {
    throw Error(ErrorCode::InsufficientStream, "hankel.hadamard_det",
                "order must be >= 1 and index >= 0");
  }
  const auto last = static_cast<std::size_t>(k + 2 * (r - 1));
  if (last >= values.size()) {
    throw Error(ErrorCode::InsufficientStream, "hankel.hadamard_det",
                "need coefficient " + std::to_string(last) + ", have " + std::to_string(values.size()),
                k);
  }
  const auto n = static_cast<std::size_t>(r);
  const mp::Bits bits = values[static_cast<std::size_t>(k)].precision();

  std::vector<mp::Complex> a;
  a.reserve(n * n);
  double bound_log2 = 0.0;
  std::vector<double> logs(n);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      const auto& v = values[static_cast<std::size_t>(k) + i + j];
      logs[j] = v.log2_abs();
      a.push_back(v);
    }
    bound_log2 += log2_row_norm(logs);
  }
  auto at = [&](std::size_t i, std::size_t j) -> mp::Complex& { return a[i * n + j]; };

  // LU with partial pivoting; the determinant is accumulated in scaled form.
  ScaledComplex det = ScaledComplex::from(mp::Complex::from_int(1, bits));
  bool zero = false;
  for (std::size_t c = 0; c < n && !zero; ++c) {
    std::size_t piv = c;
    mp::Real best = mp::norm(at(c, c));
    for (std::size_t i = c + 1; i < n; ++i) {
      mp::Real cand = mp::norm(at(i, c));
      if (cand > best) {
        best = std::move(cand);
        piv = i;
      }
    }
    if (best.is_zero()) {
      zero = true;
      break;
    }
    if (piv != c) {
      for (std::size_t j = 0; j < n; ++j) std::swap(at(c, j), at(piv, j));
      det = ScaledComplex() - det;
    }
    const mp::Complex& pivot = at(c, c);
    for (std::size_t i = c + 1; i < n; ++i) {
      const mp::Complex factor = at(i, c) / pivot;
      for (std::size_t j = c + 1; j < n; ++j) at(i, j) -= factor * at(c, j);
    }
    det = det * ScaledComplex::from(pivot);
  }

  HankelCell cell;
  cell.k = k;
  cell.r = r;
  if (zero || det.is_zero()) {
    cell.value = ScaledComplex::from(mp::Complex(bits));
    cell.cancellation_margin = kInf;
    cell.flagged = true;
    return cell;
  }
  cell.value = std::move(det);
  cell.cancellation_margin = std::max(0.0, bound_log2 - cell.value.log2_abs());
  cell.flagged = cell.cancellation_margin >= static_cast<double>(bits - guard_bits);
  return cell;
}

HankelCell hadamard_det(CoefficientStream& stream, long k, int r, int guard_bits) {
  if (r >= 1 && k >= 0) stream.ensure(static_cast<std::size_t>(k + 2 * (r - 1)) + 1);
  return hadamard_det(std::span<const mp::Complex>(stream.values()), k, r, guard_bits);
}

std::vector<HankelCell> det_row(CoefficientStream& stream, long k_from, long k_to, int r, int guard_bits) {
  std::vector<HankelCell> out;
  if (k_to < k_from) return out;
  stream.ensure(static_cast<std::size_t>(k_to + 2 * (r - 1)) + 1);
  out.reserve(static_cast<std::size_t>(k_to - k_from + 1));
  for (long k = k_from; k <= k_to; ++k) out.push_back(hadamard_det(stream, k, r, guard_bits));
  return out;
}

const char* to_string(ZeroTest z) {
  switch (z) {
    case ZeroTest::NonZero: return "nonzero";
    case ZeroTest::StructuralZero: return "structural-zero";
    case ZeroTest::Inconclusive: return "inconclusive";
  }
  return "unknown";
}

ZeroTest structural_zero_test(std::span<const HankelCell> cells, std::size_t min_window) {
  if (cells.size() < min_window || cells.empty()) {
    throw Error(ErrorCode::TooFewPoints, "hankel.is_structural_zero",
                "window of " + std::to_string(cells.size()) + " cells, need " + std::to_string(min_window));
  }
  const auto flagged = static_cast<std::size_t>(
      std::count_if(cells.begin(), cells.end(), [](const HankelCell& c) { return c.flagged; }));
  if (flagged == cells.size()) return ZeroTest::StructuralZero;
  if (flagged == 0) return ZeroTest::NonZero;
  return ZeroTest::Inconclusive;
}

bool is_structural_zero(std::span<const HankelCell> cells, std::size_t min_window) {
  return structural_zero_test(cells, min_window) == ZeroTest::StructuralZero;
}

}  // namespace hroots

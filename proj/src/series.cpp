#include "hroots/series.hpp"

#include <algorithm>

#include "hroots/error.hpp"

namespace hroots {

const char* to_string(Side side) { return side == Side::Taylor ? "taylor" : "laurent"; }

CoefficientStream::CoefficientStream(Polynomial source, Side kind)
    : source_(std::move(source)), kind_(kind) {
  if (source_.degree() < 1) {
    throw Error(ErrorCode::DegreeZero, "series", "P'/P is identically zero for a constant polynomial");
  }
  if (kind_ == Side::Taylor && source_.constant_term().is_zero()) {
    throw Error(ErrorCode::ConstantTermZero, "series.taylor_coeffs",
                "P(0) = 0; strip zero roots before expanding at the origin");
  }
  for (int j = 0; j <= source_.degree(); ++j) asc_.push_back(source_.ascending(j));
}

void CoefficientStream::ensure(std::size_t count) {
  if (count <= values_.size()) return;
  extend_to(std::max(count, 2 * values_.size()));
}

const mp::Complex& CoefficientStream::at(std::size_t k) {
  ensure(k + 1);
  return values_[k];
}

void CoefficientStream::extend_to(std::size_t count) {
  const auto n = static_cast<std::size_t>(source_.degree());
  const mp::Bits bits = precision();
  values_.reserve(count);
  if (kind_ == Side::Taylor) {
    // p_0 c_j = (j+1) p_{j+1} - sum_{i<j} c_i p_{j-i}
    const mp::Complex& p0 = asc_[0];
    for (std::size_t j = values_.size(); j < count; ++j) {
      mp::Complex acc(bits);
      if (j + 1 <= n) acc = asc_[j + 1] * static_cast<long>(j + 1);
      const std::size_t lo = j > n ? j - n : 0;
      for (std::size_t i = lo; i < j; ++i) acc -= values_[i] * asc_[j - i];
      values_.push_back(acc / p0);
    }
  } else {
    // Newton's identities on descending coefficients a_i:
    //   a_0 b_k = -(k a_k + sum_{i=1}^{k-1} a_i b_{k-i}),  1 <= k <= n
    //   a_0 b_k = -sum_{i=1}^{n} a_i b_{k-i},               k > n
    const auto& a = source_.coeffs();
    for (std::size_t k = values_.size(); k < count; ++k) {
      if (k == 0) {
        values_.push_back(mp::Complex::from_int(static_cast<long>(n), bits));
        continue;
      }
      mp::Complex acc(bits);
      if (k <= n) acc = a[k] * static_cast<long>(k);
      const std::size_t top = std::min(k - 1, n);
      for (std::size_t i = 1; i <= top; ++i) acc += a[i] * values_[k - i];
      values_.push_back(-acc / a[0]);
    }
  }
}

std::vector<mp::Complex> taylor_coeffs(const Polynomial& p, std::size_t count) {
  CoefficientStream s(p, Side::Taylor);
  s.ensure(count);
  return {s.values().begin(), s.values().begin() + static_cast<long>(count)};
}

std::vector<mp::Complex> laurent_coeffs(const Polynomial& p, std::size_t count) {
  CoefficientStream s(p, Side::Laurent);
  s.ensure(count);
  return {s.values().begin(), s.values().begin() + static_cast<long>(count)};
}

}  // namespace hroots

#pragma once

#include <cstddef>
#include <vector>

#include "hroots/mp.hpp"
#include "hroots/poly.hpp"

namespace hroots {

/// Which expansion of P'(z)/P(z) a coefficient sequence belongs to.
///   Taylor:  P'/P = sum_k c_k z^k           around 0,  c_k = -sum m_j z_j^{-(k+1)}
///   Laurent: P'/P = sum_k b_k z^{-(k+1)}    around oo, b_k =  sum m_j z_j^k
enum class Side { Taylor, Laurent };

const char* to_string(Side side);

/// Lazily extended coefficient sequence of P'/P.
///
/// Values are produced by exact linear recurrences at the source polynomial's
/// precision. Extending never changes an already produced prefix. Extension
/// is single-writer: do not call at()/ensure() concurrently with another
/// extension of the same stream; reading a produced prefix through values()
/// from several threads is fine.
class CoefficientStream {
 public:
  CoefficientStream(Polynomial source, Side kind);

  [[nodiscard]] Side kind() const { return kind_; }
  [[nodiscard]] const Polynomial& source() const { return source_; }
  [[nodiscard]] mp::Bits precision() const { return source_.precision(); }
  [[nodiscard]] std::size_t size() const { return values_.size(); }
  [[nodiscard]] const std::vector<mp::Complex>& values() const { return values_; }

  /// Makes at least `count` coefficients available, growing geometrically.
  void ensure(std::size_t count);
  const mp::Complex& at(std::size_t k);

 private:
  void extend_to(std::size_t count);

  Polynomial source_;
  Side kind_;
  std::vector<mp::Complex> asc_;  // ascending coefficients of the source
  std::vector<mp::Complex> values_;
};

/// c_0 .. c_{K-1}. Requires P(0) != 0.
std::vector<mp::Complex> taylor_coeffs(const Polynomial& p, std::size_t count);

/// b_0 .. b_{K-1}, the root power sums via Newton's identities. Requires degree >= 1.
std::vector<mp::Complex> laurent_coeffs(const Polynomial& p, std::size_t count);

}  // namespace hroots

#include "hroots/poly.hpp"

#include <algorithm>

#include "hroots/error.hpp"

namespace hroots {

Polynomial Polynomial::make(std::vector<mp::Complex> coeffs) {
  if (coeffs.empty()) {
    throw Error(ErrorCode::EmptyInput, "poly.make_polynomial", "coefficient list is empty");
  }
  if (coeffs.front().is_zero()) {
    throw Error(ErrorCode::LeadingCoefficientZero, "poly.make_polynomial",
                "leading coefficient must be nonzero");
  }
  mp::Bits bits = 0;
  for (const auto& c : coeffs) bits = std::max(bits, c.precision());
  for (auto& c : coeffs) {
    if (c.precision() != bits) c = c.with_precision(bits);
  }
  return Polynomial(std::move(coeffs));
}

mp::Complex Polynomial::ascending(int j) const {
  if (j < 0 || j > degree()) return mp::Complex(precision());
  return coeffs_[static_cast<std::size_t>(degree() - j)];
}

Polynomial Polynomial::with_precision(mp::Bits bits) const {
  std::vector<mp::Complex> out;
  out.reserve(coeffs_.size());
  for (const auto& c : coeffs_) out.push_back(c.with_precision(bits));
  return Polynomial(std::move(out));
}

Polynomial make_polynomial(std::vector<mp::Complex> coeffs) { return Polynomial::make(std::move(coeffs)); }

Polynomial make_polynomial(std::span<const std::complex<double>> coeffs, mp::Bits bits) {
  std::vector<mp::Complex> out;
  out.reserve(coeffs.size());
  for (const auto& c : coeffs) out.emplace_back(c, bits);
  return Polynomial::make(std::move(out));
}

StrippedPolynomial strip_zero_roots(const Polynomial& p) {
  const auto& c = p.coeffs();
  std::size_t keep = c.size();
  while (keep > 1 && c[keep - 1].is_zero()) --keep;
  const int count = static_cast<int>(c.size() - keep);
  if (count == 0) return {p, 0};
  return {Polynomial::make(std::vector<mp::Complex>(c.begin(), c.begin() + static_cast<long>(keep))),
          count};
}

mp::Complex evaluate(const Polynomial& p, const mp::Complex& z) {
  mp::Complex acc = p.leading();
  for (std::size_t i = 1; i < p.coeffs().size(); ++i) {
    acc *= z;
    acc += p.coeffs()[i];
  }
  return acc;
}

Polynomial derivative(const Polynomial& p) {
  const int n = p.degree();
  if (n < 1) throw Error(ErrorCode::DegreeZero, "poly.derivative", "constant polynomial");
  std::vector<mp::Complex> out;
  out.reserve(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) out.push_back(p.coeffs()[static_cast<std::size_t>(i)] * static_cast<long>(n - i));
  return Polynomial::make(std::move(out));
}

Polynomial shift(const Polynomial& p, const mp::Complex& s) {
  const int n = p.degree();
  const mp::Bits bits = std::max(p.precision(), s.precision());
  std::vector<mp::Complex> spow;
  spow.reserve(static_cast<std::size_t>(n) + 1);
  spow.push_back(mp::Complex::from_int(1, bits));
  for (int i = 1; i <= n; ++i) spow.push_back(spow.back() * s);

  // q_j = sum_{m >= j} p_m * C(m, j) * s^{m-j}, ascending coefficients. The
  // binomials are built exactly in Real arithmetic row by row.
  std::vector<mp::Complex> asc;
  asc.reserve(static_cast<std::size_t>(n) + 1);
  for (int j = 0; j <= n; ++j) {
    mp::Complex acc(bits);
    mp::Real binom(1L, bits);  // C(j, j)
    for (int m = j; m <= n; ++m) {
      if (m > j) binom = binom * static_cast<long>(m) / static_cast<long>(m - j);
      acc += p.ascending(m) * spow[static_cast<std::size_t>(m - j)] * binom;
    }
    asc.push_back(std::move(acc));
  }
  std::reverse(asc.begin(), asc.end());
  return Polynomial::make(std::move(asc));
}

Polynomial from_roots(std::span<const RootMultiplicity> roots, const mp::Complex& leading) {
  if (leading.is_zero()) {
    throw Error(ErrorCode::LeadingCoefficientZero, "poly.from_roots", "leading coefficient must be nonzero");
  }
  mp::Bits bits = leading.precision();
  for (const auto& r : roots) bits = std::max(bits, r.root.precision());
  std::vector<mp::Complex> desc{leading.with_precision(bits)};
  for (const auto& r : roots) {
    for (int rep = 0; rep < r.multiplicity; ++rep) {
      // multiply by (z - root)
      desc.emplace_back(bits);
      for (std::size_t i = desc.size() - 1; i > 0; --i) desc[i] -= desc[i - 1] * r.root;
    }
  }
  return Polynomial::make(std::move(desc));
}

double relative_residual(const Polynomial& p, const mp::Complex& z) {
  const mp::Real az = mp::abs(z);
  mp::Real scale = mp::abs(p.leading());
  for (std::size_t i = 1; i < p.coeffs().size(); ++i) {
    scale *= az;
    scale += mp::abs(p.coeffs()[i]);
  }
  const mp::Real value = mp::abs(evaluate(p, z));
  if (value.is_zero()) return 0.0;
  return (value / scale).to_double();
}

const char* to_string(Provenance p) {
  switch (p) {
    case Provenance::Direct: return "direct";
    case Provenance::TaylorSide: return "taylor";
    case Provenance::LaurentSide: return "laurent";
    case Provenance::Shifted: return "shifted";
    case Provenance::Deflated: return "deflated";
  }
  return "unknown";
}

int RootSet::total_multiplicity() const {
  int total = 0;
  for (const auto& e : entries) total += e.multiplicity;
  return total;
}

}  // namespace hroots

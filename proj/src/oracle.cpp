#include "hroots/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <random>
#include <string>

#include "hroots/error.hpp"

namespace hroots::oracle {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

mp::Bits widest(std::span<const mp::Complex> zs) {
  mp::Bits bits = 64;
  for (const auto& z : zs) bits = std::max(bits, z.precision());
  return bits;
}

// Calls fn(indices) for every increasing r-subset of {0..p-1}.
template <typename Fn>
void for_each_subset(int p, int r, Fn&& fn) {
  if (r > p || r < 0) return;
  std::vector<int> idx(static_cast<std::size_t>(r));
  std::iota(idx.begin(), idx.end(), 0);
  while (true) {
    fn(std::span<const int>(idx));
    int i = r - 1;
    while (i >= 0 && idx[static_cast<std::size_t>(i)] == p - r + i) --i;
    if (i < 0) return;
    ++idx[static_cast<std::size_t>(i)];
    for (int j = i + 1; j < r; ++j) idx[static_cast<std::size_t>(j)] = idx[static_cast<std::size_t>(j - 1)] + 1;
  }
}

std::vector<mp::Complex> pick(std::span<const mp::Complex> zs, std::span<const int> idx) {
  std::vector<mp::Complex> out;
  out.reserve(idx.size());
  for (int i : idx) out.push_back(zs[static_cast<std::size_t>(i)]);
  return out;
}

void check_roots(std::span<const mp::Complex> roots, std::span<const int> mults, const char* stage) {
  if (roots.size() != mults.size()) {
    throw Error(ErrorCode::InvalidConfig, stage, "roots and multiplicities differ in length");
  }
  for (std::size_t i = 0; i < roots.size(); ++i) {
    if (roots[i].is_zero()) throw Error(ErrorCode::InvalidConfig, stage, "roots must be nonzero");
    if (mults[i] < 1) throw Error(ErrorCode::InvalidConfig, stage, "multiplicities must be positive");
  }
}

// Permutation putting roots in increasing modulus (stable for ties).
std::vector<int> modulus_order(std::span<const mp::Complex> roots) {
  std::vector<mp::Real> mods;
  mods.reserve(roots.size());
  for (const auto& z : roots) mods.push_back(mp::abs(z));
  std::vector<int> order(roots.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](int a, int b) {
    return mods[static_cast<std::size_t>(a)] < mods[static_cast<std::size_t>(b)];
  });
  return order;
}

bool strictly_smaller(const mp::Complex& lo, const mp::Complex& hi) {
  const mp::Real a = mp::abs(lo);
  const mp::Real b = mp::abs(hi);
  const mp::Real slack = mp::ldexp(b, -static_cast<long>(b.precision() / 2));
  return b - a > slack;
}

long first_k_below(double log2_q, double log2_D, long offset, double log2_eps) {
  // smallest k >= 0 with (k + offset) log2 q + log2 D < log2 eps
  if (!std::isfinite(log2_D)) return 0;
  if (log2_D + static_cast<double>(offset) * log2_q < log2_eps) return 0;
  double est = (log2_eps - log2_D) / log2_q - static_cast<double>(offset);
  long k = std::max(0L, static_cast<long>(std::floor(est)) - 2);
  while (static_cast<double>(k + offset) * log2_q + log2_D >= log2_eps) ++k;
  return k;
}

}  // namespace

mp::Complex vandermonde(std::span<const mp::Complex> args) {
  const mp::Bits bits = widest(args);
  mp::Complex v = mp::Complex::from_int(1, bits);
  for (std::size_t j = 0; j < args.size(); ++j) {
    for (std::size_t i = 0; i < j; ++i) v *= args[j] - args[i];
  }
  return v;
}

mp::Complex determinant(std::vector<mp::Complex> a, std::size_t n) {
  const mp::Bits bits = widest(a);
  mp::Complex det = mp::Complex::from_int(1, bits);
  for (std::size_t c = 0; c < n; ++c) {
    std::size_t piv = c;
    for (std::size_t i = c + 1; i < n; ++i) {
      if (mp::norm(a[i * n + c]) > mp::norm(a[piv * n + c])) piv = i;
    }
    if (a[piv * n + c].is_zero()) return mp::Complex(bits);
    if (piv != c) {
      for (std::size_t j = 0; j < n; ++j) std::swap(a[c * n + j], a[piv * n + j]);
      det = -det;
    }
    for (std::size_t i = c + 1; i < n; ++i) {
      const mp::Complex f = a[i * n + c] / a[c * n + c];
      for (std::size_t j = c; j < n; ++j) a[i * n + j] -= f * a[c * n + j];
    }
    det *= a[c * n + c];
  }
  return det;
}

mp::Complex vandermonde_inversed(std::span<const mp::Complex> args) {
  const std::size_t s = args.size();
  const mp::Bits bits = widest(args);
  if (s <= 1) return mp::Complex::from_int(1, bits);
  std::vector<mp::Complex> m(s * s, mp::Complex(bits));
  for (std::size_t col = 0; col < s; ++col) {
    mp::Complex power = mp::Complex::from_int(1, bits);
    // row s-1 holds power 0, row 0 holds power s-1
    for (std::size_t e = 0; e < s; ++e) {
      m[(s - 1 - e) * s + col] = power;
      power *= args[col];
    }
  }
  return determinant(std::move(m), s);
}

const char* to_string(Prefactor p) {
  return p == Prefactor::WithoutFactorial ? "without-factorial" : "with-factorial";
}

Prefactor calibrate_prefactor(mp::Bits bits) {
  const std::vector<mp::Complex> roots{mp::Complex::from_int(1, bits), mp::Complex::from_int(2, bits)};
  const std::vector<int> mults{1, 1};
  const auto c = taylor_from_roots(roots, mults, 3);
  const mp::Complex direct = determinant({c[0], c[1], c[1], c[2]}, 2);
  const mp::Complex plain = hadamard_via_roots(roots, mults, 0, 2, Side::Taylor, Prefactor::WithoutFactorial);
  const mp::Complex printed = hadamard_via_roots(roots, mults, 0, 2, Side::Taylor, Prefactor::WithFactorial);
  return mp::distance(direct, plain) <= mp::distance(direct, printed) ? Prefactor::WithoutFactorial
                                                                      : Prefactor::WithFactorial;
}

mp::Complex hadamard_via_roots(std::span<const mp::Complex> roots, std::span<const int> mults, long k, int r,
                               Side side, Prefactor prefactor) {
  check_roots(roots, mults, "oracle.hadamard_via_roots");
  const mp::Bits bits = widest(roots);
  const int p = static_cast<int>(roots.size());
  if (r < 1) throw Error(ErrorCode::InvalidConfig, "oracle.hadamard_via_roots", "order must be >= 1");
  if (r > p) return mp::Complex(bits);

  mp::Complex sum(bits);
  for_each_subset(p, r, [&](std::span<const int> idx) {
    const auto zs = pick(roots, idx);
    mp::Complex prod = mp::Complex::from_int(1, bits);
    long mprod = 1;
    for (std::size_t i = 0; i < zs.size(); ++i) {
      prod *= zs[i];
      mprod *= mults[static_cast<std::size_t>(idx[i])];
    }
    const mp::Complex v = vandermonde(zs);
    mp::Complex term = v * v * mprod;
    if (side == Side::Taylor) {
      term /= mp::pow(prod, static_cast<unsigned long>(k + 2 * r - 1));
    } else {
      term *= mp::pow(prod, static_cast<unsigned long>(k));
    }
    sum += term;
  });
  if (side == Side::Taylor && (r % 2 == 1)) sum = -sum;
  if (prefactor == Prefactor::WithFactorial) {
    long fact = 1;
    for (int i = 2; i <= r; ++i) fact *= i;
    sum = sum * fact;
  }
  return sum;
}

std::vector<mp::Complex> taylor_from_roots(std::span<const mp::Complex> roots, std::span<const int> mults,
                                           std::size_t count) {
  check_roots(roots, mults, "oracle.taylor_from_roots");
  const mp::Bits bits = widest(roots);
  std::vector<mp::Complex> out(count, mp::Complex(bits));
  for (std::size_t j = 0; j < roots.size(); ++j) {
    const mp::Complex inv = mp::inverse(roots[j]);
    mp::Complex power = inv;
    for (std::size_t k = 0; k < count; ++k) {
      out[k] -= power * static_cast<long>(mults[j]);
      power *= inv;
    }
  }
  return out;
}

std::vector<mp::Complex> laurent_from_roots(std::span<const mp::Complex> roots, std::span<const int> mults,
                                            std::size_t count) {
  check_roots(roots, mults, "oracle.laurent_from_roots");
  const mp::Bits bits = widest(roots);
  std::vector<mp::Complex> out(count, mp::Complex(bits));
  for (std::size_t j = 0; j < roots.size(); ++j) {
    mp::Complex power = mp::Complex::from_int(1, bits);
    for (std::size_t k = 0; k < count; ++k) {
      out[k] += power * static_cast<long>(mults[j]);
      power *= roots[j];
    }
  }
  return out;
}

double ErrorConstant::log2_bound(long k, int r, Side side) const {
  if (D == 0.0 && C == 0.0) return -kInf;
  const long exponent = side == Side::Taylor ? k + 2 * r - 1 : k;
  return log2_C + static_cast<double>(exponent) * log2_q;
}

ErrorConstant theoretical_error_constant(std::span<const mp::Complex> roots, std::span<const int> mults, int r,
                                         Side side, double eps) {
  check_roots(roots, mults, "oracle.theoretical_error_constant");
  const int p = static_cast<int>(roots.size());
  if (r < 1 || r > p) {
    throw Error(ErrorCode::InvalidConfig, "oracle.theoretical_error_constant", "need 1 <= r <= p");
  }
  if (!(eps > 0.0 && eps < 0.5)) {
    throw Error(ErrorCode::InvalidConfig, "oracle.theoretical_error_constant", "need 0 < eps < 1/2");
  }
  const mp::Bits bits = widest(roots);
  const auto order = modulus_order(roots);
  std::vector<mp::Complex> z;
  std::vector<int> m;
  for (int i : order) {
    z.push_back(roots[static_cast<std::size_t>(i)]);
    m.push_back(mults[static_cast<std::size_t>(i)]);
  }

  // Leading subset: r smallest (Taylor) or r largest (Laurent) in modulus.
  std::vector<int> lead(static_cast<std::size_t>(r));
  std::iota(lead.begin(), lead.end(), side == Side::Taylor ? 0 : p - r);

  ErrorConstant out;
  out.product = mp::Complex::from_int(1, bits);
  long lead_mult = 1;
  for (int i : lead) {
    out.product *= z[static_cast<std::size_t>(i)];
    lead_mult *= m[static_cast<std::size_t>(i)];
  }
  if (r == p) {
    out.C = 0.0;
    out.q = 0.0;
    out.D = 0.0;
    out.log2_C = -kInf;
    out.log2_q = -kInf;
    out.k_threshold = 0;
    return out;
  }

  // Boundary pair whose modulus ratio sets the geometric rate.
  const auto& inner = side == Side::Taylor ? z[static_cast<std::size_t>(r - 1)] : z[static_cast<std::size_t>(p - r - 1)];
  const auto& outer = side == Side::Taylor ? z[static_cast<std::size_t>(r)] : z[static_cast<std::size_t>(p - r)];
  if (!strictly_smaller(inner, outer)) {
    throw Error(ErrorCode::NoModulusGap, "oracle.theoretical_error_constant",
                "roots " + std::to_string(r) + " and " + std::to_string(r + 1) + " in modulus order tie");
  }
  out.q = (mp::abs(inner) / mp::abs(outer)).to_double();
  out.log2_q = mp::abs(inner).log2_abs() - mp::abs(outer).log2_abs();

  const mp::Real lead_v2 = mp::norm(vandermonde(pick(z, lead)));
  mp::Real D(bits);
  for_each_subset(p, r, [&](std::span<const int> idx) {
    if (std::equal(idx.begin(), idx.end(), lead.begin())) return;
    long mult = 1;
    for (int i : idx) mult *= m[static_cast<std::size_t>(i)];
    D += mp::norm(vandermonde(pick(z, idx))) * mult / lead_v2 / lead_mult;
  });
  out.D = D.to_double();
  const double log2_D = D.log2_abs();
  out.log2_C = out.product.log2_abs() + 1.0 + log2_D + std::log2(1.0 + 2.0 * eps);
  out.C = std::exp2(out.log2_C);
  out.k_threshold = first_k_below(out.log2_q, log2_D, side == Side::Taylor ? 2L * r : 0L, std::log2(eps));
  return out;
}

ErrorConstant corollary_error_constant(std::span<const mp::Complex> roots, std::span<const int> mults, Side side) {
  check_roots(roots, mults, "oracle.corollary_error_constant");
  const int p = static_cast<int>(roots.size());
  const auto order = modulus_order(roots);
  const int n = std::accumulate(mults.begin(), mults.end(), 0);
  const auto& extreme = roots[static_cast<std::size_t>(side == Side::Taylor ? order.front() : order.back())];

  ErrorConstant out;
  out.product = extreme;
  if (p == 1) {
    out.log2_C = -kInf;
    out.log2_q = -kInf;
    return out;
  }
  const auto& next = roots[static_cast<std::size_t>(side == Side::Taylor ? order[1] : order[static_cast<std::size_t>(p - 2)])];
  const auto& inner = side == Side::Taylor ? extreme : next;
  const auto& outer = side == Side::Taylor ? next : extreme;
  if (!strictly_smaller(inner, outer)) {
    throw Error(ErrorCode::NoModulusGap, "oracle.corollary_error_constant", "extreme root modulus is tied");
  }
  out.q = (mp::abs(inner) / mp::abs(outer)).to_double();
  out.log2_q = mp::abs(inner).log2_abs() - mp::abs(outer).log2_abs();
  out.D = static_cast<double>(n - 1);
  out.log2_C = extreme.log2_abs() + 2.0 + std::log2(static_cast<double>(n - 1));
  out.C = std::exp2(out.log2_C);
  out.k_threshold = first_k_below(out.log2_q, std::log2(static_cast<double>(n - 1)),
                                  side == Side::Taylor ? 2L : 0L, -1.0);
  return out;
}

std::vector<mp::Complex> independent_roots(const Polynomial& p, const DurandKernerOptions& options) {
  const int n = p.degree();
  if (n < 1) throw Error(ErrorCode::DegreeZero, "oracle.independent_roots", "constant polynomial");
  const mp::Bits bits = p.precision();
  std::vector<mp::Complex> monic;
  for (const auto& a : p.coeffs()) monic.push_back(a / p.leading());
  if (n == 1) return {-monic[1]};

  double cauchy = 0.0;
  for (std::size_t i = 1; i < monic.size(); ++i) cauchy = std::max(cauchy, mp::abs(monic[i]).to_double());
  const double radius = 1.0 + cauchy;
  const auto residual_ok = [&](const mp::Complex& z) {
    const mp::Real az = mp::abs(z);
    const double scale = (static_cast<double>(n) * std::max(0.0, az.log2_abs()));
    const double res = mp::abs(evaluate(p, z)).log2_abs() - mp::abs(p.leading()).log2_abs() - scale;
    return res < std::log2(options.residual_tol);
  };
  const mp::Real step_tol = mp::ldexp(mp::Real(1L, bits), -static_cast<long>(bits) * 3 / 4);

  std::mt19937_64 rng(options.seed);
  for (int attempt = 0; attempt <= options.restarts; ++attempt) {
    const double phase = 0.4 + 6.0 * static_cast<double>(rng() >> 11) * 0x1.0p-53;
    std::vector<mp::Complex> z;
    for (int i = 0; i < n; ++i) {
      const double t = phase + 2.0 * M_PI * i / n;
      z.emplace_back(std::polar(radius * (0.9 + 0.1 * i / n), t), bits);
    }
    for (int it = 0; it < options.max_iterations; ++it) {
      mp::Real biggest(bits);
      for (int i = 0; i < n; ++i) {
        mp::Complex den = mp::Complex::from_int(1, bits);
        for (int j = 0; j < n; ++j) {
          if (j != i) den *= z[static_cast<std::size_t>(i)] - z[static_cast<std::size_t>(j)];
        }
        if (den.is_zero()) continue;
        mp::Complex num = monic[0];
        for (std::size_t c = 1; c < monic.size(); ++c) {
          num *= z[static_cast<std::size_t>(i)];
          num += monic[c];
        }
        const mp::Complex step = num / den;
        const mp::Real size = mp::abs(step) / std::max(1.0, mp::abs(z[static_cast<std::size_t>(i)]).to_double());
        if (size > biggest) biggest = size;
        z[static_cast<std::size_t>(i)] -= step;
      }
      if (biggest <= step_tol) break;
    }
    if (std::all_of(z.begin(), z.end(), residual_ok)) return z;
  }
  throw Error(ErrorCode::NoConvergence, "oracle.independent_roots",
              "Durand-Kerner did not meet the residual bound after " + std::to_string(options.restarts + 1) +
                  " attempts");
}

std::vector<RootMultiplicity> cluster_roots(std::span<const mp::Complex> roots, double radius) {
  std::vector<RootMultiplicity> out;
  std::vector<mp::Complex> sums;
  for (const auto& z : roots) {
    bool merged = false;
    for (std::size_t c = 0; c < out.size(); ++c) {
      const double scale = std::max(1.0, mp::abs(out[c].root).to_double());
      if (mp::distance(out[c].root, z).to_double() <= radius * scale) {
        sums[c] += z;
        ++out[c].multiplicity;
        out[c].root = sums[c] / static_cast<long>(out[c].multiplicity);
        merged = true;
        break;
      }
    }
    if (!merged) {
      out.push_back({z, 1});
      sums.push_back(z);
    }
  }
  return out;
}

}  // namespace hroots::oracle

#pragma once

// Ground truth that does not go through the series/hankel/engine pipeline:
// Vandermonde identities, closed-form Hadamard determinants in terms of the
// roots, the theoretical convergence constants, and a Durand-Kerner root
// finder. Used by the tests, the acceptance suite and `hroots verify`.

#include <cstdint>
#include <span>
#include <vector>

#include "hroots/mp.hpp"
#include "hroots/poly.hpp"
#include "hroots/series.hpp"

namespace hroots::oracle {

/// prod_{i<j} (a_j - a_i); 1 for a single argument.
mp::Complex vandermonde(std::span<const mp::Complex> args);

/// Determinant of the Vandermonde matrix with its rows in reverse order
/// (highest powers on top). Computed by elimination, not by the product
/// formula, so it can be checked against vandermonde().
mp::Complex vandermonde_inversed(std::span<const mp::Complex> args);

/// Dense determinant of a row-major n x n matrix by Gaussian elimination.
mp::Complex determinant(std::vector<mp::Complex> matrix, std::size_t n);

/// Prefactor convention for the closed-form determinant sums. The printed
/// formulas carry an extra r! which a direct expansion does not reproduce;
/// calibrate_prefactor() settles which one matches.
enum class Prefactor { WithoutFactorial, WithFactorial };

const char* to_string(Prefactor p);

/// Compares both conventions against a brute-force determinant of the
/// coefficients of (z-1)(z-2) and returns the one that matches.
Prefactor calibrate_prefactor(mp::Bits bits = mp::kDefaultBits);

/// Convention frozen after calibration.
inline constexpr Prefactor kFrozenPrefactor = Prefactor::WithoutFactorial;

/// H_{k,r} (Taylor) or the Laurent-side determinant as a sum over r-subsets
/// of the distinct nonzero roots. Returns exactly 0 when r exceeds the
/// number of roots.
mp::Complex hadamard_via_roots(std::span<const mp::Complex> roots, std::span<const int> mults, long k,
                               int r, Side side, Prefactor prefactor = kFrozenPrefactor);

/// Taylor coefficients c_k = -sum m_j z_j^{-(k+1)} straight from the roots.
std::vector<mp::Complex> taylor_from_roots(std::span<const mp::Complex> roots, std::span<const int> mults,
                                           std::size_t count);

/// Power sums b_k = sum m_j z_j^k straight from the roots.
std::vector<mp::Complex> laurent_from_roots(std::span<const mp::Complex> roots, std::span<const int> mults,
                                            std::size_t count);

/// Convergence constants for the r-th ratio sequence. Magnitudes are also
/// given as log2 so bounds far below double range can still be compared.
struct ErrorConstant {
  double C = 0.0;
  double q = 0.0;
  double D = 0.0;
  double log2_C = 0.0;
  double log2_q = 0.0;
  /// First k from which the constant C is valid.
  long k_threshold = 0;
  /// Exact limit of the ratio sequence: product of the r smallest (Taylor)
  /// or r largest (Laurent) roots.
  mp::Complex product;

  /// log2 of the error bound at index k: C q^{k+2r-1} (Taylor) or C q^k (Laurent).
  [[nodiscard]] double log2_bound(long k, int r, Side side) const;
};

/// Constants of the geometric error bound with the competing-subset sum D.
/// Throws NoModulusGap unless the r-th boundary in modulus order is strict.
ErrorConstant theoretical_error_constant(std::span<const mp::Complex> roots, std::span<const int> mults,
                                         int r, Side side, double eps);

/// The coarser r = 1 constants |z_1| 4(n-1) (Taylor) and |z_p| 4(n-1)
/// (Laurent), with their own validity thresholds.
ErrorConstant corollary_error_constant(std::span<const mp::Complex> roots, std::span<const int> mults,
                                       Side side);

struct DurandKernerOptions {
  int max_iterations = 500;
  int restarts = 3;
  double residual_tol = 1e-12;
  std::uint64_t seed = 0x5eed;
};

/// All n roots (repeated according to multiplicity) by Durand-Kerner
/// simultaneous iteration at the polynomial's precision. Throws
/// NoConvergence when the residual check fails after every restart.
std::vector<mp::Complex> independent_roots(const Polynomial& p, const DurandKernerOptions& options = {});

/// Merges approximations within `radius` (relative to max(1,|z|)) into
/// roots with multiplicity counts.
std::vector<RootMultiplicity> cluster_roots(std::span<const mp::Complex> roots, double radius = 1e-6);

}  // namespace hroots::oracle

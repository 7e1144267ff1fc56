#pragma once

// Root extraction from limits of Hankel-determinant ratios.
//
// For roots ordered by modulus |z_1| <= ... <= |z_p|:
//   Taylor side   H_{k,r} / H_{k+1,r}  ->  z_1 ... z_r        (needs |z_r| < |z_{r+1}|)
//   Laurent side  H_{k+1,r} / H_{k,r}  ->  z_{p-r+1} ... z_p  (needs |z_{p-r}| < |z_{p-r+1}|)
// with geometric convergence, exact (k-independent) ratios at r = p, and no
// limit at all when the boundary moduli tie. The solver reads products off
// both sides, takes quotients of consecutive products, breaks ties with a
// random complex shift of the variable, and recovers multiplicities from the
// power sums.

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "hroots/hankel.hpp"
#include "hroots/mp.hpp"
#include "hroots/poly.hpp"
#include "hroots/series.hpp"

namespace hroots {

struct SolverConfig {
  int precision_bits = 256;
  /// Ceiling for precision escalation when cancellation eats the mantissa.
  int max_precision_bits = 4096;
  long k_max = 256;
  /// Relative tolerance for declaring a ratio sequence converged.
  double tol = 1e-12;
  /// Number of trailing differences a verdict is based on.
  int window = 8;
  int max_shifts = 5;
  std::uint64_t shift_seed = 0;
  /// Bound on |P(z)| / sum |a_i||z|^{n-i} for every returned root.
  double residual_tol = 1e-12;
  int guard_bits = kDefaultGuardBits;
  /// Envelope decay rate at or above which non-decaying differences count
  /// as oscillation.
  double oscillation_threshold = 0.98;
  std::size_t probe_window = kDefaultZeroWindow;
  /// Trace-derived roots with relative error below this are accepted and
  /// handed to Newton polishing; anything worse is resolved by shifting.
  double accept_tol = 1e-6;
  int polish_steps = 4;
  /// Traces are extended and re-classified in blocks of this many indices.
  long k_block = 16;

  /// Throws InvalidConfig on out-of-range values.
  void validate() const;
};

struct TracePoint {
  long k = 0;
  mp::Complex ratio;
};

enum class GapKind {
  Pole,           // denominator determinant is exactly zero, numerator is not
  Indeterminate,  // both determinants are exactly zero
};

struct TraceGap {
  long k = 0;
  GapKind kind = GapKind::Pole;
};

/// Ratio sequence R_r(k) for one side and order.
struct RatioTrace {
  Side side = Side::Taylor;
  int r = 1;
  long k_min = 0;
  /// Last index attempted. Smaller than requested when precision ran out at
  /// the escalation ceiling (see truncated).
  long k_last = -1;
  std::vector<TracePoint> points;
  std::vector<TraceGap> gaps;
  /// diffs[i] = |points[i+1].ratio - points[i].ratio|
  std::vector<double> diffs;
  mp::Bits precision = 0;
  double max_margin = 0.0;
  bool truncated = false;
};

struct TraceOptions {
  long k_min = 0;
  int guard_bits = kDefaultGuardBits;
  /// Extra mantissa bits that must survive cancellation in every cell, on
  /// top of the guard bits.
  int required_bits = 0;
};

/// Ratios for k = k_min .. k_max at the polynomial's own precision. Throws
/// PrecisionExhausted (with the offending k) when a nonzero determinant
/// loses more than precision - guard - required bits to cancellation.
RatioTrace ratio_trace(const Polynomial& p, Side side, int r, long k_max, const TraceOptions& options = {});

/// Same trace with the precision escalation policy of the solver: start at
/// config.precision_bits, double on PrecisionExhausted up to
/// config.max_precision_bits (the trusted prefix is kept; only the rest is
/// recomputed), then return what was still trusted.
/// With stop_when_converged, extension stops at the first block whose
/// verdict is Converged, or after two consecutive blocks that are
/// Oscillating or cannot reach accept_tol by k_max at the observed rate.
RatioTrace adaptive_trace(const Polynomial& p, Side side, int r, long k_min, long k_max,
                          const SolverConfig& config, bool stop_when_converged);

enum class VerdictStatus { Converged, Oscillating, Inconclusive };

const char* to_string(VerdictStatus s);

struct TraceVerdict {
  VerdictStatus status = VerdictStatus::Inconclusive;
  /// Extrapolated limit (Converged) or best available estimate.
  mp::Complex limit;
  /// Median ratio of consecutive differences in the final window.
  double q_estimate = 0.0;
  double error_estimate = 0.0;
  long k_last = -1;
};

/// Throws TooFewPoints when fewer than window + 1 usable points exist and no
/// pole gap already rules out a limit.
TraceVerdict classify(const RatioTrace& trace, const SolverConfig& config);

/// Number p of distinct roots: the largest order whose determinants are not
/// structurally zero over the probe window. Requires P(0) != 0.
int count_distinct_roots(const Polynomial& p, const SolverConfig& config);

struct ProductVerdict {
  int r = 0;
  TraceVerdict verdict;
};

/// Verdicts for r = 1 .. p. Entry r is the product of the r smallest
/// (Taylor) or r largest (Laurent) roots; entry p is always Converged.
std::vector<ProductVerdict> products_from_traces(const Polynomial& p, Side side, int distinct,
                                                 const SolverConfig& config);

struct RootEstimate {
  mp::Complex value;
  /// Propagated absolute error bound.
  double error = 0.0;
  /// 1-based rank in increasing modulus.
  int position = 0;
  Provenance provenance = Provenance::TaylorSide;
};

/// Successive quotients of consecutive products, for every position whose
/// two products converged; other positions are empty.
std::vector<std::optional<RootEstimate>> partial_roots_from_products(std::span<const ProductVerdict> products,
                                                                     Side side);

/// All p roots, in increasing modulus for Taylor and decreasing for
/// Laurent. Throws GapInProducts when some product did not converge.
std::vector<RootEstimate> roots_from_products(std::span<const ProductVerdict> products, Side side);

/// Integer multiplicities from the power-sum system sum_j m_j z_j^k = b_k,
/// k < p. Throws IllConditionedSystem or NonIntegerMultiplicity.
std::vector<int> multiplicities(const Polynomial& p, std::span<const mp::Complex> roots);

/// Full pipeline. Throws ShiftBudgetExhausted, PrecisionExhausted,
/// ResidualCheckFailed or DegreeZero.
RootSet solve(const Polynomial& p, const SolverConfig& config = {});

}  // namespace hroots

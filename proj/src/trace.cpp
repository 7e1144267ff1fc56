#include <algorithm>
#include <cmath>
#include <limits>
#include <optional>
#include <string>

#include "hroots/engine.hpp"
#include "hroots/error.hpp"

namespace hroots {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

double median(std::vector<double> v) {
  if (v.empty()) return 0.0;
  const auto mid = v.size() / 2;
  std::nth_element(v.begin(), v.begin() + static_cast<long>(mid), v.end());
  if (v.size() % 2 == 1) return v[mid];
  const double hi = v[mid];
  const double lo = *std::max_element(v.begin(), v.begin() + static_cast<long>(mid));
  return 0.5 * (lo + hi);
}

int tolerance_bits(double tol) { return static_cast<int>(std::ceil(-std::log2(tol))) + 8; }

// Builds a ratio trace one index at a time so that a PrecisionExhausted
// failure leaves the trusted prefix in place.
class TraceBuilder {
 public:
  TraceBuilder(const Polynomial& p, Side side, int r, const TraceOptions& options)
      : stream_(p, side), options_(options), next_k_(options.k_min) {
    if (r < 1 || r > p.degree()) {
      throw Error(ErrorCode::InvalidConfig, "engine.ratio_trace",
                  "order r = " + std::to_string(r) + " outside 1.." + std::to_string(p.degree()));
    }
    if (options.k_min < 0) throw Error(ErrorCode::InvalidConfig, "engine.ratio_trace", "k_min < 0");
    trace_.side = side;
    trace_.r = r;
    trace_.k_min = options.k_min;
    trace_.k_last = options.k_min - 1;
    trace_.precision = p.precision();
  }

  void extend_to(long k_end) {
    for (; next_k_ <= k_end; ++next_k_) {
      if (!prev_) prev_ = checked(next_k_);
      HankelCell next = checked(next_k_ + 1);
      const bool taylor = trace_.side == Side::Taylor;
      const HankelCell& num = taylor ? *prev_ : next;
      const HankelCell& den = taylor ? next : *prev_;
      if (den.value.is_zero()) {
        trace_.gaps.push_back({next_k_, num.value.is_zero() ? GapKind::Indeterminate : GapKind::Pole});
      } else {
        mp::Complex ratio = num.value.is_zero() ? mp::Complex(stream_.precision())
                                                : (num.value / den.value).value();
        if (!trace_.points.empty()) {
          trace_.diffs.push_back(mp::distance(ratio, trace_.points.back().ratio).to_double());
        }
        trace_.points.push_back({next_k_, std::move(ratio)});
      }
      prev_ = std::move(next);
      trace_.k_last = next_k_;
    }
  }

  [[nodiscard]] const RatioTrace& trace() const { return trace_; }
  RatioTrace take() { return std::move(trace_); }

  /// Continues from the first untrusted index at a wider precision; points
  /// already in the trace stay as they are.
  void raise_precision(mp::Bits bits) {
    stream_ = CoefficientStream(stream_.source().with_precision(bits), stream_.kind());
    confirm_.reset();
    prev_.reset();
    trace_.precision = bits;
  }

 private:
  HankelCell checked(long k) {
    HankelCell cell = hadamard_det(stream_, k, trace_.r, options_.guard_bits);
    if (cell.flagged && !cell.value.is_zero() && vanishes_at_double_precision(k)) {
      // Isolated zeros are genuine (low-rank stretches of the series), not
      // precision loss: they stay at the noise floor when precision doubles.
      cell.value = ScaledComplex();
      cell.cancellation_margin = std::numeric_limits<double>::infinity();
    }
    if (!cell.value.is_zero()) {
      const double budget =
          static_cast<double>(stream_.precision() - options_.guard_bits - options_.required_bits);
      if (cell.cancellation_margin > budget) {
        throw Error(ErrorCode::PrecisionExhausted, "engine.ratio_trace",
                    "determinant at k = " + std::to_string(k) + " lost " +
                        std::to_string(static_cast<long>(cell.cancellation_margin)) + " of " +
                        std::to_string(stream_.precision()) + " bits",
                    k);
      }
      trace_.max_margin = std::max(trace_.max_margin, cell.cancellation_margin);
    }
    return cell;
  }

  bool vanishes_at_double_precision(long k) {
    if (!confirm_) confirm_.emplace(stream_.source().with_precision(2 * stream_.precision()), stream_.kind());
    return hadamard_det(*confirm_, k, trace_.r, options_.guard_bits).flagged;
  }

  CoefficientStream stream_;
  std::optional<CoefficientStream> confirm_;
  TraceOptions options_;
  RatioTrace trace_;
  long next_k_;
  std::optional<HankelCell> prev_;
};

}  // namespace

void SolverConfig::validate() const {
  auto fail = [](const std::string& what) { throw Error(ErrorCode::InvalidConfig, "engine.config", what); };
  if (precision_bits < 64) fail("precision_bits must be >= 64");
  if (max_precision_bits < precision_bits) fail("max_precision_bits must be >= precision_bits");
  if (!(tol > 0.0 && tol < 1.0)) fail("tol must lie in (0, 1)");
  if (window < 3) fail("window must be >= 3");
  if (k_max < window + 2) fail("k_max must be >= window + 2");
  if (max_shifts < 0) fail("max_shifts must be >= 0");
  if (!(residual_tol > 0.0)) fail("residual_tol must be positive");
  if (guard_bits < 0 || guard_bits >= precision_bits / 2) fail("guard_bits out of range");
  if (!(oscillation_threshold > 0.0 && oscillation_threshold <= 1.0)) fail("oscillation_threshold must lie in (0, 1]");
  if (probe_window < 1) fail("probe_window must be >= 1");
  if (!(accept_tol > 0.0 && accept_tol < 1.0)) fail("accept_tol must lie in (0, 1)");
  if (polish_steps < 0) fail("polish_steps must be >= 0");
  if (k_block < 1) fail("k_block must be >= 1");
}

const char* to_string(VerdictStatus s) {
  switch (s) {
    case VerdictStatus::Converged: return "converged";
    case VerdictStatus::Oscillating: return "oscillating";
    case VerdictStatus::Inconclusive: return "inconclusive";
  }
  return "unknown";
}

RatioTrace ratio_trace(const Polynomial& p, Side side, int r, long k_max, const TraceOptions& options) {
  TraceBuilder builder(p, side, r, options);
  builder.extend_to(k_max);
  return builder.take();
}

RatioTrace adaptive_trace(const Polynomial& p, Side side, int r, long k_min, long k_max, const SolverConfig& config,
                          bool stop_when_converged) {
  mp::Bits bits = std::max<mp::Bits>(config.precision_bits, p.precision());
  const TraceOptions options{k_min, config.guard_bits, tolerance_bits(config.tol)};
  const auto enough = static_cast<std::size_t>(config.window) + 1;
  TraceBuilder builder(p.with_precision(bits), side, r, options);
  int oscillating_blocks = 0, hopeless_blocks = 0;
  long k = k_min - 1;
  while (k < k_max) {
    const long target = std::min(k_max, k + config.k_block);
    try {
      builder.extend_to(target);
    } catch (const Error& e) {
      if (e.code() != ErrorCode::PrecisionExhausted) throw;
      if (bits * 2 > config.max_precision_bits) {
        RatioTrace trace = builder.take();
        trace.truncated = true;
        return trace;
      }
      bits *= 2;
      builder.raise_precision(bits);
      continue;
    }
    k = target;
    if (!stop_when_converged || builder.trace().points.size() < enough) continue;

    const TraceVerdict v = classify(builder.trace(), config);
    if (v.status == VerdictStatus::Converged) break;
    // Two blocks in a row without a limit in sight: a tie, or a rate too
    // slow to reach accept_tol by k_max even on the geometric projection.
    oscillating_blocks = v.status == VerdictStatus::Oscillating ? oscillating_blocks + 1 : 0;
    const bool hopeless = v.status == VerdictStatus::Inconclusive && v.q_estimate > 0.0 && v.q_estimate < 1.0 &&
                          std::isfinite(v.error_estimate) &&
                          v.error_estimate * std::pow(v.q_estimate, static_cast<double>(k_max - k)) >
                              config.accept_tol * mp::abs(v.limit).to_double();
    hopeless_blocks = hopeless ? hopeless_blocks + 1 : 0;
    if (oscillating_blocks >= 2 || hopeless_blocks >= 2) break;
  }
  return builder.take();
}

TraceVerdict classify(const RatioTrace& trace, const SolverConfig& config) {
  const auto W = static_cast<std::size_t>(config.window);
  const auto& pts = trace.points;
  TraceVerdict v;
  v.k_last = trace.k_last;
  v.limit = pts.empty() ? mp::Complex(std::max<mp::Bits>(trace.precision, 64)) : pts.back().ratio;

  // A zero denominator with nonzero numerator inside the final stretch
  // means the ratio is unbounded there: no finite limit.
  const long tail_from = pts.size() > W ? pts[pts.size() - 1 - W].k : trace.k_last - 2 * static_cast<long>(W) + 1;
  const bool pole_in_tail = std::any_of(trace.gaps.begin(), trace.gaps.end(), [&](const TraceGap& g) {
    return g.kind == GapKind::Pole && g.k >= tail_from;
  });
  if (pole_in_tail) {
    v.status = VerdictStatus::Oscillating;
    v.q_estimate = 1.0;
    v.error_estimate = kInf;
    return v;
  }
  if (pts.size() < W + 1) {
    throw Error(ErrorCode::TooFewPoints, "engine.classify",
                std::to_string(pts.size()) + " usable points, need " + std::to_string(W + 1));
  }
  const bool indeterminate_in_tail = std::any_of(trace.gaps.begin(), trace.gaps.end(), [&](const TraceGap& g) {
    return g.kind == GapKind::Indeterminate && g.k >= tail_from;
  });

  const std::size_t first = pts.size() - 1 - W;  // window: points first .. first + W
  // Median magnitude: near-pole spikes in a tie trace must not set the scale.
  std::vector<double> mags;
  for (std::size_t i = first; i < pts.size(); ++i) mags.push_back(mp::abs(pts[i].ratio).to_double());
  double scale = median(mags);
  if (!(scale > 0.0)) scale = 1.0;
  const auto window_diffs = std::span<const double>(trace.diffs).subspan(first, W);
  const double dmax = *std::max_element(window_diffs.begin(), window_diffs.end());

  const double noise_bits = static_cast<double>(trace.precision) - config.guard_bits - trace.max_margin - 8.0;
  const double noise = scale * std::exp2(-std::max(0.0, noise_bits));

  std::vector<double> ratios;
  for (std::size_t i = 0; i + 1 < window_diffs.size(); ++i) {
    if (window_diffs[i] > noise && window_diffs[i + 1] > noise) ratios.push_back(window_diffs[i + 1] / window_diffs[i]);
  }
  const double q_median = ratios.size() * 2 >= W ? median(ratios) : 0.0;

  if (dmax <= noise || dmax <= config.tol * scale * 0x1p-30) {
    v.status = indeterminate_in_tail ? VerdictStatus::Inconclusive : VerdictStatus::Converged;
    v.q_estimate = q_median < 1.0 ? q_median : 0.0;
    v.error_estimate = dmax;
    return v;
  }

  // Envelope over a longer tail: medians of the two halves must shrink at
  // a geometric rate for the sequence to be converging at all. Tie traces
  // are quasi-periodic, so the halves need to span several periods.
  const std::size_t L = std::min(trace.diffs.size(), 8 * W);
  const std::size_t h = L / 2;
  const auto tail = std::span<const double>(trace.diffs).last(L);
  const double med1 = median({tail.begin(), tail.begin() + static_cast<long>(h)});
  const double med2 = median({tail.end() - static_cast<long>(h), tail.end()});
  double q_env = 0.0;
  if (med1 > 0.0) {
    q_env = std::pow(med2 / med1, 1.0 / static_cast<double>(h));
  } else if (med2 > 0.0) {
    q_env = kInf;
  }
  if (q_env >= config.oscillation_threshold && med2 > config.tol * scale) {
    v.status = VerdictStatus::Oscillating;
    v.q_estimate = q_env;
    v.error_estimate = med2;
    return v;
  }

  v.q_estimate = q_median;
  if (q_median <= 0.0 || q_median >= 1.0 || indeterminate_in_tail) {
    v.status = VerdictStatus::Inconclusive;
    v.error_estimate = kInf;
    return v;
  }

  // Geometric tail extrapolation with the complex ratio of the last
  // differences, used only while that ratio is stable.
  const std::size_t n = pts.size();
  const mp::Complex d_last = pts[n - 1].ratio - pts[n - 2].ratio;
  const mp::Complex d_prev = pts[n - 2].ratio - pts[n - 3].ratio;
  const mp::Complex d_pprev = pts[n - 3].ratio - pts[n - 4 < n ? n - 4 : 0].ratio;
  if (!d_prev.is_zero() && !d_pprev.is_zero()) {
    const mp::Complex w = d_last / d_prev;
    const mp::Complex w_prev = d_prev / d_pprev;
    const double wabs = mp::abs(w).to_double();
    if (wabs < 1.0 && mp::distance(w, w_prev).to_double() <= 0.05 * wabs) {
      const mp::Complex one = mp::Complex::from_int(1, w.precision());
      v.limit = pts.back().ratio + d_last * w / (one - w);
    }
  }
  v.error_estimate = window_diffs.back() * q_median / (1.0 - q_median);
  const double limit_abs = mp::abs(v.limit).to_double();
  v.status = v.error_estimate <= config.tol * std::max(limit_abs, std::numeric_limits<double>::min())
                 ? VerdictStatus::Converged
                 : VerdictStatus::Inconclusive;
  return v;
}

}  // namespace hroots

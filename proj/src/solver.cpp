#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <iostream>
#include <limits>
#include <numbers>
#include <random>
#include <string>

#include "hroots/engine.hpp"
#include "hroots/error.hpp"

namespace hroots {

namespace {

constexpr mp::Bits kShiftMantissaBits = 24;


constexpr double kInf = std::numeric_limits<double>::infinity();

// HROOTS_DEBUG=1 traces the solver's decisions on stderr.
bool debug_enabled() {
  static const bool on = std::getenv("HROOTS_DEBUG") != nullptr;
  return on;
}

double uniform01(std::mt19937_64& rng) { return static_cast<double>(rng() >> 11) * 0x1p-53; }

double rel_error(const RootEstimate& e) {
  const double a = mp::abs(e.value).to_double();
  return a > 0.0 ? e.error / a : kInf;
}

// Random complex shift around the root centroid c = -a_1/(n a_0), in the disk
// of radius rho/4, rho the Fujiwara bound 2 max |b_i/b_0|^{1/i} of the
// centered polynomial q(z + c). (The Cauchy bound 1 + max |a_i/a_0| grows
// like the coefficients, not the roots: with large coefficients every
// shifted root ends up at about the same modulus and nothing converges.)
// Centering matters once only a tight cluster is left: the disk then has the
// size of the cluster, and a shift inside it separates the members' moduli.
// Both parts of the offset are kept away from zero: a real offset cannot
// separate a conjugate pair, an imaginary one cannot separate c +- a.
mp::Complex draw_shift(const Polynomial& p, std::mt19937_64& rng) {
  const std::size_t n = p.degree();
  const mp::Complex c = -(p.coeffs()[1] / (p.leading() * mp::Complex(static_cast<double>(n), 0.0, p.precision())));
  const Polynomial centered = shift(p, c);
  double rho = 0.0;
  for (std::size_t i = 1; i < centered.coeffs().size(); ++i) {
    const double a = mp::abs(centered.coeffs()[i] / centered.leading()).to_double();
    if (a > 0.0) rho = std::max(rho, 2.0 * std::pow(a, 1.0 / static_cast<double>(i)));
  }
  const double radius = rho / 4.0;
  const std::complex<double> centre = c.to_std();
  while (true) {
    const double rad = radius * std::sqrt(uniform01(rng));
    const double theta = 2.0 * std::numbers::pi * uniform01(rng);
    const double re = rad * std::cos(theta);
    const double im = rad * std::sin(theta);
    // Short mantissas so that the shifted polynomial can be formed exactly.
    if (std::abs(re) >= 1e-3 * radius && std::abs(im) >= 1e-3 * radius)
      return {centre.real() + re, centre.imag() + im, kShiftMantissaBits};
  }
}

// q(z + s) without rounding. Rounded coefficients would split the exact
// multiple roots of the input into tight clusters, which the determinant
// tests then see as distinct roots. Precision is doubled until two widths
// agree bit for bit.
Polynomial exact_shift(const Polynomial& q, const mp::Complex& s) {
  mp::Bits bits = q.precision();
  Polynomial lo = shift(q, s);
  for (int round = 0; round < 4; ++round, bits *= 2) {
    Polynomial hi = shift(q.with_precision(2 * bits), s);
    bool same = true;
    for (std::size_t i = 0; same && i < hi.coeffs().size(); ++i) {
      same = mp::distance(lo.coeffs()[i], hi.coeffs()[i]).is_zero();
    }
    if (same) return lo;
    lo = std::move(hi);
  }
  return lo;
}

// u = P/P' has only simple zeros, so Newton on u converges quadratically to
// a root of any multiplicity without knowing it.
mp::Complex refine_unknown_multiplicity(const Polynomial& p, const Polynomial& d1, const Polynomial& d2,
                                        mp::Complex z, int steps) {
  for (int i = 0; i < steps; ++i) {
    const mp::Complex f = evaluate(p, z);
    if (f.is_zero()) break;
    const mp::Complex g = evaluate(d1, z);
    const mp::Complex h = evaluate(d2, z);
    const mp::Complex den = g * g - f * h;
    if (den.is_zero()) break;
    mp::Complex next = z - f * g / den;
    if (!next.is_finite() || mp::norm(evaluate(p, next)) > mp::norm(f)) break;
    z = std::move(next);
  }
  return z;
}

// z - m P/P', kept only while the residual keeps shrinking.
mp::Complex polish(const Polynomial& p, const Polynomial& d1, mp::Complex z, int m, int steps) {
  mp::Real fz = mp::norm(evaluate(p, z));
  for (int i = 0; i < steps && !fz.is_zero(); ++i) {
    const mp::Complex g = evaluate(d1, z);
    if (g.is_zero()) break;
    mp::Complex next = z - evaluate(p, z) * static_cast<long>(m) / g;
    mp::Real fn = mp::norm(evaluate(p, next));
    if (!next.is_finite() || !(fn < fz)) break;
    z = std::move(next);
    fz = std::move(fn);
  }
  return z;
}

ProductVerdict exact_top(const Polynomial& p, Side side, int distinct, const SolverConfig& config) {
  RatioTrace t = adaptive_trace(p, side, distinct, 0, config.window + 1, config, false);
  ProductVerdict pv{distinct, {}};
  pv.verdict.k_last = t.k_last;
  if (t.points.empty()) {
    pv.verdict.status = VerdictStatus::Inconclusive;
    pv.verdict.limit = mp::Complex(p.precision());
    pv.verdict.error_estimate = kInf;
    return pv;
  }
  pv.verdict.status = VerdictStatus::Converged;
  pv.verdict.limit = t.points.back().ratio;
  pv.verdict.q_estimate = 0.0;
  pv.verdict.error_estimate = t.diffs.empty() ? 0.0 : *std::max_element(t.diffs.begin(), t.diffs.end());
  return pv;
}

struct Candidate {
  mp::Complex value;
  Provenance provenance = Provenance::TaylorSide;
  /// Absolute error bound carried over from the trace verdicts.
  double error = 0.0;
};

// Best estimate per modulus rank from both sides of one polynomial. Verdicts
// that missed tol but already meet accept_tol still make usable starting
// points for polishing.
std::vector<std::optional<RootEstimate>> best_estimates(const Polynomial& q, int p, const SolverConfig& config) {
  auto relaxed = [&](std::vector<ProductVerdict> products) {
    for (auto& pv : products) {
      auto& v = pv.verdict;
      if (v.status == VerdictStatus::Inconclusive && std::isfinite(v.error_estimate) &&
          v.error_estimate <= config.accept_tol * mp::abs(v.limit).to_double()) {
        v.status = VerdictStatus::Converged;
      }
    }
    return products;
  };
  std::vector<std::optional<RootEstimate>> best(static_cast<std::size_t>(p));
  auto offer = [&](const std::optional<RootEstimate>& e) {
    if (!e) return;
    auto& slot = best[static_cast<std::size_t>(e->position - 1)];
    if (!slot || rel_error(*e) < rel_error(*slot)) slot = e;
  };
  for (Side side : {Side::Taylor, Side::Laurent}) {
    for (const auto& e : partial_roots_from_products(relaxed(products_from_traces(q, side, p, config)), side)) {
      offer(e);
    }
  }
  return best;
}

// Trace estimates near a slow boundary can be rough. Each one is refined on
// the unshifted polynomial and kept only if the refinement lands on a
// genuine root inside the estimate's own error radius.
struct Certifier {
  const Polynomial& q;
  /// Largest possible multiplicity, n - p + 1.
  int max_multiplicity = 1;
  Polynomial d1 = derivative(q);
  Polynomial d2 = derivative(d1);

  [[nodiscard]] std::optional<mp::Complex> operator()(const mp::Complex& estimate, double radius) const {
    mp::Complex z = refine_unknown_multiplicity(q, d1, d2, estimate, 32);
    const double floor = std::exp2(-0.5 * static_cast<double>(q.precision()));
    if (!(relative_residual(q, z) <= floor)) return std::nullopt;
    const double moved = mp::distance(z, estimate).to_double();
    if (!(moved <= 4.0 * radius + floor * std::max(1.0, mp::abs(z).to_double()))) return std::nullopt;
    return z;
  }

  /// Error bound attached to a certified root. A root of multiplicity m is
  /// only pinned down to about 2^{-prec/m}.
  [[nodiscard]] double error(const mp::Complex& z) const {
    const double m = std::max(2, max_multiplicity);
    return std::exp2(-static_cast<double>(q.precision()) / m) * std::max(1.0, mp::abs(z).to_double());
  }
};

// P(z) / (z - root) by synthetic division, remainder dropped.
Polynomial deflate(const Polynomial& p, const mp::Complex& root) {
  std::vector<mp::Complex> out;
  mp::Complex acc(p.precision());
  for (std::size_t i = 0; i + 1 < p.coeffs().size(); ++i) {
    acc = acc * root + p.coeffs()[i];
    out.push_back(acc);
  }
  return Polynomial::make(std::move(out));
}

// Pool of accurate roots gathered across shift attempts, in the frame of the
// unshifted polynomial. Two entries closer than their combined error bounds
// (with slack) are the same root; the better one is kept.
class RootPool {
 public:
  void add(Candidate c) {
    for (auto& e : entries_) {
      const double d = mp::distance(e.value, c.value).to_double();
      if (d <= 64.0 * (e.error + c.error)) {
        if (c.error < e.error) e = std::move(c);
        return;
      }
    }
    entries_.push_back(std::move(c));
  }
  [[nodiscard]] std::size_t size() const { return entries_.size(); }
  [[nodiscard]] const std::vector<Candidate>& entries() const { return entries_; }
  std::vector<Candidate> take() { return std::move(entries_); }

 private:
  std::vector<Candidate> entries_;
};

struct ShiftState {
  std::mt19937_64 rng;
  int used = 0;
};

std::vector<Candidate> distinct_roots(const Polynomial& q, const SolverConfig& config, ShiftState& state) {
  const int n = q.degree();
  if (n == 1) return {{-q.coeffs()[1] / q.leading(), Provenance::Direct, 0.0}};
  const int p = count_distinct_roots(q, config);
  if (p == 1) {
    // All roots coincide: the root is the mean -a_1/(n a_0).
    return {{-q.coeffs()[1] / (q.leading() * static_cast<long>(n)), Provenance::Direct, 0.0}};
  }

  // Attempt 0 works on q itself; every later attempt on q(z + s) with a fresh
  // random s. Ties at some boundary leave positions unresolved; a shift moves
  // the origin so the moduli separate differently.
  RootPool pool;
  const Certifier certify{q, n - p + 1};
  mp::Complex s(q.precision());
  for (int attempt = 0; attempt <= config.max_shifts; ++attempt) {
    Polynomial work = q;
    if (attempt > 0) {
      do {
        s = draw_shift(q, state.rng);
        work = exact_shift(q, s);
      } while (work.constant_term().is_zero());
      ++state.used;
      if (debug_enabled()) std::cerr << "[hroots] shift by " << s.to_std() << "\n";
    }
    const auto best = best_estimates(work, p, config);
    if (debug_enabled()) {
      std::cerr << "[hroots] degree " << n << ", " << p << " distinct, attempt " << attempt << "\n";
      for (std::size_t i = 0; i < best.size(); ++i) {
        std::cerr << "[hroots]   position " << i + 1 << ": ";
        if (best[i]) {
          std::cerr << best[i]->value.to_std() << " rel.err " << rel_error(*best[i]) << " via "
                    << to_string(best[i]->provenance) << "\n";
        } else {
          std::cerr << "unresolved\n";
        }
      }
    }
    for (const auto& b : best) {
      if (!b || rel_error(*b) > config.accept_tol) continue;
      const auto z = certify(attempt > 0 ? b->value + s : b->value, b->error);
      if (!z) continue;
      pool.add({*z, attempt > 0 ? Provenance::Shifted : b->provenance, certify.error(*z)});
    }
    // All roots simple and one missing: their sum is -a_1/a_0.
    if (p == n && pool.size() + 1 == static_cast<std::size_t>(p)) {
      mp::Complex rest = -q.coeffs()[1] / q.leading();
      for (const auto& c : pool.entries()) rest -= c.value;
      const double radius = 1e-6 * std::max(1.0, mp::abs(rest).to_double());
      if (const auto z = certify(rest, radius)) pool.add({*z, Provenance::Deflated, certify.error(*z)});
    }
    if (pool.size() >= static_cast<std::size_t>(p)) break;
  }
  if (p == n && pool.size() < static_cast<std::size_t>(p) && pool.size() > 0) {
    // Simple roots only: the missing ones are the roots of the quotient by
    // the certified ones. Its roots are certified on q itself before use.
    Polynomial rest = q;
    for (const auto& c : pool.entries()) rest = deflate(rest, c.value);
    // Escalated roots carry wide mantissas; the quotient starting at the
    // ceiling would leave no room for the rank check to double.
    rest = rest.with_precision(q.precision());
    if (debug_enabled()) std::cerr << "[hroots] solving the degree " << rest.degree() << " quotient\n";
    try {
      for (const auto& c : distinct_roots(rest, config, state)) {
        if (const auto z = certify(c.value, 1e-6 * std::max(1.0, mp::abs(c.value).to_double()))) {
          pool.add({*z, Provenance::Deflated, certify.error(*z)});
        }
      }
    } catch (const Error& e) {
      if (e.code() != ErrorCode::ShiftBudgetExhausted && e.code() != ErrorCode::PrecisionExhausted) throw;
      if (debug_enabled()) std::cerr << "[hroots] quotient: " << e.what() << "\n";
    }
  }
  if (pool.size() != static_cast<std::size_t>(p)) {
    throw Error(ErrorCode::ShiftBudgetExhausted, "engine.solve",
                std::to_string(pool.size()) + " of " + std::to_string(p) + " distinct roots resolved after " +
                    std::to_string(state.used) + " shifts");
  }
  return pool.take();
}

}  // namespace

namespace {

// Largest order with a cleanly nonzero determinant somewhere in the probe
// range. Orders above the number of distinct roots vanish for every k; below
// it, isolated k can still vanish exactly, hence the long range.
int rank_at(const Polynomial& p, mp::Bits bits, const SolverConfig& config) {
  CoefficientStream stream(p.with_precision(bits), Side::Taylor);
  const long k_to = 2L * p.degree() + static_cast<long>(config.probe_window) - 1;
  for (int r = p.degree(); r >= 1; --r) {
    const auto cells = det_row(stream, 0, k_to, r, config.guard_bits);
    if (structural_zero_test(cells, config.probe_window) != ZeroTest::StructuralZero) return r;
  }
  return 0;
}

}  // namespace

int count_distinct_roots(const Polynomial& p, const SolverConfig& config) {
  if (p.degree() < 1) throw Error(ErrorCode::DegreeZero, "engine.count_distinct_roots", "degree must be >= 1");
  if (p.constant_term().is_zero()) {
    throw Error(ErrorCode::ConstantTermZero, "engine.count_distinct_roots", "strip zero roots first");
  }
  // Accept a rank only once doubling the precision no longer changes it:
  // nearly coincident roots look like one root until precision resolves them.
  mp::Bits bits = std::max<mp::Bits>(config.precision_bits, p.precision());
  int rank = rank_at(p, bits, config);
  while (true) {
    if (bits * 2 > config.max_precision_bits) {
      throw Error(ErrorCode::PrecisionExhausted, "engine.count_distinct_roots",
                  "rank of the Hankel matrices not stable up to " + std::to_string(bits) + " bits");
    }
    bits *= 2;
    const int next = rank_at(p, bits, config);
    if (next == rank && rank > 0) return rank;
    rank = next;
  }
}

std::vector<ProductVerdict> products_from_traces(const Polynomial& p, Side side, int distinct,
                                                 const SolverConfig& config) {
  if (distinct < 1 || distinct > p.degree()) {
    throw Error(ErrorCode::RGreaterThanP, "engine.products_from_traces",
                "distinct count " + std::to_string(distinct) + " outside 1.." + std::to_string(p.degree()));
  }
  std::vector<ProductVerdict> out;
  out.reserve(static_cast<std::size_t>(distinct));
  for (int r = 1; r < distinct; ++r) {
    const RatioTrace t = adaptive_trace(p, side, r, 0, config.k_max, config, true);
    ProductVerdict pv{r, {}};
    try {
      pv.verdict = classify(t, config);
    } catch (const Error& e) {
      if (e.code() != ErrorCode::TooFewPoints) throw;
      pv.verdict.status = VerdictStatus::Inconclusive;
      pv.verdict.limit = t.points.empty() ? mp::Complex(p.precision()) : t.points.back().ratio;
      pv.verdict.error_estimate = kInf;
      pv.verdict.k_last = t.k_last;
    }
    out.push_back(std::move(pv));
  }
  out.push_back(exact_top(p, side, distinct, config));
  return out;
}

std::vector<std::optional<RootEstimate>> partial_roots_from_products(std::span<const ProductVerdict> products,
                                                                     Side side) {
  const int p = static_cast<int>(products.size());
  std::vector<std::optional<RootEstimate>> out(products.size());
  for (int r = 1; r <= p; ++r) {
    const auto& cur = products[static_cast<std::size_t>(r - 1)].verdict;
    if (cur.status != VerdictStatus::Converged || cur.limit.is_zero()) continue;
    RootEstimate e;
    double rel = cur.error_estimate / mp::abs(cur.limit).to_double();
    if (r == 1) {
      e.value = cur.limit;
    } else {
      const auto& prev = products[static_cast<std::size_t>(r - 2)].verdict;
      if (prev.status != VerdictStatus::Converged || prev.limit.is_zero()) continue;
      e.value = cur.limit / prev.limit;
      rel += prev.error_estimate / mp::abs(prev.limit).to_double();
    }
    e.error = rel * mp::abs(e.value).to_double();
    e.position = side == Side::Taylor ? r : p - r + 1;
    e.provenance = side == Side::Taylor ? Provenance::TaylorSide : Provenance::LaurentSide;
    out[static_cast<std::size_t>(r - 1)] = std::move(e);
  }
  return out;
}

std::vector<RootEstimate> roots_from_products(std::span<const ProductVerdict> products, Side side) {
  auto partial = partial_roots_from_products(products, side);
  std::vector<RootEstimate> out;
  out.reserve(partial.size());
  for (std::size_t i = 0; i < partial.size(); ++i) {
    if (!partial[i]) {
      throw Error(ErrorCode::GapInProducts, "engine.roots_from_products",
                  "product or its predecessor at r = " + std::to_string(i + 1) + " did not converge");
    }
    out.push_back(std::move(*partial[i]));
  }
  return out;
}

std::vector<int> multiplicities(const Polynomial& p, std::span<const mp::Complex> roots) {
  const std::size_t m = roots.size();
  if (m == 0) throw Error(ErrorCode::IllConditionedSystem, "engine.multiplicities", "no roots given");
  const mp::Bits bits = p.precision();
  const auto b = laurent_coeffs(p, m);

  // Scale by the largest modulus so the Vandermonde rows stay O(1).
  mp::Real rho(1.0, bits);
  for (const auto& z : roots) {
    if (mp::abs(z) > rho) rho = mp::abs(z);
  }
  std::vector<mp::Complex> a(m * m, mp::Complex(bits));
  std::vector<mp::Complex> rhs(m, mp::Complex(bits));
  std::vector<mp::Complex> w(m, mp::Complex::from_int(1, bits));
  mp::Real rho_k(1.0, bits);
  for (std::size_t k = 0; k < m; ++k) {
    for (std::size_t j = 0; j < m; ++j) a[k * m + j] = w[j];
    rhs[k] = b[k] / rho_k;
    for (std::size_t j = 0; j < m; ++j) w[j] *= roots[j] / rho;
    rho_k *= rho;
  }

  const double floor = std::exp2(-static_cast<double>(bits) / 2.0);
  for (std::size_t c = 0; c < m; ++c) {
    std::size_t piv = c;
    for (std::size_t i = c + 1; i < m; ++i) {
      if (mp::norm(a[i * m + c]) > mp::norm(a[piv * m + c])) piv = i;
    }
    if (mp::abs(a[piv * m + c]).to_double() < floor) {
      throw Error(ErrorCode::IllConditionedSystem, "engine.multiplicities",
                  "power-sum system singular at column " + std::to_string(c));
    }
    if (piv != c) {
      for (std::size_t j = 0; j < m; ++j) std::swap(a[c * m + j], a[piv * m + j]);
      std::swap(rhs[c], rhs[piv]);
    }
    for (std::size_t i = c + 1; i < m; ++i) {
      const mp::Complex f = a[i * m + c] / a[c * m + c];
      for (std::size_t j = c; j < m; ++j) a[i * m + j] -= f * a[c * m + j];
      rhs[i] -= f * rhs[c];
    }
  }
  std::vector<mp::Complex> x(m, mp::Complex(bits));
  for (std::size_t i = m; i-- > 0;) {
    mp::Complex acc = rhs[i];
    for (std::size_t j = i + 1; j < m; ++j) acc -= a[i * m + j] * x[j];
    x[i] = acc / a[i * m + i];
  }

  std::vector<int> out(m);
  long total = 0;
  for (std::size_t j = 0; j < m; ++j) {
    const std::complex<double> v = x[j].to_std();
    const double rounded = std::round(v.real());
    if (rounded < 1.0 || std::abs(v - std::complex<double>(rounded, 0.0)) >= 0.1) {
      throw Error(ErrorCode::NonIntegerMultiplicity, "engine.multiplicities",
                  "m_" + std::to_string(j + 1) + " = " + std::to_string(v.real()) + (v.imag() < 0 ? "" : "+") +
                      std::to_string(v.imag()) + "i is not a positive integer");
    }
    out[j] = static_cast<int>(rounded);
    total += out[j];
  }
  if (total != p.degree()) {
    throw Error(ErrorCode::NonIntegerMultiplicity, "engine.multiplicities",
                "multiplicities sum to " + std::to_string(total) + ", degree is " + std::to_string(p.degree()));
  }
  return out;
}

RootSet solve(const Polynomial& p, const SolverConfig& config) {
  config.validate();
  if (p.degree() < 1) throw Error(ErrorCode::DegreeZero, "engine.solve", "constant polynomial has no roots");

  RootSet set;
  const StrippedPolynomial stripped = strip_zero_roots(p);
  set.zero_multiplicity = stripped.zero_multiplicity;
  if (stripped.reduced.degree() == 0) return set;

  const Polynomial q =
      stripped.reduced.with_precision(std::max<mp::Bits>(config.precision_bits, stripped.reduced.precision()));
  ShiftState state{std::mt19937_64(config.shift_seed), 0};
  std::vector<Candidate> found = distinct_roots(q, config, state);
  set.shifts_used = state.used;

  const Polynomial d1 = derivative(q);
  std::vector<mp::Complex> values;
  values.reserve(found.size());
  for (const auto& c : found) values.push_back(c.value);

  std::vector<int> mult;
  try {
    mult = multiplicities(q, values);
  } catch (const Error& e) {
    if (e.code() != ErrorCode::NonIntegerMultiplicity && e.code() != ErrorCode::IllConditionedSystem) throw;
    const Polynomial d2 = q.degree() >= 2 ? derivative(d1) : d1;
    for (auto& v : values) v = refine_unknown_multiplicity(q, d1, d2, v, 32);
    mult = multiplicities(q, values);
  }

  for (std::size_t j = 0; j < values.size(); ++j) {
    RootEntry entry;
    entry.root = polish(q, d1, values[j], mult[j], config.polish_steps);
    entry.multiplicity = mult[j];
    entry.residual = relative_residual(p, entry.root);
    entry.provenance = found[j].provenance;
    if (!(entry.residual < config.residual_tol)) {
      throw Error(ErrorCode::ResidualCheckFailed, "engine.solve",
                  "root " + std::to_string(j + 1) + " has relative residual " + std::to_string(entry.residual));
    }
    set.entries.push_back(std::move(entry));
  }
  if (set.total_multiplicity() + set.zero_multiplicity != p.degree()) {
    throw Error(ErrorCode::ResidualCheckFailed, "engine.solve", "multiplicities do not add up to the degree");
  }

  std::sort(set.entries.begin(), set.entries.end(), [](const RootEntry& a, const RootEntry& b) {
    const mp::Real ma = mp::abs(a.root), mb = mp::abs(b.root);
    if (!(ma == mb)) return ma < mb;
    if (!(a.root.real() == b.root.real())) return a.root.real() < b.root.real();
    return a.root.imag() < b.root.imag();
  });
  return set;
}

}  // namespace hroots

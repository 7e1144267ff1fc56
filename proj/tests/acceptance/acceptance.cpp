// Acceptance run: one PASS/FAIL line per criterion, nonzero exit if any fails.
// argv[1], when given, is the hroots binary used for the determinism check;
// further arguments restrict the run to the listed criterion numbers.

#include <algorithm>
#include <array>
#include <chrono>
#include <cmath>
#include <complex>
#include <cstdio>
#include <cstdlib>
#include <functional>
#include <iostream>
#include <random>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "hroots/cli.hpp"
#include "hroots/engine.hpp"
#include "hroots/error.hpp"
#include "hroots/hankel.hpp"
#include "hroots/oracle.hpp"
#include "hroots/poly.hpp"
#include "hroots/series.hpp"
#include "json.hpp"

using namespace hroots;

namespace {

constexpr mp::Bits kBits = 256;

struct Outcome {
  bool pass = true;
  std::string detail;
  int failures = 0;

  void fail(const std::string& why) {
    if (failures++ < 3) detail += (detail.empty() ? "" : "; ") + why;
    pass = false;
  }
};

struct Case {
  std::vector<RootMultiplicity> roots;
  Polynomial poly;
};

mp::Complex cx(long re, long im = 0) { return {mp::Real(re, kBits), mp::Real(im, kBits)}; }

std::string sci(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.2e", x);
  return buf;
}

double rel(const mp::Complex& a, const mp::Complex& b) {
  const mp::Real s = mp::abs(b);
  const mp::Real d = mp::distance(a, b);
  return s.is_zero() ? d.to_double() : (d / s).to_double();
}

std::vector<mp::Complex> values_of(const std::vector<RootMultiplicity>& rm) {
  std::vector<mp::Complex> v;
  for (const auto& r : rm) v.push_back(r.root);
  return v;
}

std::vector<int> mults_of(const std::vector<RootMultiplicity>& rm) {
  std::vector<int> m;
  for (const auto& r : rm) m.push_back(r.multiplicity);
  return m;
}

std::string describe(const std::vector<RootMultiplicity>& rm) {
  std::ostringstream os;
  os << '{';
  for (std::size_t i = 0; i < rm.size(); ++i) {
    const auto z = rm[i].root.to_std();
    os << (i ? " " : "") << z.real();
    if (z.imag() != 0) os << (z.imag() > 0 ? "+" : "") << z.imag() << 'i';
    if (rm[i].multiplicity > 1) os << '^' << rm[i].multiplicity;
  }
  return os.str() + '}';
}

// Distinct integer roots in [-9, 9] \ {0}, degree 1..6.
std::vector<Case> integer_root_corpus() {
  std::mt19937_64 rng(2024);
  std::vector<Case> out;
  for (int i = 0; i < 50; ++i) {
    const int n = 1 + static_cast<int>(rng() % 6);
    std::set<long> picked;
    while (static_cast<int>(picked.size()) < n) {
      const long v = static_cast<long>(rng() % 19) - 9;
      if (v != 0) picked.insert(v);
    }
    std::vector<RootMultiplicity> rm;
    for (long v : picked) rm.push_back({cx(v), 1});
    auto p = from_roots(rm, cx(1));
    out.push_back({std::move(rm), std::move(p)});
  }
  return out;
}

std::vector<int> modulus_order(const std::vector<mp::Complex>& z) {
  std::vector<int> idx(z.size());
  for (std::size_t i = 0; i < idx.size(); ++i) idx[i] = static_cast<int>(i);
  std::stable_sort(idx.begin(), idx.end(), [&](int a, int b) { return mp::abs(z[a]) < mp::abs(z[b]); });
  return idx;
}

// ---- 1 -------------------------------------------------------------------

Outcome criterion1() {
  Outcome o;
  const auto p = make_polynomial({cx(1), cx(0), cx(-1)});
  const auto c = taylor_coeffs(p, 40);
  for (std::size_t k = 0; k < c.size(); ++k) {
    const long want = k % 2 == 0 ? 0 : -2;
    if (!(mp::distance(c[k], cx(want)).is_zero())) o.fail("c_" + std::to_string(k) + " not exact");
  }
  SolverConfig cfg;
  const auto t = adaptive_trace(p, Side::Taylor, 1, 0, cfg.k_max, cfg, false);
  const auto v = classify(t, cfg);
  if (v.status != VerdictStatus::Oscillating) o.fail(std::string("r=1 trace ") + to_string(v.status));
  const RootSet set = solve(p, cfg);
  std::vector<std::complex<double>> got;
  for (const auto& e : set.entries) {
    got.push_back(e.root.to_std());
    if (!(e.residual < 1e-12)) o.fail("residual " + std::to_string(e.residual));
    if (e.multiplicity != 1) o.fail("multiplicity");
  }
  if (set.entries.size() != 2 || std::abs(got[0] - 1.0) + std::abs(got[1] + 1.0) > 1e-12 &&
                                     std::abs(got[0] + 1.0) + std::abs(got[1] - 1.0) > 1e-12) {
    o.fail("roots differ from {1,-1}");
  }
  if (set.shifts_used < 1) o.fail("no shift used");
  o.detail = o.detail.empty() ? "shifts_used=" + std::to_string(set.shifts_used) : o.detail;
  return o;
}

// ---- 2 -------------------------------------------------------------------

Outcome criterion2(const std::vector<Case>& corpus) {
  Outcome o;
  SolverConfig cfg;
  double worst = 0;
  for (const auto& cs : corpus) {
    const int p = static_cast<int>(cs.roots.size());
    mp::Complex prod = cx(1);
    for (const auto& r : cs.roots) prod *= r.root;
    for (Side side : {Side::Taylor, Side::Laurent}) {
      const auto t = adaptive_trace(cs.poly, side, p, 0, 20, cfg, false);
      if (t.points.size() != 21 || !t.gaps.empty()) {
        o.fail(describe(cs.roots) + " " + to_string(side) + ": incomplete trace");
        continue;
      }
      for (const auto& pt : t.points) {
        const double e = rel(pt.ratio, prod);
        worst = std::max(worst, e);
        if (!(e < 1e-20)) o.fail(describe(cs.roots) + " " + to_string(side) + " k=" + std::to_string(pt.k));
      }
    }
  }
  if (o.pass) o.detail = "worst rel " + sci(worst);
  return o;
}

// ---- 3 -------------------------------------------------------------------

// log2 of the Hadamard bound prod_i ||row_i|| for H_{k,r} over values.
double log2_row_bound(const std::vector<mp::Complex>& s, long k, int r) {
  double total = 0;
  for (int i = 0; i < r; ++i) {
    mp::Real acc(0L, s.front().precision());
    for (int j = 0; j < r; ++j) acc += mp::norm(s[static_cast<std::size_t>(k + i + j)]);
    total += acc.is_zero() ? -1e300 : 0.5 * acc.log2_abs();
  }
  return total;
}

Outcome criterion3(const std::vector<Case>& corpus) {
  Outcome o;
  double worst = 0;
  int zero_cells = 0;
  for (const auto& cs : corpus) {
    const int p = static_cast<int>(cs.roots.size());
    const auto mults = mults_of(cs.roots);
    for (Side side : {Side::Taylor, Side::Laurent}) {
      for (int r = 1; r <= p; ++r) {
        for (long k = 0; k <= 20; ++k) {
          // Escalate until the determinant carries enough bits for the comparison.
          bool settled = false;
          for (mp::Bits bits = kBits; bits <= 4096 && !settled; bits *= 2) {
            const auto poly = cs.poly.with_precision(bits);
            std::vector<mp::Complex> roots;
            for (const auto& z : values_of(cs.roots)) roots.push_back(z.with_precision(bits));
            const auto closed = oracle::hadamard_via_roots(roots, mults, k, r, side);
            const std::size_t need = static_cast<std::size_t>(k + 2 * r - 1);
            const auto s = side == Side::Taylor ? taylor_coeffs(poly, need) : laurent_coeffs(poly, need);
            const HankelCell cell = hadamard_det(s, k, r);
            if (!cell.flagged && cell.cancellation_margin < static_cast<double>(bits) - 90) {
              const double e = rel(closed, cell.value.value());
              worst = std::max(worst, e);
              if (!(e < 1e-20)) {
                o.fail(describe(cs.roots) + " " + to_string(side) + " r=" + std::to_string(r) +
                       " k=" + std::to_string(k) + " rel " + std::to_string(e));
              }
              settled = true;
            } else if (bits * 2 > 4096) {
              // An exact zero: the closed form has to vanish to the same depth.
              const double floor = log2_row_bound(s, k, r) - static_cast<double>(bits) + 90;
              if (!closed.is_zero() && closed.log2_abs() > floor) {
                o.fail(describe(cs.roots) + " zero cell r=" + std::to_string(r) + " k=" + std::to_string(k));
              }
              ++zero_cells;
              settled = true;
            }
          }
        }
      }
      if (!oracle::hadamard_via_roots(values_of(cs.roots), mults, 3, p + 1, side).is_zero()) {
        o.fail(describe(cs.roots) + " r=p+1 not exactly zero");
      }
    }
  }
  if (o.pass) o.detail = "worst rel " + sci(worst) + ", exact-zero cells " + std::to_string(zero_cells);
  return o;
}

// ---- 4 -------------------------------------------------------------------

Outcome criterion4() {
  Outcome o;
  const std::vector<RootMultiplicity> rm{{cx(1), 1}, {cx(2), 1}, {cx(4), 1}};
  const auto p = from_roots(rm, cx(1));
  SolverConfig cfg;
  struct Probe {
    Side side;
    int r;
    double q;
  };
  std::ostringstream os;
  for (const Probe& pr : {Probe{Side::Taylor, 1, 0.5}, Probe{Side::Taylor, 2, 0.5}, Probe{Side::Laurent, 1, 0.5}}) {
    const auto t = adaptive_trace(p, pr.side, pr.r, 16, 64, cfg, false);
    const auto v = classify(t, cfg);
    os << to_string(pr.side) << " r=" << pr.r << " q=" << v.q_estimate << ' ';
    if (!(std::abs(v.q_estimate - pr.q) <= 0.15 * pr.q)) o.fail(os.str());
  }
  if (o.pass) o.detail = os.str();
  return o;
}

// ---- 5 -------------------------------------------------------------------

// Checks |R(k) - limit| <= bound(k) on [k_from, k_from + span] wherever the
// bound is still above the arithmetic noise of the trace.
int check_bound(const Polynomial& poly, Side side, int r, const oracle::ErrorConstant& ec, long span,
                const std::string& label, Outcome& o) {
  SolverConfig cfg;
  const long k0 = ec.k_threshold;
  const auto t = adaptive_trace(poly, side, r, k0, k0 + span, cfg, false);
  int checked = 0;
  const double noise = ec.product.log2_abs() - static_cast<double>(t.precision) + t.max_margin + 40;
  for (const auto& pt : t.points) {
    const double bound = ec.log2_bound(pt.k, r, side);
    if (bound < noise) break;
    ++checked;
    const mp::Real err = mp::distance(pt.ratio, ec.product);
    if (!err.is_zero() && err.log2_abs() > bound + 1e-9) {
      o.fail(label + " k=" + std::to_string(pt.k) + " err 2^" + std::to_string(err.log2_abs()) + " > 2^" +
             std::to_string(bound));
    }
  }
  return checked;
}

Outcome criterion5(const std::vector<Case>& corpus) {
  Outcome o;
  int positions = 0, points = 0, corollary = 0;
  for (const auto& cs : corpus) {
    const auto z = values_of(cs.roots);
    const auto m = mults_of(cs.roots);
    const int p = static_cast<int>(z.size());
    const auto order = modulus_order(z);
    auto mod = [&](int pos) { return mp::abs(z[static_cast<std::size_t>(order[static_cast<std::size_t>(pos - 1)])]); };
    for (Side side : {Side::Taylor, Side::Laurent}) {
      for (int r = 1; r < p; ++r) {
        const bool gap = side == Side::Taylor ? mod(r) < mod(r + 1) : mod(p - r) < mod(p - r + 1);
        if (!gap) continue;
        const auto ec = oracle::theoretical_error_constant(z, m, r, side, 0.4);
        ++positions;
        points += check_bound(cs.poly, side, r, ec, 60,
                              describe(cs.roots) + " " + to_string(side) + " r=" + std::to_string(r), o);
      }
      if (p < 2) continue;
      const bool gap1 = side == Side::Taylor ? mod(1) < mod(2) : mod(p - 1) < mod(p);
      if (!gap1) continue;
      const auto cc = oracle::corollary_error_constant(z, m, side);
      corollary += check_bound(cs.poly, side, 1, cc, 60, describe(cs.roots) + " corollary " + to_string(side), o);
    }
  }
  if (o.pass) {
    o.detail = std::to_string(positions) + " gap positions, " + std::to_string(points) + " theorem points, " +
               std::to_string(corollary) + " corollary points";
  }
  if (points == 0 || corollary == 0) o.fail("nothing checked");
  return o;
}

// ---- 6 -------------------------------------------------------------------

std::vector<Case> tie_corpus() {
  std::vector<std::vector<RootMultiplicity>> sets;
  auto polar = [](long num, long den, long radius) {
    return mp::Complex::unit_root(num, den, kBits) * mp::Real(radius, kBits);
  };
  // Real pairs +-a.
  sets.push_back({{cx(1), 1}, {cx(-1), 1}});
  sets.push_back({{cx(2), 1}, {cx(-2), 1}, {cx(5), 1}});
  sets.push_back({{cx(1), 1}, {cx(3), 1}, {cx(-3), 1}});
  sets.push_back({{cx(1), 1}, {cx(-1), 1}, {cx(4), 1}, {cx(-4), 1}});
  sets.push_back({{cx(2), 1}, {cx(3), 1}, {cx(-3), 1}, {cx(7), 1}});
  sets.push_back({{cx(-5), 1}, {cx(5), 1}, {cx(1), 1}});
  sets.push_back({{cx(2), 2}, {cx(-2), 1}, {cx(3), 1}});
  // Complex-conjugate pairs.
  sets.push_back({{cx(1, 1), 1}, {cx(1, -1), 1}});
  sets.push_back({{cx(0, 2), 1}, {cx(0, -2), 1}, {cx(1), 1}});
  sets.push_back({{cx(1), 1}, {cx(2, 1), 1}, {cx(2, -1), 1}, {cx(4), 1}});
  sets.push_back({{cx(3, 4), 1}, {cx(3, -4), 1}, {cx(1), 1}, {cx(9), 1}});
  sets.push_back({{cx(-1, 2), 1}, {cx(-1, -2), 1}, {cx(3), 1}});
  sets.push_back({{polar(1, 7, 2), 1}, {mp::conj(polar(1, 7, 2)), 1}, {cx(1), 1}});
  sets.push_back({{polar(1, 5, 1), 1}, {mp::conj(polar(1, 5, 1)), 1}, {cx(3), 1}});
  // Non-conjugate equal moduli and longer ties.
  sets.push_back({{cx(3), 1}, {cx(0, 3), 1}, {cx(1), 1}});
  sets.push_back({{cx(1), 1}, {cx(0, 1), 1}, {cx(-1), 1}, {cx(5), 1}});
  sets.push_back({{cx(5), 1}, {cx(3, 4), 1}, {cx(2), 1}});
  sets.push_back({{cx(1, 2), 1}, {cx(2, 1), 1}, {cx(6), 1}});
  sets.push_back({{cx(1), 1}, {cx(-1), 1}, {cx(2, 3), 1}, {cx(2, -3), 1}});
  sets.push_back({{polar(1, 3, 2), 1}, {polar(2, 3, 2), 1}, {cx(2), 1}, {cx(1), 1}});
  std::vector<Case> out;
  for (auto& s : sets) {
    auto p = from_roots(s, cx(1));
    out.push_back({std::move(s), std::move(p)});
  }
  return out;
}

Outcome criterion6() {
  Outcome o;
  SolverConfig cfg;
  cfg.k_max = 128;
  int tied = 0;
  const auto corpus = tie_corpus();
  for (const auto& cs : corpus) {
    const auto z = values_of(cs.roots);
    const int p = static_cast<int>(z.size());
    const auto order = modulus_order(z);
    auto mod = [&](int pos) { return mp::abs(z[static_cast<std::size_t>(order[static_cast<std::size_t>(pos - 1)])]); };
    for (Side side : {Side::Taylor, Side::Laurent}) {
      for (int r = 1; r < p; ++r) {
        const bool tie = side == Side::Taylor ? mod(r) == mod(r + 1) : mod(p - r) == mod(p - r + 1);
        if (!tie) continue;
        ++tied;
        const auto t = adaptive_trace(cs.poly, side, r, 0, cfg.k_max, cfg, true);
        VerdictStatus status = VerdictStatus::Inconclusive;
        try {
          status = classify(t, cfg).status;
        } catch (const Error& e) {
          o.fail(describe(cs.roots) + " " + e.what());
          continue;
        }
        if (status != VerdictStatus::Oscillating) {
          o.fail(describe(cs.roots) + " " + to_string(side) + " r=" + std::to_string(r) + " " + to_string(status));
        }
      }
    }
  }
  if (o.pass) o.detail = std::to_string(corpus.size()) + " polynomials, " + std::to_string(tied) + " tied orders";
  return o;
}

// ---- 7 -------------------------------------------------------------------

std::vector<Case> multiplicity_corpus() {
  std::mt19937_64 rng(77);
  std::vector<Case> out;
  for (int i = 0; i < 30; ++i) {
    const int distinct = 1 + static_cast<int>(rng() % 4);
    std::vector<RootMultiplicity> rm;
    std::set<std::pair<long, long>> used;
    int degree = 0;
    while (static_cast<int>(rm.size()) < distinct) {
      const long re = static_cast<long>(rng() % 9) - 4;
      const long im = i % 2 == 0 ? 0 : static_cast<long>(rng() % 7) - 3;
      if ((re == 0 && im == 0) || !used.insert({re, im}).second) continue;
      const int m = 1 + static_cast<int>(rng() % 4);
      degree += m;
      rm.push_back({cx(re, im), m});
    }
    if (std::none_of(rm.begin(), rm.end(), [](const auto& r) { return r.multiplicity > 1; })) {
      rm.front().multiplicity = 2 + static_cast<int>(rng() % 3);
    }
    auto p = from_roots(rm, cx(1));
    out.push_back({std::move(rm), std::move(p)});
  }
  return out;
}

Outcome criterion7(const std::vector<Case>& corpus) {
  Outcome o;
  SolverConfig cfg;
  int solved = 0;
  for (const auto& cs : corpus) {
    const int p = static_cast<int>(cs.roots.size());
    const int got_p = count_distinct_roots(cs.poly, cfg);
    if (got_p != p) {
      o.fail(describe(cs.roots) + " p=" + std::to_string(got_p));
      continue;
    }
    const auto z = values_of(cs.roots);
    const auto m = multiplicities(cs.poly, z);
    if (m != mults_of(cs.roots)) o.fail(describe(cs.roots) + " multiplicities");
    int total = 0;
    for (int v : m) total += v;
    if (total != cs.poly.degree()) o.fail(describe(cs.roots) + " sum");
    // End to end: the solver has to find the same multiset.
    try {
      const RootSet set = solve(cs.poly, cfg);
      bool same = set.distinct_count() == p && set.total_multiplicity() == cs.poly.degree();
      for (const auto& e : set.entries) {
        auto hit = std::find_if(cs.roots.begin(), cs.roots.end(), [&](const RootMultiplicity& r) {
          return mp::distance(r.root, e.root).to_double() < 1e-8 * std::max(1.0, mp::abs(r.root).to_double());
        });
        same = same && hit != cs.roots.end() && hit->multiplicity == e.multiplicity;
      }
      if (!same) o.fail(describe(cs.roots) + " solve mismatch");
      else ++solved;
    } catch (const Error& e) {
      o.fail(describe(cs.roots) + " solve: " + e.what());
    }
  }
  if (o.pass) o.detail = std::to_string(corpus.size()) + " polynomials, solve agreed on " + std::to_string(solved);
  return o;
}

std::string as_json(const Polynomial& p) {
  nlohmann::ordered_json j;
  j["coefficients"] = nlohmann::ordered_json::array();
  for (const auto& c : p.coeffs()) j["coefficients"].push_back({c.real().to_string(), c.imag().to_string()});
  return j.dump();
}

// ---- 8 -------------------------------------------------------------------

std::vector<Polynomial> unit_disk_corpus() {
  std::mt19937_64 rng(8);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  std::vector<Polynomial> out;
  for (int i = 0; i < 100; ++i) {
    const int n = 1 + static_cast<int>(rng() % 8);
    std::vector<mp::Complex> c{cx(1)};
    for (int j = 0; j < n; ++j) {
      double re, im;
      do {
        re = u(rng);
        im = u(rng);
      } while (re * re + im * im >= 1.0);
      c.emplace_back(re, im, kBits);
    }
    out.push_back(make_polynomial(std::move(c)));
  }
  return out;
}

// With HROOTS_ACCEPT_DUMP=<dir>, failing inputs are written there as JSON.
void dump_failure(const Polynomial& p, std::size_t i) {
  const char* dir = std::getenv("HROOTS_ACCEPT_DUMP");
  if (!dir) return;
  const std::string path = std::string(dir) + "/criterion8_" + std::to_string(i) + ".json";
  if (FILE* f = std::fopen(path.c_str(), "w")) {
    std::fputs(as_json(p).c_str(), f);
    std::fclose(f);
  }
}

Outcome criterion8(const std::vector<Polynomial>& corpus) {
  Outcome o;
  SolverConfig cfg;
  double worst = 0;
  int shifted = 0;
  for (std::size_t i = 0; i < corpus.size(); ++i) {
    const auto& p = corpus[i];
    const std::string label = "#" + std::to_string(i) + " deg " + std::to_string(p.degree());
    try {
      const RootSet set = solve(p, cfg);
      if (set.shifts_used > 0) ++shifted;
      std::vector<mp::Complex> got;
      for (const auto& e : set.entries)
        for (int k = 0; k < e.multiplicity; ++k) got.push_back(e.root);
      for (int k = 0; k < set.zero_multiplicity; ++k) got.push_back(cx(0));
      auto want = oracle::independent_roots(p);
      if (got.size() != want.size()) {
        o.fail(label + " root count");
        continue;
      }
      // Greedy nearest matching is enough when every pair is within 1e-8.
      double local = 0;
      for (const auto& z : got) {
        std::size_t best = 0;
        double bd = INFINITY;
        for (std::size_t j = 0; j < want.size(); ++j) {
          const double d = mp::distance(z, want[j]).to_double();
          if (d < bd) bd = d, best = j;
        }
        local = std::max(local, bd);
        want.erase(want.begin() + static_cast<long>(best));
      }
      worst = std::max(worst, local);
      if (!(local <= 1e-8)) {
        o.fail(label + " max distance " + std::to_string(local));
        dump_failure(p, i);
      }
    } catch (const Error& e) {
      o.fail(label + " " + std::string(to_string(e.code())) + ": " + e.what());
      dump_failure(p, i);
    }
  }
  if (o.pass) {
    std::ostringstream os;
    os << "worst distance " << worst << ", " << shifted << " needed shifts";
    o.detail = os.str();
  }
  return o;
}

// ---- 9 -------------------------------------------------------------------

Outcome criterion9() {
  Outcome o;
  std::mt19937_64 rng(9);
  std::uniform_real_distribution<double> u(-3.0, 3.0);
  double worst = 0;
  for (int i = 0; i < 200; ++i) {
    const std::size_t s = 1 + rng() % 8;
    std::vector<mp::Complex> a, inv;
    while (a.size() < s) {
      mp::Complex z(u(rng), u(rng), kBits);
      if (mp::abs(z).to_double() < 0.1) continue;
      a.push_back(z);
      inv.push_back(mp::inverse(z));
    }
    const auto v = oracle::vandermonde(a);
    const mp::Complex sign = cx((s / 2) % 2 == 0 ? 1 : -1);
    mp::Complex prod = cx(1);
    for (const auto& z : a) prod *= z;
    const auto scale = mp::pow(prod, s - 1);
    const std::array<double, 3> errs{rel(sign * oracle::vandermonde_inversed(a), v),
                                     rel(scale * oracle::vandermonde_inversed(inv), v),
                                     rel(scale * sign * oracle::vandermonde(inv), v)};
    for (double e : errs) {
      worst = std::max(worst, e);
      if (!(e < 1e-20)) o.fail("tuple " + std::to_string(i) + " s=" + std::to_string(s));
    }
  }
  if (o.pass) o.detail = "worst rel " + sci(worst);
  return o;
}

// ---- 10 ------------------------------------------------------------------

std::string run_binary(const std::string& bin, const std::string& file) {
  const std::string cmd = "'" + bin + "' roots --seed 7 '" + file + "' 2>&1";
  std::string out;
  if (FILE* f = popen(cmd.c_str(), "r")) {
    char buf[4096];
    std::size_t n;
    while ((n = fread(buf, 1, sizeof buf, f)) > 0) out.append(buf, n);
    out += "\nstatus " + std::to_string(pclose(f));
  }
  return out;
}

Outcome criterion10(const std::vector<Polynomial>& corpus, const std::string& bin) {
  Outcome o;
  int binary_runs = 0;
  for (std::size_t i = 0; i < corpus.size(); ++i) {
    cli::JobSpec job;
    job.input = as_json(corpus[i]);
    job.config.shift_seed = 7;
    std::string outs[2];
    for (auto& s : outs) {
      std::ostringstream out, err;
      const int status = cli::run(job, out, err);
      s = out.str() + err.str() + std::to_string(status);
    }
    if (outs[0] != outs[1]) o.fail("in-process #" + std::to_string(i));
    if (bin.empty()) continue;
    const std::string file = "acceptance_poly_" + std::to_string(i) + ".json";
    if (FILE* f = std::fopen(file.c_str(), "w")) {
      std::fputs(job.input.c_str(), f);
      std::fclose(f);
    }
    const auto a = run_binary(bin, file);
    const auto b = run_binary(bin, file);
    std::remove(file.c_str());
    ++binary_runs;
    if (a != b) o.fail("binary #" + std::to_string(i));
    // Same bytes as the library path.
    if (a.substr(0, a.rfind("\nstatus")) != outs[0].substr(0, outs[0].size() - 1)) {
      o.fail("binary vs in-process #" + std::to_string(i));
    }
  }
  if (o.pass) {
    o.detail = std::to_string(corpus.size()) + " inputs, " + std::to_string(binary_runs) + " through the binary";
  }
  return o;
}

}  // namespace

int main(int argc, char** argv) {
  const std::string bin = argc > 1 ? argv[1] : "";
  const auto integer = integer_root_corpus();
  const auto multi = multiplicity_corpus();
  const auto disk = unit_disk_corpus();

  std::vector<Polynomial> full{make_polynomial({cx(1), cx(0), cx(-1)})};
  for (const auto& c : integer) full.push_back(c.poly);
  for (const auto& c : multi) full.push_back(c.poly);
  for (const auto& c : tie_corpus()) full.push_back(c.poly);
  full.insert(full.end(), disk.begin(), disk.end());

  const std::vector<std::pair<int, std::function<Outcome()>>> criteria{
      {1, [] { return criterion1(); }},
      {2, [&] { return criterion2(integer); }},
      {3, [&] { return criterion3(integer); }},
      {4, [] { return criterion4(); }},
      {5, [&] { return criterion5(integer); }},
      {6, [] { return criterion6(); }},
      {7, [&] { return criterion7(multi); }},
      {8, [&] { return criterion8(disk); }},
      {9, [] { return criterion9(); }},
      {10, [&] { return criterion10(full, bin); }},
  };
  std::set<int> only;
  for (int i = 2; i < argc; ++i) only.insert(std::atoi(argv[i]));
  int failed = 0, ran = 0;
  for (const auto& [id, fn] : criteria) {
    if (!only.empty() && !only.count(id)) continue;
    ++ran;
    const auto t0 = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = fn();
    } catch (const std::exception& e) {
      o.fail(std::string("exception: ") + e.what());
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    if (!o.pass) ++failed;
    std::printf("criterion %2d: %s  (%.1fs)  %s\n", id, o.pass ? "PASS" : "FAIL", secs, o.detail.c_str());
    std::fflush(stdout);
  }
  std::printf("%d of %d criteria passed\n", ran - failed, ran);
  return failed == 0 ? 0 : 1;
}

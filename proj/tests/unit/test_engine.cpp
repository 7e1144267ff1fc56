#include <cmath>

#include "doctest.h"
#include "helpers.hpp"
#include "hroots/engine.hpp"
#include "hroots/error.hpp"

using namespace hroots;
using testing::cx;
using testing::dist;
using testing::real_poly;

namespace {

Polynomial roots_poly(std::initializer_list<std::complex<double>> zs) {
  std::vector<RootMultiplicity> rm;
  for (auto z : zs) rm.push_back({mp::Complex(z, 256), 1});
  return from_roots(rm, cx(1));
}

}  // namespace

TEST_CASE("ratio traces of z^2 - 3z + 2") {
  const auto p = real_poly({1, -3, 2});
  auto t = ratio_trace(p, Side::Taylor, 1, 2);
  REQUIRE(t.points.size() == 3);
  CHECK(dist(t.points[0].ratio, cx(6) / cx(5)) < 1e-70);
  CHECK(dist(t.points[1].ratio, cx(10) / cx(9)) < 1e-70);
  CHECK(dist(t.points[2].ratio, cx(18) / cx(17)) < 1e-70);

  t = ratio_trace(p, Side::Laurent, 1, 2);
  CHECK(dist(t.points[0].ratio, cx(1.5)) < 1e-70);
  CHECK(dist(t.points[1].ratio, cx(5) / cx(3)) < 1e-70);
  CHECK(dist(t.points[2].ratio, cx(9) / cx(5)) < 1e-70);

  t = ratio_trace(p, Side::Taylor, 2, 10);
  for (const auto& pt : t.points) CHECK(dist(pt.ratio, cx(2)) < 1e-70);
}

TEST_CASE("trace of z^2 - 1 has gaps and no limit") {
  const auto t = ratio_trace(real_poly({1, 0, -1}), Side::Taylor, 1, 40);
  CHECK_FALSE(t.gaps.empty());
  for (const auto& g : t.gaps) {
    CHECK(g.k % 2 == 1);
    CHECK(g.kind == GapKind::Pole);
  }
  for (const auto& pt : t.points) CHECK(pt.ratio.is_zero());
  CHECK(classify(t, SolverConfig{}).status == VerdictStatus::Oscillating);
}

TEST_CASE("classify") {
  SolverConfig cfg;
  auto t = ratio_trace(real_poly({1, -3, 2}), Side::Taylor, 1, 40);
  auto v = classify(t, cfg);
  CHECK(v.status == VerdictStatus::Converged);
  CHECK(dist(v.limit, cx(1)) < 1e-9);
  CHECK(std::abs(v.q_estimate - 0.5) < 0.05);

  RatioTrace flat;
  flat.precision = 256;
  for (long k = 0; k < 12; ++k) {
    flat.points.push_back({k, cx(2)});
    if (k > 0) flat.diffs.push_back(0.0);
  }
  flat.k_last = 11;
  v = classify(flat, cfg);
  CHECK(v.status == VerdictStatus::Converged);
  CHECK(dist(v.limit, cx(2)) == 0.0);
  CHECK(v.error_estimate == 0.0);

  flat.points.resize(3);
  flat.diffs.resize(2);
  flat.k_last = 2;
  CHECK_THROWS_AS(classify(flat, cfg), Error);
}

TEST_CASE("complex tie oscillates") {
  // |e^{i pi/3}| = |e^{-i pi/3}| < 2
  const auto w = mp::Complex::unit_root(1, 6, 256);
  const std::vector<RootMultiplicity> rm{{w, 1}, {mp::conj(w), 1}, {cx(2), 1}};
  const auto p = from_roots(rm, cx(1));
  SolverConfig cfg;
  const auto products = products_from_traces(p, Side::Taylor, 3, cfg);
  CHECK(products[0].verdict.status == VerdictStatus::Oscillating);
  CHECK(products[1].verdict.status == VerdictStatus::Converged);
  CHECK(dist(products[1].verdict.limit, cx(1)) < 1e-10);
  CHECK(products[2].verdict.status == VerdictStatus::Converged);
  CHECK(dist(products[2].verdict.limit, w * mp::conj(w) * cx(2)) < 1e-60);
}

TEST_CASE("count_distinct_roots") {
  SolverConfig cfg;
  CHECK(count_distinct_roots(real_poly({1, -3, 2}), cfg) == 2);
  CHECK(count_distinct_roots(real_poly({1, -5, 7, -3}), cfg) == 2);
  CHECK(count_distinct_roots(real_poly({1, -15, 75, -125}), cfg) == 1);
  // early k vanish exactly at order 3 here; the count must not be fooled
  CHECK(count_distinct_roots(real_poly({1, 2, 3, 4, 5, 6, 7, 8, 9}), cfg) == 8);
}

TEST_CASE("products and roots from both sides") {
  const auto p = roots_poly({1, 2, 3});
  SolverConfig cfg;
  const auto t = products_from_traces(p, Side::Taylor, 3, cfg);
  CHECK(dist(t[0].verdict.limit, cx(1)) < 1e-10);
  CHECK(dist(t[1].verdict.limit, cx(2)) < 1e-10);
  CHECK(dist(t[2].verdict.limit, cx(6)) < 1e-60);
  const auto l = products_from_traces(p, Side::Laurent, 3, cfg);
  CHECK(dist(l[0].verdict.limit, cx(3)) < 1e-10);
  CHECK(dist(l[1].verdict.limit, cx(6)) < 1e-10);
  CHECK(dist(l[2].verdict.limit, cx(6)) < 1e-60);

  const auto tr = roots_from_products(t, Side::Taylor);
  const auto lr = roots_from_products(l, Side::Laurent);
  for (int i = 0; i < 3; ++i) {
    CHECK(dist(tr[i].value, cx(i + 1)) < 1e-9);
    CHECK(tr[i].position == i + 1);
    CHECK(dist(lr[i].value, cx(3 - i)) < 1e-9);
    CHECK(lr[i].position == 3 - i);
  }
}

TEST_CASE("roots_from_products reports gaps") {
  std::vector<ProductVerdict> pv(2);
  pv[0].r = 1;
  pv[0].verdict.status = VerdictStatus::Oscillating;
  pv[0].verdict.limit = cx(1);
  pv[1].r = 2;
  pv[1].verdict.status = VerdictStatus::Converged;
  pv[1].verdict.limit = cx(-1);
  try {
    roots_from_products(pv, Side::Taylor);
    FAIL("gap accepted");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::GapInProducts);
  }
  const auto partial = partial_roots_from_products(pv, Side::Taylor);
  CHECK_FALSE(partial[0].has_value());
  CHECK_FALSE(partial[1].has_value());

  std::vector<ProductVerdict> single(1);
  single[0].verdict.status = VerdictStatus::Converged;
  single[0].verdict.limit = cx(2);
  CHECK(dist(roots_from_products(single, Side::Taylor)[0].value, cx(2)) == 0.0);
}

TEST_CASE("multiplicities") {
  std::vector<mp::Complex> r{cx(1), cx(3)};
  CHECK(multiplicities(real_poly({1, -5, 7, -3}), r) == std::vector<int>{2, 1});
  CHECK(multiplicities(real_poly({1, -3, 2}), std::vector<mp::Complex>{cx(1), cx(2)}) == std::vector<int>{1, 1});
  CHECK(multiplicities(real_poly({1, -15, 75, -125}), std::vector<mp::Complex>{cx(5)}) == std::vector<int>{3});
  try {
    multiplicities(real_poly({1, -5, 7, -3}), std::vector<mp::Complex>{cx(1.3), cx(3)});
    FAIL("wrong roots accepted");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::NonIntegerMultiplicity);
  }
}

TEST_CASE("solve") {
  auto set = solve(real_poly({1, 0, -1}));
  REQUIRE(set.entries.size() == 2);
  CHECK(set.shifts_used >= 1);
  CHECK(dist(set.entries[0].root, cx(-1)) < 1e-12);
  CHECK(dist(set.entries[1].root, cx(1)) < 1e-12);

  set = solve(real_poly({1, -5, 7, -3}));
  REQUIRE(set.entries.size() == 2);
  CHECK(dist(set.entries[0].root, cx(1)) < 1e-12);
  CHECK(set.entries[0].multiplicity == 2);
  CHECK(set.entries[1].multiplicity == 1);

  set = solve(real_poly({1, 0, 1}));
  REQUIRE(set.entries.size() == 2);
  CHECK(dist(set.entries[0].root, cx(0, -1)) < 1e-12);
  CHECK(dist(set.entries[1].root, cx(0, 1)) < 1e-12);

  set = solve(real_poly({2, -6, 4, 0, 0}));
  CHECK(set.zero_multiplicity == 2);
  CHECK(set.total_multiplicity() == 2);

  set = solve(real_poly({4, -2}));
  CHECK(dist(set.entries[0].root, cx(0.5)) == 0.0);
  CHECK(set.entries[0].provenance == Provenance::Direct);

  try {
    solve(real_poly({3}));
    FAIL("degree zero accepted");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::DegreeZero);
  }
  SolverConfig tight;
  tight.max_shifts = 0;
  try {
    solve(real_poly({1, 0, -1}), tight);
    FAIL("tie resolved without shifts");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::ShiftBudgetExhausted);
  }
}

TEST_CASE("shift invariance") {
  const auto p = roots_poly({{1, 0.5}, {-2, 0}, {0.3, -1.1}});
  const auto s = cx(0.37, -0.21);
  const auto a = solve(p);
  const auto b = solve(shift(p, s));
  REQUIRE(a.entries.size() == b.entries.size());
  for (const auto& e : a.entries) {
    double best = 1e300;
    for (const auto& f : b.entries) best = std::min(best, dist(e.root, f.root + s));
    CHECK(best < 1e-12);
  }
}

TEST_CASE("config validation") {
  SolverConfig c;
  CHECK_NOTHROW(c.validate());
  c.precision_bits = 32;
  CHECK_THROWS_AS(c.validate(), Error);
  c = {};
  c.tol = 1.5;
  CHECK_THROWS_AS(c.validate(), Error);
  c = {};
  c.k_max = c.window + 1;
  CHECK_THROWS_AS(c.validate(), Error);
}

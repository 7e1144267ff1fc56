#include <cmath>
#include <random>

#include "doctest.h"
#include "helpers.hpp"
#include "hroots/error.hpp"
#include "hroots/hankel.hpp"
#include "hroots/oracle.hpp"

using namespace hroots;
using testing::cx;
using testing::dist;
using testing::real_poly;
using testing::rel;

TEST_CASE("vandermonde values") {
  const std::vector<mp::Complex> a{cx(1), cx(2), cx(3)};
  CHECK(dist(oracle::vandermonde(a), cx(2)) == 0.0);
  CHECK(dist(oracle::vandermonde(std::span(a).first(1)), cx(1)) == 0.0);
  CHECK(dist(oracle::vandermonde_inversed(std::span(a).first(2)), cx(-1)) < 1e-70);
  CHECK(dist(oracle::vandermonde_inversed(a), cx(-2)) < 1e-70);
}

TEST_CASE("vandermonde inversion identities on random tuples") {
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> u(-2.0, 2.0);
  for (int trial = 0; trial < 40; ++trial) {
    const std::size_t s = 1 + trial % 8;
    std::vector<mp::Complex> a, inv;
    for (std::size_t i = 0; i < s; ++i) {
      a.push_back(cx(u(rng), u(rng)));
      inv.push_back(mp::inverse(a.back()));
    }
    const auto v = oracle::vandermonde(a);
    const auto vb = oracle::vandermonde_inversed(a);
    const mp::Complex sign = cx((s / 2) % 2 == 0 ? 1 : -1);
    CHECK(rel(v, sign * vb) < 1e-60);
    mp::Complex prod = cx(1);
    for (const auto& z : a) prod *= z;
    const auto scale = mp::pow(prod, s - 1);
    CHECK(rel(v, scale * oracle::vandermonde_inversed(inv)) < 1e-60);
    CHECK(rel(v, scale * sign * oracle::vandermonde(inv)) < 1e-60);
  }
}

TEST_CASE("determinant by elimination") {
  std::vector<mp::Complex> m{cx(2), cx(1), cx(1), cx(3)};
  CHECK(dist(oracle::determinant(m, 2), cx(5)) < 1e-70);
  std::vector<mp::Complex> sing{cx(1), cx(2), cx(2), cx(4)};
  CHECK(oracle::determinant(sing, 2).is_zero());
}

TEST_CASE("prefactor calibration picks the plain sum") {
  CHECK(oracle::calibrate_prefactor() == oracle::Prefactor::WithoutFactorial);
  CHECK(oracle::kFrozenPrefactor == oracle::calibrate_prefactor());
}

TEST_CASE("closed forms against determinants") {
  const std::vector<mp::Complex> roots{cx(1), cx(2)};
  const std::vector<int> ones{1, 1};
  CHECK(dist(oracle::hadamard_via_roots(roots, ones, 0, 2, Side::Taylor), cx(0.125)) < 1e-70);
  CHECK(oracle::hadamard_via_roots(roots, ones, 0, 3, Side::Taylor).is_zero());

  const std::vector<mp::Complex> r13{cx(1), cx(3)};
  const std::vector<int> m21{2, 1};
  CHECK(dist(oracle::hadamard_via_roots(r13, m21, 0, 2, Side::Laurent), cx(8)) < 1e-70);

  const std::vector<mp::Complex> zs{cx(0.5, 1), cx(-2, 0.25), cx(3, -1), cx(-0.7, -0.7)};
  const std::vector<int> ms{1, 2, 1, 3};
  std::vector<RootMultiplicity> rm;
  for (std::size_t i = 0; i < zs.size(); ++i) rm.push_back({zs[i], ms[i]});
  const auto p = from_roots(rm, cx(1));
  for (Side side : {Side::Taylor, Side::Laurent}) {
    CoefficientStream s(p, side);
    for (int r = 1; r <= 4; ++r) {
      for (long k = 0; k <= 10; ++k) {
        CHECK(rel(hadamard_det(s, k, r).value.value(), oracle::hadamard_via_roots(zs, ms, k, r, side)) < 1e-40);
      }
    }
    CHECK(oracle::hadamard_via_roots(zs, ms, 3, 5, side).is_zero());
  }
}

TEST_CASE("error constants") {
  const std::vector<mp::Complex> roots{cx(1), cx(2)};
  const std::vector<int> ones{1, 1};
  const auto ec = oracle::theoretical_error_constant(roots, ones, 1, Side::Taylor, 0.4);
  CHECK(std::abs(ec.C - 3.6) < 1e-12);
  CHECK(std::abs(ec.q - 0.5) < 1e-15);
  CHECK(dist(ec.product, cx(1)) == 0.0);
  // exact top order: no error at all
  const auto top = oracle::theoretical_error_constant(roots, ones, 2, Side::Laurent, 0.4);
  CHECK(top.D == 0.0);
  CHECK(dist(top.product, cx(2)) == 0.0);

  const std::vector<mp::Complex> tie{cx(1), cx(-1), cx(3)};
  const std::vector<int> m3{1, 1, 1};
  try {
    oracle::theoretical_error_constant(tie, m3, 1, Side::Taylor, 0.4);
    FAIL("tie accepted");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::NoModulusGap);
  }
  CHECK_NOTHROW(oracle::theoretical_error_constant(tie, m3, 2, Side::Taylor, 0.4));

  const auto cor = oracle::corollary_error_constant(roots, ones, Side::Laurent);
  CHECK(std::abs(cor.C - 8.0) < 1e-12);  // |z_p| 4 (n - 1)
}

TEST_CASE("durand-kerner finds roots with multiplicity") {
  const std::vector<RootMultiplicity> rm{{cx(1), 2}, {cx(3), 1}, {cx(0.5, -2), 1}};
  const auto p = from_roots(rm, cx(2, 1));
  const auto approx = oracle::independent_roots(p);
  CHECK(approx.size() == 4);
  auto clusters = oracle::cluster_roots(approx);
  REQUIRE(clusters.size() == 3);
  int total = 0;
  for (const auto& c : clusters) {
    total += c.multiplicity;
    bool matched = false;
    for (const auto& t : rm) matched = matched || (dist(c.root, t.root) < 1e-8 && c.multiplicity == t.multiplicity);
    CHECK(matched);
  }
  CHECK(total == 4);
}

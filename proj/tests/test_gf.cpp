#include <map>
#include <random>
#include <set>

#include "doctest.h"
#include "kron/gf.hpp"

using namespace kron;

namespace {

MatrixFq random_matrix(std::mt19937& rng, int p, int r, int c) {
  MatrixFq m(p, r, c);
  std::uniform_int_distribution<int> d(0, p - 1);
  for (int i = 0; i < r; ++i)
    for (int j = 0; j < c; ++j) m.set(i, j, d(rng));
  return m;
}

// Count of monic irreducibles of degree n over F_p, by Mobius inversion of
// p^n = sum_{d | n} d * (number of degree-d irreducibles).
long long necklace_count(int p, int n) {
  auto mobius = [](int m) {
    int r = 1;
    for (int f = 2; f * f <= m; ++f)
      if (m % f == 0) {
        m /= f;
        if (m % f == 0) return 0;
        r = -r;
      }
    if (m > 1) r = -r;
    return r;
  };
  long long s = 0;
  for (int d = 1; d <= n; ++d)
    if (n % d == 0) {
      long long pw = 1;
      for (int i = 0; i < n / d; ++i) pw *= p;
      s += mobius(d) * pw;
    }
  return s / n;
}

}  // namespace

TEST_SUITE("gf") {

TEST_CASE("prime field inverses") {
  for (int p : {2, 3, 5, 7, 11})
    for (int x = 1; x < p; ++x) CHECK(fp_norm(x * fp_inv(x, p), p) == 1);
}

TEST_CASE("rank, kernel, and solve on random matrices") {
  std::mt19937 rng(12345);
  for (int p : {2, 3, 5, 7, 11}) {
    std::uniform_int_distribution<int> d(0, p - 1);
    for (int iter = 0; iter < 40; ++iter) {
      int r = iter % 5, c = (iter * 7 + 3) % 5;
      MatrixFq m = random_matrix(rng, p, r, c);
      MatrixFq k = m.kernel_basis();
      CHECK(m.rank() + k.rows() == c);
      CHECK(k.rank() == k.rows());
      CHECK(m.mul(k.transpose()).is_zero());
      std::vector<uint8_t> x0(c);
      for (auto& v : x0) v = uint8_t(d(rng));
      auto b = m.apply(x0);
      auto x = m.solve(b);
      REQUIRE(x.has_value());
      CHECK(m.apply(*x) == b);
    }
  }
}

TEST_CASE("solve reports inconsistent systems") {
  MatrixFq m = MatrixFq::from_rows(3, {{1, 1}, {1, 1}});
  CHECK(!m.solve({1, 0}).has_value());
  CHECK(m.solve({1, 1}).has_value());
}

TEST_CASE("matrix inverse") {
  std::mt19937 rng(99);
  for (int p : {2, 5}) {
    for (int n = 0; n <= 4; ++n) {
      MatrixFq m(p, n, n);
      do {
        m = random_matrix(rng, p, n, n);
      } while (m.rank() != n);
      auto inv = m.inverse();
      REQUIRE(inv.has_value());
      CHECK(m.mul(*inv) == MatrixFq::identity(p, n));
      CHECK(inv->mul(m) == MatrixFq::identity(p, n));
    }
    CHECK(!MatrixFq::from_rows(p, {{1, 1}, {1, 1}}).inverse().has_value());
  }
}

TEST_CASE("subspace enumeration matches the q-binomial count") {
  for (int p : {2, 3, 5})
    for (int n = 0; n <= 4; ++n)
      for (int k = 0; k <= n; ++k) {
        std::set<MatrixFq> seen;
        int bad = 0;
        for_each_subspace(p, n, k, [&](const MatrixFq& b) {
          if (b.rank() != k) ++bad;
          if (!(b.row_space_canonical() == b)) ++bad;
          seen.insert(b);
        });
        CHECK(bad == 0);
        CHECK(BigInt(seen.size()) == gaussian_binomial(n, k, p));
      }
}

TEST_CASE("polynomial division with remainder") {
  std::mt19937 rng(7);
  for (int p : {2, 3, 7}) {
    std::uniform_int_distribution<int> d(0, p - 1);
    for (int iter = 0; iter < 60; ++iter) {
      std::vector<int> fc(1 + iter % 7), gc(1 + iter % 4);
      for (auto& v : fc) v = d(rng);
      for (auto& v : gc) v = d(rng);
      PolyFq f = PolyFq::from_coeffs(p, fc), g = PolyFq::from_coeffs(p, gc);
      if (g.is_zero()) continue;
      auto [q, r] = f.divmod(g);
      CHECK(q.mul(g).add(r) == f);
      CHECK(r.degree() < g.degree());
    }
  }
}

TEST_CASE("irreducible counts match the necklace formula") {
  for (int p : {2, 3, 5, 7, 11})
    for (int n = 1; n <= (p <= 3 ? 5 : 3); ++n) {
      const auto& irr = monic_irreducibles(p, n);
      CHECK(static_cast<long long>(irr.size()) == necklace_count(p, n));
      for (size_t i = 0; i + 1 < irr.size(); ++i) CHECK(irr[i] < irr[i + 1]);
      if (n >= 2)
        for (const auto& f : irr)
          for (int x = 0; x < p; ++x) CHECK(f.eval(x) != 0);
    }
}

TEST_CASE("closed point listing and order") {
  auto pts = closed_points(3, 2);
  REQUIRE(pts.size() == 1 + 3 + 3);
  CHECK(pts[0].infinity);
  CHECK(pts[0].degree() == 1);
  for (size_t i = 0; i + 1 < pts.size(); ++i) CHECK(pts[i] < pts[i + 1]);
  CHECK(pts[1].minpoly == PolyFq::from_coeffs(3, {0, 1}));
  CHECK(pts[4].degree() == 2);
}

TEST_CASE("binary form factorization reconstructs a known product") {
  std::mt19937 rng(2024);
  for (int p : {2, 3, 5}) {
    auto pts = closed_points(p, 2);
    std::uniform_int_distribution<int> pick(0, int(pts.size()) - 1);
    for (int iter = 0; iter < 30; ++iter) {
      std::map<ClosedPoint, int> mult;
      int total = 0;
      while (total < 4) {
        const auto& z = pts[size_t(pick(rng))];
        mult[z] += 1;
        total += z.degree();
      }
      PolyFq f = PolyFq::constant(p, 1);
      int inf_m = 0;
      for (auto& [z, m] : mult) {
        if (z.infinity)
          inf_m += m;
        else
          f = f.mul(z.minpoly.pow(m));
      }
      int n = f.degree() + inf_m;
      std::vector<uint8_t> a(size_t(n) + 1, 0);
      for (int i = 0; i <= f.degree(); ++i) a[size_t(i)] = f.c[size_t(i)];
      auto fac = factor_binary_form(p, a);
      std::map<ClosedPoint, int> got(fac.begin(), fac.end());
      CHECK(got == mult);
    }
  }
}

TEST_CASE("binary form factorization discards the scalar unit") {
  // 2 t (t + 1) over F_3, total degree 2
  auto fac = factor_binary_form(3, {0, 2, 2});
  REQUIRE(fac.size() == 2);
  CHECK(fac[0].first.minpoly == PolyFq::from_coeffs(3, {0, 1}));
  CHECK(fac[1].first.minpoly == PolyFq::from_coeffs(3, {1, 1}));
  CHECK(fac[0].second == 1);
  CHECK(fac[1].second == 1);
}

}  // TEST_SUITE

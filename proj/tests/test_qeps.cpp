#include <random>

#include "doctest.h"
#include "kron/qeps.hpp"

using namespace kron;

TEST_SUITE("qeps") {

TEST_CASE("eps powers multiply additively") {
  std::mt19937 rng(5);
  std::uniform_int_distribution<int> d(-6, 6);
  for (int q : {2, 3, 5, 7, 11}) {
    CHECK(QEps::eps_pow(q, 1) * QEps::eps_pow(q, 1) == QEps(q, q));
    for (int iter = 0; iter < 30; ++iter) {
      int k = d(rng), m = d(rng);
      CHECK(QEps::eps_pow(q, k) * QEps::eps_pow(q, m) == QEps::eps_pow(q, k + m));
    }
    CHECK(QEps::eps_pow(q, -3) * QEps::eps_pow(q, 3) == QEps::one(q));
  }
}

TEST_CASE("field division") {
  std::mt19937 rng(17);
  std::uniform_int_distribution<int> d(-4, 4);
  for (int q : {2, 3, 7}) {
    for (int iter = 0; iter < 40; ++iter) {
      QEps x(q, Rational(d(rng), 3), Rational(d(rng)));
      QEps y(q, Rational(d(rng)), Rational(d(rng), 2));
      if (y.is_zero()) continue;
      CHECK((x / y) * y == x);
    }
  }
}

TEST_CASE("quantum integers against the closed form") {
  // [n] = eps^(1-n) (q^n - 1)/(q - 1)
  for (int q : {2, 3, 5, 7, 11}) {
    for (int n = 0; n <= 8; ++n) {
      Rational gi = 0;
      Rational qq(q);
      Rational pw = 1;
      for (int i = 0; i < n; ++i) {
        gi += pw;
        pw *= qq;
      }
      QEps expect = QEps(q, gi) * QEps::eps_pow(q, 1 - n);
      CHECK(quantum_int(q, n) == expect);
    }
    CHECK(quantum_int(q, 2) == QEps::eps_pow(q, 1) + QEps::eps_pow(q, -1));
    CHECK(quantum_int(q, -3) == -quantum_int(q, 3));
  }
}

TEST_CASE("quantum integer addition rule") {
  // [m + n] = eps^n [m] + eps^-m [n]
  for (int q : {2, 5})
    for (int m = 0; m <= 5; ++m)
      for (int n = 0; n <= 5; ++n)
        CHECK(quantum_int(q, m + n) ==
              QEps::eps_pow(q, n) * quantum_int(q, m) +
                  QEps::eps_pow(q, -m) * quantum_int(q, n));
}

TEST_CASE("quantum factorial") {
  for (int q : {2, 3}) {
    CHECK(quantum_factorial(q, 0) == QEps::one(q));
    CHECK(quantum_factorial(q, 3) ==
          quantum_int(q, 1) * quantum_int(q, 2) * quantum_int(q, 3));
  }
}

TEST_CASE("signed eps power detection") {
  for (int q : {2, 3, 5}) {
    for (long long k = -7; k <= 7; ++k) {
      auto r = QEps::eps_pow(q, k).as_signed_eps_power();
      REQUIRE(r.has_value());
      CHECK(r->first == 1);
      CHECK(r->second == k);
      auto rn = (-QEps::eps_pow(q, k)).as_signed_eps_power();
      REQUIRE(rn.has_value());
      CHECK(rn->first == -1);
      CHECK(rn->second == k);
    }
  }
  CHECK(!QEps(3, 2).as_signed_eps_power().has_value());
  CHECK(!QEps(3, 1, 1).as_signed_eps_power().has_value());
  CHECK(!QEps().as_signed_eps_power().has_value());
  // over q = 2 the rational number 2 is the square of eps
  auto two = QEps(2, 2).as_signed_eps_power();
  REQUIRE(two.has_value());
  CHECK(two->second == 2);
}

TEST_CASE("exact linear solve over the rationals and over Q(eps)") {
  std::vector<std::vector<Rational>> A = {{1, 2, 0}, {0, 1, 1}};
  auto x = field_solve<Rational>(A, {Rational(5), Rational(3)});
  REQUIRE(x.has_value());
  CHECK((*x)[0] + 2 * (*x)[1] == 5);
  CHECK((*x)[1] + (*x)[2] == 3);

  // inconsistent
  std::vector<std::vector<Rational>> B = {{1, 1}, {2, 2}};
  CHECK(!field_solve<Rational>(B, {Rational(1), Rational(3)}).has_value());

  int q = 3;
  QEps e = QEps::eps_pow(q, 1);
  std::vector<std::vector<QEps>> C = {{QEps::one(q), e}, {e, QEps(q, q)}};
  // rank 1 matrix; solvable rhs must be proportional to (1, eps)
  auto y = field_solve<QEps>(C, {e, QEps(q, q)});
  REQUIRE(y.has_value());
  CHECK((*y)[0] + e * (*y)[1] == e);
  CHECK(!field_solve<QEps>(C, {e, e}).has_value());
}

}  // TEST_SUITE

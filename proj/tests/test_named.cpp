#include <utility>
#include <vector>

#include "doctest.h"
#include "kron/named.hpp"

using namespace kron;

namespace {

QEps epow(int q, long long k) { return QEps::eps_pow(q, k); }

// the unique scalar s with lhs == s * rhs; fails the test if none exists
QEps proportionality(const HallElem& lhs, const HallElem& rhs) {
  REQUIRE(!hall_is_zero(rhs));
  REQUIRE(lhs.size() == rhs.size());
  QEps s;
  bool first = true;
  for (auto& [c, v] : rhs) {
    auto it = lhs.find(c);
    REQUIRE(it != lhs.end());
    QEps ratio = it->second / v;
    if (first) {
      s = ratio;
      first = false;
    } else {
      CHECK(ratio == s);
    }
  }
  return s;
}

bool regular_supported(const HallElem& f) {
  for (auto& [c, v] : f) {
    (void)v;
    if (!c.preproj.empty() || !c.preinj.empty()) return false;
  }
  return true;
}

}  // namespace

TEST_SUITE("named") {

TEST_CASE("dense orbit elements specialize to the simples and scale by the orbit codimension") {
  for (int q : {2, 3}) {
    HallAlgebra alg(q, 2, 2, TwistConvention::calibrated());
    NamedElements el(alg);

    CHECK(el.gamma(0) == el.theta(0));
    CHECK(el.mu(0) == el.theta(1));
    CHECK(el.theta(0) == hall_indicator(preinj_class(q, 1)));
    CHECK(el.theta(1) == hall_indicator(preproj_class(q, 1)));
    CHECK(el.theta_div(0, 2) == hall_indicator(preinj_class(q, 1, 2)));

    CHECK(el.gamma(1) ==
          hall_scale(epow(q, -4), hall_indicator(preinj_class(q, 2))));
    CHECK(el.mu(1) ==
          hall_scale(epow(q, -4), hall_indicator(preproj_class(q, 2))));

    for (int k = 0; k <= 4; ++k) {
      CHECK(hall_grade(el.gamma(k)) == Grade(k + 1, k));
      CHECK(hall_grade(el.mu(k)) == Grade(k, k + 1));
      // density certificate: the orbit of the target class is dense exactly
      // when its endomorphism algebra is one dimensional
      Rep gi = representative(preinj_class(q, k + 1));
      Rep mp = representative(preproj_class(q, k + 1));
      CHECK(hom_dim(gi, gi) == 1);
      CHECK(hom_dim(mp, mp) == 1);
    }

    CHECK_THROWS_AS(el.theta(2), std::invalid_argument);
    CHECK_THROWS_AS(el.gamma(-1), std::invalid_argument);
  }
}

TEST_CASE("rho is the scaled indicator of the periodic locus") {
  for (int q : {2, 3}) {
    HallAlgebra alg(q, 2, 2, TwistConvention::calibrated());
    NamedElements el(alg);

    CHECK(el.rho(0) == hall_unit(q));

    HallElem r1 = el.rho(1);
    // over F_q the periodic classes at (1,1) are the q+1 points of the
    // projective line; the split class carries no coefficient
    CHECK(r1.size() == size_t(q + 1));
    CHECK(hall_grade(r1) == Grade(1, 1));
    for (auto& [c, v] : r1) {
      CHECK(c.regular.size() == 1);
      CHECK(v == epow(q, -2));
    }
    IsoClass split = direct_sum(preproj_class(q, 1), preinj_class(q, 1));
    CHECK(r1.find(split) == r1.end());
  }

  // support count at (2,2) over F_2: one partition (2) or (1,1) at each of
  // the 3 rational points, the quadratic point, and 3 split point pairs
  HallAlgebra alg2(2, 2, 2, TwistConvention::calibrated());
  HallElem r2 = NamedElements(alg2).rho(2);
  CHECK(r2.size() == 10);
  for (auto& [c, v] : r2) {
    CHECK(c.preproj.empty());
    CHECK(c.preinj.empty());
    CHECK(v == epow(2, -8));
  }
}

TEST_CASE("phi elements are periodic and equal the one-sided periodic restriction") {
  for (int q : {2, 3}) {
    const int kmax = 4;
    HallAlgebra alg(q, kmax, kmax, TwistConvention::calibrated());
    NamedElements el(alg);
    for (int k = 1; k <= kmax; ++k) {
      HallElem pk = el.phi(k);
      CHECK(hall_grade(pk) == Grade(k, k));
      CHECK(regular_supported(pk));
      HallElem one_sided = alg.product(el.gamma(k - 1), el.theta(1));
      CHECK(pk == restrict_regular(one_sided));
      // the discarded term vanishes on the periodic locus
      HallElem other = alg.product(el.theta(1), el.gamma(k - 1));
      CHECK(hall_is_zero(restrict_regular(other)));
    }
  }
}

TEST_CASE("the recursion elements coincide with the periodic indicators") {
  for (int q : {2, 3}) {
    const int kmax = 4;
    HallAlgebra alg(q, kmax, kmax, TwistConvention::calibrated());
    NamedElements el(alg);
    CHECK(el.ptilde(0) == hall_unit(q));
    for (int k = 1; k <= kmax; ++k) CHECK(el.ptilde(k) == el.rho(k));
  }
}

TEST_CASE("eta solves the exponential relation between the periodic families") {
  for (int q : {2, 3}) {
    const int kmax = 4;
    HallAlgebra alg(q, kmax, kmax, TwistConvention::calibrated());
    NamedElements el(alg);

    CHECK(el.eta(1) == el.rho(1));
    for (int k = 1; k <= kmax; ++k) {
      CHECK(hall_grade(el.eta(k)) == Grade(k, k));
      CHECK(regular_supported(el.eta(k)));
    }

    // independent oracle: expand exp(sum_r eta_r u^r / [r]) through degree 4
    // and compare coefficients with rho_k term by term
    auto frac = [&](long long n, long long d) {
      return QEps(q, Rational(n) / Rational(d));
    };
    auto qi = [&](int n) { return quantum_int(q, n); };
    HallElem e1 = el.eta(1), e2 = el.eta(2), e3;

    CHECK(el.rho(1) == e1);
    HallElem deg2 = hall_add(hall_scale(QEps::one(q) / qi(2), e2),
                             hall_scale(frac(1, 2), alg.product(e1, e1)));
    CHECK(el.rho(2) == deg2);

    e3 = el.eta(3);
    HallElem deg3 = hall_scale(QEps::one(q) / qi(3), e3);
    deg3 = hall_add(deg3, hall_scale(QEps::one(q) / qi(2), alg.product(e1, e2)));
    deg3 = hall_add(deg3, hall_scale(frac(1, 6), alg.product(e1, alg.product(e1, e1))));
    CHECK(el.rho(3) == deg3);

    if (kmax >= 4) {
      HallElem e4 = el.eta(4);
      HallElem deg4 = hall_scale(QEps::one(q) / qi(4), e4);
      deg4 = hall_add(deg4, hall_scale(QEps::one(q) / qi(3), alg.product(e1, e3)));
      deg4 = hall_add(deg4,
                      hall_scale(frac(1, 2) / (qi(2) * qi(2)), alg.product(e2, e2)));
      deg4 = hall_add(deg4, hall_scale(frac(1, 2) / qi(2),
                                       alg.product(alg.product(e1, e1), e2)));
      deg4 = hall_add(deg4, hall_scale(frac(1, 24),
                                       alg.product(alg.product(e1, e1),
                                                   alg.product(e1, e1))));
      CHECK(el.rho(4) == deg4);
    }
  }
}

TEST_CASE("schur elements satisfy the Kostka expansion of periodic products") {
  for (int q : {2, 3}) {
    const int nmax = q == 2 ? 4 : 3;
    HallAlgebra alg(q, nmax, nmax, TwistConvention::calibrated());
    NamedElements el(alg);

    CHECK(el.schur(Partition{}) == hall_unit(q));
    for (int n = 1; n <= nmax; ++n) CHECK(el.schur(Partition{n}) == el.rho(n));
    CHECK(el.schur(Partition{1, 1}) ==
          hall_sub(alg.product(el.rho(1), el.rho(1)), el.rho(2)));
    CHECK_THROWS_AS(el.schur(Partition{1, 2}), std::invalid_argument);

    for (int n = 1; n <= nmax; ++n)
      for (auto& lam : partitions_of(n)) {
        HallElem prod = hall_unit(q);
        for (int part : lam) prod = alg.product(prod, el.rho(part));
        HallElem expansion;
        for (auto& mu : partitions_of(n)) {
          long long km = kostka_number(mu, lam);
          if (km == 0) continue;
          expansion = hall_add(
              expansion, hall_scale(QEps(q, Rational(km)), el.schur(mu)));
        }
        CHECK(prod == expansion);
      }
  }
}

TEST_CASE("flag monomial restrictions equal the periodic products exactly") {
  // the restriction of theta0^(l1) theta1^(l1) ... theta0^(lp) theta1^(lp)
  // to the periodic locus could a priori differ from rho_{l1} * ... * rho_{lp}
  // by an eps-power unit; under the calibrated convention the unit is 1 for
  // every partition (frozen from a scan over n <= 4, q in {2,3})
  for (int q : {2, 3}) {
    const int nmax = q == 2 ? 4 : 3;
    HallAlgebra alg(q, nmax, nmax, TwistConvention::calibrated());
    NamedElements el(alg);
    for (int n = 1; n <= nmax; ++n)
      for (auto& lam : partitions_of(n)) {
        HallElem mono = hall_unit(q);
        for (int part : lam) {
          mono = alg.product(mono, el.theta_div(0, part));
          mono = alg.product(mono, el.theta_div(1, part));
        }
        HallElem lhs = restrict_regular(mono);
        HallElem rhs = hall_unit(q);
        for (int part : lam) rhs = alg.product(rhs, el.rho(part));
        QEps unit = proportionality(lhs, rhs);
        CHECK(unit == QEps::one(q));
      }
  }
}

TEST_CASE("named element serialization carries tag, field, convention, and coefficients") {
  HallAlgebra alg(2, 1, 1, TwistConvention::calibrated());
  NamedElements el(alg);
  NamedElement e{"rho(1)", 2, alg.convention().hash(), el.rho(1)};
  Json j = named_element_to_json(e);
  CHECK(j["tag"] == "rho(1)");
  CHECK(j["q"] == 2);
  CHECK(j["convention"].get<std::string>().size() == 16);
  CHECK(j["coefficients"].size() == 3);
  for (auto& pair : j["coefficients"]) {
    IsoClass c = iso_class_from_json(pair[0]);
    CHECK(c.dim() == std::make_pair(1, 1));
    CHECK(qeps_from_string_exact(2, pair[1].get<std::string>()) == epow(2, -2));
  }
}

}  // TEST_SUITE

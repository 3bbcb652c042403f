#include <algorithm>
#include <string>
#include <vector>

#include "doctest.h"
#include "kron/verify.hpp"

using namespace kron;

namespace {

// one shared context so the structure tables are built once per field
VerifyContext& ctx() {
  static VerifyContext c;
  return c;
}

void expect_pass(const CheckReport& r) {
  INFO(r.to_string());
  CHECK(r.pass);
  CHECK(r.discrepancy == "0");
}

}  // namespace

TEST_SUITE("verify") {

TEST_CASE("report rendering and json schema") {
  CheckReport r = check_q_number_identity(3, 2);
  CHECK(r.pass);
  CHECK(r.to_string() == "q-number-identity(m=3) q=2: pass");
  Json j = check_report_to_json(r);
  CHECK(j.size() == 6);
  for (const char* key :
       {"id", "params", "q", "convention", "pass", "discrepancy"})
    CHECK(j.contains(key));
  CHECK(j["convention"].get<std::string>().size() == 16);
  CHECK(j["pass"].get<bool>());
  CHECK(j["discrepancy"].get<std::string>() == "0");
  // identical inputs give byte-identical serialized reports
  CHECK(check_report_to_json(check_q_number_identity(3, 2)).dump() ==
        j.dump());
  CHECK(hall_elem_to_string(HallElem{}) == "0");
}

TEST_CASE("recorded constants") {
  CHECK(recorded_cross_unit(2) == QEps::one(2));
  CHECK(recorded_cross_unit(3) == QEps::one(3));
  CHECK(recorded_eta_shift_sign(0) == 1);
  CHECK(recorded_eta_shift_sign(1) == -1);
}

TEST_CASE("context reserve contract") {
  VerifyContext c;
  c.reserve(2, 3, 3);
  c.algebra(2);
  CHECK_THROWS_AS(c.reserve(2, 6, 6), std::logic_error);
}

TEST_CASE("serre relation") {
  expect_pass(check_serre(ctx(), 0, 2));
  expect_pass(check_serre(ctx(), 1, 2));
  expect_pass(check_serre(ctx(), 0, 3));
}

TEST_CASE("rho recursion") {
  for (int n = 1; n <= 3; ++n) expect_pass(check_rho_recursion(ctx(), n, 2));
  expect_pass(check_rho_recursion(ctx(), 2, 3));
}

TEST_CASE("generating series") {
  expect_pass(check_generating_series(ctx(), 2, 2));
}

TEST_CASE("cross commutator") {
  for (auto [k, l] : {std::pair{0, 0}, {1, 0}, {0, 1}, {1, 1}})
    expect_pass(check_cross_commutator(ctx(), k, l, 2));
  expect_pass(check_cross_commutator(ctx(), 1, 1, 3));
}

TEST_CASE("straightening") {
  for (auto [r, s] : {std::pair{1, 1}, {2, 1}, {1, 2}})
    expect_pass(check_straightening(ctx(), r, s, 2));
}

TEST_CASE("drinfeld relations") {
  expect_pass(check_drinfeld(ctx(), 1, 1, 0, 2));
  expect_pass(check_drinfeld(ctx(), 1, 1, 1, 2));
  expect_pass(check_drinfeld(ctx(), 2, 1, 1, 2));
  expect_pass(check_drinfeld(ctx(), 3, 0, 0, 2));
  expect_pass(check_drinfeld(ctx(), 3, 1, 0, 2));
  expect_pass(check_drinfeld(ctx(), 4, 1, 1, 2));
  expect_pass(check_drinfeld(ctx(), 5, 0, 1, 2));
  expect_pass(check_drinfeld(ctx(), 5, 1, 1, 2));
  CHECK_THROWS_AS(check_drinfeld(ctx(), 6, 0, 0, 2), std::invalid_argument);
}

TEST_CASE("q-number identity") {
  for (int q : {2, 3})
    for (int m = 1; m <= 8; ++m) expect_pass(check_q_number_identity(m, q));
}

TEST_CASE("kostka expansion") {
  expect_pass(check_kostka(ctx(), {1}, 2));
  expect_pass(check_kostka(ctx(), {2}, 2));
  expect_pass(check_kostka(ctx(), {1, 1}, 2));
  expect_pass(check_kostka(ctx(), {2, 1}, 2));
}

TEST_CASE("rho coproduct") {
  expect_pass(check_rho_coproduct(ctx(), 1, 2));
  expect_pass(check_rho_coproduct(ctx(), 2, 2));
}

TEST_CASE("regular projection") {
  expect_pass(check_regular_projection(ctx(), 1, 2));
  expect_pass(check_regular_projection(ctx(), 2, 2));
}

TEST_CASE("regular expressibility") {
  expect_pass(check_regular_expressibility(ctx(), 1, 2));
  expect_pass(check_regular_expressibility(ctx(), 2, 2));
}

TEST_CASE("transpose invariance") {
  for (int k = 1; k <= 3; ++k) expect_pass(check_transpose_invariance(k, 2));
  expect_pass(check_transpose_invariance(2, 3));
}

TEST_CASE("line submodule count") {
  for (int n = 1; n <= 3; ++n) expect_pass(check_line_submodule_count(n, 2));
  expect_pass(check_line_submodule_count(2, 3));
}

TEST_CASE("generic labels") {
  IsoClass c = make_class(2, {{1, 2}}, {{3, 1}}, {});
  GenericLabel g = generic_label(c);
  CHECK(g.preproj == std::vector<std::pair<int, int>>{{1, 2}});
  CHECK(g.preinj == std::vector<std::pair<int, int>>{{3, 1}});
  CHECK(g.to_string() == "P1^2+I3");
  CHECK(generic_label(c) == g);
}

TEST_CASE("interpolation recovers exact laurent coefficients") {
  std::vector<int> qs = {2, 3, 5, 7};
  auto rho1 = [](NamedElements& el) { return el.rho(1); };
  InterpolationReport ir = interpolate_constants(ctx(), rho1, qs, 2);
  REQUIRE(ir.ok);
  REQUIRE(ir.fits.size() == 1);  // one generic pattern: a degree-1 point
  const LaurentFit& fit = ir.fits.begin()->second;
  CHECK(fit.integral());
  REQUIRE(fit.coeffs.size() == 1);
  CHECK(fit.coeffs.count(-2) == 1);
  CHECK(fit.coeffs.at(-2) == 1);  // rho(1) carries eps^-2 on every class

  expect_pass(check_interpolation(
      ctx(), "gamma0*mu0",
      [](NamedElements& el) {
        return el.algebra().product(el.gamma(0), el.mu(0));
      },
      qs, 2, true));

  CheckReport under = check_interpolation(ctx(), "rho1", rho1, {2, 3}, 2, true);
  CHECK(!under.pass);
  CHECK(under.discrepancy.find("underdetermined") != std::string::npos);
}

TEST_CASE("suite is deterministic and fully green") {
  SuiteOptions opt;
  opt.qs = {2};
  std::vector<CheckReport> reports = run_suite(ctx(), opt);
  REQUIRE(!reports.empty());
  std::vector<std::string> ids = suite_check_ids();
  for (const CheckReport& r : reports) {
    expect_pass(r);
    CHECK(std::find(ids.begin(), ids.end(), r.id) != ids.end());
  }
  // sorted by (id, params, q)
  for (size_t i = 1; i < reports.size(); ++i) {
    auto key = [](const CheckReport& r) {
      return std::tuple(r.id, r.params, r.q);
    };
    CHECK(key(reports[i - 1]) < key(reports[i]));
  }
  // every check family appears even in the quick grid
  std::vector<std::string> seen;
  for (const CheckReport& r : reports) seen.push_back(r.id);
  for (const std::string& id : ids)
    CHECK(std::find(seen.begin(), seen.end(), id) != seen.end());
  // a second run serializes identically
  std::vector<CheckReport> again = run_suite(ctx(), opt);
  REQUIRE(again.size() == reports.size());
  for (size_t i = 0; i < reports.size(); ++i)
    CHECK(check_report_to_json(reports[i]).dump() ==
          check_report_to_json(again[i]).dump());
}

TEST_CASE("perturbed convention differs and is detected") {
  TwistConvention p = perturbed_convention();
  CHECK(!(p == TwistConvention::calibrated()));
  CHECK(p.hash() != TwistConvention::calibrated().hash());
  CHECK(twist_sensitive("serre"));
  CHECK(twist_sensitive("cross-commutator"));
  CHECK(!twist_sensitive("q-number-identity"));
  CHECK(!twist_sensitive("transpose-invariance"));
  for (const std::string& id : suite_check_ids())
    (void)twist_sensitive(id);  // total on every suite id
}

TEST_CASE("negative controls behave as documented") {
  std::vector<ControlResult> controls = run_negative_controls();
  REQUIRE(!controls.empty());
  // every suite family is represented
  std::vector<std::string> ids = suite_check_ids();
  for (const std::string& id : ids) {
    bool found = false;
    for (const ControlResult& c : controls) found |= c.report.id == id;
    INFO(id);
    CHECK(found);
  }
  for (const ControlResult& c : controls) {
    INFO(c.report.to_string());
    INFO("expect_fail=", c.expect_fail);
    CHECK(c.ok);
  }
}

}  // TEST_SUITE

#include "kron/json_io.hpp"

#include <stdexcept>

namespace kron {

namespace {

std::string rational_str(const Rational& r) { return r.str(); }

Rational rational_parse(const std::string& s) { return Rational(s); }

}  // namespace

std::string qeps_to_string_exact(const QEps& x) {
  if (x.is_zero()) return "0";
  if (x.b() == 0) return rational_str(x.a());
  return rational_str(x.a()) + "|" + rational_str(x.b());
}

QEps qeps_from_string_exact(int q, const std::string& s) {
  auto bar = s.find('|');
  if (bar == std::string::npos) return QEps(q, rational_parse(s));
  return QEps(q, rational_parse(s.substr(0, bar)), rational_parse(s.substr(bar + 1)));
}

Json closed_point_to_json(const ClosedPoint& z) {
  if (z.infinity) return Json("inf");
  Json arr = Json::array();
  for (auto c : z.minpoly.c) arr.push_back(int(c));
  return arr;
}

ClosedPoint closed_point_from_json(int q, const Json& j) {
  if (j.is_string()) {
    if (j.get<std::string>() != "inf") throw std::invalid_argument("bad point label");
    return ClosedPoint::inf(q);
  }
  if (!j.is_array() || j.size() < 2) throw std::invalid_argument("bad point coefficients");
  std::vector<int> c;
  for (const auto& v : j) {
    int x = v.get<int>();
    if (x < 0 || x >= q) throw std::invalid_argument("point coefficient out of range");
    c.push_back(x);
  }
  PolyFq f = PolyFq::from_coeffs(q, c);
  if (!f.is_monic()) throw std::invalid_argument("point polynomial not monic");
  return ClosedPoint::finite(f);
}

Json iso_class_to_json(const IsoClass& c) {
  Json j;
  j["q"] = c.q;
  Json pp = Json::array(), pi = Json::array(), reg = Json::array();
  for (auto& [k, m] : c.preproj) pp.push_back(Json::array({k, m}));
  for (auto& [k, m] : c.preinj) pi.push_back(Json::array({k, m}));
  for (auto& rb : c.regular) {
    Json e;
    e["point"] = closed_point_to_json(rb.point);
    e["partition"] = rb.lambda;
    reg.push_back(e);
  }
  j["preproj"] = pp;
  j["preinj"] = pi;
  j["regular"] = reg;
  return j;
}

IsoClass iso_class_from_json(const Json& j) {
  int q = j.at("q").get<int>();
  std::vector<std::pair<int, int>> pp, pi;
  std::vector<RegBlock> reg;
  for (const auto& e : j.at("preproj")) pp.emplace_back(e.at(0).get<int>(), e.at(1).get<int>());
  for (const auto& e : j.at("preinj")) pi.emplace_back(e.at(0).get<int>(), e.at(1).get<int>());
  for (const auto& e : j.at("regular")) {
    RegBlock rb{closed_point_from_json(q, e.at("point")), e.at("partition").get<Partition>()};
    reg.push_back(std::move(rb));
  }
  return make_class(q, std::move(pp), std::move(pi), std::move(reg));
}

}  // namespace kron

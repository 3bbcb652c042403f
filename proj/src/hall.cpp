#include "kron/hall.hpp"

#include <algorithm>
#include <cassert>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <memory>
#include <sstream>

#include "kron/json_io.hpp"

#ifdef KRON_HAVE_OPENMP
#include <omp.h>
#endif

namespace kron {

// ---------- TwistConvention ----------

std::string TwistConvention::canonical_string() const {
  std::ostringstream os;
  os << (order == FactorOrder::QuotFirst ? "quot" : "sub");
  os << ";t=" << t[0][0] << "," << t[0][1] << "," << t[1][0] << "," << t[1][1];
  os << ";u=" << u[0][0] << "," << u[0][1] << "," << u[1][0] << "," << u[1][1];
  os << ";dp=" << dp;
  return os.str();
}

std::uint64_t TwistConvention::hash() const {
  std::uint64_t h = 1469598103934665603ull;
  for (char c : canonical_string()) {
    h ^= std::uint64_t(static_cast<unsigned char>(c));
    h *= 1099511628211ull;
  }
  return h;
}

bool TwistConvention::operator==(const TwistConvention& o) const {
  return canonical_string() == o.canonical_string();
}

TwistConvention TwistConvention::calibrated() {
  TwistConvention c;
  c.order = FactorOrder::QuotFirst;
  int tv[2][2] = {{-1, -2}, {0, -1}};
  int uv[2][2] = {{1, -2}, {0, 1}};
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j) {
      c.t[i][j] = tv[i][j];
      c.u[i][j] = uv[i][j];
    }
  c.dp = 0;
  return c;
}

// ---------- HallElem helpers ----------

HallElem hall_unit(int q) { return {{zero_class(q), QEps::one(q)}}; }

HallElem hall_indicator(const IsoClass& c) { return {{c, QEps::one(c.q)}}; }

HallElem hall_scale(const QEps& s, const HallElem& f) {
  HallElem out;
  if (s.is_zero()) return out;
  for (auto& [c, v] : f) {
    QEps w = s * v;
    if (!w.is_zero()) out.emplace(c, std::move(w));
  }
  return out;
}

HallElem hall_add(const HallElem& f, const HallElem& g) {
  HallElem out = f;
  for (auto& [c, v] : g) {
    auto it = out.find(c);
    if (it == out.end()) {
      out.emplace(c, v);
    } else {
      it->second += v;
      if (it->second.is_zero()) out.erase(it);
    }
  }
  return out;
}

HallElem hall_sub(const HallElem& f, const HallElem& g) {
  HallElem out = f;
  for (auto& [c, v] : g) {
    if (v.is_zero()) continue;
    auto it = out.find(c);
    if (it == out.end()) {
      out.emplace(c, -v);
    } else {
      it->second -= v;
      if (it->second.is_zero()) out.erase(it);
    }
  }
  return out;
}

int hall_q(const HallElem& f) {
  for (auto& [c, v] : f)
    if (!v.is_zero()) return c.q;
  return 0;
}

bool hall_is_zero(const HallElem& f) {
  for (auto& [c, v] : f)
    if (!v.is_zero()) return false;
  return true;
}

void hall_prune(HallElem& f) {
  for (auto it = f.begin(); it != f.end();)
    it = it->second.is_zero() ? f.erase(it) : std::next(it);
}

std::map<Grade, HallElem> hall_grades(const HallElem& f) {
  std::map<Grade, HallElem> out;
  for (auto& [c, v] : f)
    if (!v.is_zero()) out[c.dim()].emplace(c, v);
  return out;
}

Grade hall_grade(const HallElem& f) {
  auto parts = hall_grades(f);
  if (parts.empty()) return {0, 0};
  if (parts.size() > 1) throw std::invalid_argument("element is not homogeneous");
  return parts.begin()->first;
}

// ---------- StructureTables ----------

StructureTables::StructureTables(int q, int dmax0, int dmax1)
    : table_(q, dmax0, dmax1) {}

StructureRow StructureTables::compute_row(int z_index, int c0, int c1) const {
  StructureRow row;
  const Rep& Z = table_.rep_of(z_index);
  if (c0 > Z.d0 || c1 > Z.d1) return row;
  for_each_stable_sub(Z, c0, c1, [&](const MatrixFq& B0, const MatrixFq& B1) {
    int s = table_.classify_index(sub_rep(Z, B0, B1));
    int t = table_.classify_index(quot_rep(Z, B0, B1));
    ++row[{s, t}];
  });
  return row;
}

const StructureRow& StructureTables::row(int z_index, int c0, int c1) {
  std::pair<int, std::pair<int, int>> key{z_index, {c0, c1}};
  {
    std::lock_guard<std::mutex> lk(mu_);
    auto it = rows_.find(key);
    if (it != rows_.end()) return it->second;
  }
  StructureRow r = compute_row(z_index, c0, c1);
  std::lock_guard<std::mutex> lk(mu_);
  return rows_.emplace(key, std::move(r)).first->second;
}

void StructureTables::ensure_block(int D0, int D1, int c0, int c1) {
  std::vector<int> todo;
  {
    std::lock_guard<std::mutex> lk(mu_);
    for (int z : table_.indices_at(D0, D1))
      if (!rows_.count({z, {c0, c1}})) todo.push_back(z);
  }
  if (todo.empty()) return;
  std::vector<StructureRow> fresh(todo.size());
#ifdef KRON_HAVE_OPENMP
  if (!serial_) {
#pragma omp parallel for schedule(dynamic)
    for (long long i = 0; i < (long long)todo.size(); ++i)
      fresh[size_t(i)] = compute_row(todo[size_t(i)], c0, c1);
  } else
#endif
  {
    for (size_t i = 0; i < todo.size(); ++i)
      fresh[i] = compute_row(todo[i], c0, c1);
  }
  std::lock_guard<std::mutex> lk(mu_);
  for (size_t i = 0; i < todo.size(); ++i)
    rows_.emplace(std::make_pair(todo[i], std::make_pair(c0, c1)), std::move(fresh[i]));
}

void StructureTables::adopt_row(int z_index, int c0, int c1, StructureRow row) {
  std::lock_guard<std::mutex> lk(mu_);
  rows_.emplace(std::make_pair(z_index, std::make_pair(c0, c1)), std::move(row));
}

// ---------- HallAlgebra ----------

HallAlgebra::HallAlgebra(int q, int dmax0, int dmax1, const TwistConvention& conv,
                         std::string cache_dir)
    : conv_(conv), tables_(q, dmax0, dmax1), cache_dir_(std::move(cache_dir)) {}

HallElem HallAlgebra::product(const HallElem& f, const HallElem& g) {
  const ClassTable& tab = tables_.table();
  HallElem out;
  for (auto& [b, fb] : hall_grades(f)) {
    for (auto& [c, gc] : hall_grades(g)) {
      int D0 = b.first + c.first, D1 = b.second + c.second;
      if (D0 > tab.dmax0() || D1 > tab.dmax1())
        throw std::out_of_range("product grade exceeds the table box");
      Grade sub = conv_.order == FactorOrder::QuotFirst ? c : b;
      if (!cache_dir_.empty()) load_cache(D0, D1);
      tables_.ensure_block(D0, D1, sub.first, sub.second);
      QEps tw = QEps::eps_pow(q(), conv_.t_exp(b, c));
      for (int z : tab.indices_at(D0, D1)) {
        QEps acc;
        const StructureRow& row = tables_.row(z, sub.first, sub.second);
        for (auto& [st, n] : row) {
          const IsoClass& S = tab.at(st.first);
          const IsoClass& T = tab.at(st.second);
          const HallElem& on_sub = conv_.order == FactorOrder::QuotFirst ? gc : fb;
          const HallElem& on_quot = conv_.order == FactorOrder::QuotFirst ? fb : gc;
          auto is = on_sub.find(S);
          if (is == on_sub.end()) continue;
          auto iq = on_quot.find(T);
          if (iq == on_quot.end()) continue;
          acc += is->second * iq->second * QEps(q(), n);
        }
        if (!acc.is_zero()) {
          auto [it, inserted] = out.emplace(tab.at(z), tw * acc);
          if (!inserted) it->second += tw * acc;
        }
      }
      if (!cache_dir_.empty())
        if (cached_blocks_.insert({{D0, D1}, sub}).second) store_cache(D0, D1);
    }
  }
  hall_prune(out);
  return out;
}

HallElem HallAlgebra::power(const HallElem& f, int k) {
  HallElem out = hall_unit(q());
  for (int i = 0; i < k; ++i) out = product(out, f);
  return out;
}

HallElem HallAlgebra::divided_power(const HallElem& f, int k) {
  HallElem out = power(f, k);
  QEps s = QEps::eps_pow(q(), (long long)conv_.dp * k * (k - 1) / 2) /
           quantum_factorial(q(), k);
  return hall_scale(s, out);
}

std::map<std::pair<IsoClass, IsoClass>, QEps> HallAlgebra::coproduct(
    const HallElem& f, Grade b, Grade c) {
  const ClassTable& tab = tables_.table();
  std::map<std::pair<IsoClass, IsoClass>, QEps> out;
  int D0 = b.first + c.first, D1 = b.second + c.second;
  if (D0 > tab.dmax0() || D1 > tab.dmax1())
    throw std::out_of_range("coproduct grade exceeds the table box");
  // the enumerated subspace always carries the sub piece; the factor order
  // only decides which tensor slot it lands in
  Grade sub = conv_.order == FactorOrder::QuotFirst ? c : b;
  Grade quot{D0 - sub.first, D1 - sub.second};
  if (!cache_dir_.empty()) load_cache(D0, D1);
  tables_.ensure_block(D0, D1, sub.first, sub.second);
  QEps tw = QEps::eps_pow(q(), conv_.u_exp(b, c));
  // number of vector-space lifts: q^(quot0*sub0 + quot1*sub1)
  QEps lifts = QEps::eps_pow(
      q(), 2LL * (quot.first * sub.first + quot.second * sub.second));
  for (int z : tab.indices_at(D0, D1)) {
    auto fz = f.find(tab.at(z));
    if (fz == f.end() || fz->second.is_zero()) continue;
    const StructureRow& row = tables_.row(z, sub.first, sub.second);
    QEps aut_z(q(), Rational(aut_order(tab.at(z))));
    for (auto& [st, n] : row) {
      const IsoClass& S = tab.at(st.first);
      const IsoClass& T = tab.at(st.second);
      QEps coeff = tw * QEps(q(), n) * QEps(q(), Rational(aut_order(S))) *
                   QEps(q(), Rational(aut_order(T))) * lifts / aut_z * fz->second;
      if (coeff.is_zero()) continue;
      auto key = conv_.order == FactorOrder::QuotFirst ? std::make_pair(T, S)
                                                       : std::make_pair(S, T);
      auto [it, inserted] = out.emplace(key, coeff);
      if (!inserted) {
        it->second += coeff;
        if (it->second.is_zero()) out.erase(it);
      }
    }
  }
  if (!cache_dir_.empty())
    if (cached_blocks_.insert({{D0, D1}, sub}).second) store_cache(D0, D1);
  return out;
}

QEps HallAlgebra::inner(const HallElem& f, const HallElem& g) const {
  QEps total;
  for (auto& [c, fv] : f) {
    auto it = g.find(c);
    if (it == g.end()) continue;
    auto [d0, d1] = c.dim();
    QEps weight = QEps::eps_pow(c.q, 2LL * (d0 * (long long)d0 + d1 * (long long)d1)) /
                  QEps(c.q, Rational(aut_order(c)));
    total += weight * fv * it->second;
  }
  return total;
}

HallElem HallAlgebra::minus_product(const HallElem& f, const HallElem& g) {
  // classes of the opposite orientation are stored with their grading
  // reversed, so the same convolution applies verbatim
  return product(f, g);
}

HallElem HallAlgebra::sigma1(const HallElem& f_minus) {
  int p = q();
  // output dimensions: stored (a, b) represents opposite-orientation dims
  // (b, a); the reflection lands at (b, 2b - a)
  int need0 = 1, need1 = 1;
  for (auto& [c, v] : f_minus) {
    if (v.is_zero()) continue;
    auto [a, b] = c.dim();
    for (auto& pr : c.preinj)
      if (pr.first == 1)
        throw std::domain_error(
            "sigma1: support violates the joint-kernel condition");
    need0 = std::max(need0, b);
    need1 = std::max(need1, 2 * b - a);
  }
  ClassTable out_tab(p, need0, need1);
  HallElem out;
  for (auto& [c, v] : f_minus) {
    if (v.is_zero()) continue;
    auto [a, b] = c.dim();
    auto refl = reflect_source(representative(c));
    if (!refl) throw std::domain_error("sigma1: reflection undefined on support");
    QEps scale = QEps::eps_pow(
        p, (long long)(2 * b - a) * (2 * b - a) - (long long)a * a);
    const IsoClass& image = out_tab.classify(*refl);
    auto [it, inserted] = out.emplace(image, scale * v);
    if (!inserted) it->second += scale * v;
  }
  hall_prune(out);
  return out;
}

HallElem restrict_regular(const HallElem& f) {
  HallElem out;
  for (auto& [c, v] : f)
    if (c.preproj.empty() && c.preinj.empty() && !v.is_zero()) out.emplace(c, v);
  return out;
}

// ---------- persistent structure cache ----------

namespace {

std::string cache_file_name(const std::string& dir, int q, int D0, int D1,
                            std::uint64_t hash) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "structure_q%d_d%dx%d_%016llx.json", q, D0, D1,
                (unsigned long long)hash);
  return dir + "/" + buf;
}

}  // namespace

void HallAlgebra::load_cache(int D0, int D1) {
  static const Grade kLoaded{-1, -1};
  if (cached_blocks_.count({{D0, D1}, kLoaded})) return;
  cached_blocks_.insert({{D0, D1}, kLoaded});
  std::string path = cache_file_name(cache_dir_, q(), D0, D1, conv_.hash());
  std::ifstream in(path);
  if (!in) return;
  Json j;
  in >> j;
  if (j.at("convention").get<std::string>() != conv_.canonical_string())
    throw std::runtime_error("structure cache convention mismatch: " + path);
  const ClassTable& tab = tables_.table();
  std::vector<int> idx;
  for (const auto& cl : j.at("classes")) {
    int i = tab.index_of(iso_class_from_json(cl));
    if (i < 0) throw std::runtime_error("structure cache names unknown class: " + path);
    idx.push_back(i);
  }
  for (const auto& [ckey, triples] : j.at("blocks").items()) {
    int c0 = 0, c1 = 0;
    if (std::sscanf(ckey.c_str(), "%d,%d", &c0, &c1) != 2)
      throw std::runtime_error("structure cache bad block key: " + path);
    Grade bgrade{D0 - c0, D1 - c1}, cgrade{c0, c1};
    Grade fb = conv_.order == FactorOrder::QuotFirst ? bgrade : cgrade;
    Grade fc = conv_.order == FactorOrder::QuotFirst ? cgrade : bgrade;
    QEps untwist = QEps::eps_pow(q(), -conv_.t_exp(fb, fc));
    std::map<int, StructureRow> rows;
    for (int z : tab.indices_at(D0, D1)) rows[z];  // complete blocks only
    for (const auto& tr : triples) {
      int z = idx.at(tr.at(0).get<size_t>());
      int s = idx.at(tr.at(1).get<size_t>());
      int t = idx.at(tr.at(2).get<size_t>());
      QEps prod = qeps_from_string_exact(q(), tr.at(3).get<std::string>());
      QEps count = prod * untwist;
      if (count.b() != 0 || denominator(count.a()) != 1)
        throw std::runtime_error("structure cache corrupt count: " + path);
      rows[z][{s, t}] = count.a().convert_to<long long>();
    }
    for (auto& [z, row] : rows) {
      tables_.adopt_row(z, c0, c1, std::move(row));
    }
    cached_blocks_.insert({{D0, D1}, cgrade});
  }
}

void HallAlgebra::store_cache(int D0, int D1) {
  static const Grade kLoaded{-1, -1};
  const ClassTable& tab = tables_.table();
  Json j;
  j["q"] = q();
  j["dim"] = Json::array({D0, D1});
  j["convention"] = conv_.canonical_string();
  // collect every class index referenced so files stay self-describing
  std::vector<int> used;
  std::map<int, size_t> pos;
  auto intern = [&](int i) {
    auto it = pos.find(i);
    if (it != pos.end()) return it->second;
    pos[i] = used.size();
    used.push_back(i);
    return used.size() - 1;
  };
  Json blocks = Json::object();
  for (auto& [key, sub] : cached_blocks_) {
    if (key != std::make_pair(D0, D1) || sub == kLoaded) continue;
    Grade bgrade{D0 - sub.first, D1 - sub.second};
    Grade fb = conv_.order == FactorOrder::QuotFirst ? bgrade : sub;
    Grade fc = conv_.order == FactorOrder::QuotFirst ? sub : bgrade;
    QEps tw = QEps::eps_pow(q(), conv_.t_exp(fb, fc));
    QEps cw = QEps::eps_pow(q(), conv_.u_exp(fb, fc));
    QEps lifts = QEps::eps_pow(
        q(), 2LL * (bgrade.first * sub.first + bgrade.second * sub.second));
    Json triples = Json::array();
    for (int z : tab.indices_at(D0, D1)) {
      QEps aut_z(q(), Rational(aut_order(tab.at(z))));
      for (auto& [st, n] : tables_.row(z, sub.first, sub.second)) {
        QEps prod = tw * QEps(q(), n);
        QEps cop = cw * QEps(q(), n) * QEps(q(), Rational(aut_order(tab.at(st.first)))) *
                   QEps(q(), Rational(aut_order(tab.at(st.second)))) * lifts / aut_z;
        triples.push_back(Json::array({intern(z), intern(st.first), intern(st.second),
                                       qeps_to_string_exact(prod),
                                       qeps_to_string_exact(cop)}));
      }
    }
    char ckey[32];
    std::snprintf(ckey, sizeof ckey, "%d,%d", sub.first, sub.second);
    blocks[ckey] = std::move(triples);
  }
  Json classes = Json::array();
  for (int i : used) classes.push_back(iso_class_to_json(tab.at(i)));
  j["classes"] = std::move(classes);
  j["blocks"] = std::move(blocks);
  std::filesystem::create_directories(cache_dir_);
  std::string path = cache_file_name(cache_dir_, q(), D0, D1, conv_.hash());
  std::string tmp = path + ".tmp";
  {
    std::ofstream out(tmp);
    out << j.dump(1) << "\n";
  }
  std::filesystem::rename(tmp, path);
}

// ---------- calibration ----------

namespace {

// fixed paper-side elements, independent of any convention
HallElem rho_fixed(const ClassTable& tab, int k) {
  int q = tab.q();
  if (k == 0) return hall_unit(q);
  HallElem out;
  QEps s = QEps::eps_pow(q, -2LL * k * k);
  for (const auto& c : classes_of_dim(q, k, k))
    if (c.preproj.empty() && c.preinj.empty()) out.emplace(c, s);
  return out;
}

HallElem full_stratum(int q, int d0, int d1) {
  HallElem out;
  for (const auto& c : classes_of_dim(q, d0, d1)) out.emplace(c, QEps::one(q));
  return out;
}

struct Scanner {
  StructureTables& st;
  TwistConvention conv;  // u ignored during the product scan

  HallElem prod(const HallElem& f, const HallElem& g) {
    const ClassTable& tab = st.table();
    HallElem out;
    for (auto& [b, fb] : hall_grades(f))
      for (auto& [c, gc] : hall_grades(g)) {
        int D0 = b.first + c.first, D1 = b.second + c.second;
        Grade sub = conv.order == FactorOrder::QuotFirst ? c : b;
        st.ensure_block(D0, D1, sub.first, sub.second);
        QEps tw = QEps::eps_pow(tab.q(), conv.t_exp(b, c));
        for (int z : tab.indices_at(D0, D1)) {
          QEps acc;
          for (auto& [stk, n] : st.row(z, sub.first, sub.second)) {
            const HallElem& on_sub = conv.order == FactorOrder::QuotFirst ? gc : fb;
            const HallElem& on_quot = conv.order == FactorOrder::QuotFirst ? fb : gc;
            auto is = on_sub.find(tab.at(stk.first));
            if (is == on_sub.end()) continue;
            auto iq = on_quot.find(tab.at(stk.second));
            if (iq == on_quot.end()) continue;
            acc += is->second * iq->second * QEps(tab.q(), n);
          }
          if (!acc.is_zero()) out[tab.at(z)] += tw * acc;
        }
      }
    hall_prune(out);
    return out;
  }

  HallElem dpow(const HallElem& f, int k) {
    HallElem out = hall_unit(st.q());
    for (int i = 0; i < k; ++i) out = prod(out, f);
    QEps s = QEps::eps_pow(st.q(), (long long)conv.dp * k * (k - 1) / 2) /
             quantum_factorial(st.q(), k);
    return hall_scale(s, out);
  }
};

// anchor 1: both quantum Serre relations
bool anchor_serre(Scanner& s) {
  int q = s.st.q();
  for (int i = 0; i < 2; ++i) {
    HallElem ti = hall_indicator(i == 0 ? preinj_class(q, 1) : preproj_class(q, 1));
    HallElem tj = hall_indicator(i == 0 ? preproj_class(q, 1) : preinj_class(q, 1));
    HallElem acc;
    for (int k = 0; k <= 3; ++k) {
      HallElem term = s.prod(s.dpow(ti, k), s.prod(tj, s.dpow(ti, 3 - k)));
      if (k % 2) term = hall_scale(-QEps::one(q), term);
      acc = hall_add(acc, term);
    }
    if (!hall_is_zero(acc)) return false;
  }
  return true;
}

// anchor 2 (relaxed reading): theta0^(d) theta1^(d) is a single eps power
// times the indicator of the whole (d,d) stratum; returns the exponents
std::optional<std::vector<long long>> anchor_full_stratum(Scanner& s, int dmax) {
  int q = s.st.q();
  std::vector<long long> exps;
  HallElem t0 = hall_indicator(preinj_class(q, 1));
  HallElem t1 = hall_indicator(preproj_class(q, 1));
  for (int d = 1; d <= dmax; ++d) {
    HallElem w = s.prod(s.dpow(t0, d), s.dpow(t1, d));
    HallElem stratum = full_stratum(q, d, d);
    if (w.size() != stratum.size()) return std::nullopt;
    std::optional<QEps> ratio;
    for (auto& [c, v] : w) {
      if (!stratum.count(c)) return std::nullopt;
      if (!ratio)
        ratio = v;
      else if (*ratio != v)
        return std::nullopt;
    }
    auto p = ratio->as_signed_eps_power();
    if (!p || p->first != 1) return std::nullopt;
    exps.push_back(p->second);
  }
  return exps;
}

// anchor 3: rho_1 is a theta commutator with scalar from the allowed list
std::optional<long long> anchor_commutator(Scanner& s) {
  int q = s.st.q();
  HallElem t0 = hall_indicator(preinj_class(q, 1));
  HallElem t1 = hall_indicator(preproj_class(q, 1));
  HallElem rho1 = rho_fixed(s.st.table(), 1);
  HallElem ab = s.prod(t0, t1), ba = s.prod(t1, t0);
  for (long long e : {2LL, -2LL, 0LL}) {
    QEps sc = QEps::eps_pow(q, e);
    if (hall_is_zero(hall_sub(rho1, hall_sub(ab, hall_scale(sc, ba))))) return e;
    if (hall_is_zero(hall_sub(rho1, hall_sub(ba, hall_scale(sc, ab))))) return e;
  }
  return std::nullopt;
}

// anchor 4: the imaginary-root relation at n = 2:
// [2] rho_2 = eps^{-1} phi_1 * rho_1 + phi_2
bool anchor_relation2(Scanner& s) {
  int q = s.st.q();
  const ClassTable& tab = s.st.table();
  HallElem t1 = hall_indicator(preproj_class(q, 1));
  HallElem gamma1 = hall_scale(QEps::eps_pow(q, -4), hall_indicator(preinj_class(q, 2)));
  HallElem phi1 = restrict_regular(
      hall_sub(s.prod(hall_indicator(preinj_class(q, 1)), t1),
               hall_scale(QEps::eps_pow(q, -2),
                          s.prod(t1, hall_indicator(preinj_class(q, 1))))));
  HallElem phi2 = restrict_regular(s.prod(gamma1, t1));
  HallElem rho1 = rho_fixed(tab, 1), rho2 = rho_fixed(tab, 2);
  HallElem lhs = hall_scale(quantum_int(q, 2), rho2);
  HallElem rhs = hall_add(hall_scale(QEps::eps_pow(q, -1), s.prod(phi1, rho1)), phi2);
  return hall_is_zero(hall_sub(lhs, rhs));
}

struct CoScanner {
  StructureTables& st;
  TwistConvention conv;

  std::map<std::pair<int, int>, QEps> cop(const HallElem& f, Grade b, Grade c) {
    const ClassTable& tab = st.table();
    std::map<std::pair<int, int>, QEps> out;
    int D0 = b.first + c.first, D1 = b.second + c.second;
    Grade sub = conv.order == FactorOrder::QuotFirst ? c : b;
    Grade quot{D0 - sub.first, D1 - sub.second};
    st.ensure_block(D0, D1, sub.first, sub.second);
    QEps tw = QEps::eps_pow(st.q(), conv.u_exp(b, c));
    QEps lifts = QEps::eps_pow(
        st.q(), 2LL * (quot.first * sub.first + quot.second * sub.second));
    for (int z : tab.indices_at(D0, D1)) {
      auto fz = f.find(tab.at(z));
      if (fz == f.end()) continue;
      QEps aut_z(st.q(), Rational(aut_order(tab.at(z))));
      for (auto& [stk, n] : st.row(z, sub.first, sub.second)) {
        QEps coeff = tw * QEps(st.q(), n) *
                     QEps(st.q(), Rational(aut_order(tab.at(stk.first)))) *
                     QEps(st.q(), Rational(aut_order(tab.at(stk.second)))) * lifts /
                     aut_z * fz->second;
        auto key = conv.order == FactorOrder::QuotFirst
                       ? std::make_pair(stk.second, stk.first)
                       : std::make_pair(stk.first, stk.second);
        out[key] += coeff;
      }
    }
    for (auto it = out.begin(); it != out.end();)
      it = it->second.is_zero() ? out.erase(it) : std::next(it);
    return out;
  }

  // inner product on one tensor factor pair: (x (x) y, a (x) b) = (x,a)(y,b)
  QEps inner1(const HallElem& f, const HallElem& g) {
    QEps total;
    for (auto& [c, fv] : f) {
      auto it = g.find(c);
      if (it == g.end()) continue;
      auto [d0, d1] = c.dim();
      total += QEps::eps_pow(c.q, 2LL * (d0 * (long long)d0 + d1 * (long long)d1)) /
               QEps(c.q, Rational(aut_order(c))) * fv * it->second;
    }
    return total;
  }
};

// coproduct anchors: Green compatibility (f*g, h) = (f (x) g, Delta(h)) for
// f, g single thetas and h running over a class basis of the target grade,
// plus the diagonal-coefficient condition on Delta(rho_2)
bool anchor_coproduct(CoScanner& s, Scanner& ps) {
  int q = s.st.q();
  const ClassTable& tab = s.st.table();
  HallElem th[2] = {hall_indicator(preinj_class(q, 1)),
                    hall_indicator(preproj_class(q, 1))};
  Grade e[2] = {{1, 0}, {0, 1}};
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j) {
      HallElem fg = ps.prod(th[i], th[j]);
      int D0 = e[i].first + e[j].first, D1 = e[i].second + e[j].second;
      for (const auto& c : classes_of_dim(q, D0, D1)) {
        HallElem h = hall_indicator(c);
        QEps lhs = s.inner1(fg, h);
        QEps rhs;
        auto parts = s.cop(h, e[i], e[j]);
        for (auto& [yz, coeff] : parts) {
          QEps a = s.inner1(th[i], hall_indicator(tab.at(yz.first)));
          if (a.is_zero()) continue;
          QEps b = s.inner1(th[j], hall_indicator(tab.at(yz.second)));
          rhs += a * b * coeff;
        }
        if (lhs != rhs) return false;
      }
    }
  // diagonal coefficient of Delta(rho_2) at ((1,1),(1,1)) is rho_1 (x) rho_1
  HallElem rho1 = rho_fixed(tab, 1), rho2 = rho_fixed(tab, 2);
  auto parts = s.cop(rho2, {1, 1}, {1, 1});
  for (auto& [yz, coeff] : parts) {
    const IsoClass& y = tab.at(yz.first);
    const IsoClass& z = tab.at(yz.second);
    auto iy = rho1.find(y);
    auto iz = rho1.find(z);
    bool y_reg = y.preproj.empty() && y.preinj.empty();
    bool z_reg = z.preproj.empty() && z.preinj.empty();
    if (y_reg && z_reg) {
      if (iy == rho1.end() || iz == rho1.end()) return false;
      if (coeff != iy->second * iz->second) return false;
    }
  }
  // and nothing on the diagonal may be missing
  for (auto& [y, vy] : rho1)
    for (auto& [z, vz] : rho1) {
      auto it = parts.find({tab.index_of(y), tab.index_of(z)});
      if (it == parts.end() || it->second != vy * vz) return false;
    }
  return true;
}

}  // namespace

CalibrationOutcome calibrate(const std::vector<int>& q_list, int bound) {
  if (q_list.empty()) throw std::invalid_argument("calibrate: empty q list");
  std::vector<std::unique_ptr<StructureTables>> tabs;
  for (int q : q_list) tabs.push_back(std::make_unique<StructureTables>(q, 3, 3));

  std::vector<TwistConvention> product_side;
  std::vector<long long> stratum_exps;
  long long comm_exp = 0;

  // enumerate the product-side candidates
  for (int ord = 0; ord < 2; ++ord) {
    for (int t00 = -bound; t00 <= bound; ++t00)
      for (int t01 = -bound; t01 <= bound; ++t01)
        for (int t10 = -bound; t10 <= bound; ++t10)
          for (int t11 = -bound; t11 <= bound; ++t11)
            for (int dp = -bound; dp <= bound; ++dp) {
              TwistConvention cand;
              cand.order = ord ? FactorOrder::SubFirst : FactorOrder::QuotFirst;
              cand.t[0][0] = t00;
              cand.t[0][1] = t01;
              cand.t[1][0] = t10;
              cand.t[1][1] = t11;
              cand.dp = dp;
              bool ok = true;
              std::optional<std::vector<long long>> exps;
              std::optional<long long> ce;
              for (auto& st : tabs) {
                Scanner s{*st, cand};
                ce = anchor_commutator(s);
                if (!ce) {
                  ok = false;
                  break;
                }
                if (!anchor_serre(s)) {
                  ok = false;
                  break;
                }
                if (!anchor_relation2(s)) {
                  ok = false;
                  break;
                }
                exps = anchor_full_stratum(s, 3);
                if (!exps) {
                  ok = false;
                  break;
                }
              }
              if (ok) {
                product_side.push_back(cand);
                stratum_exps = *exps;
                comm_exp = *ce;
              }
            }
  }

  CalibrationOutcome out;
  std::ostringstream rep;
  rep << "product-side survivors: " << product_side.size() << "\n";
  for (auto& c : product_side) rep << "  " << c.canonical_string() << "\n";
  if (product_side.empty())
    throw NoConventionFound(
        "no factor order / twist / divided-power rule satisfies the anchor "
        "identities at q in the requested list");

  // coproduct side: scan u against the pairing anchors for each survivor
  for (auto survivor : product_side) {
    int found = 0;
    for (int u00 = -bound; u00 <= bound; ++u00)
      for (int u01 = -bound; u01 <= bound; ++u01)
        for (int u10 = -bound; u10 <= bound; ++u10)
          for (int u11 = -bound; u11 <= bound; ++u11) {
            TwistConvention cand = survivor;
            cand.u[0][0] = u00;
            cand.u[0][1] = u01;
            cand.u[1][0] = u10;
            cand.u[1][1] = u11;
            bool ok = true;
            for (auto& st : tabs) {
              Scanner ps{*st, cand};
              CoScanner cs{*st, cand};
              if (!anchor_coproduct(cs, ps)) {
                ok = false;
                break;
              }
            }
            if (ok) {
              out.survivors.push_back(cand);
              ++found;
            }
          }
    rep << "coproduct-side survivors for " << survivor.canonical_string() << ": "
        << found << "\n";
  }
  if (out.survivors.empty())
    throw NoConventionFound("product twist calibrated but no coproduct twist works");

  out.full_stratum_exponents = stratum_exps;
  out.commutator_scalar_exponent = comm_exp;
  for (size_t d = 0; d < stratum_exps.size(); ++d)
    rep << "theta0^(" << d + 1 << ") theta1^(" << d + 1 << ") = eps^"
        << stratum_exps[d] << " * full stratum indicator\n";
  rep << "rho_1 = theta0 theta1 - eps^" << comm_exp << " theta1 theta0\n";
  out.report = rep.str();
  return out;
}

}  // namespace kron

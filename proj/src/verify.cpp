#include "kron/verify.hpp"

#include <algorithm>
#include <cstdio>
#include <numeric>
#include <set>
#include <sstream>
#include <stdexcept>

#include "kron/partition.hpp"
#include "kron/rep.hpp"

namespace kron {

namespace {

std::string fmt(const char* pattern, auto... args) {
  char buf[160];
  std::snprintf(buf, sizeof buf, pattern, args...);
  return std::string(buf);
}

std::string partition_to_string(const Partition& p) {
  std::string s = "(";
  for (size_t i = 0; i < p.size(); ++i) {
    if (i) s += ",";
    s += std::to_string(p[i]);
  }
  return s + ")";
}

CheckReport make_report(std::string id, std::string params, int q,
                        std::uint64_t conv, const HallElem& residual) {
  CheckReport r;
  r.id = std::move(id);
  r.params = std::move(params);
  r.q = q;
  r.convention = conv;
  r.pass = hall_is_zero(residual);
  r.discrepancy = r.pass ? "0" : hall_elem_to_string(residual);
  return r;
}

CheckReport make_scalar_report(std::string id, std::string params, int q,
                               std::uint64_t conv, const QEps& residual) {
  CheckReport r;
  r.id = std::move(id);
  r.params = std::move(params);
  r.q = q;
  r.convention = conv;
  r.pass = residual.is_zero();
  r.discrepancy = r.pass ? "0" : qeps_to_string_exact(residual);
  return r;
}

// All weakly decreasing index tuples of the given length with the given sum.
void enum_multisets(int length, int sum, int cap,
                    const std::function<void(const std::vector<int>&)>& fn) {
  std::vector<int> cur(static_cast<size_t>(length));
  std::function<void(int, int, int)> rec = [&](int pos, int rem, int hi) {
    if (pos == length) {
      if (rem == 0) fn(cur);
      return;
    }
    for (int v = std::min(rem, hi); v >= 0; --v) {
      cur[size_t(pos)] = v;
      rec(pos + 1, rem - v, v);
    }
  };
  rec(0, sum, cap);
}

struct Monomial {
  std::vector<int> mu_idx;     // ascending order of multiplication
  int rho_idx = 0;             // 0 means the unit
  std::vector<int> gamma_idx;  // descending order of multiplication
  std::string name;
};

// All monomials mu(...) * rho(j) * gamma(...) of total grade (n,n); the two
// orbit families appear with equal factor counts, so enumerate that count.
std::vector<Monomial> diagonal_monomials(int n, bool require_orbit_factors) {
  std::vector<Monomial> out;
  for (int alpha = require_orbit_factors ? 1 : 0; alpha <= n; ++alpha) {
    for (int sm = 0; sm + alpha <= n; ++sm) {
      enum_multisets(alpha, sm, sm, [&](const std::vector<int>& mus) {
        for (int sg = 0; sm + sg + alpha <= n; ++sg) {
          enum_multisets(alpha, sg, sg, [&](const std::vector<int>& gammas) {
            Monomial m;
            m.mu_idx.assign(mus.rbegin(), mus.rend());
            m.gamma_idx = gammas;
            m.rho_idx = n - sm - sg - alpha;
            std::string s;
            for (int i : m.mu_idx) s += "mu" + std::to_string(i) + "*";
            s += "rho" + std::to_string(m.rho_idx);
            for (int i : m.gamma_idx) s += "*gamma" + std::to_string(i);
            m.name = s;
            out.push_back(std::move(m));
          });
        }
      });
    }
  }
  return out;
}

HallElem eval_monomial(NamedElements& el, const Monomial& m) {
  HallAlgebra& alg = el.algebra();
  HallElem f = el.rho(m.rho_idx);
  for (auto it = m.mu_idx.rbegin(); it != m.mu_idx.rend(); ++it)
    f = alg.product(el.mu(*it), f);
  for (int g : m.gamma_idx) f = alg.product(f, el.gamma(g));
  return f;
}

bool span_of_row(const MatrixFq& rref, const std::vector<uint8_t>& v) {
  MatrixFq st(rref.p(), rref.rows() + 1, rref.cols());
  st.set_block(0, 0, rref);
  for (int j = 0; j < rref.cols(); ++j) st.set(rref.rows(), j, v[size_t(j)]);
  return st.rank() == rref.rows();
}

bool space_contained(const MatrixFq& inner, const MatrixFq& outer) {
  if (inner.rows() == 0) return true;
  MatrixFq st(outer.p(), outer.rows() + inner.rows(), outer.cols());
  st.set_block(0, 0, outer);
  st.set_block(outer.rows(), 0, inner);
  return st.rank() == outer.rank();
}

// q-adic valuation of a nonzero rational.
int q_valuation(int q, const Rational& x) {
  using boost::multiprecision::cpp_int;
  cpp_int num = numerator(x), den = denominator(x);
  int v = 0;
  while (num % q == 0) {
    num /= q;
    ++v;
  }
  while (den % q == 0) {
    den /= q;
    --v;
  }
  return v;
}

}  // namespace

// ---------- reports ----------

std::string hall_elem_to_string(const HallElem& f) {
  if (f.empty()) return "0";
  std::string s;
  for (auto& [cls, v] : f) {
    if (!s.empty()) s += " + ";
    s += "(" + qeps_to_string_exact(v) + ")*[" + cls.to_string() + "]";
  }
  return s;
}

std::string CheckReport::to_string() const {
  std::string s = id;
  if (!params.empty()) s += "(" + params + ")";
  s += fmt(" q=%d: ", q);
  s += pass ? "pass" : ("FAIL, discrepancy " + discrepancy);
  return s;
}

Json check_report_to_json(const CheckReport& r) {
  Json j;
  j["id"] = r.id;
  j["params"] = r.params;
  j["q"] = r.q;
  j["convention"] = fmt("%016llx", (unsigned long long)r.convention);
  j["pass"] = r.pass;
  j["discrepancy"] = r.discrepancy;
  return j;
}

// ---------- context ----------

VerifyContext::VerifyContext(TwistConvention conv, std::string cache_dir)
    : conv_(conv), cache_dir_(std::move(cache_dir)) {}

VerifyContext::Entry& VerifyContext::entry(int q) {
  auto it = entries_.find(q);
  if (it == entries_.end()) {
    Entry e;
    e.d0 = e.d1 = q <= 3 ? 5 : 3;
    it = entries_.emplace(q, std::move(e)).first;
  }
  return it->second;
}

void VerifyContext::reserve(int q, int d0, int d1) {
  Entry& e = entry(q);
  if (e.alg)
    throw std::logic_error("reserve must precede the first use of the field");
  e.d0 = std::max(e.d0, d0);
  e.d1 = std::max(e.d1, d1);
}

HallAlgebra& VerifyContext::algebra(int q) {
  Entry& e = entry(q);
  if (!e.alg) {
    e.alg = std::make_unique<HallAlgebra>(q, e.d0, e.d1, conv_, cache_dir_);
    e.named = std::make_unique<NamedElements>(*e.alg);
  }
  return *e.alg;
}

NamedElements& VerifyContext::named(int q) {
  algebra(q);
  return *entry(q).named;
}

// ---------- recorded constants ----------

QEps recorded_cross_unit(int q) { return QEps::one(q); }

int recorded_eta_shift_sign(int family01) { return family01 == 0 ? 1 : -1; }

// ---------- checks ----------

CheckReport check_serre(VerifyContext& ctx, int i, int q) {
  NamedElements& el = ctx.named(q);
  HallAlgebra& alg = ctx.algebra(q);
  int j = 1 - i;
  HallElem acc;
  for (int k = 0; k <= 3; ++k) {
    HallElem term =
        alg.product(alg.product(el.theta_div(i, k), el.theta(j)),
                    el.theta_div(i, 3 - k));
    acc = k % 2 ? hall_sub(acc, term) : hall_add(acc, term);
  }
  return make_report("serre", fmt("i=%d", i), q, ctx.convention().hash(), acc);
}

CheckReport check_rho_recursion(VerifyContext& ctx, int n, int q) {
  NamedElements& el = ctx.named(q);
  HallAlgebra& alg = ctx.algebra(q);
  HallElem lhs = hall_scale(quantum_int(q, n), el.rho(n));
  HallElem rhs;
  for (int i = 1; i <= n; ++i)
    rhs = hall_add(rhs, hall_scale(QEps::eps_pow(q, i - n),
                                   alg.product(el.phi(i), el.rho(n - i))));
  return make_report("rho-recursion", fmt("n=%d", n), q,
                     ctx.convention().hash(), hall_sub(lhs, rhs));
}

CheckReport check_generating_series(VerifyContext& ctx, int N, int q) {
  NamedElements& el = ctx.named(q);
  HallAlgebra& alg = ctx.algebra(q);
  QEps delta = QEps::eps_pow(q, 1) - QEps::eps_pow(q, -1);
  HallElem residual;
  std::string where;
  for (int n = 1; n <= N; ++n) {
    HallElem lhs = hall_scale(QEps::eps_pow(q, n), el.rho(n));
    HallElem rhs = hall_scale(QEps::eps_pow(q, -n), el.rho(n));
    for (int i = 1; i <= n; ++i)
      rhs = hall_add(
          rhs, hall_scale(delta * QEps::eps_pow(q, -(n - i)),
                          alg.product(el.phi(i), el.rho(n - i))));
    HallElem diff = hall_sub(lhs, rhs);
    if (!hall_is_zero(diff) && where.empty()) {
      where = fmt("u^%d: ", n);
      residual = diff;
    }
  }
  CheckReport r = make_report("generating-series", fmt("N=%d", N), q,
                              ctx.convention().hash(), residual);
  if (!r.pass) r.discrepancy = where + r.discrepancy;
  return r;
}

CheckReport check_cross_commutator(VerifyContext& ctx, int k, int l, int q) {
  NamedElements& el = ctx.named(q);
  HallAlgebra& alg = ctx.algebra(q);
  HallElem lhs =
      hall_sub(alg.product(el.gamma(k), el.mu(l)),
               hall_scale(QEps::eps_pow(q, -2), alg.product(el.mu(l), el.gamma(k))));
  HallElem rhs = hall_scale(recorded_cross_unit(q), el.phi(k + l + 1));
  return make_report("cross-commutator", fmt("k=%d,l=%d", k, l), q,
                     ctx.convention().hash(), hall_sub(lhs, rhs));
}

CheckReport check_straightening(VerifyContext& ctx, int r, int s, int q) {
  NamedElements& el = ctx.named(q);
  HallAlgebra& alg = ctx.algebra(q);
  HallElem lhs_a = alg.product(el.rho(r), el.mu(s - 1));
  HallElem lhs_b = alg.product(el.gamma(s - 1), el.rho(r));
  HallElem rhs_a, rhs_b;
  for (int i = 0; i <= r; ++i) {
    QEps c = quantum_int(q, r - i + 1);
    rhs_a = hall_add(rhs_a,
                     hall_scale(c, alg.product(el.mu(r + s - i - 1), el.rho(i))));
    rhs_b = hall_add(rhs_b,
                     hall_scale(c, alg.product(el.rho(i), el.gamma(r + s - i - 1))));
  }
  HallElem da = hall_sub(lhs_a, rhs_a);
  HallElem db = hall_sub(lhs_b, rhs_b);
  CheckReport rep;
  rep.id = "straightening";
  rep.params = fmt("r=%d,s=%d", r, s);
  rep.q = q;
  rep.convention = ctx.convention().hash();
  rep.pass = hall_is_zero(da) && hall_is_zero(db);
  rep.discrepancy = rep.pass ? "0"
                             : "mu-half: " + hall_elem_to_string(da) +
                                   "; gamma-half: " + hall_elem_to_string(db);
  return rep;
}

CheckReport check_drinfeld(VerifyContext& ctx, int relation, int a, int b,
                           int q) {
  NamedElements& el = ctx.named(q);
  HallAlgebra& alg = ctx.algebra(q);
  std::uint64_t conv = ctx.convention().hash();
  QEps e2 = QEps::eps_pow(q, 2), em2 = QEps::eps_pow(q, -2);
  switch (relation) {
    case 1: {  // a = s >= 1, b = r >= 0
      int s = a, r = b;
      HallElem lhs = hall_sub(alg.product(el.eta(s), el.mu(r)),
                              alg.product(el.mu(r), el.eta(s)));
      QEps c = quantum_int(q, 2 * s) / QEps(q, Rational(s));
      if (recorded_eta_shift_sign(0) < 0) c = -c;
      return make_report("drinfeld-1", fmt("s=%d,r=%d", s, r), q, conv,
                         hall_sub(lhs, hall_scale(c, el.mu(r + s))));
    }
    case 2: {  // a = s >= 1, b = r >= 1
      int s = a, r = b;
      HallElem lhs = hall_sub(alg.product(el.eta(s), el.gamma(r - 1)),
                              alg.product(el.gamma(r - 1), el.eta(s)));
      QEps c = quantum_int(q, 2 * s) / QEps(q, Rational(s));
      if (recorded_eta_shift_sign(1) < 0) c = -c;
      return make_report("drinfeld-2", fmt("s=%d,r=%d", s, r), q, conv,
                         hall_sub(lhs, hall_scale(c, el.gamma(r + s - 1))));
    }
    case 3: {  // a = r >= 0, b = s >= 0
      int r = a, s = b;
      HallElem lhs = hall_sub(alg.product(el.mu(r + 1), el.mu(s)),
                              hall_scale(e2, alg.product(el.mu(s), el.mu(r + 1))));
      HallElem rhs = hall_sub(hall_scale(e2, alg.product(el.mu(r), el.mu(s + 1))),
                              alg.product(el.mu(s + 1), el.mu(r)));
      return make_report("drinfeld-3", fmt("r=%d,s=%d", r, s), q, conv,
                         hall_sub(lhs, rhs));
    }
    case 4: {  // a = r >= 1, b = s >= 1
      int r = a, s = b;
      HallElem lhs =
          hall_sub(alg.product(el.gamma(r), el.gamma(s - 1)),
                   hall_scale(em2, alg.product(el.gamma(s - 1), el.gamma(r))));
      HallElem rhs =
          hall_sub(hall_scale(em2, alg.product(el.gamma(r - 1), el.gamma(s))),
                   alg.product(el.gamma(s), el.gamma(r - 1)));
      return make_report("drinfeld-4", fmt("r=%d,s=%d", r, s), q, conv,
                         hall_sub(lhs, rhs));
    }
    case 5: {  // a = r >= 0, b = s >= 1
      int r = a, s = b;
      HallElem lhs =
          hall_sub(alg.product(el.gamma(s - 1), el.mu(r)),
                   hall_scale(em2, alg.product(el.mu(r), el.gamma(s - 1))));
      HallElem rhs = hall_scale(recorded_cross_unit(q), el.phi(r + s));
      return make_report("drinfeld-5", fmt("r=%d,s=%d", r, s), q, conv,
                         hall_sub(lhs, rhs));
    }
    default:
      throw std::invalid_argument("drinfeld relation id must be 1..5");
  }
}

CheckReport check_q_number_identity(int m, int q) {
  QEps lhs;
  for (int i = 1; i <= m; ++i)
    lhs += (quantum_int(q, 2 * i) / quantum_int(q, i)) * quantum_int(q, m - i + 1);
  QEps rhs = QEps(q, Rational(m)) * quantum_int(q, m + 1);
  return make_scalar_report("q-number-identity", fmt("m=%d", m), q, 0,
                            lhs - rhs);
}

CheckReport check_kostka(VerifyContext& ctx, const Partition& lambda, int q) {
  NamedElements& el = ctx.named(q);
  HallAlgebra& alg = ctx.algebra(q);
  int n = std::accumulate(lambda.begin(), lambda.end(), 0);
  HallElem lhs = hall_unit(q);
  for (int part : lambda) lhs = alg.product(lhs, el.rho(part));
  HallElem rhs;
  for (const Partition& mu : partitions_of(n)) {
    long long k = kostka_number(mu, lambda);
    if (k == 0) continue;
    rhs = hall_add(rhs, hall_scale(QEps(q, Rational(k)), el.schur(mu)));
  }
  return make_report("kostka", "lambda=" + partition_to_string(lambda), q,
                     ctx.convention().hash(), hall_sub(lhs, rhs));
}

CheckReport check_rho_coproduct(VerifyContext& ctx, int k, int q) {
  NamedElements& el = ctx.named(q);
  HallAlgebra& alg = ctx.algebra(q);
  CheckReport rep;
  rep.id = "rho-coproduct";
  rep.params = fmt("k=%d", k);
  rep.q = q;
  rep.convention = ctx.convention().hash();
  rep.pass = true;
  rep.discrepancy = "0";
  HallElem rk = el.rho(k);
  for (int b0 = 0; b0 <= k && rep.pass; ++b0)
    for (int b1 = 0; b1 <= k && rep.pass; ++b1) {
      Grade b{b0, b1}, c{k - b0, k - b1};
      auto comp = alg.coproduct(rk, b, c);
      for (auto it = comp.begin(); it != comp.end();)
        it = it->second.is_zero() ? comp.erase(it) : std::next(it);
      if (b0 == b1) {
        // diagonal bidegree: must be exactly rho_i (x) rho_{k-i}
        std::map<std::pair<IsoClass, IsoClass>, QEps> want;
        for (auto& [A, ca] : el.rho(b0))
          for (auto& [B, cb] : el.rho(k - b0)) want[{A, B}] = ca * cb;
        if (comp != want) {
          rep.pass = false;
          rep.discrepancy = fmt("bidegree (%d,%d)|(%d,%d): ", b0, b1, c.first,
                                c.second) +
                            "diagonal component differs from rho (x) rho";
        }
      } else {
        for (auto& [key, coeff] : comp) {
          (void)coeff;
          const IsoClass& A = key.first;
          const IsoClass& B = key.second;
          bool shape = A.preproj.empty() && !A.preinj.empty() &&
                       B.preinj.empty() && !B.preproj.empty();
          if (!shape) {
            rep.pass = false;
            rep.discrepancy =
                fmt("bidegree (%d,%d)|(%d,%d): ", b0, b1, c.first, c.second) +
                "unexpected support [" + A.to_string() + " (x) " +
                B.to_string() + "]";
            break;
          }
        }
      }
    }
  return rep;
}

CheckReport check_regular_projection(VerifyContext& ctx, int n, int q) {
  NamedElements& el = ctx.named(q);
  HallAlgebra& alg = ctx.algebra(q);
  CheckReport rep;
  rep.id = "regular-projection";
  rep.params = fmt("n=%d", n);
  rep.q = q;
  rep.convention = ctx.convention().hash();
  rep.pass = true;
  rep.discrepancy = "0";
  std::vector<HallElem> basis;
  std::vector<std::string> basis_names;
  for (const Partition& lam : partitions_of(n)) {
    HallElem g = hall_unit(q);
    for (int part : lam) g = alg.product(g, el.rho(part));
    basis.push_back(std::move(g));
    basis_names.push_back("rho_" + partition_to_string(lam));
  }
  for (const Monomial& m : diagonal_monomials(n, false)) {
    HallElem f = eval_monomial(el, m);
    HallElem off = hall_sub(f, restrict_regular(f));
    for (size_t i = 0; i < basis.size(); ++i) {
      QEps v = alg.inner(off, basis[i]);
      if (!v.is_zero()) {
        rep.pass = false;
        rep.discrepancy = "inner(" + m.name + " - r(" + m.name + "), " +
                          basis_names[i] + ") = " + qeps_to_string_exact(v);
        return rep;
      }
    }
  }
  return rep;
}

CheckReport check_regular_expressibility(VerifyContext& ctx, int n, int q) {
  NamedElements& el = ctx.named(q);
  HallAlgebra& alg = ctx.algebra(q);
  CheckReport rep;
  rep.id = "regular-expressibility";
  rep.params = fmt("n=%d", n);
  rep.q = q;
  rep.convention = ctx.convention().hash();
  rep.pass = true;
  rep.discrepancy = "0";

  // (a) pure-orbit products: enumerate subsets of distinct indices
  auto pure = [&](const HallElem& f,
                  const IsoClass& orbit) -> std::optional<long long> {
    if (f.size() != 1) return std::nullopt;
    auto& [cls, coeff] = *f.begin();
    if (!(cls == orbit)) return std::nullopt;
    auto p = coeff.as_signed_eps_power();
    if (!p || p->first != 1) return std::nullopt;
    return p->second;
  };
  std::vector<std::vector<int>> subsets;
  int top = n;  // indices 0..n suffice: a single factor of index n has
                // weight n+1 already
  for (int mask = 1; mask < (1 << (top + 1)); ++mask) {
    std::vector<int> s;
    int weight = 0;
    for (int i = 0; i <= top; ++i)
      if (mask & (1 << i)) {
        s.push_back(i);
        weight += i + 1;
      }
    if (weight <= n + 1) subsets.push_back(std::move(s));
  }
  for (const std::vector<int>& s : subsets) {
    // gammas multiply in decreasing index order; mus in increasing order
    HallElem g = hall_unit(q), m = hall_unit(q);
    std::vector<std::pair<int, int>> mults;
    for (auto it = s.rbegin(); it != s.rend(); ++it)
      g = alg.product(g, el.gamma(*it));
    for (int i : s) {
      m = alg.product(m, el.mu(i));
      mults.push_back({i + 1, 1});
    }
    IsoClass gi = make_class(q, {}, mults, {});
    IsoClass mi = make_class(q, mults, {}, {});
    if (!pure(g, gi)) {
      rep.pass = false;
      rep.discrepancy = "decreasing gamma product is not a pure orbit "
                        "indicator: " + hall_elem_to_string(g);
      return rep;
    }
    if (!pure(m, mi)) {
      rep.pass = false;
      rep.discrepancy = "increasing mu product is not a pure orbit "
                        "indicator: " + hall_elem_to_string(m);
      return rep;
    }
    if (s.size() >= 2) {
      // the opposite order never reproduces the indicator: when both factors
      // survive extension-free it still picks up a positive q-power from the
      // homomorphism count, so the two orders always differ
      HallElem gr = hall_unit(q), mr = hall_unit(q);
      for (int i : s) gr = alg.product(gr, el.gamma(i));
      for (auto it = s.rbegin(); it != s.rend(); ++it)
        mr = alg.product(mr, el.mu(*it));
      if (gr == g || mr == m) {
        rep.pass = false;
        rep.discrepancy = "orbit product does not depend on the order";
        return rep;
      }
    }
  }

  // (b) the non-regular indicator at (n,n) lies in the span of
  //     mu-monomial * rho * gamma-monomial products
  std::vector<IsoClass> classes = classes_of_dim(q, n, n);
  std::vector<Monomial> family = diagonal_monomials(n, true);
  std::vector<std::vector<QEps>> M(classes.size(),
                                   std::vector<QEps>(family.size()));
  std::vector<QEps> target(classes.size());
  std::map<IsoClass, size_t> row_of;
  for (size_t i = 0; i < classes.size(); ++i) {
    row_of[classes[i]] = i;
    bool regular = classes[i].preproj.empty() && classes[i].preinj.empty();
    target[i] = regular ? QEps() : QEps::one(q);
  }
  for (size_t j = 0; j < family.size(); ++j) {
    HallElem f = eval_monomial(el, family[j]);
    for (auto& [cls, v] : f) M[row_of.at(cls)][j] = v;
  }
  auto sol = field_solve(std::move(M), std::move(target));
  if (!sol) {
    rep.pass = false;
    rep.discrepancy = "non-regular indicator is outside the span of " +
                      std::to_string(family.size()) + " monomials";
  }
  return rep;
}

CheckReport check_transpose_invariance(int k, int q) {
  CheckReport rep;
  rep.id = "transpose-invariance";
  rep.params = fmt("k=%d", k);
  rep.q = q;
  rep.convention = 0;
  rep.pass = true;
  rep.discrepancy = "0";
  std::vector<IsoClass> reg;
  for (const IsoClass& c : classes_of_dim(q, k, k))
    if (c.preproj.empty() && c.preinj.empty()) reg.push_back(c);
  std::set<IsoClass> reg_set(reg.begin(), reg.end());
  for (const IsoClass& c : reg) {
    IsoClass d = transpose_dual(c);
    if (!reg_set.count(d)) {
      rep.pass = false;
      rep.discrepancy = "image of " + c.to_string() + " leaves the regular set";
      return rep;
    }
    if (!(transpose_dual(d) == c)) {
      rep.pass = false;
      rep.discrepancy = "transpose duality is not an involution at " +
                        c.to_string();
      return rep;
    }
    // the induced map preserves each point's degree and partition, hence
    // fixes the constant-coefficient class function rho_k
    std::multiset<std::pair<int, Partition>> sc, sd;
    for (auto& blk : c.regular) sc.insert({blk.point.degree(), blk.lambda});
    for (auto& blk : d.regular) sd.insert({blk.point.degree(), blk.lambda});
    if (sc != sd) {
      rep.pass = false;
      rep.discrepancy = "partition data moved across " + c.to_string();
      return rep;
    }
  }
  return rep;
}

CheckReport check_line_submodule_count(int n, int q) {
  CheckReport rep;
  rep.id = "line-submodule-count";
  rep.params = fmt("n=%d", n);
  rep.q = q;
  rep.convention = 0;
  rep.pass = true;
  rep.discrepancy = "0";
  ClassTable table(q, n, n);
  long long expected_lines = 0;  // (q^n - 1)/(q - 1)
  {
    long long p = 1;
    for (int i = 0; i < n; ++i) p *= q;
    expected_lines = (p - 1) / (q - 1);
  }
  for (int idx : table.indices_at(n, n)) {
    const IsoClass& c = table.at(idx);
    if (!c.preproj.empty() || !c.preinj.empty()) continue;
    Rep V = representative(c);
    // collect every regular submodule once (the whole module included)
    struct Sub {
      MatrixFq B0, B1;  // canonical row spaces
      int m;
    };
    std::vector<Sub> regs;
    for (int m = 1; m < n; ++m)
      for_each_stable_sub(V, m, m, [&](const MatrixFq& B0, const MatrixFq& B1) {
        Rep W = sub_rep(V, B0, B1);
        std::vector<uint8_t> det = pencil_det(W);
        bool nonzero = false;
        for (uint8_t x : det) nonzero |= x != 0;
        if (nonzero)
          regs.push_back({B0.row_space_canonical(), B1.row_space_canonical(), m});
      });
    regs.push_back({MatrixFq::identity(q, n), MatrixFq::identity(q, n), n});

    long long pairs = 0, lines = 0;
    std::vector<uint8_t> v(static_cast<size_t>(n));
    std::function<bool(int)> next = [&](int pos) {
      for (int i = n - 1; i >= 0; --i) {
        if (v[size_t(i)] + 1 < q) {
          ++v[size_t(i)];
          std::fill(v.begin() + i + 1, v.end(), 0);
          return true;
        }
        v[size_t(i)] = 0;
      }
      (void)pos;
      return false;
    };
    // canonical line representatives: first nonzero coordinate equals 1
    do {
      int lead = -1;
      for (int i = 0; i < n && lead < 0; ++i)
        if (v[size_t(i)]) lead = i;
      if (lead < 0 || v[size_t(lead)] != 1) continue;
      ++lines;
      std::vector<size_t> members;
      for (size_t s = 0; s < regs.size(); ++s)
        if (span_of_row(regs[s].B1, v)) members.push_back(s);
      // unique minimal member under componentwise containment
      std::vector<size_t> minimal;
      for (size_t a : members) {
        bool is_min = true;
        for (size_t b : members)
          if (b != a && space_contained(regs[b].B0, regs[a].B0) &&
              space_contained(regs[b].B1, regs[a].B1))
            is_min = false;
        if (is_min) minimal.push_back(a);
      }
      if (minimal.size() != 1) {
        rep.pass = false;
        rep.discrepancy = fmt("class %s: %zu minimal regular submodules over "
                              "a line",
                              c.to_string().c_str(), minimal.size());
        return rep;
      }
      for (size_t s : members) {
        const Sub& W = regs[s];
        Rep R = s + 1 == regs.size() ? V : sub_rep(V, W.B0, W.B1);
        // coordinates of the line inside W's vertex-1 space
        auto coords = W.B1.transpose().solve(v);
        if (!coords) {
          rep.pass = false;
          rep.discrepancy = "internal: line lost its coordinates";
          return rep;
        }
        MatrixFq line(q, 1, W.m);
        for (int j = 0; j < W.m; ++j) line.set(0, j, (*coords)[size_t(j)]);
        Rep Q = quot_rep(R, MatrixFq(q, 0, W.m), line);
        bool indec_preinj = table.classify(Q) == preinj_class(q, W.m);
        if (indec_preinj != (s == minimal[0])) {
          rep.pass = false;
          rep.discrepancy = fmt("class %s: quotient by a line is %s "
                                "indecomposable preinjective at a %s member",
                                c.to_string().c_str(),
                                indec_preinj ? "" : "not",
                                s == minimal[0] ? "minimal" : "non-minimal");
          return rep;
        }
        if (indec_preinj) ++pairs;
      }
    } while (next(0));
    if (lines != expected_lines || pairs != expected_lines) {
      rep.pass = false;
      rep.discrepancy = fmt("class %s: %lld pairs over %lld lines, expected "
                            "%lld",
                            c.to_string().c_str(), pairs, lines,
                            expected_lines);
      return rep;
    }
  }
  return rep;
}

// ---------- interpolation ----------

bool GenericLabel::operator<(const GenericLabel& o) const {
  if (preproj != o.preproj) return preproj < o.preproj;
  if (preinj != o.preinj) return preinj < o.preinj;
  return regular < o.regular;
}

std::string GenericLabel::to_string() const {
  std::string s;
  for (auto& [k, m] : preproj)
    s += "P" + std::to_string(k) + (m > 1 ? "^" + std::to_string(m) : "") + "+";
  for (auto& [k, m] : preinj)
    s += "I" + std::to_string(k) + (m > 1 ? "^" + std::to_string(m) : "") + "+";
  for (auto& [d, lam] : regular)
    s += "R[deg" + std::to_string(d) + "," + partition_to_string(lam) + "]+";
  if (s.empty()) return "0";
  s.pop_back();
  return s;
}

GenericLabel generic_label(const IsoClass& c) {
  GenericLabel g;
  g.preproj = c.preproj;
  g.preinj = c.preinj;
  for (auto& blk : c.regular)
    g.regular.push_back({blk.point.degree(), blk.lambda});
  std::sort(g.regular.begin(), g.regular.end());
  return g;
}

bool LaurentFit::integral() const {
  for (auto& [j, a] : coeffs) {
    (void)j;
    if (denominator(a) != 1) return false;
  }
  return true;
}

std::string LaurentFit::to_string() const {
  if (coeffs.empty()) return "0";
  std::string s;
  for (auto& [j, a] : coeffs) {
    if (!s.empty()) s += " + ";
    std::ostringstream os;
    os << a;
    s += "(" + os.str() + ")";
    if (j != 0) s += "*v^" + std::to_string(j);
  }
  return s;
}

namespace {

// Fit one parity: values[i] must equal sum_{m in window} alpha_m * q_i^m for
// a window of degree_bound+1 consecutive exponents of q.  Windows are tried
// from the lowest plausible location upward; the first consistent fit wins.
std::optional<std::map<int, Rational>> fit_parity(
    const std::vector<int>& qs, const std::vector<Rational>& values, int D) {
  bool all_zero = true;
  for (const Rational& v : values) all_zero &= v == 0;
  if (all_zero) return std::map<int, Rational>{};
  int lo = 0;
  bool first = true;
  for (size_t i = 0; i < qs.size(); ++i) {
    if (values[i] == 0) continue;
    int v = q_valuation(qs[i], values[i]);
    lo = first ? v : std::min(lo, v);
    first = false;
  }
  for (int w = lo - D; w <= lo + D; ++w) {
    std::vector<std::vector<Rational>> M(qs.size(),
                                         std::vector<Rational>(size_t(D + 1)));
    for (size_t i = 0; i < qs.size(); ++i)
      for (int m = 0; m <= D; ++m) {
        Rational p = 1;
        int e = w + m;
        for (int t = 0; t < (e >= 0 ? e : -e); ++t) {
          if (e >= 0)
            p *= qs[i];
          else
            p /= qs[i];
        }
        M[i][size_t(m)] = p;
      }
    auto sol = field_solve(std::move(M), values);
    if (sol) {
      std::map<int, Rational> out;
      for (int m = 0; m <= D; ++m)
        if ((*sol)[size_t(m)] != 0) out[w + m] = (*sol)[size_t(m)];
      return out;
    }
  }
  return std::nullopt;
}

}  // namespace

InterpolationReport interpolate_constants(
    VerifyContext& ctx, const std::function<HallElem(NamedElements&)>& builder,
    const std::vector<int>& q_list, int degree_bound) {
  InterpolationReport rep;
  if ((int)q_list.size() < degree_bound + 2) {
    rep.error = fmt("underdetermined: %zu fields for degree bound %d "
                    "(need %d)",
                    q_list.size(), degree_bound, degree_bound + 2);
    return rep;
  }
  // per field: generic label -> coefficient
  std::vector<std::map<GenericLabel, QEps>> data;
  for (int q : q_list) {
    HallElem f = builder(ctx.named(q));
    std::map<GenericLabel, QEps> m;
    for (auto& [cls, v] : f) {
      GenericLabel lab = generic_label(cls);
      auto [it, inserted] = m.emplace(lab, v);
      if (!inserted && !(it->second == v)) {
        rep.error = fmt("q=%d: ", q) + "coefficients differ within pattern " +
                    lab.to_string();
        return rep;
      }
    }
    data.push_back(std::move(m));
  }
  for (size_t i = 1; i < data.size(); ++i) {
    auto keys = [](const std::map<GenericLabel, QEps>& m) {
      std::vector<GenericLabel> k;
      for (auto& [lab, v] : m) {
        (void)v;
        k.push_back(lab);
      }
      return k;
    };
    if (keys(data[i]) != keys(data[0])) {
      rep.error = fmt("support pattern differs between q=%d and q=%d",
                      q_list[0], q_list[i]);
      return rep;
    }
  }
  for (auto& [lab, v0] : data[0]) {
    (void)v0;
    std::vector<Rational> even, odd;
    for (size_t i = 0; i < data.size(); ++i) {
      const QEps& v = data[i].at(lab);
      even.push_back(v.is_zero() ? Rational(0) : v.a());
      odd.push_back(v.is_zero() ? Rational(0) : v.b());
    }
    auto fe = fit_parity(q_list, even, degree_bound);
    auto fo = fit_parity(q_list, odd, degree_bound);
    if (!fe || !fo) {
      rep.error = "no Laurent fit for pattern " + lab.to_string() +
                  fmt(" within degree bound %d", degree_bound);
      return rep;
    }
    LaurentFit fit;
    for (auto& [m, a] : *fe) fit.coeffs[2 * m] = a;       // a-part: v^(2m)
    for (auto& [m, a] : *fo) fit.coeffs[2 * m + 1] = a;   // b-part: v^(2m+1)
    rep.fits[lab] = std::move(fit);
  }
  rep.ok = true;
  return rep;
}

CheckReport check_interpolation(
    VerifyContext& ctx, const std::string& label,
    const std::function<HallElem(NamedElements&)>& builder,
    const std::vector<int>& q_list, int degree_bound, bool require_integral) {
  InterpolationReport ir =
      interpolate_constants(ctx, builder, q_list, degree_bound);
  CheckReport rep;
  rep.id = "interpolation";
  std::string qs;
  for (size_t i = 0; i < q_list.size(); ++i)
    qs += (i ? "|" : "") + std::to_string(q_list[i]);
  rep.params = "expr=" + label + fmt(",D=%d,", degree_bound) + "qs=" + qs;
  rep.q = 0;
  rep.convention = ctx.convention().hash();
  if (!ir.ok) {
    rep.pass = false;
    rep.discrepancy = ir.error;
    return rep;
  }
  if (require_integral)
    for (auto& [lab, fit] : ir.fits)
      if (!fit.integral()) {
        rep.pass = false;
        rep.discrepancy = "non-integral coefficient at pattern " +
                          lab.to_string() + ": " + fit.to_string();
        return rep;
      }
  rep.pass = true;
  rep.discrepancy = "0";
  return rep;
}

// ---------- suite ----------

namespace {

// the gamma/mu product expressions whose structure constants the
// interpolation checks recover, with total grade <= (3,3)
std::vector<std::pair<std::string, std::function<HallElem(NamedElements&)>>>
interpolation_family() {
  std::vector<std::pair<std::string, std::function<HallElem(NamedElements&)>>>
      out;
  auto add = [&](char fa, int ia, char fb, int ib) {
    std::string name = std::string(fa == 'g' ? "gamma" : "mu") +
                       std::to_string(ia) + "*" +
                       (fb == 'g' ? "gamma" : "mu") + std::to_string(ib);
    out.push_back({name, [=](NamedElements& el) {
                     HallElem a = fa == 'g' ? el.gamma(ia) : el.mu(ia);
                     HallElem b = fb == 'g' ? el.gamma(ib) : el.mu(ib);
                     return el.algebra().product(a, b);
                   }});
  };
  for (int i = 0; i + 0 <= 1; ++i)
    for (int j = 0; i + j <= 1; ++j) {
      add('g', i, 'g', j);  // grade (i+j+2, i+j)
      add('m', i, 'm', j);  // grade (i+j, i+j+2)
    }
  for (int i = 0; i <= 2; ++i)
    for (int j = 0; i + j <= 2; ++j) {
      add('g', i, 'm', j);  // grade (i+j+1, i+j+1)
      add('m', j, 'g', i);
    }
  out.push_back({"rho1", [](NamedElements& el) { return el.rho(1); }});
  return out;
}

}  // namespace

std::vector<CheckReport> run_suite(VerifyContext& ctx,
                                   const SuiteOptions& opt) {
  std::vector<CheckReport> out;
  for (int q : opt.qs) {
    for (int i : {0, 1}) out.push_back(check_serre(ctx, i, q));
    int nmax = opt.full ? (q == 2 ? 4 : 3) : 2;
    for (int n = 1; n <= nmax; ++n)
      out.push_back(check_rho_recursion(ctx, n, q));
    out.push_back(check_generating_series(ctx, opt.full ? 3 : 2, q));
    int klmax = opt.full ? 4 : 2;
    for (int k = 0; k <= klmax; ++k)
      for (int l = 0; k + l <= klmax; ++l)
        out.push_back(check_cross_commutator(ctx, k, l, q));
    int rmax = opt.full ? 3 : 2, smax = opt.full ? 2 : 1;
    for (int r = 1; r <= rmax; ++r)
      for (int s = 1; s <= smax; ++s)
        out.push_back(check_straightening(ctx, r, s, q));
    int dmax = opt.full ? 3 : 2;
    for (int s = 1; s <= dmax; ++s)
      for (int r = 0; r + s <= dmax; ++r)
        out.push_back(check_drinfeld(ctx, 1, s, r, q));
    for (int s = 1; s <= (opt.full ? 4 : 2); ++s)
      for (int r = 1; r + s <= (opt.full ? 4 : 2); ++r)
        out.push_back(check_drinfeld(ctx, 2, s, r, q));
    for (int r = 0; r <= 1; ++r)
      for (int s = 0; r + s <= 1; ++s)
        out.push_back(check_drinfeld(ctx, 3, r, s, q));
    for (int r = 1; r <= (opt.full ? 3 : 2); ++r)
      for (int s = 1; r + s <= (opt.full ? 3 : 2); ++s)
        out.push_back(check_drinfeld(ctx, 4, r, s, q));
    for (int s = 1; s <= (opt.full ? 4 : 2); ++s)
      for (int r = 0; r + s <= (opt.full ? 4 : 2); ++r)
        out.push_back(check_drinfeld(ctx, 5, r, s, q));
    for (int m = 1; m <= (opt.full ? 12 : 6); ++m)
      out.push_back(check_q_number_identity(m, q));
    int kn = opt.full ? (q == 2 ? 4 : 3) : 3;
    for (int n = 1; n <= kn; ++n)
      for (const Partition& lam : partitions_of(n))
        out.push_back(check_kostka(ctx, lam, q));
    for (int k = 1; k <= (opt.full ? 3 : 2); ++k)
      out.push_back(check_rho_coproduct(ctx, k, q));
    for (int n = 1; n <= (opt.full ? 3 : 2); ++n)
      out.push_back(check_regular_projection(ctx, n, q));
    for (int n = 1; n <= (opt.full ? 3 : 2); ++n)
      out.push_back(check_regular_expressibility(ctx, n, q));
    for (int k = 1; k <= (opt.full ? 3 : 2); ++k)
      out.push_back(check_transpose_invariance(k, q));
    for (int n = 1; n <= (opt.full ? 4 : 2); ++n)
      out.push_back(check_line_submodule_count(n, q));
  }
  if (opt.interpolation_qs.size() >= 2) {
    auto family = interpolation_family();
    size_t count = opt.full ? family.size() : std::min<size_t>(3, family.size());
    for (size_t i = 0; i < count; ++i)
      out.push_back(check_interpolation(ctx, family[i].first,
                                        family[i].second,
                                        opt.interpolation_qs, 2, true));
  }
  std::sort(out.begin(), out.end(), [](const CheckReport& a,
                                       const CheckReport& b) {
    if (a.id != b.id) return a.id < b.id;
    if (a.params != b.params) return a.params < b.params;
    return a.q < b.q;
  });
  return out;
}

std::vector<std::string> suite_check_ids() {
  return {"cross-commutator",       "drinfeld-1",
          "drinfeld-2",             "drinfeld-3",
          "drinfeld-4",             "drinfeld-5",
          "generating-series",      "interpolation",
          "kostka",                 "line-submodule-count",
          "q-number-identity",      "regular-expressibility",
          "regular-projection",     "rho-coproduct",
          "rho-recursion",          "serre",
          "straightening",          "transpose-invariance"};
}

bool twist_sensitive(const std::string& check_id) {
  // Reasons for the insensitive set:
  //  - q-number-identity: scalar arithmetic, no algebra element involved;
  //  - line-submodule-count, transpose-invariance: submodule combinatorics
  //    and class bijections, no products taken;
  //  - rho-coproduct: the coproduct carries its own exponent u, which the
  //    perturbation leaves alone;
  //  - regular-projection: a pointwise pairing statement, and the pairing
  //    never reads the twist;
  //  - regular-expressibility, interpolation: a bilinear twist scales each
  //    homogeneous product by one unit, which moves neither pure-orbit
  //    support, span membership, nor Laurent integrality.
  static const std::vector<std::string> robust = {
      "q-number-identity",     "line-submodule-count",
      "transpose-invariance",  "rho-coproduct",
      "regular-projection",    "regular-expressibility",
      "interpolation"};
  return std::find(robust.begin(), robust.end(), check_id) == robust.end();
}

TwistConvention perturbed_convention() {
  TwistConvention c = TwistConvention::calibrated();
  c.t[0][1] += 1;
  return c;
}

std::vector<ControlResult> run_negative_controls() {
  VerifyContext ctx(perturbed_convention());
  std::vector<CheckReport> reps;
  reps.push_back(check_serre(ctx, 0, 2));
  reps.push_back(check_rho_recursion(ctx, 2, 2));
  reps.push_back(check_generating_series(ctx, 2, 2));
  // l = 0 would restate the definition of phi, so perturb at l = 1
  reps.push_back(check_cross_commutator(ctx, 0, 1, 2));
  reps.push_back(check_straightening(ctx, 1, 1, 2));
  reps.push_back(check_drinfeld(ctx, 1, 1, 0, 2));
  reps.push_back(check_drinfeld(ctx, 2, 1, 1, 2));
  reps.push_back(check_drinfeld(ctx, 3, 0, 0, 2));
  reps.push_back(check_drinfeld(ctx, 4, 1, 1, 2));
  reps.push_back(check_drinfeld(ctx, 5, 1, 1, 2));
  reps.push_back(check_kostka(ctx, {1, 1}, 2));
  reps.push_back(check_q_number_identity(3, 2));
  reps.push_back(check_rho_coproduct(ctx, 2, 2));
  reps.push_back(check_regular_projection(ctx, 2, 2));
  reps.push_back(check_regular_expressibility(ctx, 2, 2));
  reps.push_back(check_transpose_invariance(2, 2));
  reps.push_back(check_line_submodule_count(2, 2));
  auto family = interpolation_family();
  for (auto& [name, builder] : family) {
    if (name != "gamma0*mu0") continue;
    reps.push_back(
        check_interpolation(ctx, name, builder, {2, 3, 5, 7}, 2, true));
  }
  std::vector<ControlResult> out;
  for (CheckReport& r : reps) {
    ControlResult c;
    c.expect_fail = twist_sensitive(r.id);
    c.ok = r.pass == !c.expect_fail;
    c.report = std::move(r);
    out.push_back(std::move(c));
  }
  return out;
}

}  // namespace kron

#include "kron/rep.hpp"

#include <algorithm>
#include <cassert>
#include <climits>
#include <sstream>

namespace kron {

// ---------- Rep ----------

Rep Rep::direct_sum(const Rep& o) const {
  assert(q == o.q);
  Rep r = zero_rep(q, d0 + o.d0, d1 + o.d1);
  r.x1.set_block(0, 0, x1);
  r.x1.set_block(d1, d0, o.x1);
  r.x2.set_block(0, 0, x2);
  r.x2.set_block(d1, d0, o.x2);
  return r;
}

// ---------- IsoClass ----------

std::pair<int, int> IsoClass::dim() const {
  int a = 0, b = 0;
  for (auto& [k, m] : preproj) {
    a += (k - 1) * m;
    b += k * m;
  }
  for (auto& [k, m] : preinj) {
    a += k * m;
    b += (k - 1) * m;
  }
  for (auto& rb : regular) {
    int w = rb.point.degree() * partition_weight(rb.lambda);
    a += w;
    b += w;
  }
  return {a, b};
}

bool IsoClass::operator<(const IsoClass& o) const {
  if (preproj != o.preproj) return preproj < o.preproj;
  if (preinj != o.preinj) return preinj < o.preinj;
  return regular < o.regular;
}

std::string IsoClass::to_string() const {
  if (is_zero()) return "0";
  std::ostringstream os;
  bool first = true;
  auto sep = [&]() {
    if (!first) os << " + ";
    first = false;
  };
  for (auto& [k, m] : preproj) {
    sep();
    os << "P" << k;
    if (m > 1) os << "^" << m;
  }
  for (auto& rb : regular) {
    sep();
    os << "R(" << point_to_string(rb.point) << ":[";
    for (size_t i = 0; i < rb.lambda.size(); ++i)
      os << (i ? "," : "") << rb.lambda[i];
    os << "])";
  }
  for (auto& [k, m] : preinj) {
    sep();
    os << "I" << k;
    if (m > 1) os << "^" << m;
  }
  return os.str();
}

IsoClass zero_class(int q) {
  IsoClass c;
  c.q = q;
  return c;
}

IsoClass preproj_class(int q, int k, int mult) {
  assert(k >= 1 && mult >= 1);
  IsoClass c;
  c.q = q;
  c.preproj.emplace_back(k, mult);
  return c;
}

IsoClass preinj_class(int q, int k, int mult) {
  assert(k >= 1 && mult >= 1);
  IsoClass c;
  c.q = q;
  c.preinj.emplace_back(k, mult);
  return c;
}

IsoClass regular_class(int q, const ClosedPoint& pt, Partition lambda) {
  assert(!lambda.empty());
  IsoClass c;
  c.q = q;
  c.regular.push_back({pt, std::move(lambda)});
  return c;
}

namespace {

std::vector<std::pair<int, int>> merge_strings(
    std::vector<std::pair<int, int>> v) {
  std::sort(v.begin(), v.end());
  std::vector<std::pair<int, int>> out;
  for (auto& [k, m] : v) {
    assert(k >= 1 && m >= 1);
    if (!out.empty() && out.back().first == k)
      out.back().second += m;
    else
      out.emplace_back(k, m);
  }
  return out;
}

Partition merge_partitions(Partition a, const Partition& b) {
  a.insert(a.end(), b.begin(), b.end());
  std::sort(a.rbegin(), a.rend());
  return a;
}

}  // namespace

IsoClass make_class(int q, std::vector<std::pair<int, int>> preproj,
                    std::vector<std::pair<int, int>> preinj,
                    std::vector<RegBlock> regular) {
  IsoClass c;
  c.q = q;
  c.preproj = merge_strings(std::move(preproj));
  c.preinj = merge_strings(std::move(preinj));
  std::sort(regular.begin(), regular.end());
  for (auto& rb : regular) {
    assert(!rb.lambda.empty());
    std::sort(rb.lambda.rbegin(), rb.lambda.rend());
    assert(rb.lambda.back() >= 1);
    if (!c.regular.empty() && c.regular.back().point == rb.point)
      c.regular.back().lambda = merge_partitions(c.regular.back().lambda, rb.lambda);
    else
      c.regular.push_back(rb);
  }
  return c;
}

IsoClass direct_sum(const IsoClass& a, const IsoClass& b) {
  assert(a.q == b.q);
  auto pp = a.preproj;
  pp.insert(pp.end(), b.preproj.begin(), b.preproj.end());
  auto pi = a.preinj;
  pi.insert(pi.end(), b.preinj.begin(), b.preinj.end());
  auto rg = a.regular;
  rg.insert(rg.end(), b.regular.begin(), b.regular.end());
  return make_class(a.q, std::move(pp), std::move(pi), std::move(rg));
}

// ---------- representatives ----------

namespace {

Rep preproj_block(int q, int k) {
  Rep r = Rep::zero_rep(q, k - 1, k);
  for (int i = 0; i < k - 1; ++i) {
    r.x1.set(i, i, 1);
    r.x2.set(i + 1, i, 1);
  }
  return r;
}

Rep preinj_block(int q, int k) {
  Rep r = Rep::zero_rep(q, k, k - 1);
  for (int i = 0; i < k - 1; ++i) {
    r.x1.set(i, i, 1);
    r.x2.set(i, i + 1, 1);
  }
  return r;
}

Rep regular_block(int q, const ClosedPoint& pt, int m) {
  if (pt.infinity) {
    // nilpotent Jordan block against the identity: the pencil determinant is
    // the pure power of the coordinate at infinity
    Rep r = Rep::zero_rep(q, m, m);
    for (int i = 0; i < m; ++i) r.x2.set(i, i, 1);
    for (int i = 0; i + 1 < m; ++i) r.x1.set(i + 1, i, 1);
    return r;
  }
  PolyFq f = pt.minpoly.pow(m);
  int n = f.degree();
  Rep r = Rep::zero_rep(q, n, n);
  for (int i = 0; i < n; ++i) r.x1.set(i, i, 1);
  // minus the companion matrix of f, so det(L x1 + M x2) = M^n f(L / M)
  for (int i = 0; i + 1 < n; ++i) r.x2.set(i + 1, i, -1);
  for (int i = 0; i < n; ++i) r.x2.set(i, n - 1, f.c[size_t(i)]);
  return r;
}

}  // namespace

Rep representative(const IsoClass& c) {
  Rep r = Rep::zero_rep(c.q, 0, 0);
  for (auto& [k, m] : c.preproj)
    for (int i = 0; i < m; ++i) r = r.direct_sum(preproj_block(c.q, k));
  for (auto& [k, m] : c.preinj)
    for (int i = 0; i < m; ++i) r = r.direct_sum(preinj_block(c.q, k));
  for (auto& rb : c.regular)
    for (int part : rb.lambda) r = r.direct_sum(regular_block(c.q, rb.point, part));
  return r;
}

// ---------- invariants ----------

int hom_dim(const Rep& A, const Rep& B) {
  assert(A.q == B.q);
  int a0 = A.d0, a1 = A.d1, b0 = B.d0, b1 = B.d1;
  int vars = b0 * a0 + b1 * a1;
  int rows = 2 * b1 * a0;
  if (vars == 0) return 0;
  if (rows == 0) return vars;
  MatrixFq M(A.q, rows, vars);
  int off = b0 * a0;
  int row = 0;
  for (int t = 0; t < 2; ++t) {
    const MatrixFq& xA = t ? A.x2 : A.x1;
    const MatrixFq& xB = t ? B.x2 : B.x1;
    for (int r = 0; r < b1; ++r)
      for (int c = 0; c < a0; ++c) {
        // f1 xA - xB f0 = 0 at entry (r, c); f0 vars at k + b0*c, f1 at
        // off + r + b1*j
        for (int j = 0; j < a1; ++j)
          if (xA.at(j, c)) M.set(row, off + r + b1 * j, xA.at(j, c));
        for (int k = 0; k < b0; ++k)
          if (xB.at(r, k)) M.set(row, k + b0 * c, -int(xB.at(r, k)));
        ++row;
      }
  }
  return vars - M.rank();
}

int hom_dim(const IsoClass& a, const IsoClass& b) {
  return hom_dim(representative(a), representative(b));
}

long long euler_form(std::pair<int, int> a, std::pair<int, int> b) {
  return 1LL * a.first * b.first + 1LL * a.second * b.second -
         2LL * a.first * b.second;
}

int ext_dim(const IsoClass& a, const IsoClass& b) {
  long long e = hom_dim(a, b) - euler_form(a.dim(), b.dim());
  assert(e >= 0 && e <= INT_MAX);
  return int(e);
}

BigInt group_order(int q, int d0, int d1) {
  return gl_order(d0, BigInt(q)) * gl_order(d1, BigInt(q));
}

BigInt aut_order(const IsoClass& c) {
  Rep r = representative(c);
  long long dim_end = hom_dim(r, r);
  long long s = 0;
  BigInt units = 1;
  auto add_summand = [&](int mult, int e) {
    s += 1LL * mult * mult * e;
    BigInt Q = 1;
    for (int i = 0; i < e; ++i) Q *= c.q;
    units *= gl_order(mult, Q);
  };
  for (auto& [k, m] : c.preproj) {
    (void)k;
    add_summand(m, 1);
  }
  for (auto& [k, m] : c.preinj) {
    (void)k;
    add_summand(m, 1);
  }
  for (auto& rb : c.regular) {
    size_t i = 0;
    while (i < rb.lambda.size()) {
      size_t j = i;
      while (j < rb.lambda.size() && rb.lambda[j] == rb.lambda[i]) ++j;
      add_summand(int(j - i), rb.point.degree());
      i = j;
    }
  }
  assert(dim_end >= s);
  BigInt out = units;
  for (long long i = 0; i < dim_end - s; ++i) out *= c.q;
  return out;
}

std::vector<uint8_t> pencil_det(const Rep& r) {
  assert(r.d0 == r.d1);
  int n = r.d0;
  int p = r.q;
  if (n == 0) return {1};
  assert(n <= 20);
  // det(L x1 + x2) by expansion over rows with memoization on the set of
  // unused columns; entries are linear polynomials, so this stays exact
  std::vector<PolyFq> memo(size_t(1) << n);
  std::vector<bool> have(size_t(1) << n, false);
  memo[0] = PolyFq::constant(p, 1);
  have[0] = true;
  std::function<const PolyFq&(unsigned)> det = [&](unsigned S) -> const PolyFq& {
    if (have[S]) return memo[S];
    int row = n - __builtin_popcount(S);
    PolyFq acc = PolyFq::zero(p);
    int sign = 1;
    for (int j = 0; j < n; ++j) {
      if (!(S & (1u << j))) continue;
      PolyFq entry = PolyFq::from_coeffs(p, {int(r.x2.at(row, j)), int(r.x1.at(row, j))});
      if (!entry.is_zero()) {
        PolyFq term = entry.mul(det(S & ~(1u << j)));
        acc = (sign > 0) ? acc.add(term) : acc.sub(term);
      }
      sign = -sign;
    }
    memo[S] = acc;
    have[S] = true;
    return memo[S];
  };
  const PolyFq& g = det((n == 32 ? ~0u : (1u << n) - 1));
  std::vector<uint8_t> out(size_t(n) + 1, 0);
  for (int i = 0; i <= g.degree(); ++i) out[size_t(i)] = g.c[size_t(i)];
  return out;
}

// ---------- enumeration ----------

namespace {

void enum_regular_assignments(const std::vector<ClosedPoint>& pts, size_t i,
                              int rem, std::vector<RegBlock>& cur,
                              const std::function<void()>& emit) {
  if (rem == 0) {
    emit();
    return;
  }
  for (size_t j = i; j < pts.size(); ++j) {
    int d = pts[j].degree();
    if (d > rem) break;  // points are sorted by nondecreasing degree
    for (int w = 1; w * d <= rem; ++w)
      for (auto& lam : partitions_of(w)) {
        cur.push_back({pts[j], lam});
        enum_regular_assignments(pts, j + 1, rem - w * d, cur, emit);
        cur.pop_back();
      }
  }
}

// Multiplicities of the string modules on one side; preprojective strings
// consume (k-1, k), preinjective ones (k, k-1).
void enum_side(bool proj, int k, int rem0, int rem1,
               std::vector<std::pair<int, int>>& cur,
               const std::function<void(int, int)>& done) {
  if (k == 0) {
    done(rem0, rem1);
    return;
  }
  int c0 = proj ? k - 1 : k;
  int c1 = proj ? k : k - 1;
  int maxm = INT_MAX;
  if (c0 > 0) maxm = rem0 / c0;
  if (c1 > 0) maxm = std::min(maxm, rem1 / c1);
  for (int m = 0; m <= maxm; ++m) {
    if (m > 0) cur.emplace_back(k, m);
    enum_side(proj, k - 1, rem0 - m * c0, rem1 - m * c1, cur, done);
    if (m > 0) cur.pop_back();
  }
}

}  // namespace

std::vector<IsoClass> classes_of_dim(int q, int d0, int d1) {
  std::vector<IsoClass> out;
  std::vector<std::pair<int, int>> curp, curi;
  int kp = std::min(d1, d0 + 1);
  enum_side(true, kp, d0, d1, curp, [&](int r0, int r1) {
    int ki = std::min(r0, r1 + 1);
    enum_side(false, ki, r0, r1, curi, [&](int s0, int s1) {
      if (s0 != s1) return;
      auto pts = closed_points(q, s0);
      std::vector<RegBlock> curr;
      enum_regular_assignments(pts, 0, s0, curr, [&]() {
        out.push_back(make_class(q, curp, curi, curr));
      });
    });
  });
  std::sort(out.begin(), out.end());
  return out;
}

std::pair<int, int> CBIndex::dim() const {
  int d0 = 0, d1 = 0;
  for (auto& [k, m] : preproj) {
    d0 += m * (k - 1);
    d1 += m * k;
  }
  for (auto& [k, m] : preinj) {
    d0 += m * k;
    d1 += m * (k - 1);
  }
  for (int part : lambda) {
    d0 += part;
    d1 += part;
  }
  return {d0, d1};
}

bool CBIndex::operator<(const CBIndex& o) const {
  if (preproj != o.preproj) return preproj < o.preproj;
  if (preinj != o.preinj) return preinj < o.preinj;
  return lambda < o.lambda;
}

std::string CBIndex::to_string() const {
  std::ostringstream os;
  bool first = true;
  auto sep = [&]() {
    if (!first) os << " + ";
    first = false;
  };
  for (auto& [k, m] : preproj) {
    sep();
    os << "P" << k;
    if (m > 1) os << "^" << m;
  }
  if (!lambda.empty()) {
    sep();
    os << "[";
    for (size_t i = 0; i < lambda.size(); ++i)
      os << (i ? "," : "") << lambda[i];
    os << "]";
  }
  for (auto& [k, m] : preinj) {
    sep();
    os << "I" << k;
    if (m > 1) os << "^" << m;
  }
  if (first) os << "0";
  return os.str();
}

std::vector<CBIndex> enumerate_cb_index(std::pair<int, int> d, int q) {
  (void)q;  // the index set is the same over every field
  std::vector<CBIndex> out;
  std::vector<std::pair<int, int>> curp, curi;
  int kp = std::min(d.second, d.first + 1);
  enum_side(true, kp, d.first, d.second, curp, [&](int r0, int r1) {
    int ki = std::min(r0, r1 + 1);
    enum_side(false, ki, r0, r1, curi, [&](int s0, int s1) {
      if (s0 != s1) return;
      for (auto& lam : partitions_of(s0)) {
        CBIndex ix;
        // enum_side walks k downward, the stored order is ascending
        ix.preproj.assign(curp.rbegin(), curp.rend());
        ix.preinj.assign(curi.rbegin(), curi.rend());
        ix.lambda = lam;
        out.push_back(std::move(ix));
      }
    });
  });
  std::sort(out.begin(), out.end());
  return out;
}

// ---------- ClassTable ----------

ClassTable::ClassTable(int q, int dmax0, int dmax1)
    : q_(q), dmax0_(dmax0), dmax1_(dmax1) {
  for (int a = 0; a <= dmax0; ++a)
    for (int b = 0; b <= dmax1; ++b) {
      auto cs = classes_of_dim(q, a, b);
      std::vector<int> ids;
      for (auto& c : cs) {
        ids.push_back(int(all_.size()));
        index_[c] = int(all_.size());
        all_.push_back(std::move(c));
      }
      grade_index_[{a, b}] = std::move(ids);
    }

  reps_.resize(all_.size());
  for (size_t i = 0; i < all_.size(); ++i) reps_[i] = representative(all_[i]);

  // probes: the indecomposable classes in the box
  for (size_t i = 0; i < all_.size(); ++i) {
    const IsoClass& c = all_[i];
    int pieces = 0;
    for (auto& [k, m] : c.preproj) {
      (void)k;
      pieces += m;
    }
    for (auto& [k, m] : c.preinj) {
      (void)k;
      pieces += m;
    }
    for (auto& rb : c.regular) pieces += int(rb.lambda.size());
    if (pieces == 1) probe_ids_.push_back(int(i));
  }

  fingerprints_.assign(all_.size(), {});
  int n = int(all_.size());
#ifdef KRON_HAVE_OPENMP
#pragma omp parallel for schedule(dynamic)
#endif
  for (int i = 0; i < n; ++i) {
    std::vector<int> fp(probe_ids_.size());
    for (size_t pjj = 0; pjj < probe_ids_.size(); ++pjj)
      fp[pjj] = hom_dim(reps_[size_t(probe_ids_[pjj])], reps_[size_t(i)]);
    fingerprints_[size_t(i)] = std::move(fp);
  }

  // fingerprints must separate classes of equal dimension
  std::map<std::pair<std::pair<int, int>, std::vector<int>>, int> seen;
  for (int i = 0; i < n; ++i) {
    auto key = std::make_pair(all_[size_t(i)].dim(), fingerprints_[size_t(i)]);
    auto [it, fresh] = seen.emplace(key, i);
    if (!fresh)
      throw AmbiguousFingerprint("classes " + all_[size_t(it->second)].to_string() +
                                 " and " + all_[size_t(i)].to_string() +
                                 " share a Hom fingerprint");
  }

  // cheap-invariant buckets with greedily chosen discriminating probes
  for (int i = 0; i < n; ++i)
    buckets_[bucket_key(reps_[size_t(i)])].members.push_back(i);
  for (auto& [key, bucket] : buckets_) {
    (void)key;
    if (bucket.members.size() <= 1) continue;
    std::vector<std::vector<int>> groups = {bucket.members};
    while (true) {
      bool split_needed = false;
      for (auto& g : groups)
        if (g.size() > 1) split_needed = true;
      if (!split_needed) break;
      int best_probe = -1;
      size_t best_score = SIZE_MAX;
      for (size_t pjj = 0; pjj < probe_ids_.size(); ++pjj) {
        size_t worst = 0;
        bool splits_any = false;
        for (auto& g : groups) {
          std::map<int, size_t> counts;
          for (int m : g) ++counts[fingerprints_[size_t(m)][pjj]];
          if (g.size() > 1 && counts.size() > 1) splits_any = true;
          for (auto& [v, cnt] : counts) {
            (void)v;
            worst = std::max(worst, cnt);
          }
        }
        // only a probe that makes progress may be chosen, otherwise a tie on
        // the score could re-select an exhausted probe forever
        if (splits_any && worst < best_score) {
          best_score = worst;
          best_probe = int(pjj);
        }
      }
      assert(best_probe >= 0);
      bucket.discriminators.push_back(best_probe);
      std::vector<std::vector<int>> next;
      for (auto& g : groups) {
        std::map<int, std::vector<int>> parts;
        for (int m : g) parts[fingerprints_[size_t(m)][size_t(best_probe)]].push_back(m);
        for (auto& [v, sub] : parts) {
          (void)v;
          next.push_back(std::move(sub));
        }
      }
      groups = std::move(next);
      // the full fingerprint separates everything, so this terminates
      assert(bucket.discriminators.size() <= probe_ids_.size());
    }
  }
}

std::vector<int> ClassTable::bucket_key(const Rep& r) const {
  // dimensions plus the rank of the pencil at every rational point
  std::vector<int> key = {r.d0, r.d1, r.x1.rank(), r.x2.rank()};
  for (int a = 1; a < q_; ++a) key.push_back(r.x1.scaled(a).add(r.x2).rank());
  return key;
}

std::vector<int> ClassTable::indices_at(int d0, int d1) const {
  auto it = grade_index_.find({d0, d1});
  if (it == grade_index_.end()) return {};
  return it->second;
}

int ClassTable::index_of(const IsoClass& c) const {
  auto it = index_.find(c);
  return it == index_.end() ? -1 : it->second;
}

int ClassTable::classify_index(const Rep& r) const {
  auto it = buckets_.find(bucket_key(r));
  if (it == buckets_.end())
    throw std::runtime_error("representation outside the class table");
  const Bucket& bucket = it->second;
  if (bucket.members.size() == 1) return bucket.members[0];
  std::vector<int> cand = bucket.members;
  for (int pos : bucket.discriminators) {
    int val = hom_dim(rep_of(probe_ids_[size_t(pos)]), r);
    std::vector<int> keep;
    for (int m : cand)
      if (fingerprints_[size_t(m)][size_t(pos)] == val) keep.push_back(m);
    cand = std::move(keep);
    if (cand.size() <= 1) break;
  }
  if (cand.size() != 1)
    throw std::runtime_error("classification failed to isolate a class");
  return cand[0];
}

// ---------- stable subrepresentations ----------

void for_each_stable_sub(
    const Rep& V, int c0, int c1,
    const std::function<void(const MatrixFq& B0, const MatrixFq& B1)>& fn) {
  if (c0 > V.d0 || c1 > V.d1 || c0 < 0 || c1 < 0) return;
  int p = V.q;
  for_each_subspace(p, V.d1, c1, [&](const MatrixFq& B1) {
    // reduction map E: v -> v - sum_r v[piv_r] B1_r kills exactly the span
    MatrixFq E = MatrixFq::identity(p, V.d1);
    for (int r = 0; r < c1; ++r) {
      int piv = -1;
      for (int j = 0; j < V.d1; ++j)
        if (B1.at(r, j)) {
          piv = j;
          break;
        }
      for (int j = 0; j < V.d1; ++j)
        E.set(j, piv, int(E.at(j, piv)) - int(B1.at(r, j)));
    }
    MatrixFq C(p, 2 * V.d1, V.d0);
    C.set_block(0, 0, E.mul(V.x1));
    C.set_block(V.d1, 0, E.mul(V.x2));
    MatrixFq K = C.kernel_basis();
    if (K.rows() < c0) return;
    for_each_subspace(p, K.rows(), c0, [&](const MatrixFq& S) {
      MatrixFq B0 = S.mul(K);
      fn(B0, B1);
    });
  });
}

namespace {

std::vector<int> pivot_columns(const MatrixFq& B) {
  std::vector<int> piv;
  for (int r = 0; r < B.rows(); ++r)
    for (int j = 0; j < B.cols(); ++j)
      if (B.at(r, j)) {
        piv.push_back(j);
        break;
      }
  return piv;
}

// coordinates of v in the row space of an RREF basis (assumes membership)
std::vector<uint8_t> rref_coords(const std::vector<int>& piv,
                                 const std::vector<uint8_t>& v) {
  std::vector<uint8_t> coords(piv.size());
  for (size_t r = 0; r < piv.size(); ++r) coords[r] = v[size_t(piv[r])];
  return coords;
}

// image of v in the quotient by the row space: reduce, then keep non-pivots
std::vector<uint8_t> quot_coords(const MatrixFq& B, const std::vector<int>& piv,
                                 const std::vector<int>& nonpiv,
                                 std::vector<uint8_t> v, int p) {
  for (size_t r = 0; r < piv.size(); ++r) {
    int f = v[size_t(piv[r])];
    if (!f) continue;
    for (int j = 0; j < B.cols(); ++j)
      v[size_t(j)] = uint8_t((v[size_t(j)] + (p - f) * B.at(int(r), j)) % p);
  }
  std::vector<uint8_t> out(nonpiv.size());
  for (size_t i = 0; i < nonpiv.size(); ++i) out[i] = v[size_t(nonpiv[i])];
  return out;
}

std::vector<int> complement(const std::vector<int>& piv, int n) {
  std::vector<bool> is(size_t(n), false);
  for (int c : piv) is[size_t(c)] = true;
  std::vector<int> out;
  for (int j = 0; j < n; ++j)
    if (!is[size_t(j)]) out.push_back(j);
  return out;
}

}  // namespace

Rep sub_rep(const Rep& V, const MatrixFq& B0, const MatrixFq& B1) {
  int c0 = B0.rows(), c1 = B1.rows();
  MatrixFq R1 = B1.row_space_canonical();
  auto piv1 = pivot_columns(R1);
  Rep s = Rep::zero_rep(V.q, c0, c1);
  for (int t = 0; t < 2; ++t) {
    const MatrixFq& x = t ? V.x2 : V.x1;
    MatrixFq& sx = t ? s.x2 : s.x1;
    for (int j = 0; j < c0; ++j) {
      std::vector<uint8_t> b(size_t(V.d0));
      for (int i = 0; i < V.d0; ++i) b[size_t(i)] = B0.at(j, i);
      auto w = x.apply(b);
      auto coords = rref_coords(piv1, w);
      for (int r = 0; r < c1; ++r) sx.set(r, j, coords[size_t(r)]);
    }
  }
  return s;
}

Rep quot_rep(const Rep& V, const MatrixFq& B0, const MatrixFq& B1) {
  MatrixFq R0 = B0.row_space_canonical();
  MatrixFq R1 = B1.row_space_canonical();
  auto piv0 = pivot_columns(R0);
  auto piv1 = pivot_columns(R1);
  auto non0 = complement(piv0, V.d0);
  auto non1 = complement(piv1, V.d1);
  Rep qr = Rep::zero_rep(V.q, int(non0.size()), int(non1.size()));
  for (int t = 0; t < 2; ++t) {
    const MatrixFq& x = t ? V.x2 : V.x1;
    MatrixFq& qx = t ? qr.x2 : qr.x1;
    for (size_t j = 0; j < non0.size(); ++j) {
      std::vector<uint8_t> w(size_t(V.d1));
      for (int i = 0; i < V.d1; ++i) w[size_t(i)] = x.at(i, non0[j]);
      auto coords = quot_coords(R1, piv1, non1, std::move(w), V.q);
      for (size_t r = 0; r < non1.size(); ++r) qx.set(int(r), int(j), coords[r]);
    }
  }
  return qr;
}

// ---------- functors ----------

Rep transpose_rep(const Rep& r) {
  return Rep{r.q, r.d1, r.d0, r.x1.transpose(), r.x2.transpose()};
}

IsoClass transpose_dual(const IsoClass& c) {
  IsoClass d = c;
  std::swap(d.preproj, d.preinj);
  return d;
}

std::optional<Rep> reflect_sink(const Rep& plus) {
  int p = plus.q, d0 = plus.d0, d1 = plus.d1;
  MatrixFq C(p, d1, 2 * d0);
  C.set_block(0, 0, plus.x1);
  C.set_block(0, d0, plus.x2);
  if (C.rank() != d1) return std::nullopt;
  MatrixFq K = C.kernel_basis();  // (2 d0 - d1) x 2 d0
  int nk = K.rows();
  Rep out = Rep::zero_rep(p, nk, d0);
  for (int i = 0; i < d0; ++i)
    for (int r = 0; r < nk; ++r) {
      out.x1.set(i, r, K.at(r, i));
      out.x2.set(i, r, K.at(r, d0 + i));
    }
  return out;
}

std::optional<Rep> reflect_source(const Rep& m) {
  int p = m.q, a = m.d0, b = m.d1;
  MatrixFq T(p, 2 * b, a);
  T.set_block(0, 0, m.x1);
  T.set_block(b, 0, m.x2);
  if (T.rank() != a) return std::nullopt;
  MatrixFq B = T.transpose().row_space_canonical();  // a x 2b
  auto piv = pivot_columns(B);
  auto non = complement(piv, 2 * b);
  Rep out = Rep::zero_rep(p, b, int(non.size()));
  for (int t = 0; t < 2; ++t) {
    MatrixFq& x = t ? out.x2 : out.x1;
    for (int j = 0; j < b; ++j) {
      std::vector<uint8_t> e(size_t(2 * b), 0);
      e[size_t(t * b + j)] = 1;
      auto coords = quot_coords(B, piv, non, std::move(e), p);
      for (size_t r = 0; r < non.size(); ++r) x.set(int(r), j, coords[r]);
    }
  }
  return out;
}

}  // namespace kron

#include "kron/gf.hpp"

#include <algorithm>
#include <cassert>
#include <map>
#include <mutex>
#include <sstream>

namespace kron {

int fp_inv(int x, int p) {
  x = fp_norm(x, p);
  assert(x != 0);
  return fp_pow(x, p - 2, p);
}

int fp_pow(int x, long long e, int p) {
  x = fp_norm(x, p);
  long long r = 1, b = x;
  while (e > 0) {
    if (e & 1) r = r * b % p;
    b = b * b % p;
    e >>= 1;
  }
  return int(r);
}

MatrixFq MatrixFq::identity(int p, int n) {
  MatrixFq m(p, n, n);
  for (int i = 0; i < n; ++i) m.set(i, i, 1);
  return m;
}

MatrixFq MatrixFq::from_rows(int p, const std::vector<std::vector<int>>& rows) {
  int nr = int(rows.size());
  int nc = nr ? int(rows[0].size()) : 0;
  MatrixFq m(p, nr, nc);
  for (int i = 0; i < nr; ++i) {
    assert(int(rows[i].size()) == nc);
    for (int j = 0; j < nc; ++j) m.set(i, j, rows[i][j]);
  }
  return m;
}

MatrixFq MatrixFq::mul(const MatrixFq& o) const {
  assert(p_ == o.p_ && cols_ == o.rows_);
  MatrixFq r(p_, rows_, o.cols_);
  for (int i = 0; i < rows_; ++i)
    for (int k = 0; k < cols_; ++k) {
      int aik = at(i, k);
      if (!aik) continue;
      for (int j = 0; j < o.cols_; ++j)
        r.a_[size_t(i) * o.cols_ + j] =
            uint8_t((r.a_[size_t(i) * o.cols_ + j] + aik * o.at(k, j)) % p_);
    }
  return r;
}

MatrixFq MatrixFq::add(const MatrixFq& o) const {
  assert(p_ == o.p_ && rows_ == o.rows_ && cols_ == o.cols_);
  MatrixFq r(p_, rows_, cols_);
  for (size_t i = 0; i < a_.size(); ++i) r.a_[i] = uint8_t((a_[i] + o.a_[i]) % p_);
  return r;
}

MatrixFq MatrixFq::sub(const MatrixFq& o) const {
  assert(p_ == o.p_ && rows_ == o.rows_ && cols_ == o.cols_);
  MatrixFq r(p_, rows_, cols_);
  for (size_t i = 0; i < a_.size(); ++i)
    r.a_[i] = uint8_t((a_[i] + p_ - o.a_[i]) % p_);
  return r;
}

MatrixFq MatrixFq::scaled(int c) const {
  c = fp_norm(c, p_);
  MatrixFq r(p_, rows_, cols_);
  for (size_t i = 0; i < a_.size(); ++i) r.a_[i] = uint8_t(a_[i] * c % p_);
  return r;
}

MatrixFq MatrixFq::transpose() const {
  MatrixFq r(p_, cols_, rows_);
  for (int i = 0; i < rows_; ++i)
    for (int j = 0; j < cols_; ++j) r.set(j, i, at(i, j));
  return r;
}

void MatrixFq::set_block(int r0, int c0, const MatrixFq& m) {
  assert(r0 + m.rows_ <= rows_ && c0 + m.cols_ <= cols_);
  for (int i = 0; i < m.rows_; ++i)
    for (int j = 0; j < m.cols_; ++j) set(r0 + i, c0 + j, m.at(i, j));
}

MatrixFq MatrixFq::submatrix(int r0, int c0, int nr, int nc) const {
  assert(r0 + nr <= rows_ && c0 + nc <= cols_);
  MatrixFq r(p_, nr, nc);
  for (int i = 0; i < nr; ++i)
    for (int j = 0; j < nc; ++j) r.set(i, j, at(r0 + i, c0 + j));
  return r;
}

std::vector<int> MatrixFq::rref_in_place() {
  std::vector<int> pivots;
  int row = 0;
  for (int col = 0; col < cols_ && row < rows_; ++col) {
    int piv = -1;
    for (int i = row; i < rows_; ++i)
      if (at(i, col)) {
        piv = i;
        break;
      }
    if (piv < 0) continue;
    if (piv != row)
      for (int j = 0; j < cols_; ++j) {
        uint8_t t = a_[size_t(piv) * cols_ + j];
        a_[size_t(piv) * cols_ + j] = a_[size_t(row) * cols_ + j];
        a_[size_t(row) * cols_ + j] = t;
      }
    int inv = fp_inv(at(row, col), p_);
    if (inv != 1)
      for (int j = 0; j < cols_; ++j)
        a_[size_t(row) * cols_ + j] = uint8_t(a_[size_t(row) * cols_ + j] * inv % p_);
    for (int i = 0; i < rows_; ++i) {
      if (i == row) continue;
      int f = at(i, col);
      if (!f) continue;
      for (int j = 0; j < cols_; ++j)
        a_[size_t(i) * cols_ + j] = uint8_t(
            (a_[size_t(i) * cols_ + j] + (p_ - f) * a_[size_t(row) * cols_ + j]) % p_);
    }
    pivots.push_back(col);
    ++row;
  }
  return pivots;
}

int MatrixFq::rank() const {
  MatrixFq m = *this;
  return int(m.rref_in_place().size());
}

MatrixFq MatrixFq::kernel_basis() const {
  MatrixFq m = *this;
  std::vector<int> pivots = m.rref_in_place();
  std::vector<bool> is_piv(cols_, false);
  for (int c : pivots) is_piv[c] = true;
  std::vector<int> free_cols;
  for (int j = 0; j < cols_; ++j)
    if (!is_piv[j]) free_cols.push_back(j);
  MatrixFq k(p_, int(free_cols.size()), cols_);
  for (size_t fi = 0; fi < free_cols.size(); ++fi) {
    int f = free_cols[fi];
    k.set(int(fi), f, 1);
    for (size_t r = 0; r < pivots.size(); ++r)
      k.set(int(fi), pivots[r], p_ - m.at(int(r), f));
  }
  return k;
}

std::optional<std::vector<uint8_t>> MatrixFq::solve(
    const std::vector<uint8_t>& b) const {
  assert(int(b.size()) == rows_);
  MatrixFq aug(p_, rows_, cols_ + 1);
  for (int i = 0; i < rows_; ++i) {
    for (int j = 0; j < cols_; ++j) aug.set(i, j, at(i, j));
    aug.set(i, cols_, b[i]);
  }
  std::vector<int> pivots = aug.rref_in_place();
  if (!pivots.empty() && pivots.back() == cols_) return std::nullopt;
  std::vector<uint8_t> x(cols_, 0);
  for (size_t r = 0; r < pivots.size(); ++r) x[pivots[r]] = aug.at(int(r), cols_);
  return x;
}

std::optional<MatrixFq> MatrixFq::inverse() const {
  assert(rows_ == cols_);
  MatrixFq aug(p_, rows_, 2 * cols_);
  for (int i = 0; i < rows_; ++i) {
    for (int j = 0; j < cols_; ++j) aug.set(i, j, at(i, j));
    aug.set(i, cols_ + i, 1);
  }
  std::vector<int> pivots = aug.rref_in_place();
  if (int(pivots.size()) != rows_ || (rows_ && pivots.back() != cols_ - 1))
    return std::nullopt;
  return aug.submatrix(0, cols_, rows_, cols_);
}

MatrixFq MatrixFq::row_space_canonical() const {
  MatrixFq m = *this;
  std::vector<int> pivots = m.rref_in_place();
  return m.submatrix(0, 0, int(pivots.size()), cols_);
}

std::vector<uint8_t> MatrixFq::apply(const std::vector<uint8_t>& v) const {
  assert(int(v.size()) == cols_);
  std::vector<uint8_t> r(rows_, 0);
  for (int i = 0; i < rows_; ++i) {
    int s = 0;
    for (int j = 0; j < cols_; ++j) s += at(i, j) * v[j];
    r[i] = uint8_t(s % p_);
  }
  return r;
}

bool MatrixFq::is_zero() const {
  for (uint8_t v : a_)
    if (v) return false;
  return true;
}

std::string MatrixFq::to_string() const {
  std::ostringstream os;
  os << rows_ << "x" << cols_ << " mod " << p_ << "\n";
  for (int i = 0; i < rows_; ++i) {
    for (int j = 0; j < cols_; ++j) os << int(at(i, j)) << (j + 1 < cols_ ? " " : "");
    os << "\n";
  }
  return os.str();
}

bool MatrixFq::operator<(const MatrixFq& o) const {
  if (rows_ != o.rows_) return rows_ < o.rows_;
  if (cols_ != o.cols_) return cols_ < o.cols_;
  return a_ < o.a_;
}

size_t MatrixFqHash::operator()(const MatrixFq& m) const {
  size_t h = 1469598103934665603ull;
  auto mix = [&h](size_t v) {
    h ^= v;
    h *= 1099511628211ull;
  };
  mix(size_t(m.rows()));
  mix(size_t(m.cols()));
  for (uint8_t v : m.data()) mix(v);
  return h;
}

BigInt gaussian_binomial(int n, int k, int p) {
  if (k < 0 || k > n) return 0;
  BigInt num = 1, den = 1;
  BigInt pp = p;
  for (int i = 0; i < k; ++i) {
    BigInt pn = 1, pk = 1;
    for (int j = 0; j < n - i; ++j) pn *= pp;
    for (int j = 0; j < i + 1; ++j) pk *= pp;
    num *= pn - 1;
    den *= pk - 1;
  }
  assert(num % den == 0);
  return num / den;
}

BigInt gl_order(int n, const BigInt& field_size) {
  BigInt qn = 1;
  for (int i = 0; i < n; ++i) qn *= field_size;
  BigInt r = 1, qi = 1;
  for (int i = 0; i < n; ++i) {
    r *= qn - qi;
    qi *= field_size;
  }
  return r;
}

void for_each_subspace(int p, int n, int k,
                       const std::function<void(const MatrixFq&)>& fn) {
  assert(k >= 0 && n >= 0);
  if (k > n) return;
  if (k == 0) {
    MatrixFq m(p, 0, n);
    fn(m);
    return;
  }
  std::vector<int> piv(k);
  for (int i = 0; i < k; ++i) piv[i] = i;
  MatrixFq m(p, k, n);
  while (true) {
    // free positions for this pivot pattern
    std::vector<bool> is_piv(n, false);
    for (int c : piv) is_piv[c] = true;
    std::vector<std::pair<int, int>> free_pos;
    for (int i = 0; i < k; ++i)
      for (int j = piv[i] + 1; j < n; ++j)
        if (!is_piv[j]) free_pos.emplace_back(i, j);

    for (int i = 0; i < k; ++i)
      for (int j = 0; j < n; ++j) m.set(i, j, 0);
    for (int i = 0; i < k; ++i) m.set(i, piv[i], 1);

    std::vector<uint8_t> odo(free_pos.size(), 0);
    while (true) {
      fn(m);
      size_t d = 0;
      while (d < odo.size()) {
        int v = odo[d] + 1;
        if (v < p) {
          odo[d] = uint8_t(v);
          m.set(free_pos[d].first, free_pos[d].second, v);
          break;
        }
        odo[d] = 0;
        m.set(free_pos[d].first, free_pos[d].second, 0);
        ++d;
      }
      if (d == odo.size()) break;
    }

    // next pivot combination (lexicographic)
    int i = k - 1;
    while (i >= 0 && piv[i] == n - k + i) --i;
    if (i < 0) break;
    ++piv[i];
    for (int j = i + 1; j < k; ++j) piv[j] = piv[j - 1] + 1;
  }
}

// ---------- polynomials ----------

PolyFq PolyFq::constant(int p, int v) {
  PolyFq f{p, {}};
  v = fp_norm(v, p);
  if (v) f.c.push_back(uint8_t(v));
  return f;
}

PolyFq PolyFq::from_coeffs(int p, const std::vector<int>& coeffs) {
  PolyFq f{p, {}};
  f.c.reserve(coeffs.size());
  for (int v : coeffs) f.c.push_back(uint8_t(fp_norm(v, p)));
  f.normalize();
  return f;
}

int PolyFq::eval(int x) const {
  x = fp_norm(x, p);
  int r = 0;
  for (int i = degree(); i >= 0; --i) r = (r * x + c[i]) % p;
  return r;
}

void PolyFq::normalize() {
  while (!c.empty() && c.back() == 0) c.pop_back();
}

PolyFq PolyFq::add(const PolyFq& o) const {
  assert(p == o.p);
  PolyFq r{p, {}};
  size_t n = std::max(c.size(), o.c.size());
  r.c.resize(n, 0);
  for (size_t i = 0; i < n; ++i) {
    int v = (i < c.size() ? c[i] : 0) + (i < o.c.size() ? o.c[i] : 0);
    r.c[i] = uint8_t(v % p);
  }
  r.normalize();
  return r;
}

PolyFq PolyFq::sub(const PolyFq& o) const { return add(o.scaled(p - 1)); }

PolyFq PolyFq::mul(const PolyFq& o) const {
  assert(p == o.p);
  if (is_zero() || o.is_zero()) return zero(p);
  PolyFq r{p, {}};
  r.c.assign(c.size() + o.c.size() - 1, 0);
  for (size_t i = 0; i < c.size(); ++i) {
    if (!c[i]) continue;
    for (size_t j = 0; j < o.c.size(); ++j)
      r.c[i + j] = uint8_t((r.c[i + j] + c[i] * o.c[j]) % p);
  }
  r.normalize();
  return r;
}

PolyFq PolyFq::scaled(int v) const {
  v = fp_norm(v, p);
  PolyFq r{p, {}};
  r.c.resize(c.size());
  for (size_t i = 0; i < c.size(); ++i) r.c[i] = uint8_t(c[i] * v % p);
  r.normalize();
  return r;
}

PolyFq PolyFq::pow(int e) const {
  PolyFq r = constant(p, 1);
  for (int i = 0; i < e; ++i) r = r.mul(*this);
  return r;
}

PolyFq PolyFq::monic() const {
  assert(!is_zero());
  return scaled(fp_inv(c.back(), p));
}

std::pair<PolyFq, PolyFq> PolyFq::divmod(const PolyFq& d) const {
  assert(p == d.p && !d.is_zero());
  PolyFq rem = *this;
  PolyFq quo{p, {}};
  int dd = d.degree();
  if (rem.degree() >= dd) quo.c.assign(rem.degree() - dd + 1, 0);
  int lead_inv = fp_inv(d.c.back(), p);
  while (rem.degree() >= dd) {
    int k = rem.degree() - dd;
    int f = rem.c.back() * lead_inv % p;
    quo.c[k] = uint8_t(f);
    for (int i = 0; i <= dd; ++i)
      rem.c[k + i] = uint8_t((rem.c[k + i] + (p - f) * d.c[i]) % p);
    rem.normalize();
  }
  quo.normalize();
  return {quo, rem};
}

bool PolyFq::divides(const PolyFq& f) const { return f.divmod(*this).second.is_zero(); }

bool PolyFq::operator<(const PolyFq& o) const {
  if (c.size() != o.c.size()) return c.size() < o.c.size();
  return std::lexicographical_compare(c.begin(), c.end(), o.c.begin(), o.c.end());
}

bool is_irreducible(const PolyFq& f) {
  int n = f.degree();
  assert(n >= 1 && f.is_monic());
  if (n == 1) return true;
  for (int d = 1; 2 * d <= n; ++d)
    for (const PolyFq& g : monic_irreducibles(f.p, d))
      if (g.divides(f)) return false;
  return true;
}

const std::vector<PolyFq>& monic_irreducibles(int p, int deg) {
  assert(deg >= 1);
  static std::map<std::pair<int, int>, std::vector<PolyFq>> cache;
  static std::mutex mtx;
  std::lock_guard<std::mutex> lock(mtx);
  // build bottom-up so each level's trial divisions see complete lower levels
  for (int d = 1; d <= deg; ++d) {
    if (cache.count({p, d})) continue;
    std::vector<PolyFq> out;
    std::vector<uint8_t> lo(d, 0);
    while (true) {
      PolyFq f{p, lo};
      f.c.push_back(1);
      bool irred = true;
      for (int e = 1; irred && 2 * e <= d; ++e)
        for (const PolyFq& g : cache[{p, e}])
          if (g.divides(f)) {
            irred = false;
            break;
          }
      if (irred) out.push_back(f);
      size_t i = 0;
      while (i < lo.size() && ++lo[i] == p) lo[i++] = 0;
      if (i == lo.size()) break;
    }
    std::sort(out.begin(), out.end());
    cache[{p, d}] = std::move(out);
  }
  return cache[{p, deg}];
}

std::vector<ClosedPoint> closed_points(int p, int max_deg) {
  std::vector<ClosedPoint> out;
  out.push_back(ClosedPoint::inf(p));
  for (int d = 1; d <= max_deg; ++d)
    for (const PolyFq& f : monic_irreducibles(p, d))
      out.push_back(ClosedPoint::finite(f));
  return out;
}

std::string poly_to_string(const PolyFq& f) {
  if (f.is_zero()) return "0";
  std::ostringstream os;
  bool first = true;
  for (int i = f.degree(); i >= 0; --i) {
    int v = f.c[size_t(i)];
    if (!v) continue;
    if (!first) os << "+";
    first = false;
    if (i == 0 || v != 1) os << v;
    if (i >= 1) {
      os << "t";
      if (i > 1) os << "^" << i;
    }
  }
  return os.str();
}

std::string point_to_string(const ClosedPoint& z) {
  return z.infinity ? "inf" : poly_to_string(z.minpoly);
}

std::vector<std::pair<ClosedPoint, int>> factor_binary_form(
    int p, const std::vector<uint8_t>& a) {
  assert(!a.empty());
  int n = int(a.size()) - 1;
  PolyFq f{p, a};
  f.normalize();
  assert(!f.is_zero());
  std::vector<std::pair<ClosedPoint, int>> out;
  int inf_mult = n - f.degree();
  if (inf_mult > 0) out.emplace_back(ClosedPoint::inf(p), inf_mult);
  PolyFq rem = f.monic();
  for (int d = 1; d <= rem.degree(); ++d) {
    for (const PolyFq& g : monic_irreducibles(p, d)) {
      if (rem.degree() < d) break;
      int mult = 0;
      while (true) {
        auto [quo, r] = rem.divmod(g);
        if (!r.is_zero()) break;
        rem = quo;
        ++mult;
      }
      if (mult) out.emplace_back(ClosedPoint::finite(g), mult);
    }
  }
  assert(rem.degree() == 0);
  std::sort(out.begin(), out.end(),
            [](const auto& x, const auto& y) { return x.first < y.first; });
  return out;
}

}  // namespace kron

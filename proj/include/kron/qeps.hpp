#pragma once

#include <cassert>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

namespace kron {

using Rational = boost::multiprecision::cpp_rational;

// Element a + b*eps of Q(eps) where eps^2 = q for a fixed prime q.  Since q
// is prime, eps is irrational, so the (a, b) representation is unique and
// every comparison is exact.  All scalar arithmetic in the algebra happens
// here; there is no floating point anywhere.
//
// The additive zero is shared across all q (encoded as q == 0) so that
// accumulators can start from QEps() without knowing q.
class QEps {
 public:
  QEps() : q_(0) {}
  QEps(int q, Rational a, Rational b = 0) : q_(q), a_(std::move(a)), b_(std::move(b)) {
    normalize();
  }

  static QEps zero() { return QEps(); }
  static QEps one(int q) { return QEps(q, 1); }

  // eps^k for any integer k, as an exact element.
  static QEps eps_pow(int q, long long k) {
    Rational qq(q);
    auto rpow = [&qq](long long e) {
      Rational r = 1;
      if (e >= 0)
        for (long long i = 0; i < e; ++i) r *= qq;
      else
        for (long long i = 0; i < -e; ++i) r /= qq;
      return r;
    };
    if (k % 2 == 0) return QEps(q, rpow(k / 2));
    long long m = (k - 1) / 2;  // works for negative odd k too: k = 2m + 1
    return QEps(q, 0, rpow(m));
  }

  int q() const { return q_; }
  const Rational& a() const { return a_; }
  const Rational& b() const { return b_; }
  bool is_zero() const { return q_ == 0; }

  QEps operator+(const QEps& o) const {
    if (is_zero()) return o;
    if (o.is_zero()) return *this;
    assert(q_ == o.q_);
    return QEps(q_, a_ + o.a_, b_ + o.b_);
  }
  QEps operator-() const { return is_zero() ? *this : QEps(q_, -a_, -b_); }
  QEps operator-(const QEps& o) const { return *this + (-o); }
  QEps operator*(const QEps& o) const {
    if (is_zero() || o.is_zero()) return QEps();
    assert(q_ == o.q_);
    return QEps(q_, a_ * o.a_ + Rational(q_) * b_ * o.b_, a_ * o.b_ + b_ * o.a_);
  }
  QEps operator/(const QEps& o) const {
    assert(!o.is_zero());
    if (is_zero()) return *this;
    assert(q_ == o.q_);
    Rational n = o.a_ * o.a_ - Rational(q_) * o.b_ * o.b_;  // conjugate norm
    assert(n != 0);
    QEps conj(q_, o.a_, -o.b_);
    QEps prod = *this * conj;
    return QEps(q_, prod.a_ / n, prod.b_ / n);
  }
  QEps& operator+=(const QEps& o) { return *this = *this + o; }
  QEps& operator-=(const QEps& o) { return *this = *this - o; }
  QEps& operator*=(const QEps& o) { return *this = *this * o; }

  bool operator==(const QEps& o) const {
    return q_ == o.q_ && a_ == o.a_ && b_ == o.b_;
  }
  bool operator!=(const QEps& o) const { return !(*this == o); }
  bool operator<(const QEps& o) const {  // arbitrary total order for maps
    if (q_ != o.q_) return q_ < o.q_;
    if (a_ != o.a_) return a_ < o.a_;
    return b_ < o.b_;
  }

  // If this element equals s * eps^k with s = +-1, return (s, k).
  std::optional<std::pair<int, long long>> as_signed_eps_power() const;

  std::string to_string() const;

 private:
  void normalize() {
    if (a_ == 0 && b_ == 0) {
      q_ = 0;
    }
  }
  int q_;       // 0 encodes the shared zero
  Rational a_, b_;
};

// Quantum integer [n] = (eps^n - eps^-n) / (eps - eps^-1); [0] = 0, [-n] = -[n].
QEps quantum_int(int q, long long n);
// [n]! = [1][2]...[n].
QEps quantum_factorial(int q, int n);

// ---------- exact linear algebra over a field (Rational or QEps) ----------

template <class F>
bool field_is_zero(const F& x) {
  return x == F();
}
template <>
inline bool field_is_zero<QEps>(const QEps& x) {
  return x.is_zero();
}

// One solution of A x = b with free variables zero, if the system is
// consistent.  A is row-major, rectangular allowed.
template <class F>
std::optional<std::vector<F>> field_solve(std::vector<std::vector<F>> A,
                                          std::vector<F> b) {
  size_t m = A.size();
  size_t n = m ? A[0].size() : 0;
  assert(b.size() == m);
  std::vector<int> pivot_col;
  size_t row = 0;
  for (size_t col = 0; col < n && row < m; ++col) {
    size_t piv = row;
    while (piv < m && field_is_zero(A[piv][col])) ++piv;
    if (piv == m) continue;
    std::swap(A[piv], A[row]);
    std::swap(b[piv], b[row]);
    F lead = A[row][col];
    for (size_t j = col; j < n; ++j) A[row][j] = A[row][j] / lead;
    b[row] = b[row] / lead;
    for (size_t i = 0; i < m; ++i) {
      if (i == row || field_is_zero(A[i][col])) continue;
      F f = A[i][col];
      for (size_t j = col; j < n; ++j) A[i][j] = A[i][j] - f * A[row][j];
      b[i] = b[i] - f * b[row];
    }
    pivot_col.push_back(int(col));
    ++row;
  }
  for (size_t i = row; i < m; ++i)
    if (!field_is_zero(b[i])) return std::nullopt;
  std::vector<F> x(n, F());
  for (size_t r = 0; r < pivot_col.size(); ++r) x[size_t(pivot_col[r])] = b[r];
  return x;
}

}  // namespace kron

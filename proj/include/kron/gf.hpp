#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

namespace kron {

using BigInt = boost::multiprecision::cpp_int;

// ---------- arithmetic in F_p (p a small prime, p <= 11 throughout) ----------

inline int fp_norm(long long x, int p) {
  long long r = x % p;
  return int(r < 0 ? r + p : r);
}

int fp_inv(int x, int p);
int fp_pow(int x, long long e, int p);

// ---------- dense matrices over F_p ----------

// Entries live in [0, p).  Zero-row and zero-column matrices are allowed and
// meaningful: they are the maps to or from the zero space.
class MatrixFq {
public:
  MatrixFq() : p_(2), rows_(0), cols_(0) {}
  MatrixFq(int p, int rows, int cols)
      : p_(p), rows_(rows), cols_(cols), a_(size_t(rows) * size_t(cols), 0) {}

  static MatrixFq identity(int p, int n);
  static MatrixFq from_rows(int p, const std::vector<std::vector<int>>& rows);

  int p() const { return p_; }
  int rows() const { return rows_; }
  int cols() const { return cols_; }
  const std::vector<uint8_t>& data() const { return a_; }

  uint8_t at(int i, int j) const { return a_[size_t(i) * cols_ + j]; }
  void set(int i, int j, int v) { a_[size_t(i) * cols_ + j] = uint8_t(fp_norm(v, p_)); }

  MatrixFq mul(const MatrixFq& o) const;
  MatrixFq add(const MatrixFq& o) const;
  MatrixFq sub(const MatrixFq& o) const;
  MatrixFq scaled(int c) const;
  MatrixFq transpose() const;

  void set_block(int r0, int c0, const MatrixFq& m);
  MatrixFq submatrix(int r0, int c0, int nr, int nc) const;

  // Reduced row echelon form in place; returns the pivot columns.
  std::vector<int> rref_in_place();
  int rank() const;

  // Basis of { v : M v = 0 }, one vector per row.  Canonical: vector number i
  // is 1 at the i-th free column of the RREF and 0 at the other free columns.
  MatrixFq kernel_basis() const;

  // One solution of M x = b with all free variables zero, if consistent.
  std::optional<std::vector<uint8_t>> solve(const std::vector<uint8_t>& b) const;

  std::optional<MatrixFq> inverse() const;

  // Canonical representative of the row space: RREF with zero rows dropped.
  MatrixFq row_space_canonical() const;

  std::vector<uint8_t> apply(const std::vector<uint8_t>& v) const;

  bool is_zero() const;
  std::string to_string() const;

  bool operator==(const MatrixFq& o) const {
    return p_ == o.p_ && rows_ == o.rows_ && cols_ == o.cols_ && a_ == o.a_;
  }
  bool operator!=(const MatrixFq& o) const { return !(*this == o); }
  bool operator<(const MatrixFq& o) const;

private:
  int p_, rows_, cols_;
  std::vector<uint8_t> a_;
};

struct MatrixFqHash {
  size_t operator()(const MatrixFq& m) const;
};

// Number of k-dimensional subspaces of F_p^n.
BigInt gaussian_binomial(int n, int k, int p);

// |GL_n| over a field with field_size elements.
BigInt gl_order(int n, const BigInt& field_size);

// Enumerate every k-dimensional subspace of F_p^n, presented as its unique
// k x n reduced-row-echelon basis matrix.  The matrix handed to fn is reused
// between calls; copy it if you keep it.
void for_each_subspace(int p, int n, int k,
                       const std::function<void(const MatrixFq&)>& fn);

// ---------- polynomials over F_p ----------

// Coefficients low degree first, normalized (no trailing zero entry); the
// zero polynomial has an empty coefficient vector.
struct PolyFq {
  int p = 2;
  std::vector<uint8_t> c;

  static PolyFq zero(int p) { return PolyFq{p, {}}; }
  static PolyFq constant(int p, int v);
  static PolyFq from_coeffs(int p, const std::vector<int>& coeffs);

  int degree() const { return int(c.size()) - 1; }  // -1 for the zero polynomial
  bool is_zero() const { return c.empty(); }
  bool is_monic() const { return !c.empty() && c.back() == 1; }
  int eval(int x) const;
  void normalize();

  PolyFq add(const PolyFq& o) const;
  PolyFq sub(const PolyFq& o) const;
  PolyFq mul(const PolyFq& o) const;
  PolyFq scaled(int v) const;
  PolyFq pow(int e) const;
  PolyFq monic() const;
  // Quotient and remainder by a nonzero divisor.
  std::pair<PolyFq, PolyFq> divmod(const PolyFq& d) const;

  bool divides(const PolyFq& f) const;

  bool operator==(const PolyFq& o) const { return p == o.p && c == o.c; }
  bool operator!=(const PolyFq& o) const { return !(*this == o); }
  // Degree first, then lexicographic on the coefficient array; this is the
  // deterministic listing order for closed points.
  bool operator<(const PolyFq& o) const;
};

bool is_irreducible(const PolyFq& f);

// All monic irreducibles of exactly the given degree, sorted; cached.
const std::vector<PolyFq>& monic_irreducibles(int p, int deg);

// ---------- closed points of the projective line ----------

// Either the point at infinity or a monic irreducible polynomial in the
// affine coordinate.  Listing order: infinity first, then (degree, lex).
struct ClosedPoint {
  bool infinity = false;
  PolyFq minpoly;  // meaningful only when !infinity

  static ClosedPoint inf(int p) {
    ClosedPoint z;
    z.infinity = true;
    z.minpoly = PolyFq::zero(p);
    return z;
  }
  static ClosedPoint finite(PolyFq f) {
    ClosedPoint z;
    z.minpoly = std::move(f);
    return z;
  }

  int degree() const { return infinity ? 1 : minpoly.degree(); }

  bool operator==(const ClosedPoint& o) const {
    if (infinity != o.infinity) return false;
    return infinity || minpoly == o.minpoly;
  }
  bool operator!=(const ClosedPoint& o) const { return !(*this == o); }
  bool operator<(const ClosedPoint& o) const {
    if (infinity != o.infinity) return infinity;
    if (infinity) return false;
    return minpoly < o.minpoly;
  }
};

// Infinity followed by all irreducibles of degree <= max_deg, in order.
std::vector<ClosedPoint> closed_points(int p, int max_deg);

std::string poly_to_string(const PolyFq& f);
std::string point_to_string(const ClosedPoint& z);

// Factor a nonzero binary form  P(L, M) = sum_k a[k] L^k M^(n-k)  of total
// degree n = a.size() - 1.  The point at infinity appears with multiplicity
// n - deg(P(t, 1)); the finite part comes from factoring P(t, 1).  The scalar
// unit is discarded.  Sorted by point order.
std::vector<std::pair<ClosedPoint, int>> factor_binary_form(
    int p, const std::vector<uint8_t>& a);

}  // namespace kron

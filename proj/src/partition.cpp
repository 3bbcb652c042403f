#include "kron/partition.hpp"

#include <algorithm>
#include <cassert>

#include "kron/qeps.hpp"

namespace kron {

namespace {

void gen_partitions(int n, int max_part, Partition& cur,
                    std::vector<Partition>& out) {
  if (n == 0) {
    out.push_back(cur);
    return;
  }
  for (int k = std::min(n, max_part); k >= 1; --k) {
    cur.push_back(k);
    gen_partitions(n - k, k, cur, out);
    cur.pop_back();
  }
}

// Backtracking count of semistandard fillings: place the letters
// 1..len(content) one at a time, keeping every prefix shape a partition and
// columns strict (letter i may sit in row r only if the cell above is filled
// with a smaller letter, which is automatic when we fill letters in order and
// require the cell above to already exist).
long long count_ssyt(const std::vector<int>& shape, const std::vector<int>& content,
                     std::vector<int>& filled, size_t letter) {
  if (letter == content.size()) return 1;
  int todo = content[letter];
  // choose how many copies of this letter go in each row; copies in row r
  // occupy columns filled[r]..filled[r]+c-1 and need the row above (r-1) to
  // already cover those columns (column strictness), and row capacity.
  long long total = 0;
  std::vector<int> add(shape.size(), 0);
  // recursive distribution over rows
  auto rec = [&](auto&& self, size_t row, int remaining) -> void {
    if (row == shape.size()) {
      if (remaining == 0) {
        for (size_t r = 0; r < shape.size(); ++r) filled[r] += add[r];
        total += count_ssyt(shape, content, filled, letter + 1);
        for (size_t r = 0; r < shape.size(); ++r) filled[r] -= add[r];
      }
      return;
    }
    int cap = shape[row] - filled[row];
    if (row > 0) cap = std::min(cap, filled[row - 1] - filled[row]);
    for (int c = 0; c <= std::min(cap, remaining); ++c) {
      add[row] = c;
      self(self, row + 1, remaining - c);
    }
    add[row] = 0;
  };
  rec(rec, 0, todo);
  return total;
}

}  // namespace

std::vector<Partition> partitions_of(int n) {
  assert(n >= 0);
  std::vector<Partition> out;
  Partition cur;
  gen_partitions(n, n, cur, out);
  return out;
}

int partition_weight(const Partition& p) {
  int s = 0;
  for (int x : p) s += x;
  return s;
}

Partition conjugate_partition(const Partition& p) {
  Partition c;
  if (p.empty()) return c;
  for (int col = 0; col < p[0]; ++col) {
    int cnt = 0;
    for (int part : p)
      if (part > col) ++cnt;
    c.push_back(cnt);
  }
  return c;
}

bool dominance_leq(const Partition& a, const Partition& b) {
  int sa = 0, sb = 0;
  size_t n = std::max(a.size(), b.size());
  for (size_t i = 0; i < n; ++i) {
    sa += i < a.size() ? a[i] : 0;
    sb += i < b.size() ? b[i] : 0;
    if (sa > sb) return false;
  }
  return sa == sb;
}

long long kostka_number(const Partition& shape, const Partition& content) {
  if (partition_weight(shape) != partition_weight(content)) return 0;
  if (shape.empty()) return 1;
  std::vector<int> filled(shape.size(), 0);
  return count_ssyt(shape, content, filled, 0);
}

std::vector<std::vector<long long>> kostka_matrix(int n) {
  auto parts = partitions_of(n);
  size_t m = parts.size();
  std::vector<std::vector<long long>> K(m, std::vector<long long>(m, 0));
  for (size_t i = 0; i < m; ++i)
    for (size_t j = 0; j < m; ++j) K[i][j] = kostka_number(parts[i], parts[j]);
  return K;
}

std::vector<std::vector<long long>> kostka_inverse(int n) {
  auto K = kostka_matrix(n);
  size_t m = K.size();
  // exact rational inversion, then integrality check
  std::vector<std::vector<Rational>> A(m, std::vector<Rational>(2 * m, 0));
  for (size_t i = 0; i < m; ++i) {
    for (size_t j = 0; j < m; ++j) A[i][j] = K[i][j];
    A[i][m + i] = 1;
  }
  for (size_t col = 0; col < m; ++col) {
    size_t piv = col;
    while (piv < m && A[piv][col] == 0) ++piv;
    assert(piv < m);
    std::swap(A[piv], A[col]);
    Rational lead = A[col][col];
    for (size_t j = 0; j < 2 * m; ++j) A[col][j] /= lead;
    for (size_t i = 0; i < m; ++i) {
      if (i == col || A[i][col] == 0) continue;
      Rational f = A[i][col];
      for (size_t j = 0; j < 2 * m; ++j) A[i][j] -= f * A[col][j];
    }
  }
  std::vector<std::vector<long long>> inv(m, std::vector<long long>(m, 0));
  for (size_t i = 0; i < m; ++i)
    for (size_t j = 0; j < m; ++j) {
      const Rational& v = A[i][m + j];
      assert(boost::multiprecision::denominator(v) == 1);
      inv[i][j] = boost::multiprecision::numerator(v).convert_to<long long>();
    }
  return inv;
}

}  // namespace kron

#pragma once

#include <functional>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "kron/gf.hpp"
#include "kron/partition.hpp"

namespace kron {

// ---------- representations ----------

// A representation of the double-arrow quiver over F_q: two linear maps
// V0 -> V1, stored as matrices of shape d1 x d0.
struct Rep {
  int q = 2;
  int d0 = 0, d1 = 0;
  MatrixFq x1, x2;

  static Rep zero_rep(int q, int d0, int d1) {
    return Rep{q, d0, d1, MatrixFq(q, d1, d0), MatrixFq(q, d1, d0)};
  }
  Rep direct_sum(const Rep& o) const;
};

// ---------- isomorphism class labels ----------

struct RegBlock {
  ClosedPoint point;
  Partition lambda;  // nonempty, weakly decreasing

  bool operator==(const RegBlock& o) const {
    return point == o.point && lambda == o.lambda;
  }
  bool operator<(const RegBlock& o) const {
    if (point != o.point) return point < o.point;
    return lambda < o.lambda;
  }
};

// Canonical label of an isomorphism class: the multiplicity of each string
// module on the preprojective and preinjective sides, plus one partition per
// closed point of the projective line for the periodic part.
//
// Index convention: Preproj(k) has dimension vector (k-1, k), so Preproj(1)
// is the simple at vertex 1; Preinj(k) has dimension (k, k-1), so Preinj(1)
// is the simple at vertex 0.
struct IsoClass {
  int q = 2;
  std::vector<std::pair<int, int>> preproj;  // (k, mult), k ascending, mult >= 1
  std::vector<std::pair<int, int>> preinj;   // (k, mult), k ascending, mult >= 1
  std::vector<RegBlock> regular;             // points strictly ascending

  std::pair<int, int> dim() const;
  bool is_zero() const { return preproj.empty() && preinj.empty() && regular.empty(); }

  bool operator==(const IsoClass& o) const {
    return q == o.q && preproj == o.preproj && preinj == o.preinj &&
           regular == o.regular;
  }
  bool operator!=(const IsoClass& o) const { return !(*this == o); }
  bool operator<(const IsoClass& o) const;

  std::string to_string() const;
};

IsoClass zero_class(int q);
IsoClass preproj_class(int q, int k, int mult = 1);
IsoClass preinj_class(int q, int k, int mult = 1);
IsoClass regular_class(int q, const ClosedPoint& pt, Partition lambda);
// Sorts, merges duplicates, and validates the pieces.
IsoClass make_class(int q, std::vector<std::pair<int, int>> preproj,
                    std::vector<std::pair<int, int>> preinj,
                    std::vector<RegBlock> regular);
IsoClass direct_sum(const IsoClass& a, const IsoClass& b);

// The canonical representative of a class, block by block.  For the periodic
// part at a finite point the second matrix is minus the companion matrix of
// the corresponding power of the minimal polynomial, so that the determinant
// of the matrix pencil is exactly the homogenized power; at infinity the
// first matrix is a nilpotent Jordan block and the second the identity.
Rep representative(const IsoClass& c);

// ---------- invariants ----------

// dim Hom(A, B) as F_q-spaces, by solving the intertwiner equations.
int hom_dim(const Rep& A, const Rep& B);
int hom_dim(const IsoClass& a, const IsoClass& b);

// The Euler form of the quiver: <a, b> = a0 b0 + a1 b1 - 2 a0 b1,
// equal to dim Hom - dim Ext on dimension vectors.
long long euler_form(std::pair<int, int> a, std::pair<int, int> b);
int ext_dim(const IsoClass& a, const IsoClass& b);

// Order of GL(d0) x GL(d1) over F_q.
BigInt group_order(int q, int d0, int d1);
// Order of the automorphism group of (a representative of) the class.
BigInt aut_order(const IsoClass& c);

// det(L x1 + M x2) as a binary form of total degree n = d0 = d1, returned as
// the coefficient array of P(t, 1) zero-padded to length n + 1 (so the
// multiplicity of infinity is visible as trailing zeros).  Requires d0 == d1;
// the form may be identically zero.
std::vector<uint8_t> pencil_det(const Rep& r);

// ---------- class enumeration and classification ----------

// All classes of the given dimension vector, sorted by label.
std::vector<IsoClass> classes_of_dim(int q, int d0, int d1);

// Index for the distinguished basis of a weight space: preprojective and
// preinjective multiplicities plus one partition for the homogeneous part.
// Unlike an IsoClass, the partition is not attached to any point of the
// projective line, and the index set does not depend on the field size.
struct CBIndex {
  std::vector<std::pair<int, int>> preproj;  // (k, mult), k ascending, mult >= 1
  std::vector<std::pair<int, int>> preinj;   // (k, mult), k ascending, mult >= 1
  Partition lambda;                          // weakly decreasing

  std::pair<int, int> dim() const;
  bool purely_imaginary() const { return preproj.empty() && preinj.empty(); }

  bool operator==(const CBIndex& o) const = default;
  bool operator<(const CBIndex& o) const;
  std::string to_string() const;
};

// All basis indices of the given dimension vector, sorted.  The field size is
// accepted for signature uniformity with the other enumerations but does not
// affect the result.
std::vector<CBIndex> enumerate_cb_index(std::pair<int, int> d, int q);

struct AmbiguousFingerprint : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Classifier for all classes with dimension <= (dmax0, dmax1) componentwise.
// Classification is by Hom-counts from a fixed probe list (all indecomposable
// classes inside the box); construction verifies that these fingerprints
// separate every pair of classes and throws AmbiguousFingerprint otherwise.
// classify() first narrows by cheap rank invariants, then applies a
// per-bucket discriminating probe subset chosen greedily at build time.
// Immutable after construction, hence safe to share across threads.
class ClassTable {
 public:
  ClassTable(int q, int dmax0, int dmax1);

  int q() const { return q_; }
  int dmax0() const { return dmax0_; }
  int dmax1() const { return dmax1_; }

  const std::vector<IsoClass>& all() const { return all_; }
  // Classes of one dimension vector, in the global listing order.
  std::vector<int> indices_at(int d0, int d1) const;

  int index_of(const IsoClass& c) const;  // -1 if absent
  const IsoClass& at(int idx) const { return all_[size_t(idx)]; }
  const Rep& rep_of(int idx) const { return reps_[size_t(idx)]; }

  int classify_index(const Rep& r) const;
  const IsoClass& classify(const Rep& r) const { return all_[size_t(classify_index(r))]; }

 private:
  std::vector<int> bucket_key(const Rep& r) const;

  int q_, dmax0_, dmax1_;
  std::vector<IsoClass> all_;
  std::vector<Rep> reps_;
  std::map<IsoClass, int> index_;
  std::map<std::pair<int, int>, std::vector<int>> grade_index_;
  std::vector<int> probe_ids_;                 // indices of indecomposables
  std::vector<std::vector<int>> fingerprints_; // per class, over probe_ids_
  struct Bucket {
    std::vector<int> members;
    std::vector<int> discriminators;  // positions within probe_ids_
  };
  std::map<std::vector<int>, Bucket> buckets_;
};

// ---------- subrepresentations ----------

// Enumerate the stable subrepresentations of V with dimension (c0, c1).
// B1 is handed over as the c1 x d1 reduced-row-echelon basis of the
// subspace at vertex 1; B0 is a c0 x d0 basis (not necessarily reduced) of
// the subspace at vertex 0.  Both are reused between calls.
void for_each_stable_sub(
    const Rep& V, int c0, int c1,
    const std::function<void(const MatrixFq& B0, const MatrixFq& B1)>& fn);

// The restriction of V to the stable subspace spanned by the rows of
// (B0, B1), in those bases.
Rep sub_rep(const Rep& V, const MatrixFq& B0, const MatrixFq& B1);
// The quotient of V by that subspace, in the complement coordinates of the
// reduced bases.
Rep quot_rep(const Rep& V, const MatrixFq& B0, const MatrixFq& B1);

// ---------- functors ----------

// Transpose duality: both matrices are transposed and the two vertices swap
// roles.  On labels it exchanges Preproj(k) with Preinj(k) and fixes every
// periodic block pointwise.
Rep transpose_rep(const Rep& r);
IsoClass transpose_dual(const IsoClass& c);

// Reflection at vertex 1.  reflect_sink consumes a representation with no
// direct summand equal to the vertex-1 simple (equivalently [x1 | x2] has
// full row rank) and returns the reflected representation of the
// opposite-orientation quiver, stored with its two vertex labels swapped so
// it fits in the same Rep struct; the dimension vector maps
// (d0, d1) -> (d0, 2 d0 - d1) before storage swaps it.  reflect_source is
// the inverse construction.  Both return nullopt when the precondition
// fails.
std::optional<Rep> reflect_sink(const Rep& plus);
std::optional<Rep> reflect_source(const Rep& minus_stored);

}  // namespace kron

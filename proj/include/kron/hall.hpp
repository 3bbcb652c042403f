#pragma once

#include <cstdint>
#include <map>
#include <mutex>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "kron/qeps.hpp"
#include "kron/rep.hpp"

namespace kron {

using Grade = std::pair<int, int>;

enum class FactorOrder { SubFirst, QuotFirst };

// The product is (f*g)(Z) = eps^{t(b,c)} * sum over stable subspace pairs W of
// the appropriate dimension of f and g evaluated on the two pieces of Z; the
// factor order selects whether the first factor sees the quotient or the sub.
// The coproduct carries its own bilinear exponent u, and divided powers are
// theta^k / [k]! scaled by eps^{dp * k(k-1)/2}.  All three are calibrated at
// runtime against anchor identities rather than fixed a priori; see calibrate.
struct TwistConvention {
  FactorOrder order = FactorOrder::QuotFirst;
  int t[2][2] = {{0, 0}, {0, 0}};
  int u[2][2] = {{0, 0}, {0, 0}};
  int dp = 0;

  long long t_exp(Grade b, Grade c) const {
    return (long long)t[0][0] * b.first * c.first + (long long)t[0][1] * b.first * c.second +
           (long long)t[1][0] * b.second * c.first + (long long)t[1][1] * b.second * c.second;
  }
  long long u_exp(Grade b, Grade c) const {
    return (long long)u[0][0] * b.first * c.first + (long long)u[0][1] * b.first * c.second +
           (long long)u[1][0] * b.second * c.first + (long long)u[1][1] * b.second * c.second;
  }

  std::string canonical_string() const;
  std::uint64_t hash() const;
  bool operator==(const TwistConvention& o) const;

  // the convention frozen by the calibration run over q in {2,3}
  static TwistConvention calibrated();
};

// finitely supported class function; zero coefficients are pruned
using HallElem = std::map<IsoClass, QEps>;

HallElem hall_unit(int q);                       // indicator of the zero class
HallElem hall_indicator(const IsoClass& c);      // single indicator
HallElem hall_scale(const QEps& s, const HallElem& f);
HallElem hall_add(const HallElem& f, const HallElem& g);
HallElem hall_sub(const HallElem& f, const HallElem& g);
bool hall_is_zero(const HallElem& f);
int hall_q(const HallElem& f);  // 0 for the zero element
void hall_prune(HallElem& f);
// grades present in the support together with the restriction to each
std::map<Grade, HallElem> hall_grades(const HallElem& f);
// nonzero support must be concentrated in a single grade; the zero element
// has grade (0,0)
Grade hall_grade(const HallElem& f);

// Untwisted filtration counts: for a class Z and a sub-dimension c, the row
// maps (sub class index, quotient class index) -> number of stable subspace
// pairs of representative(Z) of dimension c realizing that pair.  Rows are
// convention-independent; every twisted structure constant is an eps-power
// times a row entry.
using StructureRow = std::map<std::pair<int, int>, long long>;

class StructureTables {
 public:
  explicit StructureTables(int q, int dmax0, int dmax1);

  const ClassTable& table() const { return table_; }
  int q() const { return table_.q(); }

  // counts for one target class and one sub-dimension (memoized)
  const StructureRow& row(int z_index, int c0, int c1);
  // compute (in parallel) and memoize the rows of every class of the given
  // dimension at the given sub-dimension
  void ensure_block(int D0, int D1, int c0, int c1);

  // force the plain single-threaded path (used by tests and the benchmark)
  void set_serial(bool s) { serial_ = s; }

  // install a row computed elsewhere (cache load); existing rows win
  void adopt_row(int z_index, int c0, int c1, StructureRow row);

 private:
  StructureRow compute_row(int z_index, int c0, int c1) const;

  ClassTable table_;
  bool serial_ = false;
  std::map<std::pair<int, std::pair<int, int>>, StructureRow> rows_;
  std::mutex mu_;
};

class HallAlgebra {
 public:
  // cache_dir empty -> purely in-memory
  HallAlgebra(int q, int dmax0, int dmax1, const TwistConvention& conv,
              std::string cache_dir = "");

  int q() const { return tables_.q(); }
  const TwistConvention& convention() const { return conv_; }
  const ClassTable& table() const { return tables_.table(); }
  StructureTables& tables() { return tables_; }

  HallElem product(const HallElem& f, const HallElem& g);
  HallElem power(const HallElem& f, int k);
  // divided power of a single-class indicator-style element
  HallElem divided_power(const HallElem& f, int k);

  // component of the coproduct in bidegree (b, c); keys are (left, right)
  // tensor factors, with the left factor on the quotient under QuotFirst
  std::map<std::pair<IsoClass, IsoClass>, QEps> coproduct(const HallElem& f,
                                                          Grade b, Grade c);

  QEps inner(const HallElem& f, const HallElem& g) const;

  // Hall algebra of the opposite orientation, computed on the swapped
  // encoding (a rep with the two maps read backwards is stored with its
  // grading reversed); the twist exponent is evaluated on stored grades
  HallElem minus_product(const HallElem& f, const HallElem& g);

  // reflection at the vertex of valence one: elements supported on opposite
  // orientation classes with no simple summand at that vertex map to elements
  // of this algebra, scaled by eps^{d1'^2 - d1^2} gradewise
  HallElem sigma1(const HallElem& f_minus);

 private:
  TwistConvention conv_;
  StructureTables tables_;
  std::string cache_dir_;

  void load_cache(int D0, int D1);
  void store_cache(int D0, int D1);
  std::set<std::pair<Grade, Grade>> cached_blocks_;  // (dim, subdim) persisted
};

HallElem restrict_regular(const HallElem& f);

// ---- convention calibration -------------------------------------------------

struct CalibrationOutcome {
  std::vector<TwistConvention> survivors;
  // per divided-power index d <= 3: the eps exponent a_d with
  // theta0^{(d)} * theta1^{(d)} = eps^{a_d} * indicator of the whole
  // dimension-(d,d) stratum (under each survivor, constant across q)
  std::vector<long long> full_stratum_exponents;
  // the scalar s with rho_1 = theta0*theta1 - s*theta1*theta0, as an eps power
  long long commutator_scalar_exponent = 0;
  std::string report;  // human-readable anchor-by-anchor summary
};

// exhaustive scan of factor order x integer twist arrays (|entry| <= bound)
// x divided-power rules against the anchor identities, at every q in q_list
CalibrationOutcome calibrate(const std::vector<int>& q_list, int bound = 3);

struct NoConventionFound : std::runtime_error {
  using std::runtime_error::runtime_error;
};

}  // namespace kron

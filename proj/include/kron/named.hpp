#pragma once

#include <map>
#include <mutex>
#include <string>
#include <utility>

#include "kron/hall.hpp"
#include "kron/json_io.hpp"
#include "kron/partition.hpp"

namespace kron {

// Constructors for the distinguished elements of one twisted Hall algebra.
// Every index is anchored to the element's dimension vector:
//
//   theta(0)            (1, 0)      simple indicator at vertex 0
//   theta(1)            (0, 1)      simple indicator at vertex 1
//   theta_div(i, k)     k * e_i     divided power of theta(i)
//   gamma(k)            (k+1, k)    scaled dense-orbit (preinjective) indicator
//   mu(k)               (k, k+1)    scaled dense-orbit (preprojective) indicator
//   rho(k)              (k, k)      scaled indicator of the periodic locus
//   phi(k), k >= 1      (k, k)      gamma(k-1)*theta(1) - eps^-2 theta(1)*gamma(k-1)
//   ptilde(k)           (k, k)      (1/[k]) sum_r eps^(r-k) phi(r) ptilde(k-r)
//   eta(k), k >= 1      (k, k)      solved from  rho(k) = (1/k) sum_s (s/[s]) eta(s) rho(k-s)
//   schur(lambda)       (n, n)      det( ptilde(lambda_i - i + j) ),  n = |lambda|
//
// so gamma(0) = theta(0) and mu(0) = theta(1).  ptilde is computed by its
// recursion, independently of rho, and their equality is a checked identity
// rather than a definition.  The recursive constructors are memoized per
// instance; all methods are safe to call concurrently.
class NamedElements {
 public:
  explicit NamedElements(HallAlgebra& alg) : alg_(alg) {}

  HallElem theta(int i) const;
  HallElem theta_div(int i, int k) const;
  HallElem gamma(int k) const;
  HallElem mu(int k) const;
  HallElem rho(int k) const;
  HallElem phi(int k) const;
  HallElem ptilde(int k) const;
  HallElem eta(int k) const;
  HallElem schur(const Partition& lambda) const;

  HallAlgebra& algebra() const { return alg_; }
  int q() const { return alg_.q(); }

 private:
  HallAlgebra& alg_;
  mutable std::mutex mu_mutex_;
  mutable std::map<int, HallElem> phi_memo_, ptilde_memo_, eta_memo_;
};

// A realized named element together with enough context to reproduce it.
struct NamedElement {
  std::string tag;  // canonical text form, e.g. "gamma(2)" or "schur[2,1]"
  int q = 0;
  std::uint64_t convention = 0;
  HallElem value;
};

// {"tag":..., "q":..., "convention":"%016x", "coefficients":[[class, scalar],...]}
Json named_element_to_json(const NamedElement& e);

}  // namespace kron

#include "kron/named.hpp"

#include <algorithm>
#include <cstdio>
#include <numeric>
#include <sstream>
#include <stdexcept>

namespace kron {

namespace {

QEps rational_scalar(int q, long long num, long long den) {
  return QEps(q, Rational(num) / Rational(den));
}

}  // namespace

HallElem NamedElements::theta(int i) const {
  if (i != 0 && i != 1) throw std::invalid_argument("vertex must be 0 or 1");
  return i == 0 ? hall_indicator(preinj_class(q(), 1))
                : hall_indicator(preproj_class(q(), 1));
}

HallElem NamedElements::theta_div(int i, int k) const {
  if (k < 0) throw std::invalid_argument("divided power order must be >= 0");
  return alg_.divided_power(theta(i), k);
}

HallElem NamedElements::gamma(int k) const {
  if (k < 0) throw std::invalid_argument("gamma index must be >= 0");
  return hall_scale(QEps::eps_pow(q(), -2LL * k * (k + 1)),
                    hall_indicator(preinj_class(q(), k + 1)));
}

HallElem NamedElements::mu(int k) const {
  if (k < 0) throw std::invalid_argument("mu index must be >= 0");
  return hall_scale(QEps::eps_pow(q(), -2LL * k * (k + 1)),
                    hall_indicator(preproj_class(q(), k + 1)));
}

HallElem NamedElements::rho(int k) const {
  if (k < 0) throw std::invalid_argument("rho index must be >= 0");
  HallElem out;
  QEps s = QEps::eps_pow(q(), -2LL * k * k);
  for (auto& c : classes_of_dim(q(), k, k))
    if (c.preproj.empty() && c.preinj.empty()) out.emplace(c, s);
  return out;
}

HallElem NamedElements::phi(int k) const {
  if (k < 1) throw std::invalid_argument("phi index must be >= 1");
  std::lock_guard<std::mutex> lock(mu_mutex_);
  auto it = phi_memo_.find(k);
  if (it != phi_memo_.end()) return it->second;
  HallElem g = gamma(k - 1), t1 = theta(1);
  HallElem v = hall_sub(alg_.product(g, t1),
                        hall_scale(QEps::eps_pow(q(), -2), alg_.product(t1, g)));
  return phi_memo_.emplace(k, std::move(v)).first->second;
}

HallElem NamedElements::ptilde(int k) const {
  if (k < 0) throw std::invalid_argument("ptilde index must be >= 0");
  if (k == 0) return hall_unit(q());
  {
    std::lock_guard<std::mutex> lock(mu_mutex_);
    auto it = ptilde_memo_.find(k);
    if (it != ptilde_memo_.end()) return it->second;
  }
  // compute dependencies outside the lock: phi and ptilde recurse back here
  HallElem sum;
  for (int r = 1; r <= k; ++r) {
    HallElem term = alg_.product(phi(r), ptilde(k - r));
    sum = hall_add(sum, hall_scale(QEps::eps_pow(q(), r - k), term));
  }
  HallElem v = hall_scale(QEps::one(q()) / quantum_int(q(), k), sum);
  std::lock_guard<std::mutex> lock(mu_mutex_);
  return ptilde_memo_.emplace(k, std::move(v)).first->second;
}

HallElem NamedElements::eta(int k) const {
  if (k < 1) throw std::invalid_argument("eta index must be >= 1");
  {
    std::lock_guard<std::mutex> lock(mu_mutex_);
    auto it = eta_memo_.find(k);
    if (it != eta_memo_.end()) return it->second;
  }
  // eta(k) = ([k]/k) * ( k*rho(k) - sum_{s<k} (s/[s]) eta(s)*rho(k-s) )
  HallElem acc = hall_scale(rational_scalar(q(), k, 1), rho(k));
  for (int s = 1; s < k; ++s) {
    QEps coef = rational_scalar(q(), s, 1) / quantum_int(q(), s);
    acc = hall_sub(acc, hall_scale(coef, alg_.product(eta(s), rho(k - s))));
  }
  HallElem v = hall_scale(quantum_int(q(), k) / rational_scalar(q(), k, 1), acc);
  std::lock_guard<std::mutex> lock(mu_mutex_);
  return eta_memo_.emplace(k, std::move(v)).first->second;
}

HallElem NamedElements::schur(const Partition& lambda) const {
  for (size_t i = 0; i < lambda.size(); ++i) {
    bool ok = lambda[i] >= 1 && (i == 0 || lambda[i - 1] >= lambda[i]);
    if (!ok) throw std::invalid_argument("not a partition");
  }
  int t = int(lambda.size());
  if (t == 0) return hall_unit(q());

  // permutation expansion of det( ptilde(lambda_i - i + j) )
  auto perm = std::vector<int>(size_t(t));
  std::iota(perm.begin(), perm.end(), 0);
  HallElem out;
  do {
    // a negative index anywhere kills the whole term, so collect the row
    // picks before multiplying anything
    std::vector<int> picks;
    bool zero = false;
    for (int i = 0; i < t; ++i) {
      int idx = lambda[size_t(i)] - i + perm[size_t(i)];
      if (idx < 0) {
        zero = true;
        break;
      }
      if (idx > 0) picks.push_back(idx);
    }
    if (zero) continue;
    int sign = 1;
    for (int i = 0; i < t; ++i)
      for (int j = i + 1; j < t; ++j)
        if (perm[size_t(i)] > perm[size_t(j)]) sign = -sign;
    HallElem term = hall_unit(q());
    for (int idx : picks) term = alg_.product(term, ptilde(idx));
    if (sign < 0) term = hall_scale(-QEps::one(q()), term);
    out = hall_add(out, term);
  } while (std::next_permutation(perm.begin(), perm.end()));
  return out;
}

Json named_element_to_json(const NamedElement& e) {
  char convhex[17];
  std::snprintf(convhex, sizeof convhex, "%016llx",
                static_cast<unsigned long long>(e.convention));
  Json coeffs = Json::array();
  for (auto& [c, x] : e.value)
    coeffs.push_back(Json::array({iso_class_to_json(c), qeps_to_string_exact(x)}));
  return Json{{"tag", e.tag},
              {"q", e.q},
              {"convention", std::string(convhex)},
              {"coefficients", std::move(coeffs)}};
}

}  // namespace kron

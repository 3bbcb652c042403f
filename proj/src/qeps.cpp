#include "kron/qeps.hpp"

#include <sstream>

namespace kron {

namespace {

// v = q^e for some e >= 0?  (v must be positive)
std::optional<long long> power_exponent(boost::multiprecision::cpp_int v, int q) {
  long long e = 0;
  while (v > 1) {
    if (v % q != 0) return std::nullopt;
    v /= q;
    ++e;
  }
  return e;
}

}  // namespace

std::optional<std::pair<int, long long>> QEps::as_signed_eps_power() const {
  if (is_zero()) return std::nullopt;
  if (a_ != 0 && b_ != 0) return std::nullopt;
  const Rational& r = (b_ == 0) ? a_ : b_;
  int sign = r > 0 ? 1 : -1;
  boost::multiprecision::cpp_int num = boost::multiprecision::numerator(r);
  boost::multiprecision::cpp_int den = boost::multiprecision::denominator(r);
  if (num < 0) num = -num;
  auto en = power_exponent(num, q_);
  auto ed = power_exponent(den, q_);
  if (!en || !ed) return std::nullopt;
  if (*en != 0 && *ed != 0) return std::nullopt;  // reduced fraction: one side is 1
  long long m = *en - *ed;
  long long k = (b_ == 0) ? 2 * m : 2 * m + 1;
  return std::make_pair(sign, k);
}

std::string QEps::to_string() const {
  if (is_zero()) return "0";
  std::ostringstream os;
  bool wrote = false;
  if (a_ != 0) {
    os << a_;
    wrote = true;
  }
  if (b_ != 0) {
    if (wrote && b_ > 0) os << "+";
    if (b_ == -1)
      os << "-";
    else if (b_ != 1)
      os << b_ << "*";
    os << "eps";
  }
  return os.str();
}

QEps quantum_int(int q, long long n) {
  if (n == 0) return QEps();
  if (n < 0) return -quantum_int(q, -n);
  // [n] = eps^(n-1) + eps^(n-3) + ... + eps^(1-n)
  QEps s;
  for (long long k = 1 - n; k <= n - 1; k += 2) s += QEps::eps_pow(q, k);
  return s;
}

QEps quantum_factorial(int q, int n) {
  QEps r = QEps::one(q);
  for (int k = 2; k <= n; ++k) r *= quantum_int(q, k);
  return r;
}

}  // namespace kron

#include "kron/expr.hpp"

#include <cctype>
#include <stdexcept>
#include <vector>

namespace kron {

namespace {

struct Parser {
  const std::string& src;
  NamedElements& el;
  size_t pos = 0;

  [[noreturn]] void fail(const std::string& what) const {
    throw std::invalid_argument("expression error at position " +
                                std::to_string(pos) + ": " + what);
  }

  void skip_ws() {
    while (pos < src.size() && std::isspace((unsigned char)src[pos])) ++pos;
  }

  bool eat(char c) {
    skip_ws();
    if (pos < src.size() && src[pos] == c) {
      ++pos;
      return true;
    }
    return false;
  }

  long long integer() {
    skip_ws();
    bool neg = eat('-');
    skip_ws();
    if (pos >= src.size() || !std::isdigit((unsigned char)src[pos]))
      fail("expected an integer");
    long long v = 0;
    while (pos < src.size() && std::isdigit((unsigned char)src[pos]))
      v = v * 10 + (src[pos++] - '0');
    return neg ? -v : v;
  }

  std::string ident() {
    skip_ws();
    size_t start = pos;
    while (pos < src.size() &&
           (std::isalpha((unsigned char)src[pos]) || src[pos] == '_'))
      ++pos;
    return src.substr(start, pos - start);
  }

  // one or more comma-separated integers, adjacent or parenthesized
  std::vector<long long> arguments() {
    std::vector<long long> args;
    if (eat('(')) {
      args.push_back(integer());
      while (eat(',')) args.push_back(integer());
      if (!eat(')')) fail("expected ')'");
    } else {
      args.push_back(integer());
    }
    return args;
  }

  HallElem named(const std::string& name) {
    std::vector<long long> args = arguments();
    auto one_arg = [&]() -> int {
      if (args.size() != 1) fail(name + " takes one integer argument");
      return int(args[0]);
    };
    if (name == "theta") return el.theta(one_arg());
    if (name == "gamma") return el.gamma(one_arg());
    if (name == "mu") return el.mu(one_arg());
    if (name == "rho") return el.rho(one_arg());
    if (name == "phi") return el.phi(one_arg());
    if (name == "ptilde") return el.ptilde(one_arg());
    if (name == "eta") return el.eta(one_arg());
    if (name == "theta_div") {
      if (args.size() != 2) fail("theta_div takes two integer arguments");
      return el.theta_div(int(args[0]), int(args[1]));
    }
    if (name == "schur") {
      Partition lambda;
      for (long long a : args) {
        if (a <= 0) fail("partition parts must be positive");
        lambda.push_back(int(a));
      }
      for (size_t i = 1; i < lambda.size(); ++i)
        if (lambda[i] > lambda[i - 1])
          fail("partition parts must be weakly decreasing");
      return el.schur(lambda);
    }
    fail("unknown element '" + name + "'");
  }

  HallElem factor() {
    skip_ws();
    if (eat('-')) return hall_scale(-QEps::one(el.q()), factor());
    if (eat('(')) {
      HallElem inner = expr();
      if (!eat(')')) fail("expected ')'");
      return inner;
    }
    if (pos < src.size() && std::isdigit((unsigned char)src[pos]))
      return hall_scale(QEps(el.q(), Rational(integer())),
                        hall_unit(el.q()));
    std::string name = ident();
    if (name.empty()) fail("expected an element, a scalar, or '('");
    if (name == "eps") {
      if (!eat('^')) fail("expected '^' after eps");
      return hall_scale(QEps::eps_pow(el.q(), integer()),
                        hall_unit(el.q()));
    }
    return named(name);
  }

  HallElem term() {
    HallElem f = factor();
    while (eat('*')) f = el.algebra().product(f, factor());
    return f;
  }

  HallElem expr() {
    HallElem f = term();
    while (true) {
      skip_ws();
      if (eat('+'))
        f = hall_add(f, term());
      else if (pos < src.size() && src[pos] == '-') {
        ++pos;
        f = hall_sub(f, term());
      } else {
        return f;
      }
    }
  }
};

}  // namespace

HallElem parse_element(const std::string& src, NamedElements& el) {
  Parser p{src, el};
  HallElem f = p.expr();
  p.skip_ws();
  if (p.pos != src.size()) p.fail("unexpected trailing input");
  return f;
}

}  // namespace kron

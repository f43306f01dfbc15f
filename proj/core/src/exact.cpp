#include "gutscat/exact.hpp"

#include <cctype>

namespace gutscat {

namespace {

BigInt parse_integer(const std::string& s, bool allow_sign) {
  std::size_t i = 0;
  bool neg = false;
  if (allow_sign && i < s.size() && (s[i] == '-' || s[i] == '+')) neg = s[i++] == '-';
  if (i == s.size()) throw DomainError("malformed rational: '" + s + "'");
  BigInt v = 0;
  for (; i < s.size(); ++i) {
    if (!std::isdigit(static_cast<unsigned char>(s[i]))) throw DomainError("malformed rational: '" + s + "'");
    v = v * 10 + (s[i] - '0');
  }
  return neg ? BigInt(-v) : v;
}

}  // namespace

Rational parse_rational(const std::string& text) {
  const auto slash = text.find('/');
  if (slash == std::string::npos) return Rational(parse_integer(text, true));
  const BigInt num = parse_integer(text.substr(0, slash), true);
  const BigInt den = parse_integer(text.substr(slash + 1), false);
  if (den == 0) throw DomainError("zero denominator in '" + text + "'");
  return Rational(num, den);
}

}  // namespace gutscat

#include "twosort/rational.hpp"

#include <cctype>

#include "twosort/error.hpp"

namespace twosort {

namespace {

bool all_digits(const std::string& s) {
  if (s.empty()) return false;
  for (char c : s)
    if (!std::isdigit(static_cast<unsigned char>(c))) return false;
  return true;
}

}  // namespace

Rat parse_rational(const std::string& text) {
  std::string s = text;
  bool neg = false;
  if (!s.empty() && (s[0] == '-' || s[0] == '+')) {
    neg = s[0] == '-';
    s = s.substr(1);
  }
  if (s.empty()) throw Error(Error::Kind::Syntax, "empty rational literal");

  Rat value;
  auto slash = s.find('/');
  auto dot = s.find('.');
  if (slash != std::string::npos) {
    std::string num = s.substr(0, slash);
    std::string den = s.substr(slash + 1);
    if (!all_digits(num) || !all_digits(den))
      throw Error(Error::Kind::Syntax, "malformed rational '" + text + "'");
    BigInt d(den);
    if (d == 0) throw Error(Error::Kind::Syntax, "zero denominator in '" + text + "'");
    value = Rat(BigInt(num), d);
  } else if (dot != std::string::npos) {
    std::string whole = s.substr(0, dot);
    std::string frac = s.substr(dot + 1);
    if (whole.empty()) whole = "0";
    if (!all_digits(whole) || (!frac.empty() && !all_digits(frac)))
      throw Error(Error::Kind::Syntax, "malformed decimal '" + text + "'");
    BigInt den = 1;
    for (std::size_t i = 0; i < frac.size(); ++i) den *= 10;
    BigInt num = BigInt(whole) * den + (frac.empty() ? BigInt(0) : BigInt(frac));
    value = Rat(num, den);
  } else {
    if (!all_digits(s)) throw Error(Error::Kind::Syntax, "malformed rational '" + text + "'");
    value = Rat(BigInt(s));
  }
  return neg ? Rat(-value) : value;
}

std::string rat_str(const Rat& r) {
  BigInt num = numerator(r);
  BigInt den = denominator(r);
  if (den == 1) return num.str();
  return num.str() + "/" + den.str();
}

}  // namespace twosort

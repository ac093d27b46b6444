#include "twinlim/rational.hpp"

#include <cctype>

#include "twinlim/errors.hpp"

namespace twinlim {

namespace {

bool is_integer_literal(std::string_view s) {
  if (s.empty()) return false;
  std::size_t i = (s[0] == '-' || s[0] == '+') ? 1 : 0;
  if (i == s.size()) return false;
  for (; i < s.size(); ++i)
    if (!std::isdigit(static_cast<unsigned char>(s[i]))) return false;
  return true;
}

}  // namespace

Rational parse_rational(std::string_view text) {
  std::string s(text);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.pop_back();
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.erase(s.begin());
  if (!s.empty() && s.front() == '+') s.erase(s.begin());
  auto slash = s.find('/');
  auto dot = s.find('.');
  if (slash != std::string::npos) {
    std::string num = s.substr(0, slash), den = s.substr(slash + 1);
    if (!is_integer_literal(num) || !is_integer_literal(den) || den[0] == '-' || den[0] == '+')
      throw ParseError("malformed rational '" + s + "'");
    Rational r{mpz_class(num), mpz_class(den)};
    if (r.get_den() == 0) throw ParseError("zero denominator in '" + s + "'");
    r.canonicalize();
    return r;
  }
  if (dot != std::string::npos) {
    std::string whole = s.substr(0, dot), frac = s.substr(dot + 1);
    bool neg = !whole.empty() && whole[0] == '-';
    if (whole.empty() || whole == "-" || whole == "+") whole += "0";
    if (!is_integer_literal(whole) || (!frac.empty() && !is_integer_literal(frac)) ||
        (!frac.empty() && (frac[0] == '-' || frac[0] == '+')))
      throw ParseError("malformed rational '" + s + "'");
    mpz_class scale = 1;
    for (std::size_t i = 0; i < frac.size(); ++i) scale *= 10;
    Rational r(mpz_class(frac.empty() ? "0" : frac), scale);
    r.canonicalize();
    Rational w{mpz_class(whole)};
    return neg ? Rational(w - r) : Rational(w + r);
  }
  if (!is_integer_literal(s)) throw ParseError("malformed rational '" + s + "'");
  return Rational(mpz_class(s));
}

std::string to_string(const Rational& r) {
  if (r.get_den() == 1) return r.get_num().get_str();
  return r.get_num().get_str() + "/" + r.get_den().get_str();
}

Rational pow2_neg(unsigned k) {
  mpz_class den = 1;
  den <<= k;
  return Rational(1, den);
}

}  // namespace twinlim

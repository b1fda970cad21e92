#include "homalg/rational.hpp"

#include <cctype>

namespace homalg {

std::string to_string(const Rational& q) { return q.get_str(); }

Rational parse_rational(const std::string& text) {
  std::size_t i = 0;
  std::string num, den;
  if (i < text.size() && (text[i] == '-' || text[i] == '+')) num += text[i++];
  while (i < text.size() && std::isdigit(static_cast<unsigned char>(text[i]))) num += text[i++];
  if (num.empty() || num == "-" || num == "+") throw std::invalid_argument("bad rational: '" + text + "'");
  if (i < text.size() && text[i] == '/') {
    ++i;
    while (i < text.size() && std::isdigit(static_cast<unsigned char>(text[i]))) den += text[i++];
    if (den.empty()) throw std::invalid_argument("bad rational: '" + text + "'");
  }
  if (i != text.size()) throw std::invalid_argument("bad rational: '" + text + "'");
  if (num[0] == '+') num.erase(0, 1);
  mpz_class n(num), d(den.empty() ? std::string("1") : den);
  if (d == 0) throw std::invalid_argument("zero denominator: '" + text + "'");
  Rational q(n, d);
  q.canonicalize();
  return q;
}

}  // namespace homalg

#include "atiyah_lab/rational.hpp"

#include <cctype>

#include "atiyah_lab/errors.hpp"

namespace alab {

namespace {

mpz_class parse_integer(std::string_view text, std::size_t offset, bool allow_sign) {
  std::size_t pos = 0;
  bool negative = false;
  if (allow_sign && pos < text.size() && (text[pos] == '-' || text[pos] == '+')) {
    negative = text[pos] == '-';
    ++pos;
  }
  if (pos == text.size())
    throw SyntaxError(offset + pos, "expected digits");
  for (std::size_t i = pos; i < text.size(); ++i) {
    if (!std::isdigit(static_cast<unsigned char>(text[i])))
      throw SyntaxError(offset + i, std::string("unexpected character '") + text[i] + "'");
  }
  mpz_class value(std::string(text.substr(pos)), 10);
  return negative ? mpz_class(-value) : value;
}

}  // namespace

Rational parse_rational(std::string_view text) {
  const auto slash = text.find('/');
  if (slash == std::string_view::npos)
    return Rational(parse_integer(text, 0, true));
  mpz_class num = parse_integer(text.substr(0, slash), 0, true);
  mpz_class den = parse_integer(text.substr(slash + 1), slash + 1, false);
  if (den == 0)
    throw InputError("zero denominator in rational '" + std::string(text) + "'");
  Rational value(num, den);
  value.canonicalize();
  return value;
}

std::string to_string(const Rational& value) { return value.get_str(); }

}  // namespace alab

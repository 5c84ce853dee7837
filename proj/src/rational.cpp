#include "gromov/rational.hpp"

#include <cctype>

#include "gromov/errors.hpp"

namespace gromov {

Rat make_rat(long num, long den) {
  if (den == 0) throw NumberFormatError("division by zero");
  Rat r(num, den);
  r.canonicalize();
  return r;
}

namespace {

bool valid_integer(const std::string& t) {
  std::size_t i = (!t.empty() && (t[0] == '-' || t[0] == '+')) ? 1 : 0;
  if (i >= t.size()) return false;
  for (; i < t.size(); ++i)
    if (!std::isdigit(static_cast<unsigned char>(t[i]))) return false;
  return true;
}

}  // namespace

Rat parse_rat(const std::string& text) {
  const auto slash = text.find('/');
  if (slash != std::string::npos) {
    const std::string num = text.substr(0, slash);
    const std::string den = text.substr(slash + 1);
    if (!valid_integer(num) || !valid_integer(den) || den == "0")
      throw NumberFormatError(text);
    Rat r{Int(num), Int(den)};
    r.canonicalize();
    return r;
  }
  const auto dot = text.find('.');
  if (dot != std::string::npos) {
    const std::string whole = text.substr(0, dot);
    const std::string frac = text.substr(dot + 1);
    if (frac.empty() || !valid_integer(frac) || frac[0] == '-' ||
        frac[0] == '+' || (!whole.empty() && whole != "-" && whole != "+" &&
                           !valid_integer(whole)))
      throw NumberFormatError(text);
    const bool negative = !whole.empty() && whole[0] == '-';
    Int whole_part = 0;
    if (whole != "" && whole != "-" && whole != "+") whole_part = Int(whole);
    if (whole_part < 0) whole_part = -whole_part;
    Int den = 1;
    for (std::size_t i = 0; i < frac.size(); ++i) den *= 10;
    Int num = whole_part * den + Int(frac);
    if (negative) num = -num;
    Rat r(num, den);
    r.canonicalize();
    return r;
  }
  if (!valid_integer(text)) throw NumberFormatError(text);
  return Rat(Int(text));
}

std::string rat_to_string(const Rat& value) { return value.get_str(); }

}  // namespace gromov

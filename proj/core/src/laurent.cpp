#include "coxtl/laurent.hpp"

#include "coxtl/errors.hpp"

#include <algorithm>
#include <charconv>
#include <stdexcept>

namespace coxtl {

namespace {

std::int64_t checked_add(std::int64_t a, std::int64_t b) {
  std::int64_t r;
  if (__builtin_add_overflow(a, b, &r))
    throw std::overflow_error("LaurentPoly: coefficient addition overflow");
  return r;
}

std::int64_t checked_mul(std::int64_t a, std::int64_t b) {
  std::int64_t r;
  if (__builtin_mul_overflow(a, b, &r))
    throw std::overflow_error("LaurentPoly: coefficient multiplication overflow");
  return r;
}

std::int32_t checked_exp_add(std::int32_t a, std::int32_t b) {
  std::int64_t r = static_cast<std::int64_t>(a) + b;
  if (r < INT32_MIN || r > INT32_MAX)
    throw std::overflow_error("LaurentPoly: exponent overflow");
  return static_cast<std::int32_t>(r);
}

} // namespace

LaurentPoly LaurentPoly::monomial(std::int64_t coeff, std::int32_t exp) {
  LaurentPoly p;
  if (coeff != 0) p.terms_.push_back({exp, coeff});
  return p;
}

LaurentPoly LaurentPoly::qc() {
  LaurentPoly p;
  p.terms_ = {{-1, 1}, {1, 1}};
  return p;
}

bool LaurentPoly::is_one() const {
  return terms_.size() == 1 && terms_[0].exp == 0 && terms_[0].coeff == 1;
}

std::int64_t LaurentPoly::coeff(std::int32_t exp) const {
  auto it = std::lower_bound(terms_.begin(), terms_.end(), exp,
                             [](const Term& t, std::int32_t e) { return t.exp < e; });
  if (it != terms_.end() && it->exp == exp) return it->coeff;
  return 0;
}

std::int32_t LaurentPoly::min_exp() const {
  if (terms_.empty()) throw ContractError("LaurentPoly::min_exp on zero polynomial");
  return terms_.front().exp;
}

std::int32_t LaurentPoly::max_exp() const {
  if (terms_.empty()) throw ContractError("LaurentPoly::max_exp on zero polynomial");
  return terms_.back().exp;
}

LaurentPoly LaurentPoly::bar() const {
  LaurentPoly r;
  r.terms_.reserve(terms_.size());
  for (auto it = terms_.rbegin(); it != terms_.rend(); ++it)
    r.terms_.push_back({-it->exp, it->coeff});
  return r;
}

bool LaurentPoly::in_lattice(std::int32_t k) const {
  return terms_.empty() || terms_.back().exp <= -k;
}

LaurentPoly LaurentPoly::operator-() const {
  LaurentPoly r = *this;
  for (auto& t : r.terms_) t.coeff = -t.coeff;
  return r;
}

LaurentPoly LaurentPoly::operator+(const LaurentPoly& rhs) const {
  LaurentPoly r;
  r.terms_.reserve(terms_.size() + rhs.terms_.size());
  auto a = terms_.begin(), ae = terms_.end();
  auto b = rhs.terms_.begin(), be = rhs.terms_.end();
  while (a != ae && b != be) {
    if (a->exp < b->exp) {
      r.terms_.push_back(*a++);
    } else if (b->exp < a->exp) {
      r.terms_.push_back(*b++);
    } else {
      std::int64_t c = checked_add(a->coeff, b->coeff);
      if (c != 0) r.terms_.push_back({a->exp, c});
      ++a;
      ++b;
    }
  }
  r.terms_.insert(r.terms_.end(), a, ae);
  r.terms_.insert(r.terms_.end(), b, be);
  return r;
}

LaurentPoly LaurentPoly::operator-(const LaurentPoly& rhs) const {
  return *this + (-rhs);
}

LaurentPoly LaurentPoly::operator*(const LaurentPoly& rhs) const {
  LaurentPoly acc;
  for (const Term& t : terms_) {
    LaurentPoly part;
    part.terms_.reserve(rhs.terms_.size());
    for (const Term& u : rhs.terms_)
      part.terms_.push_back({checked_exp_add(t.exp, u.exp), checked_mul(t.coeff, u.coeff)});
    acc = acc + part;
  }
  return acc;
}

LaurentPoly LaurentPoly::times(std::int64_t scalar) const {
  LaurentPoly r;
  if (scalar == 0) return r;
  r.terms_.reserve(terms_.size());
  for (const Term& t : terms_) r.terms_.push_back({t.exp, checked_mul(t.coeff, scalar)});
  return r;
}

LaurentPoly LaurentPoly::shifted(std::int32_t shift) const {
  LaurentPoly r = *this;
  for (auto& t : r.terms_) t.exp = checked_exp_add(t.exp, shift);
  return r;
}

std::string LaurentPoly::to_string() const {
  if (terms_.empty()) return "0";
  std::string s;
  for (std::size_t i = 0; i < terms_.size(); ++i) {
    if (i) s += ' ';
    s += std::to_string(terms_[i].coeff);
    s += ':';
    s += std::to_string(terms_[i].exp);
  }
  return s;
}

LaurentPoly LaurentPoly::parse(std::string_view text) {
  // trim
  while (!text.empty() && (text.front() == ' ' || text.front() == '\t')) text.remove_prefix(1);
  while (!text.empty() && (text.back() == ' ' || text.back() == '\t' || text.back() == '\n' ||
                           text.back() == '\r'))
    text.remove_suffix(1);
  if (text == "0") return zero();
  if (text.empty()) throw ParseError("LaurentPoly: empty text");

  LaurentPoly p;
  std::size_t pos = 0;
  while (pos < text.size()) {
    std::size_t next = text.find(' ', pos);
    std::string_view tok = text.substr(pos, next == std::string_view::npos ? next : next - pos);
    pos = next == std::string_view::npos ? text.size() : next + 1;
    if (tok.empty()) continue;
    std::size_t colon = tok.find(':');
    if (colon == std::string_view::npos)
      throw ParseError("LaurentPoly: bad term '" + std::string(tok) + "'");
    std::int64_t c = 0;
    std::int32_t e = 0;
    auto cr = std::from_chars(tok.data(), tok.data() + colon, c);
    auto er = std::from_chars(tok.data() + colon + 1, tok.data() + tok.size(), e);
    if (cr.ec != std::errc() || cr.ptr != tok.data() + colon || er.ec != std::errc() ||
        er.ptr != tok.data() + tok.size())
      throw ParseError("LaurentPoly: bad term '" + std::string(tok) + "'");
    if (c == 0) throw ParseError("LaurentPoly: explicit zero coefficient");
    if (!p.terms_.empty() && p.terms_.back().exp >= e)
      throw ParseError("LaurentPoly: exponents not strictly ascending");
    p.terms_.push_back({e, c});
  }
  if (p.terms_.empty()) throw ParseError("LaurentPoly: no terms");
  return p;
}

std::size_t LaurentPoly::hash() const {
  std::size_t h = 0xcbf29ce484222325ull;
  auto mix = [&h](std::uint64_t x) {
    h ^= x + 0x9e3779b97f4a7c15ull + (h << 6) + (h >> 2);
  };
  for (const Term& t : terms_) {
    mix(static_cast<std::uint64_t>(static_cast<std::uint32_t>(t.exp)));
    mix(static_cast<std::uint64_t>(t.coeff));
  }
  return h;
}

} // namespace coxtl

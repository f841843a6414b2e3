#ifndef COXTL_LAURENT_HPP
#define COXTL_LAURENT_HPP

#include <cstdint>
#include <functional>
#include <string>
#include <string_view>
#include <vector>

namespace coxtl {

/*
  Exact arithmetic in Z[v, v^-1].

  A polynomial is a sorted sparse list of (exponent, coefficient) terms with
  no zero coefficients, so equality is structural.  Coefficients are checked
  64-bit integers: overflow throws std::overflow_error instead of wrapping.

  Values are immutable in spirit: all operators return fresh objects and the
  compound assignments replace the whole value.  Safe to share across threads.
*/
class LaurentPoly {
public:
  struct Term {
    std::int32_t exp;
    std::int64_t coeff;
    friend bool operator==(const Term&, const Term&) = default;
  };

  LaurentPoly() = default;

  static LaurentPoly zero() { return LaurentPoly(); }
  static LaurentPoly constant(std::int64_t c) { return monomial(c, 0); }
  static LaurentPoly one() { return constant(1); }
  static LaurentPoly monomial(std::int64_t coeff, std::int32_t exp);
  // v^exp
  static LaurentPoly v(std::int32_t exp = 1) { return monomial(1, exp); }
  // q_c = [2] = v + v^-1
  static LaurentPoly qc();

  bool is_zero() const { return terms_.empty(); }
  bool is_one() const;
  const std::vector<Term>& terms() const { return terms_; }

  // Coefficient of v^exp (0 if absent).
  std::int64_t coeff(std::int32_t exp) const;
  // Extreme exponents; require a nonzero polynomial.
  std::int32_t min_exp() const;
  std::int32_t max_exp() const;

  // The involution v |-> v^-1.
  LaurentPoly bar() const;

  // true iff every exponent is <= -k, i.e. the value lies in v^-k Z[v^-1].
  bool in_lattice(std::int32_t k) const;

  LaurentPoly operator-() const;
  LaurentPoly operator+(const LaurentPoly& rhs) const;
  LaurentPoly operator-(const LaurentPoly& rhs) const;
  LaurentPoly operator*(const LaurentPoly& rhs) const;
  LaurentPoly& operator+=(const LaurentPoly& rhs) { return *this = *this + rhs; }
  LaurentPoly& operator-=(const LaurentPoly& rhs) { return *this = *this - rhs; }
  LaurentPoly& operator*=(const LaurentPoly& rhs) { return *this = *this * rhs; }

  LaurentPoly times(std::int64_t scalar) const;
  // Multiply by v^shift.
  LaurentPoly shifted(std::int32_t shift) const;

  bool operator==(const LaurentPoly& rhs) const { return terms_ == rhs.terms_; }

  // Canonical textual form: space-separated `coeff:exp` pairs in ascending
  // exponent order, or `0` for the zero polynomial.  Bit-exact; used by the
  // KL cache format and test fixtures.
  std::string to_string() const;
  static LaurentPoly parse(std::string_view text);

  std::size_t hash() const;

private:
  std::vector<Term> terms_; // ascending exponent, nonzero coefficients
};

struct LaurentPolyHash {
  std::size_t operator()(const LaurentPoly& p) const { return p.hash(); }
};

} // namespace coxtl

#endif

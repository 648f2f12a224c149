#pragma once

#include <cstdint>
#include <vector>

namespace aoa::gf {

// Element of GF(p^m), identified by its coefficient vector read as a base-p
// integer (coefficient of x^i is digit i). 0 and 1 are the field's zero and one.
struct Element {
  int value = 0;
  friend bool operator==(Element, Element) = default;
  friend auto operator<=>(Element, Element) = default;
};

class Field {
 public:
  // Throws std::invalid_argument unless s is a prime power <= 2^16.
  explicit Field(int s);

  int characteristic() const { return p_; }
  int degree() const { return m_; }
  int order() const { return s_; }
  // Monic modulus, coefficients of x^0..x^m.
  const std::vector<int>& modulus() const { return modulus_; }

  Element zero() const { return {0}; }
  Element one() const { return {1}; }
  Element element(int v) const;
  std::vector<int> coeffs(Element e) const;

  Element add(Element a, Element b) const;
  Element sub(Element a, Element b) const;
  Element neg(Element a) const;
  Element mul(Element a, Element b) const;
  Element inv(Element a) const;  // throws std::domain_error on zero
  Element div(Element a, Element b) const { return mul(a, inv(b)); }
  Element pow(Element a, std::int64_t e) const;
  Element frobenius(Element a) const { return pow(a, p_); }
  // Image of an integer in the prime subfield.
  Element from_int(std::int64_t n) const;

  // T(e) = sum of e^(p^i), i < m.
  Element trace(Element e) const;
  bool is_square(Element e) const;

  int to_level(Element e) const { return e.value + 1; }
  Element from_level(int level) const;

 private:
  Element mul_slow(Element a, Element b) const;

  int p_ = 0;
  int m_ = 0;
  int s_ = 0;
  std::vector<int> modulus_;
  std::vector<std::uint16_t> add_;
  std::vector<std::uint16_t> mul_;
  std::vector<std::uint16_t> neg_;
  std::vector<std::uint16_t> inv_;
  bool tables_ = false;
};

// Returns {p, m} with s = p^m, or {0, 0} if s is not a prime power.
std::pair<int, int> prime_power(int s);

inline Field make_field(int s) { return Field(s); }

// Characteristic 2: im(x -> x + x^2) == ker T.
bool cotrace_image_check(const Field& f);
// First element in enumeration order that is not a square (odd order only).
Element find_nonsquare(const Field& f);
// First element with z^(s/2) != z and T(z) = 1 (even order > 2 only).
Element find_zeta(const Field& f);

}  // namespace aoa::gf

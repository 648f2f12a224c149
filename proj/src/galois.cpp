#include "aoa/galois.hpp"

#include <set>
#include <stdexcept>
#include <string>

namespace aoa::gf {

namespace {

using Poly = std::vector<int>;  // coefficients low to high

void trim(Poly& a) {
  while (!a.empty() && a.back() == 0) a.pop_back();
}

// Remainder of a modulo monic b over GF(p).
Poly poly_mod(Poly a, const Poly& b, int p) {
  trim(a);
  const int db = static_cast<int>(b.size()) - 1;
  while (static_cast<int>(a.size()) - 1 >= db) {
    const int shift = static_cast<int>(a.size()) - 1 - db;
    const int c = a.back();
    for (int i = 0; i <= db; ++i) a[shift + i] = ((a[shift + i] - c * b[i]) % p + p) % p;
    trim(a);
  }
  return a;
}

Poly digits(int v, int p, int len) {
  Poly d(len, 0);
  for (int i = 0; i < len; ++i) {
    d[i] = v % p;
    v /= p;
  }
  return d;
}

bool irreducible(const Poly& f, int p) {
  const int m = static_cast<int>(f.size()) - 1;
  for (int d = 1; d <= m / 2; ++d) {
    int count = 1;
    for (int i = 0; i < d; ++i) count *= p;
    for (int low = 0; low < count; ++low) {
      Poly g = digits(low, p, d);
      g.push_back(1);
      if (poly_mod(f, g, p).empty()) return false;
    }
  }
  return true;
}

}  // namespace

std::pair<int, int> prime_power(int s) {
  if (s < 2) return {0, 0};
  int p = 0;
  for (int d = 2; d * d <= s; ++d)
    if (s % d == 0) {
      p = d;
      break;
    }
  if (p == 0) return {s, 1};
  int m = 0;
  while (s % p == 0) {
    s /= p;
    ++m;
  }
  if (s != 1) return {0, 0};
  return {p, m};
}

Field::Field(int s) {
  auto [p, m] = prime_power(s);
  if (p == 0) throw std::invalid_argument(std::to_string(s) + " is not a prime power");
  if (s > (1 << 16)) throw std::invalid_argument("field order above 2^16");
  p_ = p;
  m_ = m;
  s_ = s;
  if (m == 1) {
    modulus_ = {0, 1};
  } else {
    for (int low = 0; low < s; ++low) {
      Poly f = digits(low, p, m);
      f.push_back(1);
      if (irreducible(f, p)) {
        modulus_ = f;
        break;
      }
    }
  }
  if (s_ <= 256) {
    const std::size_t n = static_cast<std::size_t>(s_) * s_;
    add_.resize(n);
    mul_.resize(n);
    neg_.resize(s_);
    inv_.assign(s_, 0);
    for (int a = 0; a < s_; ++a) {
      Poly da = digits(a, p_, m_);
      Poly dn(m_);
      for (int i = 0; i < m_; ++i) dn[i] = (p_ - da[i]) % p_;
      int nv = 0;
      for (int i = m_ - 1; i >= 0; --i) nv = nv * p_ + dn[i];
      neg_[a] = static_cast<std::uint16_t>(nv);
      for (int b = 0; b < s_; ++b) {
        Poly db = digits(b, p_, m_);
        int v = 0;
        for (int i = m_ - 1; i >= 0; --i) v = v * p_ + (da[i] + db[i]) % p_;
        add_[static_cast<std::size_t>(a) * s_ + b] = static_cast<std::uint16_t>(v);
        mul_[static_cast<std::size_t>(a) * s_ + b] = static_cast<std::uint16_t>(mul_slow({a}, {b}).value);
      }
    }
    for (int a = 1; a < s_; ++a)
      for (int b = 1; b < s_; ++b)
        if (mul_[static_cast<std::size_t>(a) * s_ + b] == 1) inv_[a] = static_cast<std::uint16_t>(b);
    tables_ = true;
  }
}

Element Field::element(int v) const {
  if (v < 0 || v >= s_) throw std::out_of_range("field element out of range");
  return {v};
}

std::vector<int> Field::coeffs(Element e) const { return digits(e.value, p_, m_); }

Element Field::mul_slow(Element a, Element b) const {
  Poly da = digits(a.value, p_, m_), db = digits(b.value, p_, m_);
  Poly prod(2 * m_, 0);
  for (int i = 0; i < m_; ++i)
    for (int j = 0; j < m_; ++j) prod[i + j] = (prod[i + j] + da[i] * db[j]) % p_;
  Poly r = poly_mod(prod, modulus_, p_);
  int v = 0;
  for (int i = static_cast<int>(r.size()) - 1; i >= 0; --i) v = v * p_ + r[i];
  return {v};
}

Element Field::add(Element a, Element b) const {
  if (tables_) return {add_[static_cast<std::size_t>(a.value) * s_ + b.value]};
  Poly da = digits(a.value, p_, m_), db = digits(b.value, p_, m_);
  int v = 0;
  for (int i = m_ - 1; i >= 0; --i) v = v * p_ + (da[i] + db[i]) % p_;
  return {v};
}

Element Field::neg(Element a) const {
  if (tables_) return {neg_[a.value]};
  Poly da = digits(a.value, p_, m_);
  int v = 0;
  for (int i = m_ - 1; i >= 0; --i) v = v * p_ + (p_ - da[i]) % p_;
  return {v};
}

Element Field::sub(Element a, Element b) const { return add(a, neg(b)); }

Element Field::mul(Element a, Element b) const {
  if (tables_) return {mul_[static_cast<std::size_t>(a.value) * s_ + b.value]};
  return mul_slow(a, b);
}

Element Field::inv(Element a) const {
  if (a.value == 0) throw std::domain_error("inverse of zero");
  if (tables_) return {inv_[a.value]};
  return pow(a, s_ - 2);
}

Element Field::pow(Element a, std::int64_t e) const {
  if (e < 0) return pow(inv(a), -e);
  Element r = one(), b = a;
  while (e > 0) {
    if (e & 1) r = mul(r, b);
    b = mul(b, b);
    e >>= 1;
  }
  return r;
}

Element Field::from_int(std::int64_t n) const {
  return {static_cast<int>(((n % p_) + p_) % p_)};
}

Element Field::trace(Element e) const {
  Element t = zero(), cur = e;
  for (int i = 0; i < m_; ++i) {
    t = add(t, cur);
    cur = frobenius(cur);
  }
  return t;
}

bool Field::is_square(Element e) const {
  for (int x = 0; x < s_; ++x)
    if (mul({x}, {x}) == e) return true;
  return false;
}

Element Field::from_level(int level) const {
  if (level < 1 || level > s_) throw std::out_of_range("level out of range");
  return {level - 1};
}

bool cotrace_image_check(const Field& f) {
  if (f.characteristic() != 2) throw std::invalid_argument("cotrace map needs characteristic 2");
  std::set<int> image, kernel;
  for (int x = 0; x < f.order(); ++x) {
    Element e{x};
    image.insert(f.add(e, f.mul(e, e)).value);
    if (f.trace(e) == f.zero()) kernel.insert(x);
  }
  return image == kernel;
}

Element find_nonsquare(const Field& f) {
  if (f.characteristic() == 2) throw std::invalid_argument("every element of an even-order field is a square");
  for (int x = 0; x < f.order(); ++x)
    if (!f.is_square({x})) return {x};
  throw std::logic_error("no non-square found");
}

Element find_zeta(const Field& f) {
  if (f.characteristic() != 2) throw std::invalid_argument("zeta needs an even-order field");
  if (f.order() == 2) throw std::invalid_argument("no zeta in GF(2)");
  for (int x = 0; x < f.order(); ++x) {
    Element z{x};
    if (f.pow(z, f.order() / 2) != z && f.trace(z) == f.one()) return z;
  }
  throw std::logic_error("no zeta found");
}

}  // namespace aoa::gf

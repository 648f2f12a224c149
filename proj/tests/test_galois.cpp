#include <random>
#include <set>

#include "doctest.h"

#include "aoa/galois.hpp"

using namespace aoa::gf;

TEST_CASE("field construction") {
  Field f4(4);
  CHECK(f4.modulus() == std::vector<int>{1, 1, 1});
  Field f9(9);
  CHECK(f9.modulus() == std::vector<int>{1, 0, 1});
  CHECK_THROWS(Field(6));
  CHECK_THROWS(Field(1));
  CHECK_THROWS(Field(12));
  CHECK(prime_power(27) == std::pair<int, int>{3, 3});
  CHECK(prime_power(10) == std::pair<int, int>{0, 0});
}

TEST_CASE("field arithmetic examples") {
  Field f4(4);
  Element w{2};
  CHECK(f4.mul(w, w) == f4.add(w, f4.one()));
  Field f5(5);
  CHECK(f5.inv(Element{2}) == Element{3});
  Field f3(3);
  CHECK(f3.add(Element{2}, Element{2}) == Element{1});
  CHECK_THROWS(f5.inv(f5.zero()));
  CHECK_THROWS(f5.element(5));
}

TEST_CASE("field axioms on random triples") {
  std::mt19937_64 rng(1);
  for (int s : {2, 3, 4, 5, 7, 8, 9, 11, 13, 16}) {
    Field f(s);
    std::uniform_int_distribution<int> d(0, s - 1);
    for (int rep = 0; rep < 300; ++rep) {
      Element a{d(rng)}, b{d(rng)}, c{d(rng)};
      CHECK(f.add(f.add(a, b), c) == f.add(a, f.add(b, c)));
      CHECK(f.mul(f.mul(a, b), c) == f.mul(a, f.mul(b, c)));
      CHECK(f.mul(a, f.add(b, c)) == f.add(f.mul(a, b), f.mul(a, c)));
      CHECK(f.add(a, f.neg(a)) == f.zero());
      CHECK(f.mul(a, b) == f.mul(b, a));
      if (a != f.zero()) CHECK(f.mul(a, f.inv(a)) == f.one());
    }
  }
}

TEST_CASE("frobenius is additive and bijective") {
  for (int s : {4, 8, 9, 16, 25}) {
    Field f(s);
    std::set<int> img;
    for (int a = 0; a < s; ++a) {
      img.insert(f.frobenius(Element{a}).value);
      for (int b = 0; b < s; ++b)
        CHECK(f.frobenius(f.add(Element{a}, Element{b})) == f.add(f.frobenius(Element{a}), f.frobenius(Element{b})));
    }
    CHECK(img.size() == static_cast<std::size_t>(s));
  }
}

TEST_CASE("trace") {
  Field f4(4);
  CHECK(f4.trace(f4.one()) == f4.zero());
  CHECK(f4.trace(Element{2}) == f4.one());
  Field f2(2);
  CHECK(f2.trace(Element{0}) == Element{0});
  CHECK(f2.trace(Element{1}) == Element{1});
  for (int s : {4, 8, 16, 9, 27}) {
    Field f(s);
    std::set<int> img;
    for (int a = 0; a < s; ++a) {
      Element t = f.trace(Element{a});
      CHECK(t.value < f.characteristic());
      img.insert(t.value);
      for (int b = 0; b < s; ++b)
        CHECK(f.trace(f.add(Element{a}, Element{b})) == f.add(t, f.trace(Element{b})));
      for (int c = 0; c < f.characteristic(); ++c)
        CHECK(f.trace(f.mul(f.from_int(c), Element{a})) == f.mul(f.from_int(c), t));
    }
    CHECK(img.size() == static_cast<std::size_t>(f.characteristic()));
  }
}

TEST_CASE("cotrace image") {
  CHECK(cotrace_image_check(Field(2)));
  CHECK(cotrace_image_check(Field(4)));
  CHECK(cotrace_image_check(Field(8)));
  CHECK(cotrace_image_check(Field(16)));
  CHECK_THROWS(cotrace_image_check(Field(3)));
}

TEST_CASE("nonsquare") {
  CHECK(find_nonsquare(Field(5)) == Element{2});
  CHECK(find_nonsquare(Field(3)) == Element{2});
  CHECK_THROWS(find_nonsquare(Field(4)));
  Field f9(9);
  CHECK_FALSE(f9.is_square(find_nonsquare(f9)));
}

TEST_CASE("zeta") {
  Field f4(4);
  CHECK(find_zeta(f4) == Element{2});
  Field f8(8);
  Element z = find_zeta(f8);
  CHECK(z.value >= 2);
  CHECK(f8.pow(z, 4) != z);
  CHECK(f8.trace(z) == f8.one());
  // x itself has trace 0 in GF(2)[x]/(x^3+x+1), so the first hit is x+1
  CHECK(f8.trace(Element{2}) == f8.zero());
  CHECK(z == Element{3});
  CHECK_THROWS(find_zeta(Field(2)));
  CHECK_THROWS(find_zeta(Field(3)));
}

TEST_CASE("level bijection") {
  Field f3(3);
  CHECK(f3.to_level(Element{0}) == 1);
  CHECK(f3.to_level(Element{2}) == 3);
  Field f4(4);
  CHECK(f4.to_level(Element{2}) == 3);
  CHECK(f4.to_level(f4.add(Element{2}, f4.one())) == 4);
  for (int s : {2, 4, 7, 9})
    for (int l = 1; l <= s; ++l) CHECK(Field(s).to_level(Field(s).from_level(l)) == l);
  CHECK_THROWS(f3.from_level(4));
}

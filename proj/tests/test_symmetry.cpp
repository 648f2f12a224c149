#include <algorithm>
#include <numeric>
#include <random>

#include "doctest.h"

#include "aoa/metrics.hpp"
#include "aoa/symmetry.hpp"
#include "fixtures.hpp"

using namespace aoa;
using namespace aoa::sym;

namespace {

Array bicyclic_example() {
  return Array(3, {{1, 1, 2, 3, 2}, {3, 2, 2, 1, 3}, {3, 1, 3, 2, 1}, {1, 3, 2, 1, 1}, {3, 2, 1, 2, 2}, {2, 1, 3, 3, 3}});
}

Array quasicyclic_example() {
  return Array(3, {{1, 1, 1, 1, 1}, {1, 1, 2, 3, 2}, {1, 1, 3, 2, 3}, {1, 3, 2, 1, 1}, {1, 2, 3, 1, 1}});
}

Permutation random_perm(std::mt19937_64& rng, int n) {
  std::vector<int> v(n);
  std::iota(v.begin(), v.end(), 1);
  std::shuffle(v.begin(), v.end(), rng);
  return Permutation(v);
}

}  // namespace

TEST_CASE("permutations") {
  Permutation c = Permutation::from_cycles(4, {{1, 2, 3}});
  CHECK(c(1) == 2);
  CHECK(c(3) == 1);
  CHECK(c(4) == 4);
  CHECK(c.str() == "(1,2,3)");
  CHECK((c * c.inverse()).is_identity());
  CHECK(Permutation::parse("(1,4)(2,3)", 4)(2) == 3);
  CHECK(Permutation::parse("id", 3).is_identity());
  CHECK_THROWS(Permutation({1, 1}));
  CHECK_THROWS(Permutation::parse("(1,5)", 4));
}

TEST_CASE("act examples") {
  GroupElement swap_levels{Permutation::from_cycles(2, {{1, 2}}), Permutation::identity(2)};
  CHECK(act(swap_levels, Array(2, {{1, 1}, {2, 2}})) == Array(2, {{2, 2}, {1, 1}}));
  GroupElement swap_cols{Permutation::identity(2), Permutation::from_cycles(2, {{1, 2}})};
  CHECK(act(swap_cols, Array(2, {{1, 2}, {1, 2}})) == Array(2, {{2, 1}, {2, 1}}));
  GroupElement gen = bicyclic_generator(3, 5, 3);
  Array a = bicyclic_example();
  Array b = act(gen, act(gen, act(gen, a)));
  CHECK(equivalent(a, b));
  CHECK_THROWS(act(gen, Array(3, {{1, 2}})));
}

TEST_CASE("equivalence") {
  Array a = bicyclic_example();
  std::vector<int> rev{5, 4, 3, 2, 1, 0};
  CHECK(equivalent(a, a.select_rows(rev)));
  CHECK_FALSE(equivalent(Array(2, {{1, 1}, {2, 2}}), Array(2, {{1, 2}, {2, 1}})));
  CHECK_THROWS(equivalent(Array(2, {{1, 1}}), Array(2, {{1, 1, 1}})));
}

TEST_CASE("automorphisms") {
  Array a(2, {{1, 1, 2, 2}, {1, 2, 1, 2}});
  CHECK(is_automorphism(GroupElement::parse("(1,2)|(1,4)(2,3)", 2, 4), a));
  CHECK_FALSE(is_automorphism(GroupElement::parse("id|(1,2)", 2, 2), Array(2, {{1, 2}, {1, 2}})));
  // a b c / b c a / c a b with a,b,c = 1,2,3
  Array c(3, {{1, 2, 3}, {2, 3, 1}, {3, 1, 2}});
  CHECK(is_automorphism(GroupElement::parse("(1,2)|(1,2)", 3, 3), c));
  CHECK(is_automorphism(GroupElement::parse("(1,2,3)|id", 3, 3), c));
  CHECK(is_automorphism(GroupElement::parse("id|(1,2,3)", 3, 3), c));
  CHECK_FALSE(is_automorphism(GroupElement::parse("(1,2)|id", 3, 3), c));
  CHECK_FALSE(is_automorphism(GroupElement::parse("id|(1,2)", 3, 3), c));
  Array b(3, {{1, 2, 3, 1}, {2, 1, 2, 1}});
  CHECK_FALSE(is_automorphism(GroupElement::parse("(1,2)|id", 3, 4), b));
}

TEST_CASE("bicyclic example expands and compresses") {
  SymmetricEncoding e = make_encoding(EncodingKind::bicyclic, 3, 5, 3);
  e.core = {{1, 1, 2, 3, 2}, {1, 3, 2, 1, 1}};
  Array full = expand(e);
  CHECK(full.runs() == 6);
  CHECK(equivalent(full, bicyclic_example()));
  CHECK(is_automorphism(e.generators[0], full));
  SymmetricEncoding c = compress(bicyclic_example(), EncodingKind::bicyclic, 3);
  CHECK(c.core.size() == 2);
  CHECK(equivalent(expand(c), bicyclic_example()));
  CHECK(default_bicyclic_r(3, 5) == 3);
  CHECK(default_bicyclic_r(4, 3) == 2);
}

TEST_CASE("quasicyclic example expands and compresses") {
  SymmetricEncoding e = make_encoding(EncodingKind::semicyclic, 3, 5, 2);
  e.core = {{1, 1, 2, 3, 2}, {1, 3, 2, 1, 1}};
  e.fixed_rows = {{1, 1, 1, 1, 1}};
  Array full = expand(e);
  CHECK(equivalent(full, quasicyclic_example()));
  CHECK(is_automorphism(e.generators[0], full));
  SymmetricEncoding c = compress(quasicyclic_example(), EncodingKind::semicyclic, 2);
  CHECK(c.core.size() == 2);
  CHECK(c.fixed_rows.size() == 1);
  CHECK(equivalent(expand(c), quasicyclic_example()));
  CHECK(semicyclic_fixed_count(9, 3, 2) == 1);
  CHECK(semicyclic_fixed_count(18, 3, 2) == 2);
}

TEST_CASE("encoding edge cases") {
  SymmetricEncoding e = make_encoding(EncodingKind::semicyclic, 3, 4, 2);
  e.fixed_rows = {{1, 1, 1, 1}};
  Array one = expand(e);
  CHECK(one.runs() == 1);
  CHECK(one.factors() == 4);
  e.core = {{1, 1, 1, 1}};
  CHECK_THROWS(expand(e));
  CHECK_THROWS(make_encoding(EncodingKind::klein, 2, 3, 0));
  CHECK_THROWS(make_encoding(EncodingKind::bicyclic, 4, 5, 3));
  CHECK_THROWS(compress(fixtures::oa4(), EncodingKind::bicyclic, 2));
}

TEST_CASE("klein encoding dedups fixed rows") {
  SymmetricEncoding e = make_encoding(EncodingKind::klein, 2, 4, 0);
  e.core = {{1, 1, 2, 2}, {1, 2, 1, 2}};
  Array full = expand(e);
  CHECK(full.runs() == 3);
  CHECK(is_automorphism(e.generators[0], full));
  CHECK(equivalent(expand(compress(full, EncodingKind::klein, 0)), full));
}

TEST_CASE("group action laws") {
  std::mt19937_64 rng(2);
  for (int rep = 0; rep < 100; ++rep) {
    Array a = fixtures::random_shape(rng, 8, 5, 4);
    const int s = a.levels(), k = a.factors();
    GroupElement id{Permutation::identity(s), Permutation::identity(k)};
    CHECK(act(id, a) == a);
    GroupElement g{random_perm(rng, s), random_perm(rng, k)};
    GroupElement h{random_perm(rng, s), random_perm(rng, k)};
    CHECK(act(g * h, a) == act(g, act(h, a)));
  }
}

TEST_CASE("metrics are invariant under the group") {
  std::mt19937_64 rng(6);
  for (int rep = 0; rep < 200; ++rep) {
    Array a = fixtures::random_shape(rng, 12, 5, 4);
    GroupElement g{random_perm(rng, a.levels()), random_perm(rng, a.factors())};
    Array b = act(g, a);
    for (int t = 1; t <= 2; ++t) {
      CHECK(tolerance(b, t) == tolerance(a, t));
      for (int p = 1; p <= 2; ++p) CHECK(unbalance(b, t, p) == unbalance(a, t, p));
    }
  }
}

TEST_CASE("random encodings round-trip and keep their generator") {
  std::mt19937_64 rng(13);
  for (int rep = 0; rep < 60; ++rep) {
    const int s = 3 + rep % 3, k = 5;
    EncodingKind kind = (rep % 2) ? EncodingKind::bicyclic : EncodingKind::semicyclic;
    int param = kind == EncodingKind::bicyclic ? default_bicyclic_r(s, k) : 2;
    SymmetricEncoding e = make_encoding(kind, s, k, param);
    Array core = fixtures::random_array(rng, 3, k, s);
    for (int i = 0; i < 3; ++i) {
      auto r = core.row(i);
      std::vector<int> row(r.begin(), r.end());
      if (std::all_of(row.begin(), row.end(), [](int v) { return v == 1; })) row[0] = 2;
      e.core.push_back(row);
    }
    if (kind == EncodingKind::semicyclic) e.fixed_rows = {std::vector<int>(k, 1)};
    Array full = expand(e);
    CHECK(is_automorphism(e.generators[0], full));
    CHECK(equivalent(expand(compress(full, kind, param)), full));
  }
}

#include <cmath>
#include <random>
#include <vector>

#include "doctest.h"

#include "aoa/array.hpp"
#include "aoa/metrics.hpp"
#include "fixtures.hpp"

using namespace aoa;
using fixtures::oa4;
using fixtures::t0;

TEST_CASE("array construction and accessors") {
  Array a = t0();
  CHECK(a.runs() == 4);
  CHECK(a.factors() == 4);
  CHECK(a.levels() == 2);
  CHECK(a(2, 3) == 2);
  CHECK(a.column(0) == std::vector<int>{1, 1, 2, 2});
  CHECK_THROWS(a.at(4, 0));
  CHECK_THROWS(a.set(0, 0, 3));
  CHECK_THROWS(Array(2, {{1, 2}, {1}}));
  CHECK_THROWS(ColumnTuple({1, 0}, 3));
  CHECK_THROWS(ColumnTuple({0, 3}, 3));
}

TEST_CASE("column subsets and factorials") {
  auto subs = column_subsets(4, 2);
  CHECK(subs.size() == 6);
  CHECK(subs.front() == std::vector<int>{0, 1});
  CHECK(subs.back() == std::vector<int>{2, 3});
  Array f = full_factorial(3, 2);
  CHECK(f.runs() == 9);
  CHECK(f(1, 0) == 1);
  CHECK(f(1, 1) == 2);
  CHECK(is_oa(latin_square_oa(5, 2), 2));
}

TEST_CASE("count_tuple examples") {
  int x12[] = {1, 2};
  CHECK(count_tuple(oa4(), x12, ColumnTuple({0, 2}, 3)) == 1);
  CHECK(count_tuple(Array(2, {{1, 1}, {2, 2}}), x12, ColumnTuple({0, 1}, 2)) == 0);
  int x11[] = {1, 1};
  CHECK(count_tuple(t0(), x11, ColumnTuple({0, 1}, 4)) == 2);
  int bad[] = {1, 3};
  CHECK_THROWS(count_tuple(t0(), bad, ColumnTuple({0, 1}, 4)));
  int short_x[] = {1};
  CHECK_THROWS(count_tuple(t0(), short_x, ColumnTuple({0, 1}, 4)));
}

TEST_CASE("is_oa tolerance unbalance on the small fixtures") {
  CHECK(is_oa(oa4(), 2));
  CHECK_FALSE(is_oa(t0(), 2));
  CHECK(is_oa(t0(), 1));
  CHECK_THROWS(is_oa(oa4(), 4));
  CHECK(tolerance(oa4(), 2) == Rational(0));
  CHECK(tolerance(t0(), 2) == Rational(1));
  CHECK(unbalance(oa4(), 2, 1) == Rational(0));
  CHECK(unbalance(t0(), 2, 1) == Rational(4));
  CHECK(unbalance(t0(), 2, 2) == Rational(4));
  CHECK_THROWS(unbalance(t0(), 2, 0));
  CHECK_THROWS(unbalance_real(t0(), 2, 0.5));
  // oracle: brute force over all 3-subsets
  CHECK(unbalance(t0(), 3, 2) == Rational(8));
}

TEST_CASE("hamming form of the 2-unbalance") {
  CHECK(unbalance2_via_hamming(t0(), 2) == Rational(4));
  CHECK(unbalance2_via_hamming(oa4(), 2) == Rational(0));
  auto h = hamming_similarity(t0());
  CHECK(h[0] == 4);
  CHECK(h[1] == 2);
  CHECK(h[2] == 1);
  std::mt19937_64 rng(11);
  for (int rep = 0; rep < 50; ++rep) {
    Array a = fixtures::random_array(rng, 6, 4, 3);
    for (int t = 1; t <= 3; ++t) CHECK(unbalance2_via_hamming(a, t) == unbalance(a, t, 2));
  }
}

TEST_CASE("normalized unbalance") {
  CHECK(normalized_unbalance(t0(), 2, kInfinity) == doctest::Approx(1.0));
  CHECK(normalized_unbalance(t0(), 2, 1) == doctest::Approx(1.0 / 6));
  for (double p : {1.0, 2.0, 3.5, kInfinity}) CHECK(normalized_unbalance(oa4(), 2, p) == 0.0);
}

TEST_CASE("p-means are nondecreasing in p") {
  std::mt19937_64 rng(5);
  for (int rep = 0; rep < 100; ++rep) {
    Array a = fixtures::random_shape(rng, 12, 5, 4);
    double prev = 0;
    for (double p : {1.0, 1.5, 2.0, 3.0, 7.0, kInfinity}) {
      double v = normalized_unbalance(a, 2, p);
      CHECK(v >= prev - 1e-12);
      prev = v;
    }
  }
}

TEST_CASE("bandwidth") {
  CHECK(bandwidth(oa4(), 2) == 0);
  CHECK(bandwidth(t0(), 2) == 2);
  std::mt19937_64 rng(9);
  for (int rep = 0; rep < 200; ++rep) {
    Array a = fixtures::random_shape(rng, 15, 5, 4);
    for (int t = 1; t <= 2; ++t) {
      Rational tol = tolerance(a, t);
      auto bw = bandwidth(a, t);
      CHECK(tol <= Rational(bw));
      CHECK(Rational(bw) <= Rational(2) * tol);
    }
  }
}

TEST_CASE("rao bound") {
  CHECK(rao_max_factors(9, 3) == 4);
  CHECK(rao_max_factors(25, 5) == 6);
  CHECK(rao_max_factors(4, 2) == 3);
  CHECK_THROWS(rao_max_factors(4, 1));
}

TEST_CASE("lower bound on the 2-unbalance") {
  CHECK(lower_bound_unb22(9, 5, 3) == Rational(18));
  CHECK(lower_bound_unb22(25, 7, 5) == Rational(100));
  for (int s : {2, 3, 4, 5, 7}) CHECK(lower_bound_unb22(2 * s * s, 2 * s + 1, s) < Rational(0));
  CHECK_THROWS(lower_bound_unb22(10, 4, 3));
  CHECK(lower_bound_unb22_lambda_one(3, 1, 1) == Rational(18));
  CHECK(lower_bound_unb22_lambda_one(5, 1, 1) == Rational(100));
}

TEST_CASE("lower bound is sound on random arrays") {
  std::mt19937_64 rng(21);
  for (int rep = 0; rep < 150; ++rep) {
    std::uniform_int_distribution<int> sd(2, 4), ld(1, 2), kd(2, 7);
    int s = sd(rng), lambda = ld(rng), k = kd(rng);
    Array a = fixtures::random_array(rng, lambda * s * s, k, s);
    CHECK(lower_bound_unb22(a.runs(), k, s) <= unbalance(a, 2, 2));
  }
}

TEST_CASE("trivial construction") {
  Array t = trivial_construct(oa4());
  CHECK(t == t0());
  CHECK(unbalance(t, 2, 1) == Rational(4));
  CHECK(tolerance(t, 2) == Rational(1));
  CHECK_THROWS(trivial_construct(t0()));
  CHECK(trivial_unbalance(1, 5, 1) == Rational(40));
  CHECK(trivial_unbalance(1, 3, 2) == Rational(18));
  CHECK(trivial_tolerance_bound(2, 5) == Rational(8));
}

TEST_CASE("repeat_factors_bounds") {
  auto r = repeat_factors_bounds(oa4(), 1);
  CHECK(r.tol_bound == Rational(1));
  REQUIRE(!r.unb.empty());
  CHECK(r.unb.front().p == 1);
  CHECK(r.unb.front().bound == Rational(4));
  CHECK(r.holds);
  auto r2 = repeat_factors_bounds(t0(), 1);
  CHECK(r2.array.factors() == 5);
  CHECK(r2.holds);
  CHECK_THROWS(repeat_factors_bounds(oa4(), 3));
}

TEST_CASE("strength profile") {
  int ps[] = {1, 2};
  auto prof = strength_profile(t0(), 2, ps);
  CHECK(prof.index_lambda == Rational(1));
  CHECK(prof.tolerance == Rational(1));
  REQUIRE(prof.unbalance.size() == 2);
  CHECK(prof.unbalance[1].second == Rational(4));
}

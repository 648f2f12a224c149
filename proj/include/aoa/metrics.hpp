#pragma once

#include <cstdint>
#include <limits>
#include <span>
#include <vector>

#include "aoa/array.hpp"
#include "aoa/rational.hpp"

namespace aoa {

inline constexpr double kInfinity = std::numeric_limits<double>::infinity();

std::int64_t binomial(std::int64_t n, std::int64_t k);

// n(A,x,j): rows whose entries at columns j equal the level tuple x.
std::int64_t count_tuple(const Array& a, std::span<const int> x, const ColumnTuple& j);

// Counts of every level tuple for the columns j. Index of x is the base-s
// number with digits x_r - 1, first column most significant.
std::vector<std::int64_t> tuple_counts(const Array& a, const ColumnTuple& j);

bool is_oa(const Array& a, int t);
Rational tolerance(const Array& a, int t);
Rational unbalance(const Array& a, int t, int p);
double unbalance_real(const Array& a, int t, double p);
// Sum over run pairs of C(H, t) minus C(k,t) N^2 / s^t.
Rational unbalance2_via_hamming(const Array& a, int t);
// p-mean of the deviations; p = kInfinity gives the tolerance.
double normalized_unbalance(const Array& a, int t, double p);
std::int64_t bandwidth(const Array& a, int t);

// Number of agreeing coordinates, N x N row-major.
std::vector<int> hamming_similarity(const Array& a);

std::int64_t rao_max_factors(int n_runs, int n_levels);

Rational lower_bound_unb22(int n_runs, int n_factors, int n_levels);
// Closed forms for lambda = 1 (k = alpha(s+1) + kappa) and lambda = 2
// (k = 2s + 1 + kappa).
Rational lower_bound_unb22_lambda_one(int s, int alpha, int kappa);
Rational lower_bound_unb22_lambda_two(int s, int kappa);
bool attains_unb22_bound(const Array& a);

struct StrengthProfile {
  int strength = 0;
  Rational index_lambda;
  Rational tolerance;
  std::vector<std::pair<int, Rational>> unbalance;  // keyed by p
};
StrengthProfile strength_profile(const Array& a, int t, std::span<const int> ps);

// (B1 | B): duplicates the first factor of a strength-2 OA.
Array trivial_construct(const Array& b);
Rational trivial_unbalance(int lambda, int s, int p);
Rational trivial_tolerance_bound(int lambda, int s);

// (B[[kappa]] | B).
Array repeat_factors(const Array& b, int kappa);

struct RepeatBounds {
  Array array;
  Rational tol_bound;
  Rational tol_measured;
  struct PBound {
    int p;
    Rational bound;
    Rational measured;
  };
  std::vector<PBound> unb;
  bool holds = false;
};
RepeatBounds repeat_factors_bounds(const Array& b, int kappa, std::span<const int> ps = std::span<const int>());

}  // namespace aoa

#include "aoa/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>
#include <unordered_map>

namespace aoa {

namespace {

constexpr std::int64_t kDenseLimit = 1'000'000;

std::int64_t ipow(std::int64_t b, int e) {
  std::int64_t r = 1;
  for (int i = 0; i < e; ++i) {
    if (r > std::numeric_limits<std::int64_t>::max() / b) throw std::overflow_error("s^t overflows");
    r *= b;
  }
  return r;
}

__int128 ipow128(__int128 b, int e) {
  __int128 r = 1;
  for (int i = 0; i < e; ++i) r *= b;
  return r;
}

void check_strength(const Array& a, int t) {
  if (t < 1) throw std::invalid_argument("strength must be at least 1");
  if (t > a.factors())
    throw std::invalid_argument("strength " + std::to_string(t) + " exceeds factor count " + std::to_string(a.factors()));
}

// Calls f(counts, zeros) once per column t-subset. counts lists the count of
// every tuple (dense) or of every occurring tuple (sparse), zeros is the
// number of tuples not listed.
template <class F>
void visit_counts(const Array& a, int t, F&& f) {
  const int s = a.levels();
  const std::int64_t cells = ipow(s, t);
  const int n = a.runs();
  std::vector<std::int64_t> dense;
  std::unordered_map<std::int64_t, std::int64_t> sparse;
  std::vector<std::int64_t> listed;
  for (const auto& j : column_subsets(a.factors(), t)) {
    if (cells <= kDenseLimit) {
      dense.assign(static_cast<std::size_t>(cells), 0);
      for (int i = 0; i < n; ++i) {
        std::int64_t idx = 0;
        for (int c : j) idx = idx * s + (a(i, c) - 1);
        ++dense[static_cast<std::size_t>(idx)];
      }
      f(dense, std::int64_t{0});
    } else {
      sparse.clear();
      for (int i = 0; i < n; ++i) {
        std::int64_t idx = 0;
        for (int c : j) idx = idx * s + (a(i, c) - 1);
        ++sparse[idx];
      }
      listed.clear();
      for (const auto& kv : sparse) listed.push_back(kv.second);
      f(listed, cells - static_cast<std::int64_t>(listed.size()));
    }
  }
}

}  // namespace

std::int64_t binomial(std::int64_t n, std::int64_t k) {
  if (k < 0 || n < 0 || k > n) return 0;
  k = std::min(k, n - k);
  __int128 r = 1;
  for (std::int64_t i = 1; i <= k; ++i) r = r * (n - k + i) / i;
  return static_cast<std::int64_t>(r);
}

std::int64_t count_tuple(const Array& a, std::span<const int> x, const ColumnTuple& j) {
  if (static_cast<int>(x.size()) != j.size()) throw std::invalid_argument("level tuple and column tuple differ in length");
  for (int v : x)
    if (v < 1 || v > a.levels()) throw std::out_of_range("level out of range");
  for (int c : j.indices())
    if (c >= a.factors()) throw std::out_of_range("column index out of range");
  std::int64_t n = 0;
  for (int i = 0; i < a.runs(); ++i) {
    bool hit = true;
    for (int r = 0; r < j.size() && hit; ++r) hit = a(i, j[r]) == x[r];
    n += hit;
  }
  return n;
}

std::vector<std::int64_t> tuple_counts(const Array& a, const ColumnTuple& j) {
  for (int c : j.indices())
    if (c >= a.factors()) throw std::out_of_range("column index out of range");
  const int s = a.levels();
  std::vector<std::int64_t> out(static_cast<std::size_t>(ipow(s, j.size())), 0);
  for (int i = 0; i < a.runs(); ++i) {
    std::int64_t idx = 0;
    for (int c : j.indices()) idx = idx * s + (a(i, c) - 1);
    ++out[static_cast<std::size_t>(idx)];
  }
  return out;
}

bool is_oa(const Array& a, int t) {
  check_strength(a, t);
  const std::int64_t cells = ipow(a.levels(), t);
  if (a.runs() % cells != 0) return false;
  const std::int64_t lambda = a.runs() / cells;
  bool ok = true;
  visit_counts(a, t, [&](const std::vector<std::int64_t>& c, std::int64_t zeros) {
    if (!ok) return;
    if (zeros > 0 && lambda > 0) ok = false;
    for (auto v : c)
      if (v != lambda) ok = false;
  });
  return ok;
}

Rational tolerance(const Array& a, int t) {
  check_strength(a, t);
  const std::int64_t cells = ipow(a.levels(), t);
  const std::int64_t n = a.runs();
  std::int64_t worst = 0;  // max |count * s^t - N|
  visit_counts(a, t, [&](const std::vector<std::int64_t>& c, std::int64_t zeros) {
    if (zeros > 0) worst = std::max(worst, n);
    for (auto v : c) worst = std::max(worst, std::abs(v * cells - n));
  });
  return Rational(worst, cells);
}

Rational unbalance(const Array& a, int t, int p) {
  check_strength(a, t);
  if (p < 1) throw std::invalid_argument("unbalance exponent must be >= 1");
  const std::int64_t cells = ipow(a.levels(), t);
  const std::int64_t n = a.runs();
  __int128 sum = 0;
  visit_counts(a, t, [&](const std::vector<std::int64_t>& c, std::int64_t zeros) {
    sum += static_cast<__int128>(zeros) * ipow128(n, p);
    for (auto v : c) sum += ipow128(std::abs(v * cells - n), p);
  });
  return Rational::from_wide(sum, ipow128(cells, p));
}

double unbalance_real(const Array& a, int t, double p) {
  check_strength(a, t);
  if (!(p >= 1)) throw std::invalid_argument("unbalance exponent must be >= 1");
  const double lambda = a.runs() / std::pow(static_cast<double>(a.levels()), t);
  double sum = 0;
  visit_counts(a, t, [&](const std::vector<std::int64_t>& c, std::int64_t zeros) {
    sum += static_cast<double>(zeros) * std::pow(lambda, p);
    for (auto v : c) sum += std::pow(std::abs(static_cast<double>(v) - lambda), p);
  });
  return sum;
}

std::vector<int> hamming_similarity(const Array& a) {
  const int n = a.runs(), k = a.factors();
  std::vector<int> h(static_cast<std::size_t>(n) * n, 0);
  for (int r = 0; r < n; ++r)
    for (int q = r; q < n; ++q) {
      int agree = 0;
      for (int j = 0; j < k; ++j) agree += a(r, j) == a(q, j);
      h[static_cast<std::size_t>(r) * n + q] = agree;
      h[static_cast<std::size_t>(q) * n + r] = agree;
    }
  return h;
}

Rational unbalance2_via_hamming(const Array& a, int t) {
  check_strength(a, t);
  const std::int64_t n = a.runs();
  __int128 pairs = 0;
  for (int h : hamming_similarity(a)) pairs += binomial(h, t);
  const std::int64_t cells = ipow(a.levels(), t);
  // pairs - C(k,t) N^2 / s^t
  __int128 num = pairs * cells - static_cast<__int128>(binomial(a.factors(), t)) * n * n;
  return Rational::from_wide(num, cells);
}

double normalized_unbalance(const Array& a, int t, double p) {
  check_strength(a, t);
  if (std::isinf(p)) return tolerance(a, t).to_double();
  if (!(p >= 1)) throw std::invalid_argument("unbalance exponent must be >= 1");
  const double cells = std::pow(static_cast<double>(a.levels()), t);
  const double count = cells * static_cast<double>(binomial(a.factors(), t));
  const double u = (p == std::floor(p) && p <= 4) ? unbalance(a, t, static_cast<int>(p)).to_double()
                                                   : unbalance_real(a, t, p);
  return std::pow(u / count, 1.0 / p);
}

std::int64_t bandwidth(const Array& a, int t) {
  check_strength(a, t);
  std::int64_t lo = std::numeric_limits<std::int64_t>::max(), hi = 0;
  visit_counts(a, t, [&](const std::vector<std::int64_t>& c, std::int64_t zeros) {
    if (zeros > 0) lo = 0;
    for (auto v : c) {
      lo = std::min(lo, v);
      hi = std::max(hi, v);
    }
  });
  return hi - lo;
}

std::int64_t rao_max_factors(int n_runs, int n_levels) {
  if (n_levels < 2) throw std::invalid_argument("Rao bound needs s >= 2");
  if (n_runs < 2) throw std::invalid_argument("Rao bound needs N >= 2");
  return (n_runs - 1) / (n_levels - 1);
}

Rational lower_bound_unb22(int n_runs, int n_factors, int n_levels) {
  const std::int64_t s = n_levels, n = n_runs, k = n_factors;
  if (s < 2) throw std::invalid_argument("need s >= 2");
  if (n % (s * s) != 0) throw std::invalid_argument("s^2 does not divide N");
  const std::int64_t lambda = n / (s * s);
  const Rational gamma(( lambda * s - 1) * k, lambda * s * s - 1);
  const std::int64_t g = floor(gamma);
  const Rational frac = gamma - Rational(g);
  const Rational inner = Rational(binomial(g, 2)) + Rational(g) * frac;
  return Rational(n * (n - 1)) * inner - Rational(lambda * (lambda - 1) * s * s * binomial(k, 2));
}

Rational lower_bound_unb22_lambda_one(int s, int alpha, int kappa) {
  const std::int64_t S = s;
  return Rational(static_cast<std::int64_t>(alpha) * kappa * S * S * (S - 1) + binomial(alpha, 2) * S * S * (S * S - 1));
}

Rational lower_bound_unb22_lambda_two(int s, int kappa) {
  const std::int64_t S = s;
  return Rational(2 * S * S * ((2 * kappa - 1) * (S - 1) - binomial(kappa + 1, 2)));
}

bool attains_unb22_bound(const Array& a) {
  return unbalance(a, 2, 2) == lower_bound_unb22(a.runs(), a.factors(), a.levels());
}

StrengthProfile strength_profile(const Array& a, int t, std::span<const int> ps) {
  StrengthProfile out;
  out.strength = t;
  out.index_lambda = Rational(a.runs(), ipow(a.levels(), t));
  out.tolerance = tolerance(a, t);
  for (int p : ps) out.unbalance.emplace_back(p, unbalance(a, t, p));
  return out;
}

Array trivial_construct(const Array& b) {
  if (b.factors() < 2 || !is_oa(b, 2)) throw std::invalid_argument("trivial construction needs a strength-2 OA");
  const int first = 0;
  return b.select_columns(std::span<const int>(&first, 1)).hconcat(b);
}

Rational trivial_unbalance(int lambda, int s, int p) {
  const Rational S(s);
  return pow(Rational(lambda), p) * S * (S - 1) * (Rational(1) + pow(S - 1, p - 1));
}

Rational trivial_tolerance_bound(int lambda, int s) { return Rational(static_cast<std::int64_t>(lambda) * (s - 1)); }

Array repeat_factors(const Array& b, int kappa) {
  if (kappa < 1 || kappa > b.factors()) throw std::out_of_range("kappa out of range");
  std::vector<int> cols(kappa);
  for (int j = 0; j < kappa; ++j) cols[j] = j;
  return b.select_columns(cols).hconcat(b);
}

RepeatBounds repeat_factors_bounds(const Array& b, int kappa, std::span<const int> ps) {
  static const int kDefault[] = {1, 2};
  if (ps.empty()) ps = kDefault;
  if (kappa < 1 || kappa > b.factors() - 1) throw std::out_of_range("kappa must lie in 1..k-1");
  RepeatBounds out;
  out.array = repeat_factors(b, kappa);
  const int s = b.levels();
  const Rational lambda(b.runs(), static_cast<std::int64_t>(s) * s);
  const Rational tol_b = b.factors() >= 2 ? tolerance(b, 2) : Rational(0);
  out.tol_bound = std::max(tol_b, lambda * Rational(s - 1));
  out.tol_measured = tolerance(out.array, 2);
  out.holds = out.tol_measured <= out.tol_bound;
  std::vector<int> head(kappa);
  for (int j = 0; j < kappa; ++j) head[j] = j;
  const Array bk = b.select_columns(head);
  for (int p : ps) {
    const Rational ub = b.factors() >= 2 ? unbalance(b, 2, p) : Rational(0);
    const Rational ubk = kappa >= 2 ? unbalance(bk, 2, p) : Rational(0);
    const Rational S(s);
    Rational bound = Rational(2) * ub + Rational(2) * ubk +
                     Rational(kappa) * pow(lambda, p) * S * (S - 1) * (Rational(1) + pow(S - 1, p - 1));
    Rational measured = unbalance(out.array, 2, p);
    out.holds = out.holds && measured <= bound;
    out.unb.push_back({p, bound, measured});
  }
  return out;
}

}  // namespace aoa

#include "aoa/discrepancy.hpp"

#include <cmath>
#include <stdexcept>

#include "aoa/metrics.hpp"

namespace aoa::disc {

PointSet points_of(const Array& a) {
  PointSet p;
  p.n = a.runs();
  p.k = a.factors();
  p.coords.resize(a.cells().size());
  const double two_s = 2.0 * a.levels();
  for (std::size_t c = 0; c < a.cells().size(); ++c) p.coords[c] = (2.0 * a.cells()[c] - 1.0) / two_s;
  return p;
}

const char* kernel_name(Kernel k) {
  switch (k) {
    case Kernel::centered: return "CD";
    case Kernel::wrap_around: return "WD";
    case Kernel::mixture: return "MD";
  }
  return "?";
}

double kernel_1d(Kernel kind, double x, double y) {
  const double d = std::abs(x - y);
  switch (kind) {
    case Kernel::centered:
      return 1 + 0.5 * std::abs(x - 0.5) + 0.5 * std::abs(y - 0.5) - 0.5 * d;
    case Kernel::wrap_around:
      return 1.5 - d + d * d;
    case Kernel::mixture:
      return 15.0 / 8 - 0.25 * std::abs(x - 0.5) - 0.25 * std::abs(y - 0.5) - 0.75 * d + 0.5 * d * d;
  }
  return 0;
}

double kernel(Kernel kind, std::span<const double> x, std::span<const double> y) {
  double r = 1;
  for (std::size_t j = 0; j < x.size(); ++j) r *= kernel_1d(kind, x[j], y[j]);
  return r;
}

double integral1_1d(Kernel kind, double x) {
  const double u = std::abs(x - 0.5);
  switch (kind) {
    case Kernel::centered: return 1 + 0.5 * u - 0.5 * u * u;
    case Kernel::wrap_around: return 4.0 / 3;
    case Kernel::mixture: return 5.0 / 3 - 0.25 * u - 0.25 * u * u;
  }
  return 0;
}

double integral2_1d(Kernel kind) {
  switch (kind) {
    case Kernel::centered: return 13.0 / 12;
    case Kernel::wrap_around: return 4.0 / 3;
    case Kernel::mixture: return 19.0 / 12;
  }
  return 0;
}

namespace {

double simpson_step(const std::function<double(double)>& f, double a, double b, double fa, double fm, double fb,
                    double whole, double tol, int depth) {
  const double m = 0.5 * (a + b);
  const double lm = 0.5 * (a + m), rm = 0.5 * (m + b);
  const double flm = f(lm), frm = f(rm);
  const double left = (m - a) / 6 * (fa + 4 * flm + fm);
  const double right = (b - m) / 6 * (fm + 4 * frm + fb);
  const double delta = left + right - whole;
  if (depth <= 0 || std::abs(delta) <= 15 * tol) return left + right + delta / 15;
  return simpson_step(f, a, m, fa, flm, fm, left, tol / 2, depth - 1) +
         simpson_step(f, m, b, fm, frm, fb, right, tol / 2, depth - 1);
}

}  // namespace

double adaptive_simpson(const std::function<double(double)>& f, double lo, double hi, double tol) {
  const double fa = f(lo), fb = f(hi), fm = f(0.5 * (lo + hi));
  const double whole = (hi - lo) / 6 * (fa + 4 * fm + fb);
  return simpson_step(f, lo, hi, fa, fm, fb, whole, tol, 50);
}

double kernel_integral_error(Kernel kind) {
  double worst = 0;
  for (int g = 0; g <= 40; ++g) {
    const double x = g / 40.0;
    const double q = adaptive_simpson([&](double y) { return kernel_1d(kind, x, y); }, 0, 1, 1e-13);
    worst = std::max(worst, std::abs(q - integral1_1d(kind, x)));
  }
  const double q2 = adaptive_simpson(
      [&](double x) { return adaptive_simpson([&](double y) { return kernel_1d(kind, x, y); }, 0, 1, 1e-13); }, 0, 1,
      1e-12);
  return std::max(worst, std::abs(q2 - integral2_1d(kind)));
}

double discrepancy_squared(const PointSet& pts, Kernel kind) {
  const int n = pts.n, k = pts.k;
  const double i2 = std::pow(integral2_1d(kind), k);
  double i1 = 0;
  for (int i = 0; i < n; ++i) {
    double prod = 1;
    for (int j = 0; j < k; ++j) prod *= integral1_1d(kind, pts(i, j));
    i1 += prod;
  }
  double kk = 0;
  for (int i = 0; i < n; ++i) {
    kk += kernel(kind, pts.point(i), pts.point(i));
    for (int q = i + 1; q < n; ++q) kk += 2 * kernel(kind, pts.point(i), pts.point(q));
  }
  const double nn = n;
  return i2 - 2.0 / nn * i1 + kk / (nn * nn);
}

double cd_squared(const Array& a) { return discrepancy_squared(points_of(a), Kernel::centered); }
double wd_squared(const Array& a) { return discrepancy_squared(points_of(a), Kernel::wrap_around); }
double md_squared(const Array& a) { return discrepancy_squared(points_of(a), Kernel::mixture); }
double cd(const Array& a) { return std::sqrt(std::max(0.0, cd_squared(a))); }
double wd(const Array& a) { return std::sqrt(std::max(0.0, wd_squared(a))); }
double md(const Array& a) { return std::sqrt(std::max(0.0, md_squared(a))); }

DdParams::DdParams(double a_, double b_) : a(a_), b(b_) {
  if (!(a > b && b > 0)) throw std::invalid_argument("DD parameters need a > b > 0");
}

namespace {

double dd_hamming(const Array& a, double pa, double pb) {
  const int n = a.runs(), k = a.factors(), s = a.levels();
  const auto h = hamming_similarity(a);
  const double ratio = pa / pb;
  std::vector<double> powers(k + 1);
  for (int t = 0; t <= k; ++t) powers[t] = std::pow(ratio, t);
  double sum = 0;
  for (int v : h) sum += powers[v];
  const double nn = n;
  return -std::pow((pa - pb) / s + pb, k) + std::pow(pb, k) / (nn * nn) * sum;
}

}  // namespace

DdValue dd_squared(const Array& a, const DdParams& params) {
  DdValue v;
  v.hamming_form = dd_hamming(a, params.a, params.b);
  const int k = a.factors();
  const bool direct = k <= 12 && std::pow(static_cast<double>(a.levels()), k) <= 1e6;
  double sum = 0;
  for (int t = 1; t <= k; ++t) {
    const double u = direct ? unbalance(a, t, 2).to_double() : unbalance2_via_hamming(a, t).to_double();
    sum += u * std::pow(params.a - params.b, t) * std::pow(params.b, k - t);
  }
  const double nn = a.runs();
  v.unbalance_form = sum / (nn * nn);
  return v;
}

BigRational dd_squared_exact(const Array& a, const BigRational& pa, const BigRational& pb) {
  const int n = a.runs(), k = a.factors(), s = a.levels();
  std::vector<BigRational> powa(k + 1, BigRational(1)), powb(k + 1, BigRational(1));
  for (int t = 1; t <= k; ++t) {
    powa[t] = powa[t - 1] * pa;
    powb[t] = powb[t - 1] * pb;
  }
  // b^k (a/b)^h = a^h b^(k-h)
  std::vector<long long> hist(k + 1, 0);
  for (int v : hamming_similarity(a)) ++hist[v];
  BigRational sum = 0;
  for (int h = 0; h <= k; ++h) sum += BigRational(hist[h]) * powa[h] * powb[k - h];
  BigRational base = (pa - pb) / BigRational(s) + pb;
  BigRational basek = 1;
  for (int t = 0; t < k; ++t) basek *= base;
  return -basek + sum / BigRational(static_cast<long long>(n) * n);
}

double dd_lower_bound(int n_runs, int n_factors, int n_levels, const DdParams& params) {
  const long long s = n_levels, n = n_runs, k = n_factors;
  if (n % (s * s) != 0) throw std::invalid_argument("s^2 does not divide N");
  const double lambda = static_cast<double>(n) / static_cast<double>(s * s);
  const Rational gamma(static_cast<std::int64_t>((n / s - 1) * k), static_cast<std::int64_t>(n - 1));
  const double g = static_cast<double>(floor(gamma));
  const double frac = (gamma - Rational(floor(gamma))).to_double();
  const double a = params.a, b = params.b, r = a / b;
  const double ls2 = lambda * s * s;
  return -std::pow((a - b) / s + b, k) + std::pow(a, k) / ls2 +
         std::pow(b, k) * (1 - 1 / ls2) * (1 + (r - 1) * frac) * std::pow(r, g);
}

std::vector<BoundCheck> check_discrepancy_bounds(const Array& a) {
  const int k = a.factors();
  const double s = a.levels();
  auto dd = [&](double pa, double pb) { return dd_hamming(a, pa, pb); };
  std::vector<BoundCheck> out;
  auto add = [&](const char* name, double lhs, double rhs, bool eq) {
    BoundCheck c;
    c.name = name;
    c.lhs = lhs;
    c.rhs = rhs;
    c.holds = lhs <= rhs + 1e-10 * std::max(1.0, std::abs(rhs));
    c.equality_expected = eq;
    c.equality_holds = std::abs(lhs - rhs) <= 1e-8 * std::max(1.0, std::abs(rhs));
    out.push_back(c);
  };
  const bool even = a.levels() % 2 == 0;

  double rc;
  if (a.levels() == 2) {
    rc = std::pow(13.0 / 12, k) - 2 * std::pow(35.0 / 32, k) + std::pow(9.0 / 8, k) + dd(5.0 / 4, 1.0);
  } else {
    const double m = even ? (8 * s * s + 2 * s - 1) / (8 * s * s) : 1.0;
    rc = std::pow(13.0 / 12, k) - 2 * std::pow(m, k) + std::pow((3 * s * s - 3 * s + 2) / (2 * s * s), k) +
         dd((3 * s - 1) / (2 * s), (3 * s - 3) / (2 * s));
  }
  add("CD", cd_squared(a), rc, a.levels() == 2);

  const double rw = -std::pow(4.0 / 3, k) + std::pow((3 * s * s * s - 2 * s * s + 4 * s - 2) / (2 * s * s * s), k) +
                    dd(1.5, (3 * s * s - 2 * s + 2) / (2 * s * s));
  add("WD", wd_squared(a), rw, a.levels() <= 3);

  const double mm = (71 * s * s + 12 * s - 3) / (48 * s * s);
  const double diag = even ? 15.0 / 8 - 1 / (4 * s) : 15.0 / 8;
  const double c = even ? (15 * s * s * s - 8 * s * s + 10 * s - 4) / (8 * s * s * s)
                        : (15 * s * s * s - 8 * s * s + 12 * s - 4) / (8 * s * s * s);
  const double rm = std::pow(19.0 / 12, k) - 2 * std::pow(mm, k) + std::pow(c, k) +
                    dd(diag, (15 * s * s - 8 * s + 4) / (8 * s * s));
  add("MD", md_squared(a), rm, a.levels() == 2);
  return out;
}

}  // namespace aoa::disc
